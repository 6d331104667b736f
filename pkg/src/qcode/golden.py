"""Frozen reference data and the verification runner.

The JSON files under `golden/` were recorded once and are never
regenerated by the code under test; a checksum manifest guards them
against drift.  `verify_all` rebuilds everything the package derives
(matrices, orderings, example designs) and diffs it cell by cell
against the frozen data.
"""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction
from importlib.resources import files

from .equations import (all_odd_closed_form, build_system, ca_add,
                        canonical_wordtypes)
from .theory import analyze, evaluate, fixed_point_7, periodic_extend
from .z4 import GeneratorSpec, frequency_vector

#: positions where the frozen example K vector disagrees with C times
#: its own frequency vector.  The frozen vector transposes the counts
#: of three wordtype pairs; the product, the A vector, the spectrum and
#: the GWLP are mutually consistent without the transposition, so the
#: divergence is pinned here and re-checked rather than hidden.
FROZEN_K_DIVERGENT_CELLS = (23, 24, 25, 26, 28, 29)


class GoldenDataError(RuntimeError):
    """Golden data missing or failing its checksum."""


def _read(name: str) -> bytes:
    try:
        return (files("qcode") / "golden" / name).read_bytes()
    except FileNotFoundError as exc:
        raise GoldenDataError(f"golden file {name} is missing") from exc


def _checksums() -> dict[str, str]:
    out = {}
    for line in _read("CHECKSUMS.sha256").decode().splitlines():
        if line.strip():
            digest, fname = line.split()
            out[fname] = digest
    return out


def _load(name: str) -> dict:
    raw = _read(name)
    want = _checksums().get(name)
    if want is None:
        raise GoldenDataError(f"{name} has no checksum entry")
    got = hashlib.sha256(raw).hexdigest()
    if got != want:
        raise GoldenDataError(
            f"{name} fails its checksum: expected {want}, got {got}")
    return json.loads(raw)


def load_matrices(p: int) -> dict:
    if p not in (1, 2, 3):
        raise ValueError("frozen matrices exist for p in {1, 2, 3}")
    return _load(f"matrices_p{p}.json")


def load_examples() -> dict:
    return _load("examples.json")


def wordtype_str(w: tuple[int, ...]) -> str:
    return "".join(str(x) for x in w)


def _diff_rows(diffs: list[str], what: str, p: int, labels, got, want):
    for label, grow, wrow in zip(labels, got, want):
        for i, (g, w) in enumerate(zip(grow, wrow)):
            if g != w:
                diffs.append(f"p={p} {what} row {label} cell {i}: "
                             f"expected {w}, got {g}")


def verify_matrices(p: int) -> list[str]:
    """Diff the regenerated equation system against the frozen one."""
    gold = load_matrices(p)
    sysm = build_system(p)
    diffs: list[str] = []
    got_k = [wordtype_str(w) for w in sysm.k_order]
    for i, (g, w) in enumerate(zip(got_k, gold["K_order"])):
        if g != w:
            diffs.append(f"p={p} K_order position {i}: expected {w}, got {g}")
    for i, (g, w) in enumerate(zip(sysm.constants, gold["constants"])):
        if g != w:
            diffs.append(f"p={p} constants row {got_k[i]} cell {i}: "
                         f"expected {w}, got {g}")
    _diff_rows(diffs, "C", p, got_k, sysm.c_matrix(), gold["C"])
    got_a = [wordtype_str(pi) for pi in sysm.a_order]
    for i, (g, w) in enumerate(zip(got_a, gold["A_order"])):
        if g != w:
            diffs.append(f"p={p} A_order position {i}: expected {w}, got {g}")
    for i, (g, w) in enumerate(zip(sysm.deltas, gold["deltas"])):
        if g != w:
            diffs.append(f"p={p} deltas row {got_a[i]} cell {i}: "
                         f"expected {w}, got {g}")
    _diff_rows(diffs, "B", p, got_a, sysm.b_matrix(), gold["B"])
    return diffs


def verify_examples() -> tuple[list[str], list[str]]:
    """Re-run every frozen example end to end.

    Returns (diffs, notes); notes carry the expected, pinned
    divergence of the frozen example K vector.
    """
    ex = load_examples()
    diffs: list[str] = []
    notes: list[str] = []

    sys2 = build_system(2)
    fx = ex["oplus_p2"]
    k10 = sys2.k_equation((1, 0))
    k02 = sys2.k_equation((0, 2))
    if list(k10.coeffs) != fx["k_10"]:
        diffs.append("oplus_p2: k_10 row disagrees")
    if list(k02.coeffs) != fx["k_02"]:
        diffs.append("oplus_p2: k_02 row disagrees")
    if list(ca_add(k10, k02).coeffs) != fx["sum"]:
        diffs.append("oplus_p2: cellwise sum disagrees")

    part = ex["all_odd_p2_partition"]
    eq = all_odd_closed_form(2)
    labels = [f"{i >> 2}{i & 3}" for i in range(16)]
    for value, key in ((0, "zero_cells"), (1, "one_cells"), (2, "two_cells")):
        got = {labels[i] for i, c in enumerate(eq.coeffs) if c == value}
        if got != set(part[key]):
            diffs.append(f"all_odd_p2_partition: {key} expected "
                         f"{sorted(part[key])}, got {sorted(got)}")

    d4 = ex["design_256x14"]
    g = GeneratorSpec(4, 3, tuple(tuple(r) for r in d4["V"]))
    f = frequency_vector(g)
    ones = [i for i, c in enumerate(f.counts) if c]
    if ones != d4["F_one_cells"]:
        diffs.append(f"design_256x14: F cells expected {d4['F_one_cells']}, "
                     f"got {ones}")
    ev = evaluate(f)
    if list(ev.a_values) != d4["A"]:
        diffs.append(f"design_256x14: A expected {d4['A']}, "
                     f"got {list(ev.a_values)}")
    divergent = tuple(i for i, (got, want) in
                      enumerate(zip(ev.k_values, d4["K"])) if got != want)
    if divergent == FROZEN_K_DIVERGENT_CELLS:
        notes.append(
            "design_256x14: K from C x F differs from the frozen vector "
            f"at cells {list(divergent)} as pinned (three transposed "
            "wordtype pairs in the frozen data); all other cells match")
    elif divergent:
        diffs.append(f"design_256x14: K diverges at cells {list(divergent)}"
                     f", expected divergence only at "
                     f"{list(FROZEN_K_DIVERGENT_CELLS)}")
    else:
        diffs.append("design_256x14: K matches the frozen vector exactly, "
                     "but the frozen vector is pinned as internally "
                     "inconsistent; the evaluation must have changed")
    rep = analyze(g, method="both")  # closed form vs subset scan
    got_spec = [[l, str(r), c] for l, r, c in rep.spectrum.entries]
    want_spec = [[l, r, c] for l, r, c in d4["spectrum"]]
    if got_spec != want_spec:
        diffs.append(f"design_256x14: spectrum expected {want_spec}, "
                     f"got {got_spec}")
    got_gwlp = [str(x) for x in rep.summary.gwlp]
    want_gwlp = [str(Fraction(v)) for v in d4["gwlp_from_1"][2:]]
    if got_gwlp != want_gwlp:
        diffs.append(f"design_256x14: gwlp expected {want_gwlp}, "
                     f"got {got_gwlp}")
    if str(rep.summary.resolution) != d4["resolution"]:
        diffs.append(f"design_256x14: resolution expected "
                     f"{d4['resolution']}, got {rep.summary.resolution}")

    pe = ex["periodic_extension"]
    fam = periodic_extend(f, pe["t"])
    if list(fam.extended.counts) != pe["Ft"]:
        diffs.append("periodic_extension: extended vector disagrees")
    if fam.predicted_r != pe["r"]:
        diffs.append(f"periodic_extension: r expected {pe['r']}, "
                     f"got {fam.predicted_r}")
    if str(fam.predicted_rho) != pe["rho"]:
        diffs.append(f"periodic_extension: rho expected {pe['rho']}, "
                     f"got {fam.predicted_rho}")
    if fixed_point_7(fam.predicted_resolution) != pe["rendered_resolution"]:
        diffs.append("periodic_extension: rendered resolution expected "
                     f"{pe['rendered_resolution']}, got "
                     f"{fixed_point_7(fam.predicted_resolution)}")

    for key, want in ex["wordtype_counts"].items():
        got = len(canonical_wordtypes(int(key)))
        if got != want:
            diffs.append(f"wordtype_counts: p={key} expected {want}, "
                         f"got {got}")
    return diffs, notes


def verify_all(ps: tuple[int, ...] = (1, 2, 3)
               ) -> tuple[list[str], list[str]]:
    diffs: list[str] = []
    for p in ps:
        diffs.extend(verify_matrices(p))
    ex_diffs, notes = verify_examples()
    diffs.extend(ex_diffs)
    return diffs, notes
