"""Closed-form aliasing analysis and frequency-vector search.

The closed form turns a frequency vector straight into word counts,
aliasing exponents and the word spectrum, without ever materializing
the design.  Every result here can be cross-checked against the subset
scan in `jchar`; `analyze(method="both")` does exactly that.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb

import numpy as np

from .equations import EquationSystem, build_system, cells
from .jchar import (BudgetExceeded, DesignSummary, WordSpectrum,
                    spectrum_bruteforce, summarize)
from .z4 import (FrequencyVector, GeneratorSpec, build_design,
                 frequency_vector, generator_for_frequency)

#: refuse searches over more candidate frequency vectors than this
CANDIDATE_BUDGET = 10 ** 8


class PreconditionError(ValueError):
    """The closed-form spectrum does not cover this frequency vector."""


class SpectrumMismatch(RuntimeError):
    """Closed form and subset scan disagree; always a bug somewhere."""


#: parity patterns whose frequency mass must be positive for the
#: closed-form spectrum: one even position, the other two odd
_PRECONDITION_PARITIES = ((1, 1, 0), (1, 0, 1), (0, 1, 1))


@dataclass(frozen=True)
class TheoryEvaluation:
    """Word counts (one per canonical wordtype) and parity-class sums."""

    p: int
    k_values: tuple[int, ...]
    a_values: tuple[int, ...]


def evaluate(f: FrequencyVector, system: EquationSystem | None = None
             ) -> TheoryEvaluation:
    sysm = system or build_system(f.p)
    if sysm.p != f.p:
        raise ValueError(f"system is for p={sysm.p}, vector for p={f.p}")
    fv = np.asarray(f.counts, dtype=np.int64)
    k = np.asarray(sysm.c_matrix(), dtype=np.int64) @ fv
    a = np.asarray(sysm.b_matrix(), dtype=np.int64) @ fv
    return TheoryEvaluation(f.p, tuple(int(x) for x in k),
                            tuple(int(x) for x in a))


def parity_class_sums(f: FrequencyVector) -> dict[tuple[int, ...], int]:
    sysm = build_system(f.p)
    ev = evaluate(f, sysm)
    return dict(zip(sysm.a_order, ev.a_values))


def precondition_sums(f: FrequencyVector) -> dict[tuple[int, ...], int]:
    """Frequency mass on each of the three mixed parity patterns."""
    if f.p != 3:
        raise ValueError("preconditions are defined for p = 3 only")
    masses = dict.fromkeys(_PRECONDITION_PARITIES, 0)
    for pat, c in zip(cells(3), f.counts):
        par = tuple(x % 2 for x in pat)
        if par in masses:
            masses[par] += c
    return masses


def preconditions_met(f: FrequencyVector) -> bool:
    return all(v > 0 for v in precondition_sums(f).values())


def aliasing_exponent(q: int, a: int) -> int:
    """Exponent e with rho = 2^-e for a class with q odd positions and
    parity-row sum a.  Matches floor((a + delta) / 2) with the frozen
    delta row for q in {1, 2}; for q = 3 that shortcut undercounts by 1
    (its delta would have to be 2), so e is derived from q directly.
    """
    return (q - 1 + a) // 2


def theory_spectrum(f: FrequencyVector) -> WordSpectrum:
    """Word spectrum of the induced design, straight from f (p = 3).

    Each of the 7 two-sided wordtype classes with odd entries carries
    8 * 4^e words of aliasing index 2^-e, spread evenly (2 * 4^e each)
    over its 4 canonical wordtypes at length k_w + Lee(w); the 7 fully
    even wordtypes contribute one completely aliased word each.
    """
    if f.p != 3:
        raise ValueError(
            f"closed-form spectrum covers p = 3 only, got p = {f.p}")
    bad = [pi for pi, v in precondition_sums(f).items() if v == 0]
    if bad:
        names = ", ".join("".join(map(str, pi)) for pi in bad)
        raise PreconditionError(
            f"no frequency mass on parity pattern(s) {names}; the "
            "closed form does not apply here, fall back to the "
            "brute-force oracle (method 'bruteforce')")
    sysm = build_system(3)
    ev = evaluate(f, sysm)
    sums = dict(zip(sysm.a_order, ev.a_values))
    agg: dict[tuple[int, Fraction], int] = {}
    for w, k, const in zip(sysm.k_order, ev.k_values, sysm.constants):
        length = k + const
        parity = tuple(x % 2 for x in w)
        if any(parity):
            e = aliasing_exponent(sum(parity), sums[parity])
            key = (length, Fraction(1, 2 ** e))
            agg[key] = agg.get(key, 0) + 2 * 4 ** e
        else:
            key = (length, Fraction(1))
            agg[key] = agg.get(key, 0) + 1
    return WordSpectrum(tuple((l, r, c) for (l, r), c in agg.items()))


def class_rhos(f: FrequencyVector) -> tuple[Fraction, ...]:
    """Aliasing index per odd parity class, aligned with A_order."""
    sysm = build_system(3)
    ev = evaluate(f, sysm)
    return tuple(Fraction(1, 2 ** aliasing_exponent(sum(pi), a))
                 for pi, a in zip(sysm.a_order, ev.a_values))


@dataclass(frozen=True)
class TheoryReport:
    """Everything `analyze` knows about one design."""

    runs: int
    factors: int
    method: str
    k_values: tuple[int, ...]
    a_values: tuple[int, ...]
    rhos: tuple[Fraction, ...]
    spectrum: WordSpectrum
    summary: DesignSummary
    preconditions_met: bool


def _clip(spec: WordSpectrum, max_len: int) -> WordSpectrum:
    return WordSpectrum(tuple(e for e in spec.entries if e[0] <= max_len))


def analyze(g: GeneratorSpec, method: str = "theory",
            max_length: int | None = None, force: bool = False
            ) -> TheoryReport:
    """Full aliasing report for the design induced by a generator.

    method 'theory' uses the closed form (p = 3; smaller p falls back
    to the exact scan, which is cheap there), 'bruteforce' scans column
    subsets, 'both' runs the two and insists they agree.  The report
    always carries K/A values and whether the closed form applies;
    nothing falls back silently.
    """
    factors = 2 * g.n + 2 * g.p
    max_len = factors if max_length is None else max_length
    if not 3 <= max_len <= factors:
        raise ValueError(f"max_length must be in 3..{factors}")
    if method not in ("theory", "bruteforce", "both"):
        raise ValueError(f"unknown method {method!r}")
    if method in ("theory", "both") and g.p > 3:
        raise ValueError(
            f"no closed form for p = {g.p}; use method 'bruteforce'")

    f = frequency_vector(g)
    ev = evaluate(f)
    ok = preconditions_met(f) if g.p == 3 else g.p < 3
    rhos = class_rhos(f) if g.p == 3 and ok else ()

    brute = theory = None
    if method in ("bruteforce", "both"):
        brute = spectrum_bruteforce(build_design(g), max_len, force=force)
        if not brute.is_dyadic():
            raise AssertionError(
                "non-dyadic aliasing index in a quaternary-code design")
    if method in ("theory", "both"):
        if g.p == 3:
            theory = _clip(theory_spectrum(f), max_len)
        else:
            # below p = 3 the scan is both reference and fast path
            theory = brute if brute is not None else spectrum_bruteforce(
                build_design(g), max_len, force=force)
    if method == "both":
        _compare_spectra(theory, brute)
    spec = brute if brute is not None else theory
    return TheoryReport(4 ** g.n, factors, method, ev.k_values,
                        ev.a_values, rhos, spec,
                        summarize(spec, factors, max_len), ok)


def _compare_spectra(theory: WordSpectrum, brute: WordSpectrum) -> None:
    t = {(l, r): c for l, r, c in theory.entries}
    b = {(l, r): c for l, r, c in brute.entries}
    for key in sorted(set(t) | set(b), key=lambda k: (k[0], -k[1])):
        ct, cb = t.get(key, 0), b.get(key, 0)
        if ct != cb:
            length, rho = key
            raise SpectrumMismatch(
                f"closed form and subset scan disagree at length "
                f"{length}, aliasing index {rho}: {ct} vs {cb} words")


@dataclass(frozen=True)
class PeriodicFamily:
    """A frequency vector, its t-step uniform extension, and the
    predicted resolution data of the extended design."""

    base: FrequencyVector
    t: int
    extended: FrequencyVector
    predicted_r: int
    predicted_rho: Fraction
    predicted_resolution: Fraction


def periodic_extend(f0: FrequencyVector, t: int) -> PeriodicFamily:
    """Add t to every cell except the all-zero one (p = 3).

    Every word count grows by 64t and every parity-class sum by 32t,
    so the shortest word length shifts by 64t while its aliasing index
    picks up a factor 2^-16t (complete words stay completely aliased).
    Both shift identities are re-checked here on the actual vectors.
    """
    if t < 0:
        raise ValueError("t must be nonnegative")
    spec0 = theory_spectrum(f0)  # also enforces p=3 + preconditions
    ft = FrequencyVector(f0.p, (f0.counts[0],)
                         + tuple(c + t for c in f0.counts[1:]))
    ev0, evt = evaluate(f0), evaluate(ft)
    if any(b - a != 64 * t for a, b in zip(ev0.k_values, evt.k_values)):
        raise AssertionError("word-count shift identity violated")
    if any(b - a != 32 * t for a, b in zip(ev0.a_values, evt.a_values)):
        raise AssertionError("parity-sum shift identity violated")
    r0 = spec0.entries[0][0]
    rho0 = max(r for l, r, _ in spec0.entries if l == r0)
    r = r0 + 64 * t
    rho = Fraction(1) if rho0 == 1 else rho0 / 2 ** (16 * t)
    return PeriodicFamily(f0, t, ft, r, rho, r + 1 - rho)


def fixed_point_7(x: Fraction) -> str:
    """Render with exactly 7 decimals, ties to even."""
    scaled = x * 10 ** 7
    q, r = divmod(scaled.numerator, scaled.denominator)
    if 2 * r > scaled.denominator or (2 * r == scaled.denominator and q % 2):
        q += 1
    return f"{q // 10 ** 7}.{q % 10 ** 7:07d}"


def candidate_count(n: int, p: int) -> int:
    return comb(n + 4 ** p - 2, 4 ** p - 2)


def search(n: int, p: int, criterion: str = "max_resolution",
           top: int = 1, force: bool = False
           ) -> list[tuple[FrequencyVector, TheoryReport]]:
    """Rank all frequency vectors with f_0 = 0 summing to n.

    Candidates are scored by generalized resolution (maximize) or by
    the GWLP vector (minimize lexicographically); exact ties fall back
    to the frequency-vector encoding, ascending.  Scoring runs through
    the closed form whenever it applies and through a vectorized
    Walsh-Hadamard scan otherwise, so rankings are exact either way.
    """
    if criterion not in ("max_resolution", "gma"):
        raise ValueError(f"unknown criterion {criterion!r}")
    if top < 1:
        raise ValueError("top must be positive")
    if p > 3:
        raise ValueError("search covers p <= 3")
    total = candidate_count(n, p)
    if total > CANDIDATE_BUDGET and not force:
        raise BudgetExceeded(
            f"{total} candidate frequency vectors exceed the budget "
            f"{CANDIDATE_BUDGET:.0e}; pass force to enumerate anyway")
    ncells = 4 ** p
    sysm = build_system(p)

    rows_all = np.fromiter(
        (x for combo in itertools.combinations_with_replacement(
            range(1, ncells), n) for x in combo),
        dtype=np.int64, count=total * n).reshape(total, n)

    keyed: list[tuple[tuple, tuple[int, ...]]] = []
    for lo in range(0, total, 4096):
        rows = rows_all[lo:lo + 4096]
        fmat = np.zeros((rows.shape[0], ncells), dtype=np.int64)
        np.add.at(fmat, (np.arange(rows.shape[0])[:, None], rows), 1)
        keyed.extend(_score_batch(fmat, rows, n, p, sysm, criterion))

    keyed.sort()
    out = []
    for _, counts in keyed[:top]:
        f = FrequencyVector(p, counts)
        out.append((f, _report_for_frequency(f)))
    return out


def _report_for_frequency(f: FrequencyVector) -> TheoryReport:
    g = generator_for_frequency(f)
    if f.p == 3 and preconditions_met(f):
        return analyze(g, method="theory")
    return analyze(g, method="bruteforce", force=True)


def _score_batch(fmat: np.ndarray, rows: np.ndarray, n: int, p: int,
                 sysm: EquationSystem, criterion: str
                 ) -> list[tuple[tuple, tuple[int, ...]]]:
    """Exact minimize-oriented ranking key per candidate.

    max_resolution keys are (-r, -e) so that deeper resolution sorts
    first; gma keys are the GWLP vector scaled by runs^2, an integer
    tuple compared ascending.
    """
    nb = fmat.shape[0]
    runs = 4 ** n
    use_theory = np.zeros(nb, dtype=bool)
    if p == 3:
        par = np.array([[1 if tuple(x % 2 for x in pat) == pi else 0
                         for pat in cells(3)]
                        for pi in _PRECONDITION_PARITIES], dtype=np.int64)
        use_theory = (fmat @ par.T > 0).all(axis=1)

    keys: list[tuple | None] = [None] * nb
    if use_theory.any():
        k = fmat @ np.asarray(sysm.c_matrix(), dtype=np.int64).T
        a = fmat @ np.asarray(sysm.b_matrix(), dtype=np.int64).T
        consts = np.asarray(sysm.constants, dtype=np.int64)
        qs = np.array([sum(pi) for pi in sysm.a_order])
        cls = np.array([sysm.a_order.index(tuple(x % 2 for x in w))
                        if any(x % 2 for x in w) else -1
                        for w in sysm.k_order])
        odd = cls >= 0
        idx = np.nonzero(use_theory)[0]
        lengths = k[idx] + consts
        e_cls = (qs - 1 + a[idx]) // 2
        e_slot = np.zeros_like(lengths)
        e_slot[:, odd] = e_cls[:, cls[odd]]
        for row, bi in enumerate(idx):
            keys[bi] = _theory_key(lengths[row], e_slot[row], odd,
                                   2 * n + 2 * p, runs, criterion)
    rest = np.nonzero(~use_theory)[0]
    for lo in range(0, rest.size, 1024):
        sub = rest[lo:lo + 1024]
        for bi, key in zip(sub, _oracle_keys(rows[sub], n, p, criterion)):
            keys[bi] = key
    return [(keys[i], tuple(int(x) for x in fmat[i])) for i in range(nb)]


def _theory_key(lengths, exponents, odd, factors, runs, criterion):
    if criterion == "max_resolution":
        r = int(lengths.min())
        e = int(exponents[lengths == r].min())
        return (-r, -e)
    acc = [0] * (factors + 1)
    r2 = runs * runs
    for length, is_odd in zip(lengths.tolist(), odd.tolist()):
        acc[length] += 2 * r2 if is_odd else r2  # count * rho^2 * runs^2
    return tuple(acc[3:])


def _oracle_keys(rows: np.ndarray, n: int, p: int, criterion: str) -> list:
    """Exact keys via a batched Walsh-Hadamard transform of the runs."""
    nb = rows.shape[0]
    factors = 2 * n + 2 * p
    runs = 4 ** n
    size = 1 << factors
    digits = (rows[:, :, None] >> (2 * np.arange(p - 1, -1, -1))) & 3
    t = np.arange(runs, dtype=np.int64)
    tdig = (t[:, None] >> (2 * np.arange(n - 1, -1, -1))) & 3
    left = np.einsum("rk,bkj->brj", tdig, digits) % 4
    mask = np.zeros((nb, runs), dtype=np.int64)
    for j in range(p):
        d = left[:, :, j]
        mask |= (d >= 2).astype(np.int64) << (2 * j)
        mask |= ((d == 1) | (d == 2)).astype(np.int64) << (2 * j + 1)
    for i in range(n):
        d = tdig[None, :, i]
        mask |= (d >= 2).astype(np.int64) << (2 * p + 2 * i)
        mask |= ((d == 1) | (d == 2)).astype(np.int64) << (2 * p + 2 * i + 1)
    flat = (mask + size * np.arange(nb)[:, None]).ravel()
    h = np.bincount(flat, minlength=nb * size).reshape(nb, size)
    h = h.astype(np.int16 if runs < 2 ** 15 else np.int64)
    step = 1
    while step < size:
        shaped = h.reshape(nb, -1, 2 * step)
        lo = shaped[:, :, :step].copy()
        hi = shaped[:, :, step:].copy()
        shaped[:, :, :step] = lo + hi
        shaped[:, :, step:] = lo - hi
        step *= 2

    by_size = _subset_indices_by_size(factors)
    keys = []
    for bi in range(nb):
        row = h[bi]
        if criterion == "max_resolution":
            key = (-(factors + 1), 0)
            for s in range(3, factors + 1):
                vals = np.abs(row[by_size[s]].astype(np.int64))
                top = int(vals.max(initial=0))
                if top:
                    assert runs % top == 0 and (runs // top).bit_count() == 1
                    key = (-s, -((runs // top).bit_length() - 1))
                    break
            keys.append(key)
        else:
            keys.append(tuple(
                int((row[by_size[s]].astype(np.int64) ** 2).sum())
                for s in range(3, factors + 1)))
    return keys


_SUBSET_CACHE: dict[int, dict[int, np.ndarray]] = {}


def _subset_indices_by_size(factors: int) -> dict[int, np.ndarray]:
    got = _SUBSET_CACHE.get(factors)
    if got is None:
        sizes = np.zeros(1 << factors, dtype=np.int64)
        for b in range(factors):
            sizes += (np.arange(1 << factors) >> b) & 1
        got = {s: np.nonzero(sizes == s)[0]
               for s in range(3, factors + 1)}
        _SUBSET_CACHE[factors] = got
    return got
