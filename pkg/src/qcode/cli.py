"""Command-line front-end.

Subcommands wrap one library call each and exchange the documented
file formats: generator JSON, design text, frequency-vector JSON
arrays, and JSON reports with rationals rendered as "num/den" strings.
Exit codes: 0 success, 1 verification mismatch, 2 input error,
3 resource-guard refusal.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from .equations import build_system
from .golden import GoldenDataError, verify_all, wordtype_str
from .jchar import WordSpectrum, spectrum_bruteforce, summarize
from .theory import (PreconditionError, SpectrumMismatch, TheoryReport,
                     analyze, fixed_point_7, periodic_extend, search)
from .z4 import (BudgetExceeded, FrequencyVector, GeneratorSpec,
                 build_design, design_from_text, design_to_text,
                 load_generator)

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_INPUT = 2
EXIT_BUDGET = 3


def _emit(args, text: str) -> None:
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)


def _json(payload) -> str:
    return json.dumps(payload, indent=2) + "\n"


def _spectrum_rows(spec: WordSpectrum) -> list[dict]:
    return [{"length": l, "rho": str(r), "count": c}
            for l, r, c in spec.entries]


def _report_payload(runs: int, factors: int, method: str,
                    spec: WordSpectrum, summary) -> dict:
    return {
        "runs": runs,
        "factors": factors,
        "spectrum": _spectrum_rows(spec),
        "gwlp": [str(x) for x in summary.gwlp],
        "resolution": summary.resolution_text(),
        "method": method,
    }


def _report_text(payload: dict, summary) -> str:
    lines = [f"runs={payload['runs']} factors={payload['factors']} "
             f"method={payload['method']}",
             "length rho count"]
    lines += [f"{row['length']} {row['rho']} {row['count']}"
              for row in payload["spectrum"]]
    lines.append("gwlp " + " ".join(payload["gwlp"]))
    res = payload["resolution"]
    if summary.resolution is not None:
        res += f" ({fixed_point_7(summary.resolution)})"
    lines.append(f"resolution = {res}")
    return "\n".join(lines) + "\n"


def cmd_construct(args) -> int:
    g = load_generator(args.input)
    d = build_design(g)
    text = design_to_text(d)
    _emit(args, text)
    if args.output:
        print(f"runs={d.runs} factors={d.factors}")
    return EXIT_OK


def cmd_analyze(args) -> int:
    raw = Path(args.input).read_text()
    if raw.lstrip().startswith("runs="):
        if args.method != "bruteforce":
            print("analyze: a bare design matrix has no generator; "
                  "only --method bruteforce applies", file=sys.stderr)
            return EXIT_INPUT
        d = design_from_text(raw)
        max_len = args.max_length or d.factors
        spec = spectrum_bruteforce(d, max_len, force=args.force_budget)
        summary = summarize(spec, d.factors, max_len)
        payload = _report_payload(d.runs, d.factors, "bruteforce",
                                  spec, summary)
    else:
        g = load_generator(args.input)
        rep: TheoryReport = analyze(g, method=args.method,
                                    max_length=args.max_length,
                                    force=args.force_budget)
        summary = rep.summary
        payload = _report_payload(rep.runs, rep.factors, rep.method,
                                  rep.spectrum, summary)
    if args.format == "text":
        _emit(args, _report_text(payload, summary))
    else:
        _emit(args, _json(payload))
    return EXIT_OK


def cmd_matrices(args) -> int:
    sysm = build_system(args.p)
    payload = {
        "p": args.p,
        "K_order": [wordtype_str(w) for w in sysm.k_order],
        "constants": list(sysm.constants),
        "C": [list(r) for r in sysm.c_matrix()],
        "A_order": [wordtype_str(pi) for pi in sysm.a_order],
        "deltas": list(sysm.deltas),
        "B": [list(r) for r in sysm.b_matrix()],
    }
    if args.format == "text":
        lines = [f"p={args.p}"]
        for label, const, row in zip(payload["K_order"],
                                     payload["constants"], payload["C"]):
            lines.append(f"k_{label} (+{const}): "
                         + " ".join(map(str, row)))
        for label, delta, row in zip(payload["A_order"],
                                     payload["deltas"], payload["B"]):
            lines.append(f"a_{label} (delta {delta}): "
                         + " ".join(map(str, row)))
        _emit(args, "\n".join(lines) + "\n")
    else:
        _emit(args, _json(payload))
    return EXIT_OK


def cmd_verify(args) -> int:
    ps = (args.p,) if args.p else (1, 2, 3)
    diffs, notes = verify_all(ps)
    for note in notes:
        print(f"note: {note}")
    for diff in diffs:
        print(diff)
    if diffs:
        print(f"verify: {len(diffs)} mismatch(es)")
        return EXIT_MISMATCH
    print(f"verify: matrices p={','.join(map(str, ps))} and all frozen "
          "examples match")
    return EXIT_OK


def cmd_search(args) -> int:
    results = search(args.n, args.p, criterion=args.criterion,
                     top=args.top, force=args.force_budget)
    payload = [{
        "F": list(f.counts),
        "K": list(rep.k_values),
        "A": list(rep.a_values),
        "gwlp": [str(x) for x in rep.summary.gwlp],
        "resolution": rep.summary.resolution_text(),
        "witness_V": [list(row) for row in
                      _witness_rows(f)],
    } for f, rep in results]
    if args.format == "text":
        lines = []
        for i, row in enumerate(payload, 1):
            lines.append(f"#{i} resolution={row['resolution']} "
                         f"F={row['F']} V={row['witness_V']}")
        _emit(args, "\n".join(lines) + "\n")
    else:
        _emit(args, _json(payload))
    return EXIT_OK


def _witness_rows(f: FrequencyVector):
    from .z4 import generator_for_frequency
    return generator_for_frequency(f).V


def _load_frequency(path: str) -> FrequencyVector:
    try:
        counts = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ValueError(f"frequency file {path} is not JSON: {exc}")
    if not isinstance(counts, list):
        raise ValueError(f"frequency file {path} must hold a JSON array")
    p = 1
    while 4 ** p < len(counts):
        p += 1
    if 4 ** p != len(counts):
        raise ValueError(
            f"frequency file {path} has {len(counts)} cells, not a "
            "power of 4")
    return FrequencyVector(p, tuple(counts))


def cmd_extend(args) -> int:
    f0 = _load_frequency(args.input)
    fam = periodic_extend(f0, args.t)
    if args.output:
        Path(args.output).write_text(_json(list(fam.extended.counts)))
    payload = {
        "t": fam.t,
        "predicted_r": fam.predicted_r,
        "predicted_rho": str(fam.predicted_rho),
        "predicted_resolution": str(fam.predicted_resolution),
        "rendered_resolution": fixed_point_7(fam.predicted_resolution),
    }
    if args.format == "text":
        print(f"t={fam.t} r={fam.predicted_r} rho={fam.predicted_rho} "
              f"resolution={payload['rendered_resolution']}")
    else:
        print(_json(payload), end="")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qcode",
        description="Quaternary-code two-level designs: construction, "
                    "exact aliasing analysis, and search.")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(sp):
        sp.add_argument("--output", help="write the result here instead "
                                         "of stdout")
        sp.add_argument("--format", choices=("json", "text"),
                        default="json")
        sp.add_argument("--force-budget", action="store_true",
                        help="run past the resource guard")

    sp = sub.add_parser("construct", help="generator JSON -> design text")
    sp.add_argument("--input", required=True)
    common(sp)
    sp.set_defaults(func=cmd_construct)

    sp = sub.add_parser("analyze", help="aliasing report for a generator "
                                        "or design file")
    sp.add_argument("--input", required=True)
    sp.add_argument("--method", choices=("theory", "bruteforce", "both"),
                    default="theory")
    sp.add_argument("--max-length", type=int, default=None)
    common(sp)
    sp.set_defaults(func=cmd_analyze)

    sp = sub.add_parser("matrices", help="emit the coefficient matrices")
    sp.add_argument("--p", type=int, required=True)
    common(sp)
    sp.set_defaults(func=cmd_matrices)

    sp = sub.add_parser("verify", help="diff regenerated matrices and "
                                       "examples against frozen data")
    sp.add_argument("--p", type=int, choices=(1, 2, 3), default=None)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("search", help="rank all frequency vectors for "
                                       "given n, p")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--criterion", choices=("max_resolution", "gma"),
                    default="max_resolution")
    sp.add_argument("--top", type=int, default=1)
    common(sp)
    sp.set_defaults(func=cmd_search)

    sp = sub.add_parser("extend", help="uniform periodic extension of a "
                                       "frequency vector")
    sp.add_argument("--input", required=True)
    sp.add_argument("--t", type=int, required=True)
    common(sp)
    sp.set_defaults(func=cmd_extend)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    name = args.subcommand
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"{name}: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (SpectrumMismatch, GoldenDataError) as exc:
        print(f"{name}: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    except (PreconditionError, ValueError, OSError) as exc:
        print(f"{name}: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
