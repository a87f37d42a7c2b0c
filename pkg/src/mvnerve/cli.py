"""Command-line entry point ``mvnerve``.

Every command prints one JSON report on standard output. Exit status: 0 when
all checks pass, 1 when a check fails, 2 for unreadable or malformed input,
3 when the input violates a precondition.
"""

from __future__ import annotations

import argparse
import json
import sys

from .complexes import cohomology
from .errors import MVNerveError
from .harness import (
    SCHEMA,
    VerificationReport,
    eta_representatives,
    fstar_representatives,
    run_main_theorem,
    run_naturality,
    run_prop_star,
    serialize_cochain,
)
from .io import MalformedInputError, complex_from_json, cover_from_json, load_json, naturality_from_json
from .rings import QQ, RingSpec

EXIT_OK, EXIT_CHECK_FAILED, EXIT_MALFORMED, EXIT_PRECONDITION = 0, 1, 2, 3


def _ring(text: str) -> RingSpec:
    try:
        return RingSpec.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _load_complex(path):
    return complex_from_json(load_json(path))


def _load_pair(args):
    K = _load_complex(args.complex)
    return K, cover_from_json(load_json(args.cover), K)


def cmd_betti(args) -> VerificationReport:
    K = _load_complex(args.complex)
    degrees = [args.degree] if args.degree is not None else list(range(K.dim + 1))
    report = VerificationReport("betti", str(args.ring), {"degrees": degrees})
    groups = [cohomology(K, args.ring, p) for p in degrees]
    report.data = {
        "ranks": [H.free_rank for H in groups],
        "torsion": [list(H.torsion) for H in groups],
    }
    return report


def cmd_nerve(args) -> VerificationReport:
    _, cover = _load_pair(args)
    N = cover.nerve()
    report = VerificationReport("nerve", "-", {"order": list(cover.index_set)})
    report.data = {"vertices": list(N.vertices), "facets": [list(f) for f in N.facets]}
    return report


def _representatives_report(name, level, per_degree, ring, config) -> VerificationReport:
    report = VerificationReport(name, str(ring), dict(config, level=level))
    report.data = {
        "level": level,
        "degrees": [
            {"degree": p, "representatives": [serialize_cochain(z) for z in reps]} for p, reps in per_degree
        ],
    }
    return report


def cmd_eta(args) -> VerificationReport:
    _, cover = _load_pair(args)
    level, reps = eta_representatives(cover, args.ring, args.rule, args.max_degree)
    return _representatives_report("eta", level, reps, args.ring, {"choice_rule": args.rule})


def cmd_fstar(args) -> VerificationReport:
    _, cover = _load_pair(args)
    level, reps = fstar_representatives(cover, args.ring, args.tie_break, args.max_degree)
    return _representatives_report("fstar", level, reps, args.ring, {"tie_break": args.tie_break})


def cmd_verify_prop_star(args) -> VerificationReport:
    return run_prop_star(_load_complex(args.complex), args.ring, args.max_degree)


def cmd_verify_main(args) -> VerificationReport:
    _, cover = _load_pair(args)
    return run_main_theorem(cover, args.ring, args.rule, args.tie_break, args.max_degree)


def cmd_verify_naturality(args) -> VerificationReport:
    h, cover_v, cover_w = naturality_from_json(load_json(args.spec))
    return run_naturality(h, cover_v, cover_w, args.ring, args.rule)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mvnerve", description=__doc__.splitlines()[0])
    parser.add_argument("--timings", action="store_true", help="include wall-clock timings in the report")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, target=sub):
        p = target.add_parser(name)
        p.set_defaults(func=func)
        return p

    def common(p, *, complex_=True, cover=False, rule=False, tie=False, max_degree=True):
        if complex_:
            p.add_argument("complex", help="complex JSON file")
        if cover:
            p.add_argument("cover", help="cover JSON file")
        p.add_argument("--ring", type=_ring, default=QQ, help="Q, Z or Zp:<p> (default Q)")
        if rule:
            p.add_argument("--rule", choices=["default", "min", "max", "vertex"], default="default")
        if tie:
            p.add_argument("--tie-break", dest="tie_break", choices=["min", "max"], default="min")
        if max_degree:
            p.add_argument("--max-degree", dest="max_degree", type=int, default=None)

    p = add("betti", cmd_betti)
    common(p, max_degree=False)
    p.add_argument("--degree", type=int, default=None)

    p = add("nerve", cmd_nerve)
    p.add_argument("complex")
    p.add_argument("cover")

    common(add("eta", cmd_eta), cover=True, rule=True)
    common(add("fstar", cmd_fstar), cover=True, tie=True)

    verify = sub.add_parser("verify").add_subparsers(dest="pipeline", required=True)
    common(add("prop-star", cmd_verify_prop_star, target=verify))
    common(add("main", cmd_verify_main, target=verify), cover=True, rule=True, tie=True)
    p = add("naturality", cmd_verify_naturality, target=verify)
    p.add_argument("spec", help="naturality spec JSON file")
    p.add_argument("--ring", type=_ring, default=QQ)
    p.add_argument("--rule", choices=["default", "min", "max"], default="default")
    return parser


def _diagnostic(kind: str, exc: BaseException) -> str:
    return json.dumps({"schema": SCHEMA, "error": {"kind": kind, "type": type(exc).__name__, "message": str(exc)}}, indent=2)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report = args.func(args)
    except (MalformedInputError, OSError, json.JSONDecodeError) as exc:
        print(_diagnostic("malformed-input", exc))
        return EXIT_MALFORMED
    except MVNerveError as exc:
        print(_diagnostic("precondition", exc))
        return EXIT_PRECONDITION
    print(report.to_json(include_timings=args.timings))
    return EXIT_OK if report.passed else EXIT_CHECK_FAILED


if __name__ == "__main__":
    sys.exit(main())
