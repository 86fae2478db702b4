"""Command-line front end for the verification suite.

Exit codes: 0 when every selected check passes, 1 when at least one check
fails, 2 on invalid arguments or configuration.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .fieldkit import QSqrt2
from .verifier import RunConfig, SuiteResult, run_suite

__all__ = ["main", "build_parser", "render_text", "render_json", "serialize_residual"]


def _rational(text: str) -> Fraction:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational p/q: {text!r}") from exc
    if value <= 0:
        raise argparse.ArgumentTypeError("slope must be positive")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quadric-jacobi",
        description=(
            "Run pointwise verification checks for Jacobi-operator identities "
            "on real hypersurfaces in the complex quadric."
        ),
    )
    parser.add_argument(
        "--m", type=int, nargs="+", default=[3, 4, 5], metavar="M",
        help="complex dimensions to test (each >= 3; default 3 4 5)",
    )
    parser.add_argument(
        "--mode", choices=["exact", "float", "both"], default="both",
        help="arithmetic mode (default both)",
    )
    parser.add_argument(
        "--u", type=_rational, nargs="+", default=[Fraction(1, 2), Fraction(1), Fraction(2)],
        metavar="P/Q", help="exact tube slopes u = tan(sqrt(2) r) as rationals",
    )
    parser.add_argument(
        "--r", type=float, nargs="+", default=[0.2, 0.5, 0.9], metavar="R",
        help="float tube radii in (0, pi/(2 sqrt 2))",
    )
    parser.add_argument(
        "--seed", type=int, nargs="+", default=[42], metavar="SEED",
        help="seeds for randomized probes (default 42)",
    )
    parser.add_argument(
        "--tol", type=float, default=None, metavar="TOL",
        help="override the float tolerance for equality checks",
    )
    parser.add_argument(
        "--suite", nargs="+", default=["*"], metavar="GLOB",
        help="run only checks whose name matches one of these globs",
    )
    parser.add_argument(
        "--format", choices=["text", "json"], default="text", dest="output_format",
        help="report format (default text)",
    )
    parser.add_argument(
        "--out", default=None, metavar="PATH",
        help="write the report to a file instead of stdout",
    )
    parser.add_argument(
        "--trials", type=int, default=50, metavar="N",
        help="randomized trials per probe (default 50)",
    )
    parser.add_argument(
        "--perturb-lambda", type=float, default=0.0, metavar="EPS",
        help="fault injection: corrupt the tube curvature by EPS (float mode)",
    )
    return parser


def serialize_residual(value) -> str:
    """Lossless text form: exact values verbatim, floats at 17 digits."""
    if isinstance(value, QSqrt2):
        return str(value)
    return "%.17g" % float(value)


def render_text(result: SuiteResult) -> str:
    lines = []
    for rep in result.reports:
        status = "SKIP" if rep.skipped else ("PASS" if rep.passed else "FAIL")
        params = " ".join(f"{k}={v}" for k, v in rep.parameters)
        lines.append(
            f"{status} {rep.name} [{rep.mode}] residual={serialize_residual(rep.residual)} "
            f"tol={rep.tolerance:g} seed={rep.seed} {params}"
        )
    s = result.summary
    lines.append(
        f"total: {s['passed']} passed, {s['failed']} failed, {s['skipped']} skipped"
    )
    if s["failed_checks"]:
        lines.append("failed checks: " + ", ".join(s["failed_checks"]))
    return "\n".join(lines) + "\n"


def render_json(result: SuiteResult) -> str:
    payload = {
        "summary": result.summary,
        "reports": [
            {
                "name": rep.name,
                "anchor": rep.anchor,
                "mode": rep.mode,
                "residual": serialize_residual(rep.residual),
                "tolerance": rep.tolerance,
                "passed": rep.passed,
                "skipped": rep.skipped,
                "seed": rep.seed,
                "parameters": dict(rep.parameters),
                "elapsed": rep.elapsed,
            }
            for rep in result.reports
        ],
    }
    return json.dumps(payload, indent=2) + "\n"


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits with 2 on bad usage and 0 on --help; keep both
        return int(exc.code or 0)
    try:
        config = RunConfig(
            m_values=tuple(args.m),
            mode=args.mode,
            u_values=tuple(args.u),
            r_values=tuple(args.r),
            seeds=tuple(args.seed),
            tolerance=args.tol,
            suites=tuple(args.suite),
            trials=args.trials,
            lambda_perturbation=args.perturb_lambda,
            output_format=args.output_format,
            output_path=args.out,
        )
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    result = run_suite(config)
    report = render_json(result) if args.output_format == "json" else render_text(result)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(report)
    else:
        sys.stdout.write(report)
    return 0 if result.all_passed else 1


if __name__ == "__main__":
    sys.exit(main())
