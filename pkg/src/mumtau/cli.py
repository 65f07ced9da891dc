"""Command-line interface.

Subcommands:
    analyze     full pipeline for a job file or built-in fixture
    frobenius   emit the canonical basis series coefficients
    continue    transport a jet along a path of points
    recognize   read a decimal value from stdin and recognize it
    identities  check the cataloged boundary-sum identities for one k
    growth      coefficient growth diagnostics of a builtin series
    selftest    quick internal consistency run

Exit codes: 0 success, 1 verification or identity failure, 2 invalid
input, 3 numeric failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

import mpmath as mp

from .arith import MIN_PRECISION, working_dps
from .continuation import SolutionSample, continue_along, to_mpc
from .errors import InputError, MumTauError, NumericError
from .fixtures import FIXTURES, get_fixture
from .frobenius import frobenius_basis, required_terms
from .ode import invert_variable, singularities
from .pipeline import (DEFAULT_TOLERANCE, JobSpec, compute_tau,
                       gfunction_growth_report, identity_suite, seed_series_for,
                       selftest, verify_expansion_at_boundary)
from .recognize import build_basis, recognize

EXIT_OK = 0
EXIT_VERIFICATION = 1
EXIT_INPUT = 2
EXIT_NUMERIC = 3


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--digits", type=int, default=120,
                   help="target precision in decimal digits (default 120)")
    p.add_argument("--terms", type=int, default=None,
                   help="series truncation override")
    p.add_argument("--tol", type=float, default=DEFAULT_TOLERANCE,
                   help="tolerance for identity checks (default 1e-8)")
    p.add_argument("--normalization", choices=("plain", "gamma"), default="plain")
    p.add_argument("--rescale", type=str, default="1",
                   help="rational rescale factor of the local variable")
    p.add_argument("--out", type=str, default=None,
                   help="write the report to this path")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--plot", action="store_true",
                   help="render figures next to the report output")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="mumtau", description=__doc__,
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="run the full pipeline")
    p.add_argument("job", nargs="?", default=None,
                   help="job file (JSON or TOML)")
    p.add_argument("--fixture", default=None,
                   help=f"builtin fixture ({', '.join(sorted(FIXTURES))})")
    p.add_argument("--boundary", action="store_true",
                   help="also verify the expansion at the boundary points")
    p.add_argument("--scan-rescale", type=int, default=None, metavar="KMAX",
                   help="rerun for every integer rescale factor 1..KMAX "
                        "and report each recognition")
    _add_common(p)

    p = sub.add_parser("frobenius", help="emit canonical basis coefficients")
    p.add_argument("--fixture", required=True)
    _add_common(p)

    p = sub.add_parser("continue", help="transport a jet along a path")
    p.add_argument("--fixture", required=True)
    p.add_argument("--chart", choices=("local", "seed"), default="local",
                   help="chart of the path points (default: local MUM chart)")
    p.add_argument("--start", type=str, required=True,
                   help="start point (rational or complex, e.g. 1/20 or 0.1+0.2j)")
    p.add_argument("--jet", type=str, default=None,
                   help="comma-separated jet values; defaults to the basis "
                        "solution selected by --solution at the start point")
    p.add_argument("--solution", type=int, default=0,
                   help="basis solution index used when --jet is omitted")
    p.add_argument("--path", type=str, required=True,
                   help="comma-separated waypoints")
    _add_common(p)

    p = sub.add_parser("recognize", help="recognize a decimal value from stdin")
    p.add_argument("--weight", type=int, required=True)
    p.add_argument("--generators", type=str, default=None,
                   help="comma-separated generators, e.g. pi^2,zeta3,log2")
    p.add_argument("--grading", choices=("homogeneous", "graded"),
                   default="homogeneous")
    p.add_argument("--height", type=int, default=10 ** 6)
    _add_common(p)

    p = sub.add_parser("identities", help="check the boundary-sum identities")
    p.add_argument("--k", type=int, required=True)
    _add_common(p)

    p = sub.add_parser("growth", help="coefficient growth diagnostics")
    p.add_argument("--series", default="Pi0_k3",
                   help="builtin series or fixture name")
    _add_common(p)

    p = sub.add_parser("selftest", help="quick internal consistency run")
    _add_common(p)
    return ap


def _parse_point(text: str):
    text = text.strip()
    try:
        return Fraction(text)
    except ValueError:
        return complex(text)


def _emit(args, text: str, payload: dict | None = None,
          figures: list[str] | None = None) -> None:
    if args.format == "json" and payload is not None:
        if figures:
            payload = dict(payload)
            payload["figures"] = figures
        body = json.dumps(payload, indent=2)
    else:
        body = text
        if figures:
            body += "\nfigures: " + ", ".join(figures)
    if args.out:
        Path(args.out).write_text(body + "\n")
        print(f"report written to {args.out}")
    else:
        print(body)


def _figure_base(args, default: str) -> Path:
    if args.out:
        out = Path(args.out)
        return out.with_suffix("")
    return Path(default)


def _cmd_analyze(args) -> int:
    if (args.job is None) == (args.fixture is None):
        raise InputError("analyze needs exactly one of a job file or --fixture")
    if args.job:
        job = JobSpec.from_file(args.job)
        updates = {}
        if args.digits != 120:
            updates["precision"] = args.digits
        if args.terms is not None:
            updates["terms"] = args.terms
        if updates or args.normalization != "plain" or args.rescale != "1":
            from dataclasses import replace
            job = replace(job, normalization=args.normalization,
                          rescale=Fraction(args.rescale), **updates)
    else:
        job = JobSpec(operator=args.fixture, precision=args.digits,
                      terms=args.terms, normalization=args.normalization,
                      rescale=Fraction(args.rescale))
    if args.scan_rescale:
        from .pipeline import scan_rescale
        scans = scan_rescale(job, args.scan_rescale)
        lines = []
        payload = {"schema": "rescale-scan/1", "results": []}
        all_ok = True
        for k, rep in scans:
            status = "recognized" if rep.ok else "not recognized"
            all_ok = all_ok and rep.ok
            lines.append(f"k = {k}: {status}")
            for e in rep.entries:
                form = "0" if e.consistent_with_zero else (
                    e.recognized if e.recognized is not None else "?")
                lines.append(f"    tau_{e.j} = {form}")
            payload["results"].append({"k": k, "report": rep.to_dict()})
        _emit(args, "\n".join(lines), payload)
        return EXIT_OK if all_ok else EXIT_VERIFICATION
    report = compute_tau(job)
    boundary_reports = []
    if args.boundary:
        for phi in (4, -4):
            boundary_reports.append(verify_expansion_at_boundary(
                job, phi, report=report, tolerance=args.tol))
    figures = []
    if args.plot:
        from .plots import save_path_figure, save_tau_figure
        base = _figure_base(args, f"analyze_{job.operator}")
        figures.append(save_tau_figure(report, f"{base}_tau.png"))
        if report.run is not None:
            sing = singularities(report.run.local_op, 30)
            figures.append(save_path_figure(report, sing.finite_points,
                                            f"{base}_path.png"))
        report.figures = figures
    text = report.to_text()
    payload = report.to_dict()
    if boundary_reports:
        text += "\n" + "\n".join(r.to_text() for r in boundary_reports)
        payload["boundary"] = [r.to_dict() for r in boundary_reports]
    _emit(args, text, payload, figures)
    if not report.ok or any(not r.passed for r in boundary_reports):
        return EXIT_VERIFICATION
    return EXIT_OK


def _cmd_frobenius(args) -> int:
    fixture = get_fixture(args.fixture)
    op = invert_variable(fixture.operator) if fixture.mum_transform == "invert" \
        else fixture.operator
    n_terms = args.terms if args.terms is not None else \
        required_terms(fixture.local_radius, Fraction(1, 20), args.digits + 20)
    basis = frobenius_basis(op, n_terms, args.normalization, fixture.local_radius)
    payload = {
        "schema": "frobenius-basis/1",
        "fixture": fixture.name,
        "chart": op.chart,
        "rho": str(basis.rho),
        "order": basis.order,
        "terms": n_terms,
        "normalization": basis.normalization,
        "sigma_series": [
            {"k": m, "coefficients": [str(c) for c in h.coeffs]}
            for m, h in enumerate(basis.sigma_series)
        ],
    }
    lines = [f"canonical basis of {fixture.name} in chart {op.chart} "
             f"(rho = {basis.rho}, order {basis.order}, {n_terms} terms)"]
    for m, h in enumerate(basis.sigma_series):
        head = ", ".join(str(c) for c in h.coeffs[:8])
        lines.append(f"  h_{m}: {head}, ...")
    _emit(args, "\n".join(lines), payload)
    return EXIT_OK


def _cmd_continue(args) -> int:
    fixture = get_fixture(args.fixture)
    op = fixture.operator
    if args.chart == "local" and fixture.mum_transform == "invert":
        op = invert_variable(op)
    start = _parse_point(args.start)
    waypoints = [_parse_point(t) for t in args.path.split(",") if t.strip()]
    r = op.order
    precision = args.digits
    with mp.workdps(working_dps(precision)):
        if args.jet:
            jet = tuple(to_mpc(complex(v)) for v in args.jet.split(","))
            if len(jet) != r:
                raise InputError(f"jet must have {r} components")
        else:
            from .continuation import eval_logseries_jet
            n_terms = args.terms if args.terms is not None else \
                required_terms(fixture.local_radius,
                               Fraction(str(abs(complex(to_mpc(start))))).
                               limit_denominator(10 ** 9), precision + 20)
            basis = frobenius_basis(op, n_terms, args.normalization,
                                    fixture.local_radius)
            jet = eval_logseries_jet(basis.solutions[args.solution], start, r,
                                     precision, basis.radius)
        sample = SolutionSample(to_mpc(start), jet, precision)
        out = continue_along(op, sample, waypoints)
        payload = {
            "schema": "jet-transport/1",
            "fixture": fixture.name,
            "chart": op.chart,
            "start": str(start),
            "end": mp.nstr(out.point, precision),
            "jet": [mp.nstr(v, precision) for v in out.jet],
        }
        text = "\n".join([f"jet at {mp.nstr(out.point, 10)}:"]
                         + [f"  d^{i}: {mp.nstr(v, min(precision, 40))}"
                            for i, v in enumerate(out.jet)])
    _emit(args, text, payload)
    return EXIT_OK


def _cmd_recognize(args) -> int:
    raw = sys.stdin.read().strip()
    if not raw:
        raise InputError("recognize expects a decimal value on stdin")
    precision = min(args.digits, max(MIN_PRECISION, len(raw.replace(".", "")) - 2))
    generators = tuple(g.strip() for g in args.generators.split(",")) \
        if args.generators else None
    with mp.workdps(working_dps(precision)):
        x = mp.mpf(raw)
    basis = build_basis(args.weight, generators, args.grading, precision)
    result = recognize(x, basis, precision, args.height)
    payload = {
        "schema": "recognition/1",
        "status": result.status,
        "consistent_with_zero": result.consistent_with_zero,
        "coefficients": result.as_label_map(),
        "basis": list(basis.labels),
        "residual": mp.nstr(result.residual, 6),
        "verified_digits": result.verified_digits,
    }
    from .pipeline import format_exact_form
    if result.found and not result.consistent_with_zero:
        text = (f"recognized: {format_exact_form(result.as_label_map())}\n"
                f"residual {mp.nstr(result.residual, 6)} "
                f"({result.verified_digits} digits)")
    elif result.consistent_with_zero:
        text = "consistent with zero at the detection threshold"
    else:
        text = f"not recognized over basis {', '.join(basis.labels)} " \
               f"[{result.status}]"
    _emit(args, text, payload)
    return EXIT_OK if result.found else EXIT_VERIFICATION


def _cmd_identities(args) -> int:
    digits = max(30, int(-mp.log10(args.tol)) + 12) if args.tol < 1 else 30
    reports = identity_suite(args.k, args.tol, digits)
    figures = []
    if args.plot:
        from .plots import save_identity_figure
        base = _figure_base(args, f"identities_k{args.k}")
        figures.append(save_identity_figure(reports, f"{base}.png"))
    text = "\n".join(r.to_text() for r in reports)
    payload = {"schema": "identity-report/1", "k": args.k,
               "results": [r.to_dict() for r in reports]}
    _emit(args, text, payload, figures)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_VERIFICATION


def _cmd_growth(args) -> int:
    n_terms = args.terms if args.terms is not None else 240
    series = seed_series_for(args.series, n_terms)
    growth = gfunction_growth_report(series, n_terms)
    figures = []
    if args.plot:
        from .plots import save_growth_figure
        base = _figure_base(args, f"growth_{args.series}")
        figures.append(save_growth_figure(growth, f"{base}.png"))
    _emit(args, growth.to_text(), growth.to_dict(), figures)
    return EXIT_OK


def _cmd_selftest(args) -> int:
    ok, text = selftest(min(args.digits, 60))
    _emit(args, text, {"schema": "selftest/1", "ok": ok, "log": text})
    return EXIT_OK if ok else EXIT_VERIFICATION


_COMMANDS = {
    "analyze": _cmd_analyze,
    "frobenius": _cmd_frobenius,
    "continue": _cmd_continue,
    "recognize": _cmd_recognize,
    "identities": _cmd_identities,
    "growth": _cmd_growth,
    "selftest": _cmd_selftest,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NumericError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except MumTauError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
