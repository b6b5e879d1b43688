"""
lapbound - Command Line Interface

Subcommands for spectra, eigenvalue and cohomology bounds, property suites
and random neighborhood-complex experiments. Human tables go to standard
output; machine-readable files are only written behind --out, --report and
--summary.

Exit codes:
    0  success
    2  unreadable input, invalid configuration or unknown suite
    3  vacuous: the requested dimension has no faces
    4  a proven inequality or identity was numerically violated
    5  the --sub complex is not a subcomplex of --input
"""

import argparse
import sys
from typing import Callable, Dict, List, Optional

from rich.console import Console
from rich.table import Table

from lapbound import __version__
from lapbound.core.config import get_settings
from lapbound.core.exceptions import (
    CapacityExceededError,
    FaceNotFoundError,
    IdentityViolationError,
    LapboundError,
    NotASubcomplexError,
    VacuousError,
    ValidationError,
    format_error_message,
)
from lapbound.core.logging import get_logger, setup_logging
from lapbound.schemas.bounds import BoundReport
from lapbound.schemas.experiment import ExperimentMode, GnpConfig
from lapbound.schemas.verification import SuiteName
from lapbound.services.bounds_service import bounds_service
from lapbound.services.experiment_service import (
    run_experiment,
    threshold_probability,
    write_report,
)
from lapbound.services.io_service import load_complex, write_json
from lapbound.services.laplacian_service import betti_numbers, laplacian_from_boundaries
from lapbound.services.linalg_service import sym_eigenvalues
from lapbound.services.verification_service import run_suite

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_INPUT = 2
EXIT_VACUOUS = 3
EXIT_VIOLATED = 4
EXIT_NOT_SUBCOMPLEX = 5

console = Console()
err_console = Console(stderr=True)


def _fmt(value: float) -> str:
    return f"{value:.10g}"


def cmd_spectrum(args: argparse.Namespace) -> int:
    """Eigenvalues of L_K, Betti numbers up to K and the f-vector."""
    X = load_complex(args.input)
    if X.f(args.dim) == 0:
        raise VacuousError(args.dim)
    spectrum = sym_eigenvalues(laplacian_from_boundaries(X, args.dim), tol=args.tol)
    betti = betti_numbers(X, args.dim)
    eigenvalues = [float(v) for v in spectrum.eigenvalues]

    table = Table(title=f"Spectrum of L_{args.dim}")
    table.add_column("i", justify="right")
    table.add_column("eigenvalue", justify="right")
    for i, value in enumerate(eigenvalues, start=1):
        table.add_row(str(i), _fmt(value))
    console.print(table)
    console.print(f"betti: {betti}")
    console.print(f"f-vector: {list(X.f_vector)}")

    if args.out:
        write_json(
            args.out,
            {
                "k": args.dim,
                "eigenvalues": eigenvalues,
                "residual": spectrum.residual_tol,
                "betti": betti,
                "f_vector": list(X.f_vector),
            },
        )
    return EXIT_OK


def _print_bound_table(report: BoundReport, title: str) -> None:
    table = Table(title=title)
    for name in ("i", "bound", "actual", "slack"):
        table.add_column(name, justify="right")
    for row in report.per_index:
        table.add_row(str(row.i), _fmt(row.lower_bound), _fmt(row.actual), _fmt(row.slack))
    console.print(table)
    console.print(f"correction: {_fmt(report.correction)}  tolerance: {report.tolerance:.3g}")


def _bound_exit(report: BoundReport) -> int:
    if report.vacuous:
        raise VacuousError(report.k)
    if not report.holds:
        err_console.print(f"[red]bound violated at indices {[r.i for r in report.violations]}[/red]")
        return EXIT_VIOLATED
    return EXIT_OK


def cmd_bounds_main1(args: argparse.Namespace) -> int:
    X = load_complex(args.input)
    report = bounds_service.main1_bounds(X, args.dim)
    if not report.vacuous:
        _print_bound_table(report, f"Lower bounds for L_{args.dim}")
    if args.out:
        write_json(args.out, report)
    return _bound_exit(report)


def cmd_bounds_sub(args: argparse.Namespace) -> int:
    X = load_complex(args.input)
    Xsub = load_complex(args.sub)
    report = bounds_service.main2_bounds(X, Xsub, args.dim)
    if not report.vacuous:
        _print_bound_table(report, f"Subcomplex lower bounds for L_{args.dim}")
    if args.out:
        write_json(args.out, report)
    return _bound_exit(report)


def cmd_cohom_bound(args: argparse.Namespace) -> int:
    X = load_complex(args.input)
    result = bounds_service.cohomology_dim_bound(X, args.dim)
    table = Table(title=f"Dimension of H^{args.dim}")
    for name in ("threshold", "bound", "betti", "near ties"):
        table.add_column(name, justify="right")
    table.add_row(_fmt(result.threshold), str(result.bound), str(result.betti), str(result.near_ties))
    console.print(table)
    if args.out:
        write_json(args.out, result)
    return EXIT_OK if result.holds else EXIT_VIOLATED


def cmd_verify(args: argparse.Namespace) -> int:
    report = run_suite(
        args.suite,
        trials=args.trials,
        seed=args.seed,
        max_vertices=args.max_vertices,
        workers=args.workers,
    )
    status = "[green]pass[/green]" if report.passed else "[red]FAIL[/red]"
    console.print(
        f"suite {report.suite.value}: {status} "
        f"({report.trials} cases, {report.checks} checks, {len(report.failures)} failures)"
    )
    if args.out:
        write_json(args.out, report)
    if report.passed:
        return EXIT_OK
    first = report.failures[0]
    console.print(f"case {first.trial} (k={first.k}): {first.message}", markup=False)
    if first.counterexample:
        console.out(first.counterexample, highlight=False)
    if first.subcomplex:
        console.out(first.subcomplex, highlight=False)
    return EXIT_VIOLATED


DEFAULT_S = {
    ExperimentMode.EXPECTATION_CHECK: 0,
    ExperimentMode.ORDER_CHECK: 0,
    ExperimentMode.MAIN3: 1,
    ExperimentMode.CONJECTURE1_EVIDENCE: 1,
    ExperimentMode.CONJECTURE2_EVIDENCE: 0,
}


def _resolve_p(raw: str, n: int, k: int) -> float:
    if raw == "auto":
        return threshold_probability(n, k)
    try:
        return float(raw)
    except ValueError as e:
        raise ValidationError(f"--p must be a number or 'auto', got {raw!r}", field="p") from e


def cmd_experiment(args: argparse.Namespace) -> int:
    mode = ExperimentMode(args.mode)
    try:
        config = GnpConfig(
            n=args.n,
            p=_resolve_p(args.p, args.n, args.k),
            seed=args.seed,
            trials=args.trials,
            k=args.k,
            s=DEFAULT_S[mode] if args.s is None else args.s,
            mode=mode,
            face_budget=args.face_budget,
        )
    except ValueError as e:
        raise ValidationError(f"invalid experiment configuration: {e}") from e

    report = run_experiment(config, workers=args.workers)
    write_report(report, args.report, args.summary)

    summary = report.summary
    table = Table(title=f"{mode.value}: n={config.n} p={config.p:.6g} k={config.k} s={config.s}")
    table.add_column("aggregate")
    table.add_column("value", justify="right")
    for key, value in summary.aggregates.items():
        table.add_row(key, str(value))
    table.add_row("trials run", str(summary.trials_run))
    table.add_row("trials skipped", str(summary.trials_skipped))
    table.add_row("seconds", f"{summary.wall_clock_seconds:.2f}")
    console.print(table)
    console.print(summary.scope_note, style="dim")

    failures = report.deterministic_failures
    if failures:
        err_console.print(f"[red]counting inequality failed in trials {failures}[/red]")
        return EXIT_VIOLATED
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lapbound",
        description="Combinatorial Laplacian spectra, eigenvalue bounds and random complex experiments.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--log-level", default=None, help="Override LAPBOUND_LOG_LEVEL")
    sub = parser.add_subparsers(dest="command", required=True)

    spectrum = sub.add_parser("spectrum", help="Eigenvalues of L_K and Betti numbers")
    spectrum.add_argument("--input", required=True)
    spectrum.add_argument("--dim", type=int, required=True)
    spectrum.add_argument("--tol", type=float, default=None, help="Relative eigen-residual tolerance")
    spectrum.add_argument("--out", default=None)
    spectrum.set_defaults(handler=cmd_spectrum)

    for name, handler, help_text in (
        ("bounds-main1", cmd_bounds_main1, "Per-index lower bounds for L_K"),
        ("bounds-sub", cmd_bounds_sub, "Subcomplex lower bounds for L_K"),
        ("cohom-bound", cmd_cohom_bound, "Upper bound on dim H^K against the Betti number"),
    ):
        command = sub.add_parser(name, help=help_text)
        command.add_argument("--input", required=True)
        command.add_argument("--dim", type=int, required=True)
        if name == "bounds-sub":
            command.add_argument("--sub", required=True)
        command.add_argument("--out", default=None)
        command.set_defaults(handler=handler)

    verify = sub.add_parser("verify", help="Randomized property suite")
    verify.add_argument("--suite", required=True, help=", ".join(s.value for s in SuiteName))
    verify.add_argument("--trials", type=int, default=200)
    verify.add_argument("--seed", type=int, default=0)
    verify.add_argument("--max-vertices", type=int, default=8)
    verify.add_argument("--workers", type=int, default=None)
    verify.add_argument("--out", default=None)
    verify.set_defaults(handler=cmd_verify)

    experiment = sub.add_parser("experiment", help="G(n, p) neighborhood complex experiment")
    experiment.add_argument("--mode", required=True, choices=[m.value for m in ExperimentMode])
    experiment.add_argument("--n", type=int, required=True)
    experiment.add_argument("--p", required=True, help="Edge probability or 'auto'")
    experiment.add_argument("--k", type=int, default=1)
    experiment.add_argument("--s", type=int, default=None)
    experiment.add_argument("--trials", type=int, default=1)
    experiment.add_argument("--seed", type=int, default=0)
    experiment.add_argument("--face-budget", type=int, default=None)
    experiment.add_argument("--workers", type=int, default=None)
    experiment.add_argument("--report", default=None, help="Per-trial CSV path")
    experiment.add_argument("--summary", default=None, help="JSON summary path")
    experiment.set_defaults(handler=cmd_experiment)
    return parser


EXIT_CODES: Dict[type, int] = {
    ValidationError: EXIT_INPUT,
    FaceNotFoundError: EXIT_INPUT,
    CapacityExceededError: EXIT_INPUT,
    VacuousError: EXIT_VACUOUS,
    IdentityViolationError: EXIT_VIOLATED,
    NotASubcomplexError: EXIT_NOT_SUBCOMPLEX,
}


def main(argv: Optional[List[str]] = None) -> int:
    """Parse arguments, run one command and map errors to exit codes."""
    parser = build_parser()
    args = parser.parse_args(argv)
    settings = get_settings()
    setup_logging(args.log_level or settings.LOG_LEVEL, settings.LOG_FILE)

    handler: Callable[[argparse.Namespace], int] = args.handler
    try:
        return handler(args)
    except LapboundError as e:
        err_console.print(format_error_message(e, args.command), markup=False)
        return EXIT_CODES.get(type(e), EXIT_FAILURE)


if __name__ == "__main__":
    sys.exit(main())
