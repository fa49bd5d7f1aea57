from argparse import ArgumentParser, ArgumentTypeError, Namespace, _SubParsersAction
from logging import getLogger
from pathlib import Path

from scaling_witness.business.search import minimize_negativity, scan_slice
from scaling_witness.integrations.files import build_report, dump_report, emit_grid, load_state, to_covariance
from scaling_witness.models.scan import SlicePlan
from scaling_witness.models.settings import AnalysisSettings
from scaling_witness.utils.constants import DEFAULT_RESOLUTION, DEFAULT_SEED, DEFAULT_STARTS, MAX_WORKERS, ExitCode

logger = getLogger(__name__)


def register(subparsers: "_SubParsersAction[ArgumentParser]") -> None:
    """Add the box search sub-commands: scan and analyze."""
    scan = subparsers.add_parser("scan", help="sample Σ over a 2-D slice of the scaling box as CSV")
    scan.add_argument("spec", type=Path, help="state document")
    scan.add_argument("--axes", type=_parse_axes, required=True, help="the two free modes, e.g. 2,3")
    scan.add_argument("--fix", type=_parse_fixed, action="append", default=[], help="fixed scaling, e.g. 1=0.5")
    scan.add_argument("--grid", type=int, default=DEFAULT_RESOLUTION, help="points per axis")
    scan.add_argument("--out", type=Path, help="CSV file, stdout when omitted")
    scan.set_defaults(handler=_scan)

    analyze = subparsers.add_parser("analyze", help="search the whole box for the most negative Σ_reg")
    analyze.add_argument("spec", type=Path, help="state document")
    analyze.add_argument("--grid", type=int, help="points per axis of the coarse pre-scan")
    analyze.add_argument("--starts", type=int, default=DEFAULT_STARTS, help="number of local descents")
    analyze.add_argument("--seed", type=int, default=DEFAULT_SEED, help="seed of the initial simplexes")
    analyze.add_argument("--max-workers", type=int, default=MAX_WORKERS, help="concurrent descents")
    analyze.add_argument("--json", action="store_true", help="print the full report document")
    analyze.set_defaults(handler=_analyze)


def _parse_axes(text: str) -> tuple[int, int]:
    try:
        first, second = (int(part) for part in text.split(","))
    except ValueError:
        raise ArgumentTypeError(f"expected two mode indices such as 2,3, got {text!r}") from None
    return first, second


def _parse_fixed(text: str) -> tuple[int, float]:
    mode, separator, value = text.partition("=")
    try:
        if not separator:
            raise ValueError
        return int(mode), float(value)
    except ValueError:
        raise ArgumentTypeError(f"expected mode=value such as 1=0.5, got {text!r}") from None


def _scan(args: Namespace) -> int:
    """Write the slice grid as CSV and exit with WITNESS_FOUND when some cell is negative."""
    sigma = to_covariance(load_state(args.spec))
    plan = SlicePlan(axes=args.axes, fixed=dict(args.fix), resolution=args.grid)

    grid = scan_slice(sigma, plan, args.tol)
    content = emit_grid(grid)

    if args.out:
        args.out.write_text(content, encoding="utf-8")
        logger.info(f"Wrote {plan.resolution**2} grid rows to {args.out}")
    else:
        print(content, end="")

    logger.info(f"Negative cells: {grid.summary.negative_fraction:.2%}")
    return ExitCode.WITNESS_FOUND if grid.is_witnessed(args.tol) else ExitCode.OK


def _analyze(args: Namespace) -> int:
    """Run the multi-start search and print its verdict, or the whole report with --json."""
    state = load_state(args.spec)
    settings = AnalysisSettings(
        grid=args.grid, starts=args.starts, seed=args.seed, tolerance=args.tol, max_workers=args.max_workers
    )

    result = minimize_negativity(
        to_covariance(state),
        starts=settings.starts,
        seed=settings.seed,
        resolution=settings.grid,
        tolerance=settings.tolerance,
        physicality_tolerance=settings.physicality_tolerance,
        max_workers=settings.max_workers,
    )

    if args.json:
        print(dump_report(build_report(state, result, settings)))
    else:
        print(f"verdict: {result.verdict}")
        print(f"depth: {result.depth:.12g}")
        print(f"minimum: {result.minimum:.12g}")
        print(f"best_lambda: {result.best_lambdas}")
        print(f"minors: {', '.join(f'{minor:.12g}' for minor in result.minors.minors)}")

    return ExitCode.WITNESS_FOUND if result.witnessed else ExitCode.OK
