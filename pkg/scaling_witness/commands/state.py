from argparse import ArgumentParser, Namespace, _SubParsersAction
from logging import getLogger
from pathlib import Path

from scaling_witness.business.criterion import (
    default_ppt_pattern,
    minor_report,
    ppt_test,
    regularized_determinant,
    regularized_minor_report,
    shifted_determinant,
)
from scaling_witness.business.exceptions import InvalidPatternError
from scaling_witness.business.gaussian import check_physicality, validate_spec
from scaling_witness.integrations.files import load_state, to_covariance
from scaling_witness.models.scaling import MinorReport, ScalingVector
from scaling_witness.models.state import PureStateSpec
from scaling_witness.utils.constants import PATTERN_SYMBOLS, UNDEFINED_MARKER, ExitCode

logger = getLogger(__name__)


def register(subparsers: "_SubParsersAction[ArgumentParser]") -> None:
    """Add the single-point sub-commands: validate, eval and ppt."""
    validate = subparsers.add_parser("validate", help="report admissibility and physicality of a state")
    validate.add_argument("spec", type=Path, help="state document")
    validate.set_defaults(handler=_validate)

    evaluate = subparsers.add_parser("eval", help="evaluate Σ, Σ_reg and the minors at one scaling")
    evaluate.add_argument("spec", type=Path, help="state document")
    evaluate.add_argument("--lambda", dest="lambdas", required=True, help="comma separated λ_1..λ_n")
    evaluate.set_defaults(handler=_evaluate)

    ppt = subparsers.add_parser("ppt", help="partial transpose test")
    ppt.add_argument("spec", type=Path, help="state document")
    ppt.add_argument("--pattern", help="comma separated signs, e.g. --pattern=+,-,- (default: + then -)")
    ppt.set_defaults(handler=_ppt)


def _format(value: float) -> str:
    return f"{value:.12g}"


def _print_minors(report: MinorReport) -> None:
    prefix = "regularized_minor" if report.regularized else "minor"
    for order, minor in zip(report.orders, report.minors, strict=True):
        print(f"{prefix}_{order}: {_format(minor)}")
    print(f"witnessed: {str(report.witnessed).lower()}")


def _parse_pattern(text: str) -> tuple[int, ...]:
    """Read a sign pattern such as '+,-,-' or '1,-1,-1'."""
    signs = []
    for symbol in text.split(","):
        if (sign := PATTERN_SYMBOLS.get(symbol.strip())) is None:
            raise InvalidPatternError(f"Unknown sign {symbol!r} in pattern {text!r}, use + and -")
        signs.append(sign)
    return tuple(signs)


def _validate(args: Namespace) -> int:
    """Print the admissibility and physicality of a state document."""
    state = load_state(args.spec)
    sigma = to_covariance(state)

    print(f"kind: {'pure' if isinstance(state, PureStateSpec) else 'covariance'}")
    print(f"modes: {state.n}")
    if isinstance(state, PureStateSpec):
        admissibility = validate_spec(state)
        print(f"admissible: {str(admissibility.admissible).lower()}")
        print(f"exponent_minimum_eigenvalue: {_format(admissibility.minimum_eigenvalue or 0.0)}")

    physicality = check_physicality(sigma)
    print(f"physical: {str(physicality.passed).lower()}")
    print(f"uncertainty_minimum_eigenvalue: {_format(physicality.minimum_eigenvalue)}")
    return ExitCode.OK


def _evaluate(args: Namespace) -> int:
    """Print Σ, Σ_reg and the shifted minors at the given scaling."""
    sigma = to_covariance(load_state(args.spec))
    lambdas = ScalingVector(lambdas=args.lambdas)

    if lambdas.has_zero:
        logger.info(f"λ = {lambdas} holds a zero, Σ is undefined and the minors are regularized")
        raw = UNDEFINED_MARKER
        report = regularized_minor_report(sigma, lambdas, args.tol)
    else:
        raw = _format(shifted_determinant(sigma, lambdas))
        report = minor_report(sigma, lambdas, args.tol)

    print(f"lambda: {lambdas}")
    print(f"sigma_raw: {raw}")
    print(f"sigma_reg: {_format(regularized_determinant(sigma, lambdas))}")
    _print_minors(report)
    return ExitCode.WITNESS_FOUND if report.witnessed else ExitCode.OK


def _ppt(args: Namespace) -> int:
    """Run the partial transpose test with the given or the default sign pattern."""
    sigma = to_covariance(load_state(args.spec))
    pattern = _parse_pattern(args.pattern) if args.pattern else default_ppt_pattern(sigma.n)

    report = ppt_test(sigma, pattern, args.tol)
    print(f"pattern: {report.lambdas}")
    _print_minors(report)
    print(f"verdict: {report.verdict}")
    return ExitCode.WITNESS_FOUND if report.witnessed else ExitCode.OK
