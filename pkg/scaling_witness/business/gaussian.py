import math
from collections.abc import Sequence
from logging import getLogger

import numpy as np
from cachetools import LRUCache, cached
from scipy.linalg import block_diag

from scaling_witness.business.exceptions import InadmissibleSpecError, ModeCountMismatchError
from scaling_witness.models.check import CouplingRangeCheck, PositiveDefiniteCheck
from scaling_witness.models.state import (
    Admissibility,
    CovarianceMatrix,
    PhysicalityReport,
    PureStateSpec,
    SymplecticShift,
)
from scaling_witness.utils.constants import MAX_MODES, PHYSICALITY_TOLERANCE, POSITIVE_DEFINITE_THRESHOLD

logger = getLogger(__name__)


def exponent_matrix(spec: PureStateSpec) -> np.ndarray:
    """
    Build the matrix A = I - C that writes the wavefunction exponent as -x^T A x / 2.

    Args:
        spec (PureStateSpec): Mode count and coupling coefficients

    Returns:
        np.ndarray: Symmetric n x n matrix with unit diagonal and -c_ij off the diagonal

    """
    exponent = np.eye(spec.n)
    for (first, second), coefficient in spec.couplings.items():
        exponent[first - 1, second - 1] = exponent[second - 1, first - 1] = -coefficient
    return exponent


def validate_spec(spec: PureStateSpec, threshold: float = POSITIVE_DEFINITE_THRESHOLD) -> Admissibility:
    """
    Decide whether the couplings define a normalizable wavefunction.

    The coupling range is checked before positive definiteness, so the reported failure is the first one met.

    Args:
        spec (PureStateSpec): Mode count and coupling coefficients
        threshold (float): Smallest eigenvalue of A accepted as positive

    Returns:
        Admissibility: The verdict, carrying the violated condition on rejection

    """
    exponent = exponent_matrix(spec)
    for check in (CouplingRangeCheck(threshold), PositiveDefiniteCheck(threshold)):
        if failure := check.apply(spec, exponent):
            return failure

    minimum = float(np.linalg.eigvalsh(exponent).min())
    return Admissibility(admissible=True, minimum_eigenvalue=minimum)


def _admissible_exponent(spec: PureStateSpec) -> np.ndarray:
    """Return the exponent matrix of an admissible specification, raising otherwise."""
    if not (verdict := validate_spec(spec)).admissible:
        raise InadmissibleSpecError(verdict.detail)
    return exponent_matrix(spec)


def covariance_from_pure(spec: PureStateSpec) -> CovarianceMatrix:
    """
    Compute the covariance matrix ½ diag(A⁻¹, A) of the pure Gaussian state.

    Args:
        spec (PureStateSpec): An admissible specification

    Raises:
        InadmissibleSpecError: If the specification is not admissible

    Returns:
        CovarianceMatrix: The covariance matrix, with vanishing position-momentum blocks

    """
    exponent = _admissible_exponent(spec)
    inverse = np.linalg.inv(exponent)
    inverse = (inverse + inverse.T) / 2

    logger.debug(f"Built covariance matrix of a {spec.n}-mode pure state with {len(spec.couplings)} couplings")
    return CovarianceMatrix(n=spec.n, entries=0.5 * block_diag(inverse, exponent))


def normalization_constant(spec: PureStateSpec) -> float:
    """Return the wavefunction normalization (det A)^(1/4) / π^(n/4) of an admissible specification."""
    exponent = _admissible_exponent(spec)
    return float(np.linalg.det(exponent)) ** 0.25 / math.pi ** (spec.n / 4)


@cached(cache=LRUCache(maxsize=MAX_MODES))
def symplectic_form(n: int) -> np.ndarray:
    """Return the read-only symplectic form Ω = [[0, -I], [I, 0]] for n modes."""
    form = symplectic_shift((1.0,) * n).matrix
    form.setflags(write=False)
    return form


def symplectic_shift(lambdas: Sequence[float]) -> SymplecticShift:
    """Return the shift [[0, -Λ], [Λ, 0]] that regularizes the scaled uncertainty relation."""
    return SymplecticShift(lambdas=tuple(float(scaling) for scaling in lambdas))


def check_physicality(sigma: CovarianceMatrix, tolerance: float = PHYSICALITY_TOLERANCE) -> PhysicalityReport:
    """
    Check the Robertson-Schrödinger uncertainty relation σ + (i/2)Ω ≥ 0.

    Args:
        sigma (CovarianceMatrix): The covariance matrix, symmetric by construction
        tolerance (float): Absolute slack allowed below zero for the smallest eigenvalue

    Returns:
        PhysicalityReport: Whether the relation holds and the smallest eigenvalue found

    """
    shifted = sigma.entries + 0.5j * symplectic_form(sigma.n)
    minimum = float(np.linalg.eigvalsh(shifted).min())

    if passed := minimum >= -tolerance:
        logger.debug(f"Covariance matrix is physical (minimum eigenvalue {minimum:.3e})")
    else:
        logger.info(f"Covariance matrix violates the uncertainty relation (minimum eigenvalue {minimum:.3e})")

    return PhysicalityReport(passed=passed, minimum_eigenvalue=minimum, tolerance=tolerance)


def direct_sum(*blocks: CovarianceMatrix) -> CovarianceMatrix:
    """
    Place the covariance matrices of independent mode groups side by side.

    The k-th block occupies the modes following those of the previous blocks, and the result stays in the
    canonical (q..., p...) ordering.
    """
    n = sum(block.n for block in blocks)
    entries = np.zeros((2 * n, 2 * n))

    offset = 0
    for block in blocks:
        modes = np.r_[offset : offset + block.n, n + offset : n + offset + block.n]
        entries[np.ix_(modes, modes)] = block.entries
        offset += block.n

    return CovarianceMatrix(n=n, entries=entries)


def permute_modes(sigma: CovarianceMatrix, order: Sequence[int]) -> CovarianceMatrix:
    """
    Relabel the modes so that mode k of the result is mode order[k] of the input (1-based).

    Raises:
        ModeCountMismatchError: If the order is not a permutation of the input modes

    """
    if sorted(order) != list(range(1, sigma.n + 1)):
        raise ModeCountMismatchError(f"{list(order)} is not a permutation of modes 1..{sigma.n}")

    positions = [mode - 1 for mode in order]
    indices = np.array(positions + [sigma.n + position for position in positions])
    return CovarianceMatrix(n=sigma.n, entries=sigma.entries[np.ix_(indices, indices)])


def thermal_covariance(n: int, occupation: float = 0.0) -> CovarianceMatrix:
    """Return the covariance (occupation + ½)·I of n uncorrelated thermal modes, the vacuum by default."""
    return CovarianceMatrix(n=n, entries=(occupation + 0.5) * np.eye(2 * n))
