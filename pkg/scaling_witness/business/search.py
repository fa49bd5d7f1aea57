from collections.abc import Callable
from concurrent.futures import ThreadPoolExecutor, as_completed
from logging import getLogger

import numpy as np
from scipy.optimize import Bounds, minimize

from scaling_witness.business.criterion import (
    hermitian_determinant,
    minor_report,
    regularized_determinants,
    regularized_minor_report,
    shifted_determinants,
)
from scaling_witness.business.exceptions import ModeCountMismatchError, UnphysicalStateError
from scaling_witness.business.gaussian import check_physicality
from scaling_witness.models.scaling import MinorReport, ScalingVector, Verdict
from scaling_witness.models.scan import ScanGrid, ScanSummary, SlicePlan, WitnessResult
from scaling_witness.models.state import CovarianceMatrix
from scaling_witness.utils.constants import (
    COARSE_GRID_LIMIT,
    COARSE_RESOLUTION,
    DEFAULT_SEED,
    DEFAULT_STARTS,
    EVALUATION_CHUNK,
    LAMBDA_LOWER,
    LAMBDA_UPPER,
    MAX_WORKERS,
    MINIMUM_COARSE_RESOLUTION,
    PHYSICALITY_TOLERANCE,
    SIMPLEX_MAX_ITERATIONS,
    SIMPLEX_STEP,
    SIMPLEX_TOLERANCE,
    TWO_MODES,
    WITNESS_TOLERANCE,
)

logger = getLogger(__name__)


def grid_nodes(resolution: int) -> np.ndarray:
    """
    Equally spaced nodes of [-1, 1].

    Nodes are computed as (2i - (N-1)) / (N-1), so both ends are exact, 0 is exact for odd N, and refining
    by an odd factor reproduces the coarser nodes bit for bit.
    """
    steps = resolution - 1
    return (2 * np.arange(resolution) - steps) / steps


def coarse_resolution(n: int) -> int:
    """Largest odd number of points per axis, at most COARSE_RESOLUTION, keeping the pre-scan tractable."""
    resolution = COARSE_RESOLUTION
    while resolution > MINIMUM_COARSE_RESOLUTION and resolution**n > COARSE_GRID_LIMIT:
        resolution -= 2
    return resolution


def _best_index(values: np.ndarray, lambda_grid: np.ndarray) -> np.ndarray:
    """Indices sorted by value, ties broken by the lexicographic order of the scaling parameters."""
    return np.lexsort((*lambda_grid.T[::-1], values))


def _evaluate(sigma: CovarianceMatrix, lambda_grid: np.ndarray) -> np.ndarray:
    """Evaluate Σ_reg over a large grid in bounded chunks."""
    chunks = [
        regularized_determinants(sigma, lambda_grid[start : start + EVALUATION_CHUNK])
        for start in range(0, len(lambda_grid), EVALUATION_CHUNK)
    ]
    return np.concatenate(chunks)


def scan_slice(sigma: CovarianceMatrix, plan: SlicePlan, tolerance: float = WITNESS_TOLERANCE) -> ScanGrid:
    """
    Sample the raw and regularized Σ over a 2-D slice of the scaling box.

    Args:
        sigma (CovarianceMatrix): The covariance matrix
        plan (SlicePlan): Free axes, fixed values and resolution of the slice
        tolerance (float): Regularized values below -tolerance count as negative cells

    Raises:
        ModeCountMismatchError: If the plan does not cover exactly the modes of the state

    Returns:
        ScanGrid: Values over the slice and the summary of the regularized ones

    """
    if not plan.fits(sigma.n):
        raise ModeCountMismatchError(f"Slice plan {plan.axes} / {plan.fixed} does not fit a {sigma.n}-mode state")

    nodes = grid_nodes(plan.resolution)
    first, second = np.meshgrid(nodes, nodes, indexing="ij")

    lambda_grid = np.empty((first.size, sigma.n))
    for mode, scaling in plan.fixed.items():
        lambda_grid[:, mode - 1] = scaling
    lambda_grid[:, plan.axes[0] - 1] = first.ravel()
    lambda_grid[:, plan.axes[1] - 1] = second.ravel()

    logger.info(f"Scanning {len(lambda_grid)} nodes over axes {plan.axes} with fixed {plan.fixed}")
    shape = (plan.resolution, plan.resolution)
    raw = shifted_determinants(sigma, lambda_grid).reshape(shape)
    regularized = _evaluate(sigma, lambda_grid)

    best = int(_best_index(regularized, lambda_grid)[0])
    summary = ScanSummary(
        minimum=float(regularized[best]),
        location=ScalingVector(lambdas=tuple(lambda_grid[best].tolist())),
        negative_fraction=float(np.mean(regularized < -tolerance)),
    )
    logger.info(f"Slice minimum {summary.minimum:.6e} at λ = {summary.location}")
    return ScanGrid(
        plan=plan, n=sigma.n, nodes=nodes, raw=raw, regularized=regularized.reshape(shape), summary=summary
    )


def _objective(sigma: CovarianceMatrix) -> Callable[[np.ndarray], float]:
    """Σ_reg as a plain function of the scaling parameters, for the local descent."""
    base = sigma.entries.astype(complex)
    modes = np.arange(sigma.n)

    def regularized(lambdas: np.ndarray) -> float:
        matrix = base.copy()
        matrix[modes, sigma.n + modes] = -0.5j * lambdas
        matrix[sigma.n + modes, modes] = 0.5j * lambdas
        return float(hermitian_determinant(matrix))

    return regularized


def _initial_simplex(start: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Random simplex around the start, with vertices mirrored back into the box."""
    vertices = start + rng.uniform(-SIMPLEX_STEP, SIMPLEX_STEP, size=(len(start), len(start)))
    vertices = np.where(vertices > LAMBDA_UPPER, 2 * LAMBDA_UPPER - vertices, vertices)
    vertices = np.where(vertices < LAMBDA_LOWER, 2 * LAMBDA_LOWER - vertices, vertices)
    return np.vstack([start, vertices])


def _descend(
    objective: Callable[[np.ndarray], float], start: np.ndarray, simplex: np.ndarray
) -> tuple[float, tuple[float, ...]]:
    """Run one bounded Nelder-Mead descent until the simplex diameter drops below SIMPLEX_TOLERANCE."""
    result = minimize(
        objective,
        start,
        method="Nelder-Mead",
        bounds=Bounds(LAMBDA_LOWER, LAMBDA_UPPER),
        options={
            "initial_simplex": simplex,
            "xatol": SIMPLEX_TOLERANCE,
            "fatol": np.inf,
            "maxiter": SIMPLEX_MAX_ITERATIONS,
        },
    )
    point = np.clip(result.x, LAMBDA_LOWER, LAMBDA_UPPER)
    return objective(point), tuple(point.tolist())


def _report_at(sigma: CovarianceMatrix, lambdas: ScalingVector, tolerance: float) -> MinorReport:
    if lambdas.has_zero:
        return regularized_minor_report(sigma, lambdas, tolerance)
    return minor_report(sigma, lambdas, tolerance)


def minimize_negativity(
    sigma: CovarianceMatrix,
    starts: int = DEFAULT_STARTS,
    seed: int = DEFAULT_SEED,
    resolution: int | None = None,
    tolerance: float = WITNESS_TOLERANCE,
    physicality_tolerance: float = PHYSICALITY_TOLERANCE,
    max_workers: int = MAX_WORKERS,
) -> WitnessResult:
    """
    Search the closed box [-1, 1]^n for the most negative regularized determinant.

    A coarse grid pre-scan ranks its nodes, the best `starts` of them seed bounded Nelder-Mead descents, and
    the best value among the grid and all descents wins, ties going to the lexicographically smallest λ.
    Descents run concurrently; the outcome does not depend on their completion order.

    Args:
        sigma (CovarianceMatrix): A physical covariance matrix
        starts (int): Number of local descents
        seed (int): Seed of the random initial simplexes
        resolution (int | None): Points per axis of the coarse pre-scan, chosen from the mode count when None
        tolerance (float): Depth above which the state is witnessed as entangled
        physicality_tolerance (float): Tolerance of the physicality check
        max_workers (int): Number of concurrent descents

    Raises:
        UnphysicalStateError: If sigma violates the uncertainty relation

    Returns:
        WitnessResult: Verdict, best scaling, depth and the minors at the best scaling

    """
    if starts < 1:
        raise ValueError(f"At least one start is required, got {starts}")

    if resolution is not None and resolution < MINIMUM_COARSE_RESOLUTION:
        raise ValueError(f"The pre-scan needs at least {MINIMUM_COARSE_RESOLUTION} points per axis, got {resolution}")

    if not (physicality := check_physicality(sigma, physicality_tolerance)).passed:
        raise UnphysicalStateError(
            f"Covariance matrix violates the uncertainty relation (minimum eigenvalue {physicality.minimum_eigenvalue})"
        )

    resolution = resolution or coarse_resolution(sigma.n)
    nodes = grid_nodes(resolution)
    coarse = np.stack(np.meshgrid(*([nodes] * sigma.n), indexing="ij"), axis=-1).reshape(-1, sigma.n)
    logger.info(f"Coarse pre-scan of {len(coarse)} nodes for a {sigma.n}-mode state")

    values = _evaluate(sigma, coarse)
    ranking = _best_index(values, coarse)
    candidates = [(float(values[ranking[0]]), tuple(coarse[ranking[0]].tolist()))]

    rng = np.random.default_rng(seed)
    seeds = [coarse[index] for index in ranking[:starts]]
    simplexes = [_initial_simplex(start, rng) for start in seeds]
    objective = _objective(sigma)

    with ThreadPoolExecutor(max_workers=max_workers) as executor:
        start_by_future = {
            executor.submit(_descend, objective, start, simplex): index
            for index, (start, simplex) in enumerate(zip(seeds, simplexes, strict=True))
        }
        for future in as_completed(start_by_future):
            value, lambdas = future.result()
            logger.debug(f"Descent {start_by_future[future]} reached {value:.6e} at {lambdas}")
            candidates.append((value, lambdas))

    minimum, best = min(candidates)
    depth = max(0.0, -minimum)
    best_lambdas = ScalingVector(lambdas=best)

    if depth > tolerance:
        verdict = Verdict.ENTANGLED_WITNESSED
    elif sigma.n == TWO_MODES:
        verdict = Verdict.SEPARABLE
    else:
        verdict = Verdict.NOT_WITNESSED

    logger.info(f"Most negative Σ_reg {minimum:.6e} at λ = {best_lambdas} ({verdict})")
    return WitnessResult(
        verdict=verdict,
        best_lambdas=best_lambdas,
        minimum=minimum,
        depth=depth,
        minors=_report_at(sigma, best_lambdas, tolerance),
        starts=len(seeds),
        seed=seed,
        resolution=resolution,
    )


def negativity_depth(sigma: CovarianceMatrix) -> float:
    """
    Empirical entanglement indicator: the modulus of the most negative Σ_reg found, zero without witness.

    Depths are ordinal and only comparable between states with the same number of modes.
    """
    return minimize_negativity(sigma).depth
