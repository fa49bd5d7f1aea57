"""Tests for slice scans and the multi-start negativity search."""

import itertools
import time

import numpy as np
import pytest
from conftest import random_product_state, single_coupling

from scaling_witness.business.criterion import regularized_determinants
from scaling_witness.business.exceptions import ModeCountMismatchError, UnphysicalStateError
from scaling_witness.business.gaussian import (
    covariance_from_pure,
    exponent_matrix,
    permute_modes,
    thermal_covariance,
    validate_spec,
)
from scaling_witness.business.search import (
    coarse_resolution,
    grid_nodes,
    minimize_negativity,
    negativity_depth,
    scan_slice,
)
from scaling_witness.integrations.files import load_state
from scaling_witness.models.scaling import Verdict
from scaling_witness.models.scan import SlicePlan
from scaling_witness.models.state import CovarianceMatrix, PureStateSpec


def test_grid_nodes_are_exact():
    nodes = grid_nodes(101)

    assert nodes[0] == -1.0
    assert nodes[50] == 0.0
    assert nodes[-1] == 1.0
    np.testing.assert_array_equal(grid_nodes(31)[::3], grid_nodes(11))


@pytest.mark.parametrize(("n", "expected"), [(2, 11), (3, 11), (5, 11), (6, 7), (7, 5), (8, 5)])
def test_coarse_resolution(n, expected):
    assert coarse_resolution(n) == expected


def test_slice_plan_validation():
    with pytest.raises(ValueError, match="distinct"):
        SlicePlan(axes=(2, 2))
    with pytest.raises(ValueError, match="both free and fixed"):
        SlicePlan(axes=(2, 3), fixed={2: 0.5})
    with pytest.raises(ValueError, match="outside"):
        SlicePlan(axes=(2, 3), fixed={1: 1.5})


def test_plan_must_fit_the_state():
    sigma = thermal_covariance(3)
    with pytest.raises(ModeCountMismatchError):
        scan_slice(sigma, SlicePlan(axes=(2, 3)))
    with pytest.raises(ModeCountMismatchError):
        scan_slice(sigma, SlicePlan(axes=(2, 3), fixed={1: 1.0, 4: 0.5}))


def test_vacuum_slice_has_no_negative_cells():
    grid = scan_slice(thermal_covariance(3), SlicePlan(axes=(2, 3), fixed={1: 1.0}))

    assert grid.regularized.shape == (101, 101)
    assert grid.summary.negative_fraction == 0
    assert grid.summary.minimum > -1e-12
    assert not grid.is_witnessed(1e-9)


def test_raw_values_undefined_on_zero_nodes():
    grid = scan_slice(single_coupling(2 / 3), SlicePlan(axes=(2, 3), fixed={1: 0.5}, resolution=11))

    assert np.isnan(grid.raw[5]).all()
    assert np.isnan(grid.raw[:, 5]).all()
    assert np.isfinite(grid.regularized).all()

    defined = ~np.isnan(grid.raw)
    scales = np.outer(grid.nodes, grid.nodes) ** 2 * 0.25
    np.testing.assert_allclose(grid.regularized[defined], (scales * grid.raw)[defined], rtol=1e-9, atol=1e-14)


def test_rows_follow_the_first_axis():
    grid = scan_slice(single_coupling(2 / 3), SlicePlan(axes=(3, 2), fixed={1: 0.5}, resolution=11))
    transposed = scan_slice(single_coupling(2 / 3), SlicePlan(axes=(2, 3), fixed={1: 0.5}, resolution=11))

    np.testing.assert_allclose(grid.regularized, transposed.regularized.T, rtol=1e-12, atol=1e-15)


def test_larger_coupling_has_larger_negative_area():
    plan = SlicePlan(axes=(2, 3), fixed={1: 0.5})
    weaker = scan_slice(single_coupling(2 / 3), plan)
    stronger = scan_slice(single_coupling(5 / 6), plan)

    assert weaker.summary.negative_fraction > 0
    assert stronger.summary.negative_fraction > weaker.summary.negative_fraction
    assert stronger.summary.minimum < weaker.summary.minimum < 0


@pytest.mark.parametrize("c", [1 / 8, 1 / 2])
def test_four_mode_single_coupling_slice_is_nonpositive(c):
    """Σ_reg = -2.25c²(1 - λ₃²)(1 - λ₄²) / (256(1 - c²)) on the λ₁ = -1, λ₂ = ½ slice."""
    grid = scan_slice(single_coupling(c, n=4), SlicePlan(axes=(3, 4), fixed={1: -1.0, 2: 0.5}))

    assert grid.regularized.max() <= 1e-9
    assert grid.summary.minimum < -1e-9
    assert grid.summary.minimum == pytest.approx(-2.25 * c**2 / (256 * (1 - c**2)), rel=1e-9)
    assert grid.summary.location.lambdas == (-1.0, 0.5, 0.0, 0.0)


def test_four_mode_single_coupling_minimum_drops_with_coupling():
    plan = SlicePlan(axes=(3, 4), fixed={1: -1.0, 2: 0.5})
    weaker = scan_slice(single_coupling(1 / 8, n=4), plan)
    stronger = scan_slice(single_coupling(1 / 2, n=4), plan)

    assert stronger.summary.minimum < weaker.summary.minimum


def test_four_mode_full_coupling_slice(load_fixture):
    """The fully coupled family turns positive near λ₃ = -1, λ₄ = 1, and its minimum drops with c₃₄."""
    plan = SlicePlan(axes=(3, 4), fixed={1: -1.0, 2: 0.5})
    weaker = scan_slice(load_fixture("four-mode-full-c6-1-8"), plan)
    stronger = scan_slice(load_fixture("four-mode-full-c6-1-2"), plan)

    assert weaker.summary.minimum < -1e-9
    assert stronger.summary.minimum < weaker.summary.minimum
    assert weaker.regularized[0, -1] > 0
    assert stronger.regularized[0, -1] > 0


def test_four_mode_full_coupling_matches_pure_state_identity(load_fixture, fixture_path):
    """Σ_reg = det(A - ΛAΛ) / (4ⁿ det A) at the positive corner of the slice."""
    spec = load_state(fixture_path("four-mode-full-c6-1-8"))
    exponent = exponent_matrix(spec)
    scaling = np.diag([-1.0, 0.5, -1.0, 1.0])
    expected = np.linalg.det(exponent - scaling @ exponent @ scaling) / (256 * np.linalg.det(exponent))

    grid = scan_slice(load_fixture("four-mode-full-c6-1-8"), SlicePlan(axes=(3, 4), fixed={1: -1.0, 2: 0.5}))
    assert grid.regularized[0, -1] == pytest.approx(expected, rel=1e-9)
    assert expected == pytest.approx(6.0096e-05, rel=1e-3)


def test_mixed_three_mode_slice_corner(load_fixture):
    sigma = load_fixture("mixed-three-mode")
    grid = scan_slice(sigma, SlicePlan(axes=(2, 3), fixed={1: 1.0}, resolution=11))

    factors = np.array([1.0, 1.0, 1.0, 1.0, -1.0, -1.0])
    shifted = sigma.entries / np.outer(factors, factors) + 0.5j * np.block(
        [[np.zeros((3, 3)), -np.eye(3)], [np.eye(3), np.zeros((3, 3))]]
    )
    assert np.linalg.det(shifted).real == pytest.approx(-57 / 3200, rel=1e-9)
    assert grid.regularized[0, 0] == pytest.approx(-57 / 3200, rel=1e-9)
    assert grid.summary.minimum <= grid.regularized[0, 0]
    assert grid.is_witnessed(1e-9)


def test_refinement_never_raises_the_minimum():
    sigma = covariance_from_pure(PureStateSpec(n=3, couplings={(1, 3): 0.25, (2, 3): 0.25}))
    coarse = scan_slice(sigma, SlicePlan(axes=(1, 2), fixed={3: -1.0}, resolution=11))
    fine = scan_slice(sigma, SlicePlan(axes=(1, 2), fixed={3: -1.0}, resolution=31))

    np.testing.assert_array_equal(fine.regularized[::3, ::3], coarse.regularized)
    assert fine.summary.minimum <= coarse.summary.minimum


def test_four_mode_slice_is_fast():
    sigma = covariance_from_pure(PureStateSpec(n=4, couplings={(1, 2): 0.25, (2, 3): 0.25, (3, 4): 0.5}))
    plan = SlicePlan(axes=(3, 4), fixed={1: -1.0, 2: 0.5})

    start = time.perf_counter()
    scan_slice(sigma, plan)
    assert time.perf_counter() - start < 1.0


def test_vacuum_is_not_witnessed():
    result = minimize_negativity(thermal_covariance(3), starts=4)

    assert result.verdict == Verdict.NOT_WITNESSED
    assert result.depth == pytest.approx(0, abs=1e-12)
    assert not result.witnessed


def test_two_mode_vacuum_is_separable():
    assert minimize_negativity(thermal_covariance(2), starts=4).verdict == Verdict.SEPARABLE


def test_single_coupling_depth():
    result = minimize_negativity(single_coupling(2 / 3), starts=8)

    assert result.verdict == Verdict.ENTANGLED_WITNESSED
    assert result.minimum <= -19 / 5120
    assert result.depth == pytest.approx(1 / 20, rel=1e-6)

    first, second, third = result.best_lambdas.lambdas
    assert first * second == pytest.approx(-1, abs=1e-6)
    assert third == pytest.approx(0, abs=1e-3)
    assert result.minors.regularized == result.best_lambdas.has_zero


def test_depth_grows_with_coupling():
    weaker = negativity_depth(single_coupling(2 / 3))
    stronger = negativity_depth(single_coupling(5 / 6))

    assert stronger > weaker > 0
    assert stronger == pytest.approx(25 / 176, rel=1e-6)


def test_four_mode_depth_grows_with_last_coupling(load_fixture):
    weaker = negativity_depth(load_fixture("four-mode-full-c6-1-8"))
    stronger = negativity_depth(load_fixture("four-mode-full-c6-1-2"))

    assert stronger > weaker


def test_triangle_depth_grows_with_third_coupling(load_fixture):
    weaker = negativity_depth(load_fixture("triangle-c3-1-4"))
    stronger = negativity_depth(load_fixture("triangle-c3-1-2"))

    assert stronger > weaker > 0


def test_negative_part_spreads_and_drops_as_first_coupling_grows(load_fixture):
    """Σ_reg(½, ¼, λ₃) with c₁₃ = c₂₃ = ¼ and c₁₂ increasing from 0 to ¾."""
    third = grid_nodes(201)
    lambda_grid = np.column_stack([np.full_like(third, 0.5), np.full_like(third, 0.25), third])
    sweep = [
        regularized_determinants(load_fixture(name), lambda_grid)
        for name in ("c1zero", "triangle-c3-1-4", "c1-sweep-1-2", "c1-sweep-3-4")
    ]

    for weaker, stronger in itertools.pairwise(sweep):
        assert np.all(stronger[weaker < 0] < 0)
        assert stronger.min() < weaker.min() < 0
    assert np.count_nonzero(sweep[-1] < 0) > np.count_nonzero(sweep[0] < 0)
    assert sweep[-1].max() > 0


def test_first_coupling_sweep_ends_before_seven_eighths():
    spec = PureStateSpec(n=3, couplings={(1, 2): 7 / 8, (1, 3): 0.25, (2, 3): 0.25})
    assert not validate_spec(spec).admissible


def test_search_detects_what_the_partial_transpose_misses():
    sigma = covariance_from_pure(PureStateSpec(n=3, couplings={(1, 3): 0.25, (2, 3): 0.25}))
    result = minimize_negativity(sigma, starts=8)

    assert result.verdict == Verdict.ENTANGLED_WITNESSED
    assert result.depth >= 1 / 224 - 1e-12


def test_search_is_deterministic():
    sigma = single_coupling(0.5)
    assert minimize_negativity(sigma, starts=6, seed=7) == minimize_negativity(sigma, starts=6, seed=7)


def test_search_never_loses_to_the_coarse_grid():
    sigma = covariance_from_pure(PureStateSpec(n=3, couplings={(1, 2): 0.25, (1, 3): 0.25, (2, 3): 0.25}))
    nodes = grid_nodes(coarse_resolution(3))
    coarse = np.stack(np.meshgrid(nodes, nodes, nodes, indexing="ij"), axis=-1).reshape(-1, 3)

    result = minimize_negativity(sigma, starts=4)
    assert result.minimum <= regularized_determinants(sigma, coarse).min()
    assert result.starts == 4


@pytest.mark.parametrize("n", [3, 4])
def test_direct_sums_have_no_depth(rng, n):
    for _ in range(50):
        result = minimize_negativity(random_product_state(rng, n), starts=2)
        assert result.depth <= 1e-9
        assert result.verdict == Verdict.NOT_WITNESSED


def test_depth_is_invariant_under_relabelling():
    sigma = single_coupling(2 / 3)
    relabelled = permute_modes(sigma, [3, 1, 2])

    original = minimize_negativity(sigma, starts=8).depth
    assert minimize_negativity(relabelled, starts=8).depth == pytest.approx(original, rel=1e-6)


def test_custom_pre_scan_resolution():
    result = minimize_negativity(single_coupling(2 / 3), starts=2, resolution=5)
    assert result.depth == pytest.approx(1 / 20, rel=1e-6)

    with pytest.raises(ValueError, match="at least 3"):
        minimize_negativity(single_coupling(2 / 3), resolution=2)


def test_search_rejects_bad_input():
    with pytest.raises(UnphysicalStateError):
        minimize_negativity(CovarianceMatrix(n=2, entries=0.4 * np.eye(4)))
    with pytest.raises(ValueError, match="At least one start"):
        minimize_negativity(thermal_covariance(2), starts=0)
