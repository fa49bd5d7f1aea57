"""Shared fixtures: state documents, seeded generators and random physical covariance matrices."""

from collections.abc import Callable
from pathlib import Path

import numpy as np
import pytest
from scipy.linalg import expm

from scaling_witness.business.gaussian import covariance_from_pure, direct_sum, symplectic_form
from scaling_witness.integrations.files import load_state, to_covariance
from scaling_witness.models.state import CovarianceMatrix, PureStateSpec

FIXTURES = Path(__file__).parents[1] / "fixtures"


@pytest.fixture
def fixture_path() -> Callable[[str], Path]:
    """Path of a shipped state document."""

    def _path(name: str) -> Path:
        return FIXTURES / f"{name}.json"

    return _path


@pytest.fixture
def load_fixture(fixture_path: Callable[[str], Path]) -> Callable[[str], CovarianceMatrix]:
    """Covariance matrix of a shipped state document."""

    def _load(name: str) -> CovarianceMatrix:
        return to_covariance(load_state(fixture_path(name)))

    return _load


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240917)


def single_coupling(c: float, n: int = 3) -> CovarianceMatrix:
    """Pure state whose only coupling joins modes 1 and 2."""
    return covariance_from_pure(PureStateSpec(n=n, couplings={(1, 2): c}))


def symmetrized(entries: np.ndarray) -> np.ndarray:
    return (entries + entries.T) / 2


def random_single_mode(rng: np.random.Generator) -> CovarianceMatrix:
    """Rotated, squeezed thermal state of one mode."""

    def rotation(angle: float) -> np.ndarray:
        return np.array([[np.cos(angle), -np.sin(angle)], [np.sin(angle), np.cos(angle)]])

    squeezing = np.exp(rng.uniform(-0.8, 0.8))
    symplectic = rotation(rng.uniform(0, np.pi)) @ np.diag([squeezing, 1 / squeezing]) @ rotation(rng.uniform(0, np.pi))
    occupation = rng.uniform(0.5, 1.5)
    return CovarianceMatrix(n=1, entries=symmetrized(occupation * symplectic @ symplectic.T))


def random_product_state(rng: np.random.Generator, n: int) -> CovarianceMatrix:
    """Direct sum of independent single-mode states, separable by construction."""
    return direct_sum(*(random_single_mode(rng) for _ in range(n)))


def random_physical_state(rng: np.random.Generator, n: int, strength: float = 0.3) -> CovarianceMatrix:
    """
    Symplectic transform of a thermal state.

    expm(ΩH) is symplectic for any symmetric H, so S diag(ν, ν) S^T with ν >= 1/2 is physical.
    """
    generator = rng.normal(scale=strength, size=(2 * n, 2 * n))
    symplectic = expm(symplectic_form(n) @ symmetrized(generator))
    occupations = rng.uniform(0.5, 1.5, size=n)
    thermal = np.diag(np.concatenate([occupations, occupations]))
    return CovarianceMatrix(n=n, entries=symmetrized(symplectic @ thermal @ symplectic.T))
