from enum import StrEnum
from typing import Any, Self

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_serializer, field_validator, model_validator

from scaling_witness.utils.constants import MAX_MODES


def parse_mode_pair(key: Any) -> tuple[int, int]:
    """
    Parse a coupling key into a pair of 1-based mode indices.

    Args:
        key (Any): Either an "i,j" string as written in state documents or an (i, j) pair

    Raises:
        ValueError: If the key is not two integers

    Returns:
        tuple[int, int]: The pair of mode indices

    """
    parts = key.split(",") if isinstance(key, str) else key
    try:
        first, second = (int(str(part).strip()) for part in parts)
    except (TypeError, ValueError):
        raise ValueError(f"Coupling key {key!r} is not of the form 'i,j'") from None
    return first, second


class PureStateSpec(BaseModel):
    """Mode count and symmetric coupling coefficients of the Gaussian wavefunction exponent."""

    model_config = ConfigDict(frozen=True)

    n: int = Field(..., ge=1, le=MAX_MODES)
    couplings: dict[tuple[int, int], float] = Field(default_factory=dict)

    @field_validator("couplings", mode="before")
    @classmethod
    def _parse_coupling_keys(cls, value: Any) -> Any:
        """Accept the "i,j" string keys used by state documents."""
        if not isinstance(value, dict):
            return value
        return {parse_mode_pair(key): coefficient for key, coefficient in value.items()}

    @model_validator(mode="after")
    def _check_mode_pairs(self) -> Self:
        """Check that every coupling refers to an ordered pair of existing modes."""
        for first, second in self.couplings:
            if not 1 <= first < second <= self.n:
                raise ValueError(f"Coupling key '{first},{second}' must satisfy 1 <= i < j <= {self.n}")
        return self

    @field_serializer("couplings")
    def _serialize_couplings(self, couplings: dict[tuple[int, int], float]) -> dict[str, float]:
        return {f"{first},{second}": value for (first, second), value in sorted(couplings.items())}

    def coupling(self, first: int, second: int) -> float:
        """Return c_ij for the unordered pair {first, second}, zero when uncoupled."""
        return self.couplings.get((min(first, second), max(first, second)), 0.0)


class CovarianceMatrix(BaseModel):
    """
    Real symmetric 2n x 2n covariance matrix in the (q_1..q_n, p_1..p_n) ordering, with the vacuum at 1/2.

    The entries are stored as a read-only float array, symmetric exactly as stored. Physicality is not
    assumed here, it is checked by `check_physicality`.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    n: int = Field(..., ge=1, le=MAX_MODES)
    entries: np.ndarray = Field(...)

    @field_validator("entries", mode="before")
    @classmethod
    def _as_readonly_array(cls, value: Any) -> np.ndarray:
        """Copy the entries into a read-only float array."""
        try:
            array = np.array(value, dtype=float)
        except (TypeError, ValueError):
            raise ValueError("Covariance entries must be real numbers") from None
        array.setflags(write=False)
        return array

    @model_validator(mode="after")
    def _check_shape_and_symmetry(self) -> Self:
        """Check the dimensions, finiteness and exact symmetry of the entries."""
        size = 2 * self.n
        if self.entries.shape != (size, size):
            raise ValueError(f"Covariance matrix for {self.n} modes must be {size}x{size}, got {self.entries.shape}")

        if not np.all(np.isfinite(self.entries)):
            raise ValueError("Covariance matrix contains non-finite entries")

        if not np.array_equal(self.entries, self.entries.T):
            row, column = np.argwhere(self.entries != self.entries.T)[0]
            raise ValueError(f"Covariance matrix is not symmetric at entry ({row + 1},{column + 1})")

        return self

    @field_serializer("entries")
    def _serialize_entries(self, entries: np.ndarray) -> list[list[float]]:
        return entries.tolist()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CovarianceMatrix):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.entries, other.entries)

    def __hash__(self) -> int:
        return hash((self.n, self.entries.tobytes()))

    @property
    def qq(self) -> np.ndarray:
        """Position-position block."""
        return self.entries[: self.n, : self.n]

    @property
    def pp(self) -> np.ndarray:
        """Momentum-momentum block."""
        return self.entries[self.n :, self.n :]

    @property
    def qp(self) -> np.ndarray:
        """Position-momentum block."""
        return self.entries[: self.n, self.n :]


class SymplecticShift(BaseModel):
    model_config = ConfigDict(frozen=True)

    lambdas: tuple[float, ...] = Field(..., min_length=1, max_length=MAX_MODES)

    @property
    def n(self) -> int:
        return len(self.lambdas)

    @property
    def matrix(self) -> np.ndarray:
        """The antisymmetric block matrix [[0, -Λ], [Λ, 0]], equal to Ω when every λ is 1."""
        scaling = np.diag(np.asarray(self.lambdas, dtype=float))
        zeros = np.zeros((self.n, self.n))
        return np.block([[zeros, -scaling], [scaling, zeros]])


class AdmissibilityFailure(StrEnum):
    COUPLING_RANGE = "coupling_range"
    NOT_POSITIVE_DEFINITE = "not_positive_definite"


class Admissibility(BaseModel):
    admissible: bool = Field(...)
    failure: AdmissibilityFailure | None = Field(None)
    detail: str | None = Field(None)
    minimum_eigenvalue: float | None = Field(None)


class PhysicalityReport(BaseModel):
    passed: bool = Field(...)
    minimum_eigenvalue: float = Field(...)
    tolerance: float = Field(...)
