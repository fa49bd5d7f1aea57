from typing import Any, Self

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from scaling_witness.models.scaling import MinorReport, ScalingVector, Verdict
from scaling_witness.utils.constants import (
    DEFAULT_RESOLUTION,
    LAMBDA_LOWER,
    LAMBDA_UPPER,
    MAX_MODES,
    MINIMUM_COARSE_RESOLUTION,
)


class SlicePlan(BaseModel):
    """A 2-D slice of the scaling box: two free axes over [-1, 1] and a fixed λ for every other mode."""

    model_config = ConfigDict(frozen=True)

    axes: tuple[int, int] = Field(...)
    fixed: dict[int, float] = Field(default_factory=dict)
    resolution: int = Field(DEFAULT_RESOLUTION, ge=2)

    @field_validator("axes")
    @classmethod
    def _check_axes(cls, value: tuple[int, int]) -> tuple[int, int]:
        """Check that the free axes are two distinct mode indices."""
        first, second = value
        if first == second:
            raise ValueError(f"Free axes must be distinct, got {first} twice")
        if not (1 <= first <= MAX_MODES and 1 <= second <= MAX_MODES):
            raise ValueError(f"Free axes {value} must be 1-based mode indices")
        return value

    @field_validator("fixed")
    @classmethod
    def _check_fixed_values(cls, value: dict[int, float]) -> dict[int, float]:
        """Check that every fixed scaling parameter lies in [-1, 1]."""
        for mode, scaling in value.items():
            if not LAMBDA_LOWER <= scaling <= LAMBDA_UPPER:
                raise ValueError(f"Fixed λ_{mode} = {scaling} is outside [-1, 1]")
        return value

    @model_validator(mode="after")
    def _check_overlap(self) -> Self:
        """Check that no free axis is also fixed."""
        if overlap := set(self.axes) & set(self.fixed):
            raise ValueError(f"Modes {sorted(overlap)} are both free and fixed")
        return self

    def missing_modes(self, n: int) -> list[int]:
        """Modes of an n-mode state that are neither free nor fixed."""
        return [mode for mode in range(1, n + 1) if mode not in self.axes and mode not in self.fixed]

    def fits(self, n: int) -> bool:
        """Check whether the plan covers exactly the modes of an n-mode state."""
        modes = {*self.axes, *self.fixed}
        return not self.missing_modes(n) and all(1 <= mode <= n for mode in modes)


class ScanSummary(BaseModel):
    minimum: float = Field(...)
    location: ScalingVector = Field(...)
    negative_fraction: float = Field(..., ge=0, le=1)


class ScanGrid(BaseModel):
    """
    Raw and regularized Σ sampled over a slice plan.

    Rows follow the first free axis and columns the second. Raw values are NaN wherever some λ_i is zero.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    plan: SlicePlan = Field(...)
    n: int = Field(..., ge=2)
    nodes: np.ndarray = Field(...)
    raw: np.ndarray = Field(...)
    regularized: np.ndarray = Field(...)
    summary: ScanSummary = Field(...)

    @field_validator("nodes", "raw", "regularized", mode="before")
    @classmethod
    def _as_readonly_array(cls, value: Any) -> np.ndarray:
        array = np.array(value, dtype=float)
        array.setflags(write=False)
        return array

    @model_validator(mode="after")
    def _check_dimensions(self) -> Self:
        """Check that both value matrices have resolution x resolution cells."""
        shape = (self.plan.resolution, self.plan.resolution)
        if self.nodes.shape != (self.plan.resolution,):
            raise ValueError(f"Expected {self.plan.resolution} nodes per axis, got {self.nodes.shape}")
        if self.raw.shape != shape or self.regularized.shape != shape:
            raise ValueError(f"Scan values must be {shape}, got {self.raw.shape} and {self.regularized.shape}")
        return self

    def is_witnessed(self, tolerance: float) -> bool:
        """Check whether some cell of the slice has a regularized value below -tolerance."""
        return self.summary.minimum < -tolerance


class WitnessResult(BaseModel):
    verdict: Verdict = Field(...)
    best_lambdas: ScalingVector = Field(...)
    minimum: float = Field(...)
    depth: float = Field(..., ge=0)
    minors: MinorReport = Field(...)
    starts: int = Field(..., ge=1)
    seed: int = Field(...)
    resolution: int = Field(..., ge=MINIMUM_COARSE_RESOLUTION)

    @property
    def witnessed(self) -> bool:
        return self.verdict == Verdict.ENTANGLED_WITNESSED
