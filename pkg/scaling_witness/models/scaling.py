import math
from enum import StrEnum
from typing import Any, Self

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from scaling_witness.utils.constants import LAMBDA_LOWER, LAMBDA_UPPER, MAX_MODES


class Verdict(StrEnum):
    ENTANGLED_WITNESSED = "entangled-witnessed"
    NOT_WITNESSED = "not-witnessed"
    SEPARABLE = "separable"


class ScalingVector(BaseModel):
    """Partial scaling parameters p_i -> λ_i p_i, each within [-1, 1]."""

    model_config = ConfigDict(frozen=True)

    lambdas: tuple[float, ...] = Field(..., min_length=1, max_length=MAX_MODES)

    @field_validator("lambdas", mode="before")
    @classmethod
    def _parse_text(cls, value: Any) -> Any:
        """Accept the comma separated form used on the command line."""
        if isinstance(value, str):
            return tuple(part.strip() for part in value.split(","))
        return value

    @field_validator("lambdas")
    @classmethod
    def _check_range(cls, value: tuple[float, ...]) -> tuple[float, ...]:
        """Check that every scaling parameter is finite and lies in [-1, 1]."""
        for index, scaling in enumerate(value, start=1):
            if not math.isfinite(scaling) or not LAMBDA_LOWER <= scaling <= LAMBDA_UPPER:
                raise ValueError(f"λ_{index} = {scaling} is outside [{LAMBDA_LOWER:g}, {LAMBDA_UPPER:g}]")
        return value

    def __str__(self) -> str:
        return ",".join(f"{scaling:g}" for scaling in self.lambdas)

    @property
    def n(self) -> int:
        return len(self.lambdas)

    @property
    def has_zero(self) -> bool:
        return any(scaling == 0 for scaling in self.lambdas)

    @classmethod
    def ones(cls, n: int) -> Self:
        """The identity scaling, under which the criterion reduces to the uncertainty relation."""
        return cls(lambdas=(1.0,) * n)


class MinorReport(BaseModel):
    """
    Shifted leading principal minors of orders n+1 through 2n at a given scaling.

    The first n minors only involve the position block and are left out. When `regularized` is set, the
    minors are those of σ + (i/2)Ω_Λ, which share their sign with the raw minors wherever these are defined.
    """

    lambdas: ScalingVector = Field(...)
    orders: tuple[int, ...] = Field(...)
    minors: tuple[float, ...] = Field(...)
    witnessed: bool = Field(...)
    regularized: bool = Field(False)
    verdict: Verdict | None = Field(None)

    @model_validator(mode="after")
    def _check_lengths(self) -> Self:
        """Check that there is one minor per order and one order per mode."""
        if len(self.orders) != len(self.minors) or len(self.orders) != self.lambdas.n:
            raise ValueError("A minor report holds exactly one minor per mode")
        return self

    @property
    def most_negative(self) -> float:
        return min(self.minors)
