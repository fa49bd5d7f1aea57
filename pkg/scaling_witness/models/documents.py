from datetime import datetime
from enum import StrEnum
from typing import Self

from pydantic import BaseModel, ConfigDict, Field, model_validator

from scaling_witness import __version__
from scaling_witness.models.scaling import MinorReport, ScalingVector, Verdict
from scaling_witness.models.settings import AnalysisSettings
from scaling_witness.utils.constants import MAX_MODES


class StateKind(StrEnum):
    PURE = "pure"
    COVARIANCE = "covariance"


class StateSpecFile(BaseModel):
    """Hand-editable state document: coupling coefficients of a pure state or an explicit covariance matrix."""

    model_config = ConfigDict(extra="forbid")

    kind: StateKind = Field(...)
    n: int = Field(..., ge=1, le=MAX_MODES)
    couplings: dict[str, float] | None = Field(None)
    matrix: list[list[float]] | None = Field(None)

    @model_validator(mode="after")
    def _check_payload(self) -> Self:
        """Check that exactly the payload matching the kind is present."""
        if self.kind == StateKind.PURE and (self.couplings is None or self.matrix is not None):
            raise ValueError("A pure state document holds 'couplings' and no 'matrix'")

        if self.kind == StateKind.COVARIANCE and (self.matrix is None or self.couplings is not None):
            raise ValueError("A covariance document holds 'matrix' and no 'couplings'")

        return self


class ReportDocument(BaseModel):
    version: str = Field(__version__)
    generated_at: datetime = Field(...)
    state_digest: str = Field(...)
    state: StateSpecFile = Field(...)
    verdict: Verdict = Field(...)
    depth: float = Field(..., ge=0)
    minimum: float = Field(...)
    best_lambdas: ScalingVector = Field(...)
    minors: MinorReport = Field(...)
    parameters: AnalysisSettings = Field(...)
