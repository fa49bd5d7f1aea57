from pydantic import BaseModel, ConfigDict, Field

from scaling_witness.utils.constants import (
    DEFAULT_SEED,
    DEFAULT_STARTS,
    MAX_WORKERS,
    MINIMUM_COARSE_RESOLUTION,
    PHYSICALITY_TOLERANCE,
    WITNESS_TOLERANCE,
)


class AnalysisSettings(BaseModel):
    model_config = ConfigDict(frozen=True)

    grid: int | None = Field(None, ge=MINIMUM_COARSE_RESOLUTION)
    starts: int = Field(DEFAULT_STARTS, ge=1)
    seed: int = Field(DEFAULT_SEED)
    tolerance: float = Field(WITNESS_TOLERANCE, ge=0)
    physicality_tolerance: float = Field(PHYSICALITY_TOLERANCE, ge=0)
    max_workers: int = Field(MAX_WORKERS, ge=1)
