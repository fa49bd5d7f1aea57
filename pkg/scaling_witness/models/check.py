from abc import ABC, abstractmethod
from logging import getLogger
from typing import ClassVar, final

import numpy as np

from scaling_witness.models.state import Admissibility, AdmissibilityFailure, PureStateSpec
from scaling_witness.utils.constants import POSITIVE_DEFINITE_THRESHOLD

logger = getLogger(__name__)


class Check(ABC):
    FAILURE: ClassVar[AdmissibilityFailure]

    def __init__(self, threshold: float = POSITIVE_DEFINITE_THRESHOLD) -> None:
        self.threshold = threshold

    @abstractmethod
    def _apply(self, spec: PureStateSpec, exponent: np.ndarray) -> str | None: ...

    @final
    def apply(self, spec: PureStateSpec, exponent: np.ndarray) -> Admissibility | None:
        """Apply the check to the specification and its exponent matrix, returning the failure if any."""
        if (detail := self._apply(spec, exponent)) is None:
            return None

        logger.info(f"{spec.n}-mode pure state rejected by {self.__class__.__name__}: {detail}")
        return Admissibility(admissible=False, failure=self.FAILURE, detail=detail)


class CouplingRangeCheck(Check):
    FAILURE = AdmissibilityFailure.COUPLING_RANGE

    def _apply(self, spec: PureStateSpec, _exponent: np.ndarray) -> str | None:
        """Reject coupling coefficients outside the open interval (-1, 1)."""
        for (first, second), coefficient in sorted(spec.couplings.items()):
            if not -1 < coefficient < 1:
                return f"c_{first}{second} = {coefficient} is outside (-1, 1)"
        return None


class PositiveDefiniteCheck(Check):
    FAILURE = AdmissibilityFailure.NOT_POSITIVE_DEFINITE

    def _apply(self, _spec: PureStateSpec, exponent: np.ndarray) -> str | None:
        """Reject exponent matrices whose smallest eigenvalue does not exceed the threshold."""
        minimum = float(np.linalg.eigvalsh(exponent).min())
        if minimum > self.threshold:
            return None
        return f"exponent matrix is not positive definite (minimum eigenvalue {minimum:.3e})"
