import hashlib
import json
from logging import getLogger
from pathlib import Path

from pydantic import ValidationError

from scaling_witness.business.gaussian import check_physicality, covariance_from_pure, validate_spec
from scaling_witness.integrations.files.exceptions import (
    DimensionMismatchError,
    MalformedDocumentError,
    StateValidationError,
)
from scaling_witness.models.documents import StateKind, StateSpecFile
from scaling_witness.models.state import CovarianceMatrix, PureStateSpec
from scaling_witness.utils.constants import PHYSICALITY_TOLERANCE

logger = getLogger(__name__)

type State = PureStateSpec | CovarianceMatrix


def _describe(error: ValidationError) -> str:
    """Name the first violated rule of a validation error."""
    first = error.errors()[0]
    location = ".".join(str(part) for part in first["loc"])
    return f"{location}: {first['msg']}" if location else first["msg"]


def parse_state(text: str, physicality_tolerance: float = PHYSICALITY_TOLERANCE) -> State:
    """
    Parse a JSON state document into a pure state specification or a covariance matrix.

    Args:
        text (str): The document
        physicality_tolerance (float): Tolerance of the physicality check of covariance documents

    Raises:
        MalformedDocumentError: If the document is not valid JSON, has a bad key or an asymmetric matrix
        DimensionMismatchError: If the matrix is not 2n x 2n
        StateValidationError: If the state is not admissible or not physical

    Returns:
        State: The validated state

    """
    try:
        document = StateSpecFile.model_validate_json(text)
    except ValidationError as error:
        raise MalformedDocumentError(_describe(error)) from error

    return to_state(document, physicality_tolerance)


def load_state(path: Path, physicality_tolerance: float = PHYSICALITY_TOLERANCE) -> State:
    """Read and parse a state document from disk."""
    logger.debug(f"Loading state document {path}")
    return parse_state(path.read_text(encoding="utf-8"), physicality_tolerance)


def to_state(document: StateSpecFile, physicality_tolerance: float = PHYSICALITY_TOLERANCE) -> State:
    """Turn a structurally valid document into a validated state."""
    if document.kind == StateKind.PURE:
        try:
            spec = PureStateSpec(n=document.n, couplings=document.couplings or {})
        except ValidationError as error:
            raise MalformedDocumentError(_describe(error)) from error

        if not (verdict := validate_spec(spec)).admissible:
            raise StateValidationError(f"Inadmissible pure state: {verdict.detail}")
        return spec

    matrix = document.matrix or []
    size = 2 * document.n
    if len(matrix) != size or any(len(row) != size for row in matrix):
        columns = sorted({len(row) for row in matrix})
        raise DimensionMismatchError(
            f"Expected a {size}x{size} matrix for {document.n} modes, got {len(matrix)} rows of {columns} columns"
        )

    try:
        sigma = CovarianceMatrix(n=document.n, entries=matrix)
    except ValidationError as error:
        raise MalformedDocumentError(_describe(error)) from error

    if not (physicality := check_physicality(sigma, physicality_tolerance)).passed:
        raise StateValidationError(
            "Covariance matrix violates the uncertainty relation "
            f"(minimum eigenvalue {physicality.minimum_eigenvalue:.3e})"
        )
    return sigma


def to_document(state: State) -> StateSpecFile:
    """Write a state back into its document form."""
    if isinstance(state, PureStateSpec):
        couplings = state.model_dump(mode="json")["couplings"]
        return StateSpecFile(kind=StateKind.PURE, n=state.n, couplings=couplings)
    return StateSpecFile(kind=StateKind.COVARIANCE, n=state.n, matrix=state.entries.tolist())


def to_covariance(state: State) -> CovarianceMatrix:
    """Covariance matrix of a parsed state."""
    return covariance_from_pure(state) if isinstance(state, PureStateSpec) else state


def state_digest(document: StateSpecFile) -> str:
    """SHA-256 of the canonical JSON form of a state document."""
    canonical = json.dumps(document.model_dump(mode="json", exclude_none=True), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()
