class DocumentError(Exception):
    """Base exception for state documents that cannot be turned into a state."""


class MalformedDocumentError(DocumentError):
    """Exception raised when a document is not valid JSON or breaks a structural rule."""


class DimensionMismatchError(DocumentError):
    """Exception raised when a covariance matrix does not have 2n rows and 2n columns."""


class StateValidationError(DocumentError):
    """Exception raised when a parsed state fails the admissibility or physicality validation."""
