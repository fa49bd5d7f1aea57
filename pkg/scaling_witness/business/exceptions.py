class WitnessError(Exception):
    """Base exception for every rejected input or failed evaluation of the separability criterion."""


class InadmissibleSpecError(WitnessError):
    """Exception raised when the coupling coefficients do not define a normalizable Gaussian wavefunction."""


class UnphysicalStateError(WitnessError):
    """Exception raised when a covariance matrix violates the uncertainty relation."""


class SingularScalingError(WitnessError):
    """Exception raised when a raw scaled quantity is requested at a vanishing scaling parameter."""


class InvalidOrderError(WitnessError):
    """Exception raised when a minor order lies outside the range checked by the criterion."""


class InvalidPatternError(WitnessError):
    """Exception raised when a partial transpose pattern contains entries other than +1 and -1."""


class ModeCountMismatchError(WitnessError):
    """Exception raised when a scaling vector or a slice plan does not match the mode count of the state."""


class NumericalFailureError(WitnessError):
    """Exception raised when a Hermitian determinant carries a non-negligible imaginary residue."""
