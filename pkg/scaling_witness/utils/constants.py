from dataclasses import dataclass

# Basics
LOG_FORMAT = "\n%(levelname)s: %(message)s"
MAX_MODES = 8
TWO_MODES = 2

# Tolerances
WITNESS_TOLERANCE = 1e-9
PHYSICALITY_TOLERANCE = 1e-9
POSITIVE_DEFINITE_THRESHOLD = 1e-12
IMAGINARY_TOLERANCE = 1e-9

# Scans
DEFAULT_RESOLUTION = 101
COARSE_RESOLUTION = 11
COARSE_GRID_LIMIT = 400_000
MINIMUM_COARSE_RESOLUTION = 3
EVALUATION_CHUNK = 10_000
LAMBDA_LOWER = -1.0
LAMBDA_UPPER = 1.0

# Minimizer
DEFAULT_STARTS = 32
DEFAULT_SEED = 1
SIMPLEX_TOLERANCE = 1e-8
SIMPLEX_STEP = 0.1
SIMPLEX_MAX_ITERATIONS = 2000
MAX_WORKERS = 8

# Serialization
CSV_PRECISION = 17
UNDEFINED_MARKER = "nan"
PATTERN_SYMBOLS = {"+": 1, "-": -1, "+1": 1, "-1": -1, "1": 1}


@dataclass
class ExitCode:
    OK = 0
    INPUT_ERROR = 1
    NUMERICAL_FAILURE = 2
    WITNESS_FOUND = 3
