"""Numerical settings for the weak measurement simulator"""

# Operator checks
HERMITIAN_TOL: float = 1e-10
UNITARY_TOL: float = 1e-10
REAL_PART_TOL: float = 1e-10  # imaginary residual allowed on Hermitian expectations

# State validation
STATE_NORM_TOL: float = 1e-12
EIGENVALUE_FLOOR: float = -1e-10
NORMALIZATION_DRIFT_TOL: float = 1e-6  # config amplitudes are renormalized only below this drift

# Meter validation
SYMMETRY_TOL: float = 1e-9
TRUNCATION_TAIL_TOL: float = 1e-10
TRUNCATION_PADDING: int = 4  # extra Fock levels above the cutoff

# Post-selection
DEGENERATE_POSTSELECTION: float = 1e-12
EIGENVALUE_MERGE_TOL: float = 1e-9

# Cross-checks between equivalent routes
SANDWICH_ROUTE_TOL: float = 1e-12
CURVATURE_ROUTE_TOL: float = 1e-8
PSEUDOVARIANCE_ROUTE_TOL: float = 1e-10

# Finite differences
DEFAULT_STEP: float = 1e-3
DEFAULT_RICHARDSON_LEVELS: int = 2
DECOMPOSITION_TOL: float = 1e-4  # total vs oracle for the consistency verdict

# Report emission
REPORT_SCHEMA: str = "weakmeter-report/1"
CSV_FLOAT_FORMAT: str = "%.17g"

# Logging Configuration
LOG_LEVEL: str = "WARNING"
LOG_FORMAT: str = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
