"""
Runtime configuration, logging setup and errors for the weak measurement simulator
"""

import os
import logging
from dotenv import load_dotenv
from typing import Optional

import config as settings

# Load environment variables
load_dotenv()


class Config:
    """Application configuration"""

    # Environment
    THREADS_ENV = "WEAKMETER_THREADS"
    LOG_LEVEL_ENV = "WEAKMETER_LOG_LEVEL"

    # Application settings
    LOG_LEVEL = os.getenv(LOG_LEVEL_ENV, settings.LOG_LEVEL)

    @classmethod
    def max_workers(cls) -> int:
        """Worker cap for scans: WEAKMETER_THREADS if set, else all cores"""
        raw = os.getenv(cls.THREADS_ENV)
        cores = os.cpu_count() or 1
        if not raw:
            return cores
        try:
            value = int(raw)
        except ValueError:
            logging.getLogger(__name__).warning(f"Ignoring non-integer {cls.THREADS_ENV}={raw!r}")
            return cores
        return max(1, value)


# Logging setup
def setup_logging(level: Optional[str] = None):
    """Setup logging configuration"""
    logging.basicConfig(
        level=getattr(logging, (level or Config.LOG_LEVEL).upper(), logging.WARNING),
        format=settings.LOG_FORMAT
    )
    return logging.getLogger(__name__)


# Common exceptions
class WeakMeterError(Exception):
    """Base exception for the weak measurement simulator"""
    pass


class DimensionMismatchError(WeakMeterError):
    """Raised when operator or state dimensions do not agree"""
    pass


class NotHermitianError(WeakMeterError):
    """Raised when an operator required to be Hermitian is not"""

    def __init__(self, message: str, residual: float = float("nan")):
        super().__init__(message)
        self.residual = residual


class InvalidOperatorError(WeakMeterError):
    """Raised when an operator has non-finite entries"""
    pass


class InvalidStateError(WeakMeterError):
    """Raised when a state violates normalization or positivity"""
    pass


class InvalidMeterError(WeakMeterError):
    """Raised when a meter model violates its invariants"""

    def __init__(self, message: str, residual: float = float("nan")):
        super().__init__(message)
        self.residual = residual


class TruncationLeakError(WeakMeterError):
    """Raised when a Fock-truncated meter state has weight above the cutoff"""

    def __init__(self, message: str, tail_probability: float):
        super().__init__(message)
        self.tail_probability = tail_probability


class DegeneratePostselectionError(WeakMeterError):
    """Raised when the post-selection probability is too small to condition on"""

    def __init__(self, probability: float):
        super().__init__(
            f"post-selection probability {probability:.3e} is below "
            f"{settings.DEGENERATE_POSTSELECTION:.0e}; conditional quantities are undefined"
        )
        self.probability = probability


class ConsistencyError(WeakMeterError):
    """Raised when two equivalent evaluation routes disagree"""
    pass


class NumericalDerivativeError(WeakMeterError):
    """Raised when a finite-difference stencil cannot be evaluated"""
    pass


class ScenarioConfigError(WeakMeterError):
    """Raised when a scenario file fails to parse or validate"""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field
