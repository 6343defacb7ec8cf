"""
Exception hierarchy for subclock.

Every error raised on purpose derives from `SubclockError` and
carries the process exit code the CLI should return for it:

    0 success, 2 configuration, 3 data, 4 numerical failure
"""
# ========================= STANDARDS =======================
import warnings

# ========================== LOCALS =========================
from .constants import CONFIG_FAIL, DATA_FAIL, NUMERIC_FAIL


class SubclockError(Exception):
    exit_code = 1


class ConfigError(SubclockError, ValueError):
    exit_code = CONFIG_FAIL


class DataError(SubclockError, ValueError):
    exit_code = DATA_FAIL


class ParseError(DataError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None: message = f"line {line}: {message}"
        super().__init__(message)


class DomainError(SubclockError, ValueError):
    """Argument or parameter outside the region a law is defined on."""
    exit_code = CONFIG_FAIL


class NumericalError(SubclockError, ArithmeticError):
    exit_code = NUMERIC_FAIL


class QuadratureError(NumericalError):
    def __init__(self, message: str, value: float = float("nan"),
                 error: float = float("nan"), where=None):
        self.value = value
        self.error = error
        self.where = where
        super().__init__(message)


class GridError(NumericalError):
    pass


class InversionError(NumericalError):
    pass


class FitError(NumericalError):
    pass


class StageError(SubclockError):
    """
    Wraps a failure raised inside one pipeline stage.

    Args:
        stage (str): The stage tag (ingest, init, fit, ...)
        cause (Exception): The original error
    """
    def __init__(self, stage: str, cause: Exception):
        self.stage     = stage
        self.cause     = cause
        self.exit_code = getattr(cause, "exit_code", NUMERIC_FAIL)
        super().__init__(f"[{stage}] {cause}")


class SubclockWarning(UserWarning):
    pass


class NumericWarning(SubclockWarning):
    pass


class CoverageWarning(SubclockWarning):
    pass


class IdentificationWarning(SubclockWarning):
    """Fitted parameters the data pin only in combination."""


def warn(message: str, category=NumericWarning) -> None:
    warnings.warn(message, category, stacklevel=3)


def require(ok: bool, message: str, error=DomainError) -> None:
    if not ok: raise error(message)
