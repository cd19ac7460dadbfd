"""Exception hierarchy shared by all modules."""


class VortexwaveError(Exception):
    """Base class for every error raised by the package."""


class DomainError(VortexwaveError, ValueError):
    """Argument outside the mathematical domain of a function."""


class RangeError(VortexwaveError, ValueError):
    """Angle or parameter outside the validity window of a closed form."""


class UnsupportedRegimeError(VortexwaveError, ValueError):
    """Deficit parameter in a regime for which no formulas are available."""


class KinematicsError(VortexwaveError, ValueError):
    """Non-positive transverse kinetic energy."""


class SingularityError(VortexwaveError, ValueError):
    """Evaluation requested exactly at a pole of the amplitude."""


class TruncationError(VortexwaveError, RuntimeError):
    """Series tolerance not reached within the term budget.

    The partially summed result is kept on ``partial`` so callers can still
    inspect it.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class ConfigError(VortexwaveError, ValueError):
    """Malformed or invalid scenario configuration."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
