"""Exception hierarchy shared by every submodule."""


class AdaptVQEError(Exception):
    """Base class for all package errors."""


class DimensionError(AdaptVQEError, ValueError):
    """Operands act on incompatible numbers of qubits / modes, or an index is out of range."""


class ResourceError(AdaptVQEError, MemoryError):
    """A dense realization would exceed the configured size cap."""


class OperatorError(AdaptVQEError, ValueError):
    """An operator lacks a required property (hermiticity, unit coefficient, ...)."""


class FcidumpParseError(AdaptVQEError, ValueError):
    """Malformed FCIDUMP input."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class OccupationError(AdaptVQEError, ValueError):
    """Unsupported or impossible electron occupation."""


class PoolError(AdaptVQEError, ValueError):
    """Operator pool is empty or inconsistent."""


class SectorError(AdaptVQEError, ValueError):
    """Requested particle-number / S_z sector contains no determinants."""


class ConfigurationError(AdaptVQEError, ValueError):
    """Invalid user-supplied configuration."""


class DivergenceError(AdaptVQEError, ArithmeticError):
    """An objective returned a non-finite value."""
