"""Exception and warning types shared across the package."""

__all__ = [
    "TrappedFluxError",
    "DomainError",
    "SingularPointError",
    "ConditioningError",
    "QuadratureError",
    "BiasInfeasibleError",
    "ConfigError",
    "FileFormatError",
    "ConvergenceWarning",
    "TruncationWarning",
    "UndersamplingWarning",
]


class TrappedFluxError(Exception):
    """Base class for all package errors."""


class DomainError(TrappedFluxError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class SingularPointError(DomainError):
    """Evaluation requested exactly at a non-removable singularity."""


class ConditioningError(TrappedFluxError):
    """The requested evaluation is disabled because it is ill-conditioned."""


class QuadratureError(TrappedFluxError):
    """A numerical integration failed to reach its error target."""


class BiasInfeasibleError(TrappedFluxError, ValueError):
    """A requested net-flux bias exceeds what the population can carry."""


class ConfigError(TrappedFluxError, ValueError):
    """A run configuration is malformed or violates an invariant."""


class FileFormatError(TrappedFluxError, ValueError):
    """An input file is malformed; carries the offending byte offset."""

    def __init__(self, message: str, offset: int | None = None):
        if offset is not None:
            message = f"{message} (byte offset {offset})"
        super().__init__(message)
        self.offset = offset


class ConvergenceWarning(UserWarning):
    """A series or iteration converges slowly for the given parameters."""


class TruncationWarning(UserWarning):
    """A truncated sum has not reached the requested tail ratio."""


class UndersamplingWarning(UserWarning):
    """The sample rate is too low for the signal's carrier content."""
