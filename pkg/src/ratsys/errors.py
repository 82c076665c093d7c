"""Exception types shared across the package."""


class RatsysError(Exception):
    """Base class for all package-specific errors."""


class NumericError(RatsysError):
    """A ratio or power degenerated: underflow to zero, non-finite value,
    or a result that failed to stay strictly above the additive constant."""


class DomainError(RatsysError):
    """Inputs lie outside the domain where the requested quantity is defined."""


class ConvergenceError(RatsysError):
    """An iterative method exhausted its budget before reaching tolerance."""


class InsufficientDataError(RatsysError):
    """Not enough usable data points for the requested estimate."""


class ParseError(RatsysError):
    """A scenario or sweep file failed schema validation."""

    def __init__(self, message: str, field: str | None = None):
        self.field = field
        if field is not None:
            message = f"{message} (field: {field})"
        super().__init__(message)


class UnknownPresetError(RatsysError):
    """A preset name did not match any built-in scenario."""
