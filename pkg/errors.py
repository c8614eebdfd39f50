class ZqError(Exception):
    """Base class for every error raised by the toolkit."""

    exit_code = 1


class SizeError(ZqError):
    """Grid length is not a power of two or is too short."""


class DomainError(ZqError):
    """A parameter or input lies outside the domain of an operation."""


class TruncationError(ZqError):
    """A series tail bound could not be met on the radii ladder."""


class NumericalDegeneracyError(ZqError):
    """Monotonicity or orientation was lost at a grid node."""

    def __init__(self, message, node=None):
        super().__init__(message)
        self.node = node


class SolverError(ZqError):
    """The Beltrami fixed-point iteration stopped contracting."""

    def __init__(self, message, contraction=None):
        super().__init__(message)
        self.contraction = contraction


class SymmetryError(ZqError):
    """A trace that should lie on the unit circle left it."""


class ExtrapolationError(ZqError):
    """A pushforward node fell outside the grid hull."""


class ExtractionError(ZqError):
    """Taylor coefficients failed their tail certificate."""


class UsageError(ZqError):
    """Unknown suite, fixture or check, or malformed CLI input."""

    exit_code = 2


class ConfigError(ZqError):
    """Invalid config file or environment value."""

    exit_code = 2
