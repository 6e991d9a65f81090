"""Exception hierarchy shared by the library and the CLI."""


class IsocompressError(Exception):
    """Base class for all errors raised by this package."""


class InfeasibleError(IsocompressError, ValueError):
    """The requested compression or moment target admits no solution.

    Attributes:
        min_width: smallest admissible width, when the failure is a width
            below the feasibility limit; ``None`` otherwise.
    """

    def __init__(self, message, min_width=None):
        super().__init__(message)
        self.min_width = min_width


class SolverError(IsocompressError, RuntimeError):
    """Root finding failed to bracket or converge within its budget."""


class InvariantError(IsocompressError, RuntimeError):
    """A computed result violated one of its post-conditions."""


class ConfigError(IsocompressError, ValueError):
    """An experiment configuration is malformed or out of range."""
