"""Exception types raised by the library."""


class PhotometrixError(Exception):
    """Base class for all library errors."""


class CutoffTooSmall(PhotometrixError):
    """A truncated distribution left more tail mass than the caller allows."""


class IndexOutOfRange(PhotometrixError):
    """A transition index lies outside the physically allowed range."""


class NotAState(PhotometrixError):
    """A matrix failed the density-matrix checks (trace, hermiticity, positivity)."""


class MuZero(PhotometrixError):
    """Loss probability is zero where a loss-limited bound is requested."""


class InvalidFractions(PhotometrixError):
    """Squeezing fractions violate their simplex constraints."""


class Infeasible(PhotometrixError):
    """Protocol constraints cannot be met for the requested parameters."""


class NoCrossing(PhotometrixError):
    """A boundary search found no parameter value where the target ratio is reached."""


class ODEFailure(PhotometrixError):
    """The adaptive integrator failed to converge."""


class ConfigError(PhotometrixError):
    """Bad configuration input to the command-line layer."""
