"""Exception types shared across the package."""


class NuevolveError(Exception):
    """Base class for package-specific failures."""


class SingularDecompositionError(NuevolveError):
    """The group element left the regular cell of the triangular decomposition."""


class SingularFlowError(NuevolveError):
    """A constraint-flow variable reached a forbidden value (phi or theta0 -> 0)."""

    def __init__(self, message: str, t: float | None = None):
        super().__init__(message)
        self.t = t


class StiffnessError(NuevolveError):
    """The adaptive integrator stalled (step size underflow or solver failure)."""


class NoStationaryPointError(NuevolveError):
    """No admissible stationary point exists for the given coefficients."""


class TruncationError(NuevolveError):
    """A truncated-representation computation is contaminated by the cutoff."""


class ProfileDomainError(NuevolveError, ValueError):
    """A tabulated time profile was evaluated outside its domain."""


class ConfigError(NuevolveError, ValueError):
    """A run configuration failed to parse or validate."""
