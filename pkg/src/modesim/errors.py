"""Exception hierarchy shared across the package."""


class ModesimError(Exception):
    """Base class for all errors raised by modesim."""


class InvalidInputError(ModesimError):
    """Malformed or out-of-contract input (empty faces, bad masses, ...)."""


class GeometricConsistencyError(ModesimError):
    """A geometric object refers to a face the complex does not contain."""


class InvalidWeightsError(ModesimError):
    """Barycentric weights are negative or do not sum to one."""


class DegeneratePointError(ModesimError):
    """All weights fall below the carrier tolerance."""


class InvalidSubsetError(ModesimError):
    """A subset query used statements outside the statement set."""


class ZeroConfidenceError(ModesimError):
    """Visualisation requested for a belief function with zero total belief."""


class CoverageGapError(ModesimError):
    """A state is outside every cover region / stable domain."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class OutOfDomainError(ModesimError):
    """A state lies outside the declared state space or domain."""


class ResolutionError(ModesimError):
    """A sampled geometric test was inconclusive at the configured resolution."""


class RenderError(ModesimError):
    """Rendering failed (missing layout entry, inconsistent trajectory)."""


class EngineError(ModesimError):
    """Stepping error: time regression, unknown channel mapping, ..."""
