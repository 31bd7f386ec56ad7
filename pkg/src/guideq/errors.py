"""Exception types shared across the package."""


class GuideqError(Exception):
    """Base class for all library errors."""


class DomainError(GuideqError, ValueError):
    """An argument lies outside the physically meaningful domain."""


class BelowCutoffError(DomainError):
    """Propagation requested at or below the local cutoff frequency."""


class InfinitePhaseVelocityError(GuideqError, ZeroDivisionError):
    """Phase velocity requested at k = 0, where it diverges."""


class NoPropagatingChannelError(DomainError):
    """A scattering lead is below cutoff, so no travelling wave exists there."""


class ForbiddenDomainError(DomainError):
    """The whole domain is classically forbidden at the requested energy."""


class ResolutionError(GuideqError):
    """The spatial grid is too coarse to resolve the wave content."""


class StabilityError(GuideqError):
    """The requested time step violates the stability bound of the scheme."""


class ScenarioError(GuideqError):
    """A scenario file failed validation."""
