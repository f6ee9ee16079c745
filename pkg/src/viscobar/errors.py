"""Exception types raised across the package."""


class ViscobarError(Exception):
    """Base class for all errors raised by this package."""


class CriticalParameter(ViscobarError):
    """A damping parameter sits at a critical value (h = -1) where the
    leading coefficient of the characteristic denominator degenerates."""


class BadGeometry(ViscobarError):
    """Bar length, wave speed or damper position is out of range."""


class RegionMismatch(ViscobarError):
    """The requested spatial region is inconsistent with the configuration."""


class PositiveExponent(ViscobarError):
    """An ungated Laplace exponent is positive somewhere in its region, so
    termwise inversion into causal steps is not possible."""


class WavefrontSample(ViscobarError):
    """A sampling point of the time-differentiated Green's function falls
    exactly on a region boundary; the caller must decide which side to use."""


class WavefrontProximity(ViscobarError):
    """A wavefront sits too close to an evaluation point of the energy audit."""


class QuadratureFailure(ViscobarError):
    """Adaptive quadrature exceeded its evaluation budget."""


class Unstable(ViscobarError):
    """The conservative check of the finite-element stepper failed."""


class NoConvergence(ViscobarError):
    """The numerical Laplace inversion did not reach its accuracy target."""


class ScenarioError(ViscobarError):
    """A scenario file is malformed or contains invalid values."""
