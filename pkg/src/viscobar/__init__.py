"""viscobar: exact traveling-wave solutions for a bar with viscous dampers.

The axial displacement of a finite bar with dashpots at both ends and at one
internal point obeys a wave equation with damping in the boundary conditions
and a point damping term inside.  Its Laplace-domain Green's function has a
denominator that is a finite sum of real exponentials; expanding that
denominator into a geometric/multinomial series and inverting termwise yields
the time-domain Green's function as a *finite* sum of time-shifted Heaviside
steps -- a superposition of the original and partially reflected traveling
waves.  This package evaluates those sums exactly, assembles initial-value
and forced responses from them, audits the energy balance, and ships two
independent oracles (a finite-element stepper and a numerical Bromwich
inverter) for cross-validation.
"""

from .config import (BarConfig, DenominatorData, denominator_data,
                     reflection_coefficient, validate)
from .dalembert import GammaEvaluator, SeriesTerm, enumerate_terms
from .errors import (BadGeometry, CriticalParameter, NoConvergence,
                     PositiveExponent, QuadratureFailure, RegionMismatch,
                     ScenarioError, Unstable, ViscobarError, WavefrontProximity,
                     WavefrontSample)
from .response import (GaussianPulse, InitialData, PointHarmonic,
                       ResponseField, SmoothField, energy_and_flux,
                       forced_convolution, gaussian_pulse,
                       gaussian_pulse_slope, integrate_step_against, solve)

__version__ = "0.1.0"

__all__ = [
    "BarConfig", "DenominatorData", "denominator_data",
    "reflection_coefficient", "validate",
    "GammaEvaluator", "SeriesTerm", "enumerate_terms",
    "GaussianPulse", "InitialData", "PointHarmonic", "ResponseField",
    "SmoothField",
    "energy_and_flux", "forced_convolution", "gaussian_pulse",
    "gaussian_pulse_slope", "integrate_step_against", "solve",
    "ViscobarError", "CriticalParameter", "BadGeometry", "RegionMismatch",
    "PositiveExponent", "WavefrontSample", "WavefrontProximity",
    "QuadratureFailure", "Unstable", "NoConvergence", "ScenarioError",
    "__version__",
]
