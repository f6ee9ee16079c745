"""Physical parameters of the damped bar and derived denominator data.

The bar occupies [0, L] and carries viscous dampers at both ends and
optionally at one internal point x = a.  Damping enters through the
dimensionless parameters h1 (left end), h2 (right end) and h3 (internal);
h3 = 0 encodes "no internal damper".  A value h = 1 makes the corresponding
boundary transparent (zero reflection); h = -1 is critical and rejected.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import BadGeometry, CriticalParameter

#: parameters with |1 + h| below this are treated as critical
CRITICAL_TOL = 1e-12
#: denominator coefficients with |b| below this are dropped
ZERO_COEF_TOL = 1e-15


@dataclass(frozen=True)
class BarConfig:
    """Physical and damping parameters.

    Parameters
    ----------
    L : float
        Bar length [m], > 0.
    c : float
        Wave speed [m/s], > 0.
    h1, h2, h3 : float
        Dimensionless damping parameters of the left-end, right-end and
        internal damper.  Negative values model energy-injecting control
        elements and are accepted as long as no 1 + h_i vanishes.
    a : float, optional
        Internal damper position [m], required (in (0, L)) when h3 != 0.
    rho_A : float
        Mass per unit length [kg/m]; only scales forcing and energy.
    """

    L: float
    c: float
    h1: float = 0.0
    h2: float = 0.0
    h3: float = 0.0
    a: float | None = None
    rho_A: float = 1.0

    @property
    def has_internal_damper(self) -> bool:
        return self.h3 != 0.0

    @property
    def EA(self) -> float:
        """Axial stiffness rho*A*c^2 [N]."""
        return self.rho_A * self.c ** 2

    def validated(self) -> "BarConfig":
        return validate(self)


def validate(config: BarConfig) -> BarConfig:
    """Check all invariants and return the config unchanged.

    Raises
    ------
    BadGeometry
        If L <= 0, c <= 0, rho_A <= 0, or the internal damper position is
        missing or outside the open interval (0, L).
    CriticalParameter
        If any of 1 + h1, 1 + h2, 1 + h3 vanishes (within 1e-12): the
        leading denominator coefficient degenerates there and the
        initial-value problem is no longer well posed for generic data.
    """
    if not (config.L > 0.0):
        raise BadGeometry(f"bar length must be positive, got L={config.L}")
    if not (config.c > 0.0):
        raise BadGeometry(f"wave speed must be positive, got c={config.c}")
    if not (config.rho_A > 0.0):
        raise BadGeometry(f"mass per unit length must be positive, got {config.rho_A}")
    for name, h in (("h1", config.h1), ("h2", config.h2), ("h3", config.h3)):
        if abs(1.0 + h) <= CRITICAL_TOL:
            raise CriticalParameter(f"{name} = {h} is critical (1 + {name} = 0)")
    if config.has_internal_damper and config.a is None:
        raise BadGeometry("internal damper (h3 != 0) requires a position a")
    if config.a is not None and not (0.0 < config.a < config.L):
        raise BadGeometry(f"damper position a={config.a} not inside (0, {config.L})")
    return config


def reflection_coefficient(h):
    """Amplitude ratio (1 - h)/(1 + h) of the reflected to the incident wave
    at a damper with parameter h.  h = 1 is a transparent boundary (R = 0),
    h = 0 a free end (R = 1)."""
    if abs(1 + h) <= CRITICAL_TOL:
        raise CriticalParameter(f"h = {h} is critical (1 + h = 0)")
    return (1 - h) / (1 + h)


@dataclass(frozen=True)
class DenominatorData:
    """Exponential structure of the characteristic denominator.

    After dividing by its leading term ``lead_coef * exp(s * lead_delay)``,
    the denominator reads ``1 + sum_k b[k] * exp(-alpha[k] * s)`` with all
    delays ``alpha[k] > 0`` in seconds.  Entries with negligible ``b`` are
    dropped, so ``m`` is the number of genuinely active exponents.
    """

    b: tuple[float, ...]
    alpha: tuple[float, ...]      # delays [s]
    lead_coef: float              # divided-out (1/2)(1+h1)(1+h2)(1+h3)
    lead_delay: float             # divided-out exponent L/c [s]

    @property
    def m(self) -> int:
        return len(self.b)

    @property
    def alpha_min(self) -> float:
        """Smallest active delay; inf when the series is a single term."""
        return min(self.alpha) if self.alpha else math.inf

    def reduced(self, s):
        """Evaluate 1 + sum_k b_k exp(-alpha_k s) (numpy-compatible)."""
        import numpy as np

        out = np.ones_like(np.asarray(s, dtype=complex))
        for bk, ak in zip(self.b, self.alpha):
            out = out + bk * np.exp(-ak * np.asarray(s, dtype=complex))
        return out


def denominator_data(config: BarConfig) -> DenominatorData:
    """Delay/coefficient pairs of the normalized characteristic denominator.

    For the full three-damper problem the three pairs are

        b1 = (1-h1) h3 / ((1+h1)(1+h3)),          alpha1 = 2a/c,
        b2 = (1-h2) h3 / ((1+h2)(1+h3)),          alpha2 = 2(L-a)/c,
        b3 = -(1-h1)(1-h2)(1-h3) / prod(1+h_i),   alpha3 = 2L/c.

    With h3 = 0 only the single pair (-R1*R2, 2L/c) survives; with h2 = 1
    only (b1, 2a/c) does.
    """
    config = validate(config)
    L, c, a = config.L, config.c, config.a
    h1, h2, h3 = config.h1, config.h2, config.h3
    lead = 0.5 * (1 + h1) * (1 + h2) * (1 + h3)

    if config.has_internal_damper:
        pairs = [
            ((1 - h1) * h3 / ((1 + h1) * (1 + h3)), 2 * a / c),
            ((1 - h2) * h3 / ((1 + h2) * (1 + h3)), 2 * (L - a) / c),
            (-(1 - h1) * (1 - h2) * (1 - h3)
             / ((1 + h1) * (1 + h2) * (1 + h3)), 2 * L / c),
        ]
    else:
        r1r2 = reflection_coefficient(h1) * reflection_coefficient(h2)
        pairs = [(-r1r2, 2 * L / c)]

    kept = [(b, al) for b, al in pairs if abs(b) >= ZERO_COEF_TOL]
    return DenominatorData(
        b=tuple(b for b, _ in kept),
        alpha=tuple(al for _, al in kept),
        lead_coef=lead,
        lead_delay=L / c,
    )
