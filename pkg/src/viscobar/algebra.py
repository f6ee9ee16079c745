"""Finite exponential sums in the Laplace variable with affine spatial exponents.

Every Laplace-domain building block of the bar's Green's function is a finite
sum of terms ``coef * exp(s * (k0 + kx*x + kxi*xi) / c)`` with integer
coefficients kx, kxi in {-1, 0, 1}.  Once the branch of ``|x - xi|`` and the
sides of the internal damper are fixed (a *region*), the Green's-function
numerator becomes such a sum with every exponent nonpositive, and its inverse
Laplace transform is a sum of time-shifted Heaviside steps, obtained termwise
from ``coef * exp(-beta*s) / s  ->  coef * H(t - beta)``.

Evaluation convention at a step: H(0) = 1 everywhere (comparisons use >=).
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .config import BarConfig, validate
from .errors import PositiveExponent, RegionMismatch

#: exponents are considered equal when constants differ by less than this [m]
MERGE_TOL = 1e-12
#: coefficients below this are dropped after merging
COEF_TOL = 1e-15
#: slack for the causality check at region vertices [m]
CAUSALITY_TOL = 1e-9


class Side(Enum):
    LEFT = "left"
    RIGHT = "right"


class Gate(Enum):
    """Heaviside prefactors that survive in single-variable building blocks."""

    NONE = "none"
    X_RIGHT_OF_A = "H(x-a)"
    X_LEFT_OF_A = "H(a-x)"


class Region(Enum):
    """Orderings of x, xi and the damper position a.

    Within one region the branch of |x - xi| and both damper gates are fixed,
    so every exponent of the numerator is affine in (x, xi).
    """

    X_XI_A = "x<=xi<=a"
    XI_X_A = "xi<=x<=a"
    A_X_XI = "a<=x<=xi"
    A_XI_X = "a<=xi<=x"
    X_A_XI = "x<=a<=xi"
    XI_A_X = "xi<=a<=x"

    @property
    def xi_ge_x(self) -> bool:
        return self in (Region.X_XI_A, Region.A_X_XI, Region.X_A_XI)

    @property
    def zone(self) -> str:
        """'left' if both points sit left of a, 'right' if right, else 'split'."""
        if self in (Region.X_XI_A, Region.XI_X_A):
            return "left"
        if self in (Region.A_X_XI, Region.A_XI_X):
            return "right"
        return "split"

    @property
    def swapped(self) -> "Region":
        """The region with the roles of x and xi exchanged."""
        return _SWAP[self]

    def vertices(self, L: float, a: float) -> list[tuple[float, float]]:
        """Corner points of the region polygon in the (x, xi) plane."""
        return {
            Region.X_XI_A: [(0, 0), (0, a), (a, a)],
            Region.XI_X_A: [(0, 0), (a, 0), (a, a)],
            Region.A_X_XI: [(a, a), (a, L), (L, L)],
            Region.A_XI_X: [(a, a), (L, a), (L, L)],
            Region.X_A_XI: [(0, a), (0, L), (a, a), (a, L)],
            Region.XI_A_X: [(a, 0), (L, 0), (a, a), (L, a)],
        }[self]


_SWAP = {
    Region.X_XI_A: Region.XI_X_A,
    Region.XI_X_A: Region.X_XI_A,
    Region.A_X_XI: Region.A_XI_X,
    Region.A_XI_X: Region.A_X_XI,
    Region.X_A_XI: Region.XI_A_X,
    Region.XI_A_X: Region.X_A_XI,
}


def region_index(x, xi, a):
    """Region of each point of broadcast arrays (x, xi), as an int index into
    ``list(Region)``.  Points on a boundary are assigned to an adjacent region;
    the sums are continuous there, so the choice does not affect values."""
    x, xi = np.broadcast_arrays(np.asarray(x, float), np.asarray(xi, float))
    regions = list(Region)
    out = np.empty(x.shape, dtype=np.int8)
    left = (x <= a) & (xi <= a)
    right = (x >= a) & (xi >= a) & ~left
    split = ~(left | right)
    xle = x <= xi
    out[left & xle] = regions.index(Region.X_XI_A)
    out[left & ~xle] = regions.index(Region.XI_X_A)
    out[right & xle] = regions.index(Region.A_X_XI)
    out[right & ~xle] = regions.index(Region.A_XI_X)
    out[split & xle] = regions.index(Region.X_A_XI)
    out[split & ~xle] = regions.index(Region.XI_A_X)
    return out


@dataclass(frozen=True)
class AffineExponent:
    """The affine map k0 + kx*x + kxi*xi (in meters; divide by c for seconds)."""

    k0: float
    kx: int = 0
    kxi: int = 0

    def value(self, x, xi=0.0):
        return self.k0 + self.kx * x + self.kxi * xi

    def __neg__(self) -> "AffineExponent":
        return AffineExponent(-self.k0, -self.kx, -self.kxi)


def _merge(terms, with_gate):
    """Combine terms with equal exponents (and gates), drop tiny coefficients."""
    if with_gate:
        key = lambda t: (t[1].kx, t[1].kxi, t[2].value, t[1].k0)
    else:
        key = lambda t: (t[1].kx, t[1].kxi, t[1].k0)
    merged = []
    for t in sorted(terms, key=key):
        if merged:
            prev = merged[-1]
            same = (prev[1].kx == t[1].kx and prev[1].kxi == t[1].kxi
                    and abs(prev[1].k0 - t[1].k0) < MERGE_TOL
                    and (not with_gate or prev[2] == t[2]))
            if same:
                merged[-1] = (prev[0] + t[0], *prev[1:])
                continue
        merged.append(t)
    return tuple(t for t in merged if abs(t[0]) > COEF_TOL)


@dataclass(frozen=True)
class ExpSum:
    """sum of coef * gate(x) * exp(s * exponent(x, xi) / c).

    ``region`` tags numerators whose exponents were resolved on that region.
    """

    terms: tuple[tuple[float, AffineExponent, Gate], ...]
    region: Region | None = None

    @classmethod
    def of(cls, terms, region=None) -> "ExpSum":
        """Build from (coef, exponent[, gate]) tuples, merging equal exponents."""
        full = [(t[0], t[1], t[2] if len(t) > 2 else Gate.NONE) for t in terms]
        return cls(_merge(full, with_gate=True), region)

    def __add__(self, other: "ExpSum") -> "ExpSum":
        return ExpSum.of(self.terms + other.terms, self.region or other.region)

    def scaled(self, factor: float) -> "ExpSum":
        return ExpSum.of([(c * factor, e, g) for c, e, g in self.terms], self.region)

    def shifted(self, dk0: float) -> "ExpSum":
        """Add a constant to every exponent (multiply by exp(s*dk0/c))."""
        return ExpSum.of(
            [(c, AffineExponent(e.k0 + dk0, e.kx, e.kxi), g)
             for c, e, g in self.terms], self.region)

    def as_xi(self) -> "ExpSum":
        """Reinterpret a pure function of x as the same function of xi."""
        out = []
        for c, e, g in self.terms:
            if e.kxi != 0 or g is not Gate.NONE:
                raise ValueError("can only move gate-free x-only sums to xi")
            out.append((c, AffineExponent(e.k0, 0, e.kx), g))
        return ExpSum.of(out)

    def times(self, other: "ExpSum") -> "ExpSum":
        """Product of two gate-free sums; spatial coefficients must stay in
        {-1, 0, 1}, which holds for all products arising here."""
        out = []
        for c1, e1, g1 in self.terms:
            for c2, e2, g2 in other.terms:
                if g1 is not Gate.NONE or g2 is not Gate.NONE:
                    raise ValueError("products of gated sums are not supported")
                kx, kxi = e1.kx + e2.kx, e1.kxi + e2.kxi
                if abs(kx) > 1 or abs(kxi) > 1:
                    raise ValueError("product leaves the affine family")
                out.append((c1 * c2, AffineExponent(e1.k0 + e2.k0, kx, kxi), Gate.NONE))
        return ExpSum.of(out)

    def eval(self, s, x, xi=0.0, *, c: float, a: float | None = None):
        """Numerical value at Laplace parameter s (scalar or array, complex ok):
        sum of coef * gate * exp(s * (k0 + kx*x + kxi*xi) / c), gates with
        H(0) = 1."""
        s = np.asarray(s, dtype=complex) / c
        out = np.zeros(np.broadcast(s, np.asarray(x)).shape, dtype=complex)
        for coef, e, gate in self.terms:
            term = coef * np.exp(s * e.value(x, xi))
            if gate is Gate.X_RIGHT_OF_A:
                term = term * np.where(np.asarray(x) >= a, 1.0, 0.0)
            elif gate is Gate.X_LEFT_OF_A:
                term = term * np.where(np.asarray(x) <= a, 1.0, 0.0)
            out = out + term
        return out

    def eval_dx(self, s, x, xi=0.0, *, c: float, a: float | None = None):
        """d/dx of :meth:`eval`, valid away from gate jumps (x != a)."""
        s = np.asarray(s, dtype=complex) / c
        out = np.zeros(np.broadcast(s, np.asarray(x)).shape, dtype=complex)
        for coef, e, gate in self.terms:
            term = coef * e.kx * s * np.exp(s * e.value(x, xi))
            if gate is Gate.X_RIGHT_OF_A:
                term = term * np.where(np.asarray(x) >= a, 1.0, 0.0)
            elif gate is Gate.X_LEFT_OF_A:
                term = term * np.where(np.asarray(x) <= a, 1.0, 0.0)
            out = out + term
        return out


@dataclass(frozen=True)
class StepSum:
    """sum of coef * H(t - arg(x, xi)/c) with affine step arguments in meters."""

    terms: tuple[tuple[float, AffineExponent], ...]
    region: Region | None = None

    @classmethod
    def of(cls, terms, region=None) -> "StepSum":
        merged = _merge([(c, e, Gate.NONE) for c, e in terms], with_gate=False)
        return cls(tuple((c, e) for c, e, _ in merged), region)

    def eval(self, x, xi, t, c):
        """Vectorized evaluation with H(0) = 1."""
        x, xi, t = np.broadcast_arrays(
            np.asarray(x, float), np.asarray(xi, float), np.asarray(t, float))
        out = np.zeros(x.shape)
        ct = c * t
        for coef, e in self.terms:
            out = out + coef * (ct >= e.value(x, xi))
        return out


def build_phi(config: BarConfig, side: Side, with_damper: bool = False) -> ExpSum:
    """Homogeneous solution satisfying one boundary condition, normalized to 1
    at that boundary, as a function of x.

    ``side=LEFT`` gives (1/2)[(1+h1) e^{sx/c} + (1-h1) e^{-sx/c}];
    ``side=RIGHT`` the mirror image anchored at x = L.  With ``with_damper``
    the jump correction of the internal damper is added, gated to the far
    side of a.
    """
    config = validate(config)
    L, a = config.L, config.a
    if side is Side.LEFT:
        h = config.h1
        base = ExpSum.of([
            (0.5 * (1 + h), AffineExponent(0.0, 1, 0)),
            (0.5 * (1 - h), AffineExponent(0.0, -1, 0)),
        ])
    else:
        h = config.h2
        base = ExpSum.of([
            (0.5 * (1 + h), AffineExponent(L, -1, 0)),
            (0.5 * (1 - h), AffineExponent(-L, 1, 0)),
        ])
    if not with_damper:
        return base
    if not config.has_internal_damper:
        raise RegionMismatch("damper correction requested but h3 = 0")

    h3 = config.h3
    if side is Side.LEFT:
        # + 2 h3 phi(a) sinh(s(x-a)/c) for x > a
        val_a = boundary_solution_at_a(config, Side.LEFT)
        corr = [
            (2 * h3 * ca * 0.5, AffineExponent(k0 - a, 1, 0), Gate.X_RIGHT_OF_A)
            for ca, k0 in val_a
        ] + [
            (-2 * h3 * ca * 0.5, AffineExponent(k0 + a, -1, 0), Gate.X_RIGHT_OF_A)
            for ca, k0 in val_a
        ]
    else:
        # + 2 h3 psi(a) sinh(s(a-x)/c) for x < a
        val_a = boundary_solution_at_a(config, Side.RIGHT)
        corr = [
            (2 * h3 * ca * 0.5, AffineExponent(k0 + a, -1, 0), Gate.X_LEFT_OF_A)
            for ca, k0 in val_a
        ] + [
            (-2 * h3 * ca * 0.5, AffineExponent(k0 - a, 1, 0), Gate.X_LEFT_OF_A)
            for ca, k0 in val_a
        ]
    return ExpSum.of(list(base.terms) + corr)


def boundary_solution_at_a(config: BarConfig, side: Side) -> list[tuple[float, float]]:
    """(coefficient, constant-exponent) pairs of phi(a, s) or psi(a, s)."""
    a, L = config.a, config.L
    if side is Side.LEFT:
        h = config.h1
        return [(0.5 * (1 + h), a), (0.5 * (1 - h), -a)]
    h = config.h2
    return [(0.5 * (1 + h), L - a), (0.5 * (1 - h), -(L - a))]


def _const_expsum(pairs) -> ExpSum:
    return ExpSum.of([(c, AffineExponent(k0, 0, 0)) for c, k0 in pairs])


def build_numerator(config: BarConfig, region: Region) -> ExpSum:
    """Green's-function numerator on one region, normalized and c-scaled.

    The raw numerator (boundary-solution product plus the internal-damper
    correction active in the region's zone) is divided by the leading
    denominator factor (1/2)(1+h1)(1+h2)(1+h3) e^{sL/c} and multiplied by the
    overall c; the remaining 1/s prefactor is implicit and handled by the
    termwise inversion.  Every resulting exponent is nonpositive on the
    region, with delay at least |x - xi| (causality).
    """
    config = validate(config)
    L, c = config.L, config.c
    h1, h2, h3 = config.h1, config.h2, config.h3
    # without a damper the zone split is immaterial; any interior a works
    a = config.a if config.a is not None else 0.5 * L

    phi = build_phi(config, Side.LEFT)
    psi = build_phi(config, Side.RIGHT)
    if region.xi_ge_x:
        num = phi.times(psi.as_xi())          # phi(x) psi(xi)
    else:
        num = phi.as_xi().times(psi)          # phi(xi) psi(x)

    if config.has_internal_damper and region.zone == "right":
        # + 2 h3 phi(a) sinh(s(min-a)/c) psi(max)
        phi_a = _const_expsum(boundary_solution_at_a(config, Side.LEFT))
        if region.xi_ge_x:
            sinh_min = ExpSum.of([(0.5, AffineExponent(-a, 1, 0)),
                                  (-0.5, AffineExponent(a, -1, 0))])
            corr = phi_a.times(sinh_min).times(psi.as_xi())
        else:
            sinh_min = ExpSum.of([(0.5, AffineExponent(-a, 0, 1)),
                                  (-0.5, AffineExponent(a, 0, -1))])
            corr = phi_a.times(sinh_min).times(psi)
        num = num + corr.scaled(2 * h3)
    elif config.has_internal_damper and region.zone == "left":
        # + 2 h3 psi(a) sinh(s(a-max)/c) phi(min)
        psi_a = _const_expsum(boundary_solution_at_a(config, Side.RIGHT))
        if region.xi_ge_x:
            sinh_max = ExpSum.of([(0.5, AffineExponent(a, 0, -1)),
                                  (-0.5, AffineExponent(-a, 0, 1))])
            corr = psi_a.times(sinh_max).times(phi)
        else:
            sinh_max = ExpSum.of([(0.5, AffineExponent(a, -1, 0)),
                                  (-0.5, AffineExponent(-a, 1, 0))])
            corr = psi_a.times(sinh_max).times(phi.as_xi())
        num = num + corr.scaled(2 * h3)

    lead = 0.5 * (1 + h1) * (1 + h2) * (1 + h3)
    num = num.scaled(c / lead).shifted(-L)
    num = ExpSum(num.terms, region)
    _check_causal(num, config, a)
    return num


def _check_causal(num: ExpSum, config: BarConfig, a: float) -> None:
    """Every delay -exponent must dominate |x - xi| on the whole region.
    Affine functions take their extremes at polygon vertices."""
    verts = num.region.vertices(config.L, a)
    for coef, e, _ in num.terms:
        for (vx, vxi) in verts:
            delay = -e.value(vx, vxi)
            if delay < abs(vx - vxi) - CAUSALITY_TOL:
                raise PositiveExponent(
                    f"term {coef} * exp(s*({e.k0:+g}{e.kx:+d}x{e.kxi:+d}xi)/c) "
                    f"acausal at vertex {(vx, vxi)} of {num.region}")


def invert_termwise(num: ExpSum, config: BarConfig) -> StepSum:
    """Termwise inverse transform of a region-resolved numerator:
    coef * e^{-beta s} / s  ->  coef * H(t - beta).

    Raises
    ------
    PositiveExponent
        If an exponent is positive somewhere in the region (the step would
        be anticausal).
    """
    if num.region is None:
        raise RegionMismatch("numerator carries no region tag")
    a = config.a if config.a is not None else 0.5 * config.L
    verts = num.region.vertices(config.L, a)
    for coef, e, gate in num.terms:
        if gate is not Gate.NONE:
            raise RegionMismatch("gates must be resolved before inversion")
        if max(e.value(vx, vxi) for vx, vxi in verts) > CAUSALITY_TOL:
            raise PositiveExponent(
                f"exponent {e} positive on region {num.region}")
    return StepSum.of([(coef, -e) for coef, e, _ in num.terms], num.region)


def eval_step_sum(steps: StepSum, x, xi, t, c: float):
    """Convenience wrapper: sum of coef * H(t - arg/c) with H(0) = 1."""
    return steps.eval(x, xi, t, c)
