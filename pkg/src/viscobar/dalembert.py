"""Finite traveling-wave ("d'Alembert") sums for the time-domain Green's function.

The Laplace-domain Green's function has the form N(x, xi, s) / (s * D(s)) with
D(s) = 1 + sum_k b_k exp(-alpha_k s).  Expanding 1/D into its multinomial
geometric series and inverting termwise gives

    Gamma(x, xi, t) = sum_terms  weight * Theta(x, xi, t - delay),

where Theta is the step-sum inverse of the numerator and the Heaviside factors
inside Theta cut the series to finitely many terms: only orders
n <= floor(t / alpha_min) contribute at time t.

Three equivalent step tables are available:

* ``"general"``     -- built mechanically from the exponent algebra; works for
                       any valid configuration (up to three denominator exponents).
* ``"no-internal"`` -- the dedicated two-exponent table for h3 = 0.
* ``"transparent-right"`` -- the dedicated table for h2 = 1 with an internal
                       damper, where standing waves survive only left of a.

The dedicated tables are transcriptions of the closed-form step formulas and
double as an independent check of the mechanical construction.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import algebra
from .algebra import AffineExponent, Region, StepSum, region_index
from .config import BarConfig, DenominatorData, denominator_data, reflection_coefficient, validate
from .errors import RegionMismatch, WavefrontSample

#: relative slack when deciding whether a series delay is still <= t (H(0)=1)
DELAY_INCLUSION_TOL = 1e-12
#: fraction of L used to classify a sample as sitting on a region boundary
BOUNDARY_TOL_FRAC = 1e-9
#: exact multinomial weights up to this order; log-space above
EXACT_WEIGHT_MAX_ORDER = 20


@dataclass(frozen=True)
class SeriesTerm:
    """One multinomial term of the expanded denominator series."""

    order: int
    counts: tuple[int, ...]
    weight: float
    delay: float  # [s]


def _compositions(n: int, m: int):
    """All m-tuples of nonnegative integers summing to n, lexicographically."""
    if m == 1:
        yield (n,)
        return
    for first in range(n, -1, -1):
        for rest in _compositions(n - first, m - 1):
            yield (first, *rest)


def _term_weight(counts: tuple[int, ...], b: tuple[float, ...]) -> float:
    n = sum(counts)
    if n <= EXACT_WEIGHT_MAX_ORDER:
        mult = math.factorial(n)
        for nk in counts:
            mult //= math.factorial(nk)
        w = float(mult)
        for nk, bk in zip(counts, b):
            w *= bk ** nk
        return (-1.0) ** n * w
    # large orders: combine multinomial and powers in log space
    log_w = math.lgamma(n + 1)
    sign = (-1.0) ** n
    for nk, bk in zip(counts, b):
        log_w -= math.lgamma(nk + 1)
        if nk:
            if bk == 0.0:
                return 0.0
            log_w += nk * math.log(abs(bk))
            if bk < 0 and nk % 2:
                sign = -sign
    return sign * math.exp(log_w)


def enumerate_terms(den: DenominatorData, t: float,
                    max_order: int | None = None) -> list[SeriesTerm]:
    """All series terms contributing at time t, in lexicographic (order,
    counts) order.  The list is complete: every term with delay <= t appears,
    and no order beyond floor(t / alpha_min) is generated."""
    if t < 0:
        return []
    terms = [SeriesTerm(0, (0,) * den.m, 1.0, 0.0)]
    if den.m == 0:
        return terms
    horizon = int(math.floor(t / den.alpha_min + DELAY_INCLUSION_TOL))
    if max_order is not None:
        horizon = min(horizon, max_order)
    cutoff = t * (1.0 + DELAY_INCLUSION_TOL) + 1e-300
    for n in range(1, horizon + 1):
        for counts in _compositions(n, den.m):
            delay = sum(nk * ak for nk, ak in zip(counts, den.alpha))
            if delay <= cutoff:
                terms.append(SeriesTerm(n, counts, _term_weight(counts, den.b), delay))
    return terms


# ---------------------------------------------------------------------------
# step tables
# ---------------------------------------------------------------------------

def _steps_no_internal(config: BarConfig) -> dict[Region, StepSum]:
    """Two-exponent-denominator table: four traveling-wave steps of heights
    (c/2) {1, R1, R2, R1 R2} at delays |x-xi|, x+xi, 2L-(x+xi), 2L-|x-xi|."""
    c2 = 0.5 * config.c
    r1 = reflection_coefficient(config.h1)
    r2 = reflection_coefficient(config.h2)
    L2 = 2.0 * config.L

    def table(xle: bool) -> list[tuple[float, AffineExponent]]:
        sx, sxi = (-1, 1) if xle else (1, -1)
        return [
            (c2, AffineExponent(0.0, sx, sxi)),
            (c2 * r1, AffineExponent(0.0, 1, 1)),
            (c2 * r2, AffineExponent(L2, -1, -1)),
            (c2 * r1 * r2, AffineExponent(L2, -sx, -sxi)),
        ]

    return {r: StepSum.of(table(r.xi_ge_x), r) for r in Region}


def _steps_transparent_right(config: BarConfig) -> dict[Region, StepSum]:
    """Dedicated table for a transparent right boundary (h2 = 1) with an
    internal damper: the raw reflections off the left end combine with the
    damper's jump correction, gated to the side of a holding both points."""
    c, a, h3 = config.c, config.a, config.h3
    kap = 0.5 * c / (1.0 + h3)
    r1 = reflection_coefficient(config.h1)

    def table(region: Region) -> list[tuple[float, AffineExponent]]:
        sx, sxi = (-1, 1) if region.xi_ge_x else (1, -1)
        q = AffineExponent(0.0, sx, sxi)          # |x - xi|
        p = AffineExponent(0.0, 1, 1)             # x + xi
        base = [(kap, q), (kap * r1, p)]
        if region.zone == "right":
            extra = [
                (kap * h3, q),
                (-kap * h3, AffineExponent(-2 * a, 1, 1)),       # (x+xi) - 2a
                (kap * h3 * r1, AffineExponent(2 * a, sx, sxi)),  # 2a + |x-xi|
                (-kap * h3 * r1, p),
            ]
        elif region.zone == "left":
            extra = [
                (kap * h3, q),
                (-kap * h3, AffineExponent(2 * a, -1, -1)),       # 2a - (x+xi)
                (kap * h3 * r1, p),
                (-kap * h3 * r1, AffineExponent(2 * a, -sx, -sxi)),  # 2a - |x-xi|
            ]
        else:
            extra = []
        return base + extra

    return {r: StepSum.of(table(r), r) for r in Region}


def _steps_general(config: BarConfig) -> dict[Region, StepSum]:
    """Mechanically built table: numerator products resolved per region and
    inverted termwise."""
    out = {}
    for r in Region:
        num = algebra.build_numerator(config, r)
        out[r] = algebra.invert_termwise(num, config)
    return out


_PATHS = ("auto", "general", "no-internal", "transparent-right")
#: |h2 - 1| below this selects the transparent-right table under "auto"
TRANSPARENT_TOL = 1e-12


class GammaEvaluator:
    """Time-domain Green's function Gamma(x, xi, t) as a finite step sum.

    The evaluator is immutable after construction; point evaluations are pure
    and broadcast over numpy arrays.  ``t_max`` presizes the series-term
    cache; later times extend it transparently.  ``max_order`` truncates the
    denominator series (None = exact).
    """

    def __init__(self, config: BarConfig, path: str = "auto",
                 t_max: float = 0.0, max_order: int | None = None):
        self.config = validate(config)
        if path not in _PATHS:
            raise ValueError(f"unknown path {path!r}; choose from {_PATHS}")
        if path == "auto":
            if not config.has_internal_damper:
                path = "no-internal"
            elif abs(config.h2 - 1.0) <= TRANSPARENT_TOL:
                path = "transparent-right"
            else:
                path = "general"
        if path == "no-internal" and config.has_internal_damper:
            raise RegionMismatch("the no-internal table requires h3 = 0")
        if path == "transparent-right":
            if abs(config.h2 - 1.0) > TRANSPARENT_TOL:
                raise RegionMismatch("the transparent-right table requires h2 = 1")
            if not config.has_internal_damper:
                raise RegionMismatch("the transparent-right table requires h3 != 0")
        self.path = path
        self.den = denominator_data(config)
        self.max_order = max_order
        builder = {
            "no-internal": _steps_no_internal,
            "transparent-right": _steps_transparent_right,
            "general": _steps_general,
        }[path]
        self.steps: dict[Region, StepSum] = builder(config)
        # damper position used for region bookkeeping (placeholder when h3=0)
        self._a = config.a if config.a is not None else 0.5 * config.L
        self._terms: list[SeriesTerm] = []
        self._terms_t = -1.0
        if t_max > 0:
            self.series_terms(t_max)

    # -- series ------------------------------------------------------------

    def series_terms(self, t: float) -> list[SeriesTerm]:
        """Complete series for time t (cached for the largest t seen)."""
        if t > self._terms_t:
            self._terms = enumerate_terms(self.den, t, self.max_order)
            self._terms_t = t
        cutoff = t * (1.0 + DELAY_INCLUSION_TOL) + 1e-300
        return [st for st in self._terms if st.delay <= cutoff]

    def term_count(self, t: float) -> int:
        """Number of series terms contributing at time t."""
        return len(self.series_terms(t))

    def max_order_used(self, t: float) -> int:
        """Largest series order contributing at time t."""
        return max(st.order for st in self.series_terms(t))

    # -- evaluation ----------------------------------------------------------

    def theta(self, x, xi, tau):
        """Step-sum numerator inverse Theta(x, xi, tau), vectorized."""
        x, xi, tau = np.broadcast_arrays(
            np.asarray(x, float), np.asarray(xi, float), np.asarray(tau, float))
        out = np.zeros(x.shape)
        idx = region_index(x, xi, self._a)
        for i, region in enumerate(Region):
            mask = idx == i
            if not mask.any():
                continue
            out[mask] = self.steps[region].eval(x[mask], xi[mask], tau[mask],
                                                self.config.c)
        return out

    def gamma(self, x, xi, t):
        """Gamma(x, xi, t) = sum of weight * Theta(x, xi, t - delay); exact
        for the given times (all contributing series terms included)."""
        x, xi, t = np.broadcast_arrays(
            np.asarray(x, float), np.asarray(xi, float), np.asarray(t, float))
        scalar = x.ndim == 0
        x, xi, t = np.atleast_1d(x), np.atleast_1d(xi), np.atleast_1d(t)
        terms = self.series_terms(float(t.max()) if t.size else 0.0)
        out = np.zeros(x.shape)
        idx = region_index(x, xi, self._a)
        c = self.config.c
        for i, region in enumerate(Region):
            mask = idx == i
            if not mask.any():
                continue
            xm, xim, tm = x[mask], xi[mask], t[mask]
            steps = self.steps[region].terms
            beta = np.stack([e.value(xm, xim) for _, e in steps], axis=-1)
            coefs = np.array([cf for cf, _ in steps])
            acc = np.zeros(xm.shape)
            for st in terms:
                ct = c * (tm - st.delay)
                acc += st.weight * ((ct[..., None] >= beta) @ coefs)
            out[mask] = acc
        return float(out[0]) if scalar and out.size == 1 else out

    # -- structure used by the response assembly ----------------------------

    def region_intervals(self, x: float):
        """Partition of the xi axis [0, L] for a fixed observation point x:
        (region, lo, hi) triples whose union covers [0, L]."""
        a, L = self._a, self.config.L
        if x < a:
            return [(Region.XI_X_A, 0.0, x), (Region.X_XI_A, x, a),
                    (Region.X_A_XI, a, L)]
        if x > a:
            return [(Region.XI_A_X, 0.0, a), (Region.A_XI_X, a, x),
                    (Region.A_X_XI, x, L)]
        return [(Region.XI_X_A, 0.0, a), (Region.A_X_XI, a, L)]

    def arrival_times(self, x: float, xi: float, t_max: float) -> np.ndarray:
        """Sorted times in [0, t_max] at which Gamma(x, xi, .) jumps."""
        region = list(Region)[int(region_index(x, xi, self._a))]
        c = self.config.c
        times = []
        for st in self.series_terms(t_max):
            for _, e in self.steps[region].terms:
                tj = st.delay + e.value(x, xi) / c
                if 0.0 <= tj <= t_max:
                    times.append(tj)
        return np.unique(np.asarray(times))

    def gamma_t_classical(self, x: float, t: float, boundary: str = "raise"):
        """Classical part of the time derivative of Gamma(x, ., t), as point
        samples: pairs (xi_star, weight) such that the distributional
        derivative acts on a test function g as sum(weight * g(xi_star)).

        Steps whose argument does not involve xi would invert to pure
        delta(t - const) contributions and are dropped.  A sample falling
        exactly on a region boundary raises :class:`WavefrontSample` unless
        ``boundary="advance"``, which resolves it by keeping the samples of
        fronts that are entering (or staying inside) their region -- the
        convention consistent with H(0) = 1.
        """
        if boundary not in ("raise", "advance"):
            raise ValueError("boundary must be 'raise' or 'advance'")
        c = self.config.c
        tol = BOUNDARY_TOL_FRAC * self.config.L
        raw: list[tuple[float, float]] = []
        for region, lo, hi in self.region_intervals(x):
            for coef, e in self.steps[region].terms:
                if e.kxi == 0:
                    continue
                for st in self.series_terms(t):
                    xi_star = (c * (t - st.delay) - e.k0 - e.kx * x) / e.kxi
                    on_lo = abs(xi_star - lo) <= tol
                    on_hi = abs(xi_star - hi) <= tol
                    if on_lo or on_hi:
                        if boundary == "raise":
                            raise WavefrontSample(
                                f"sample xi*={xi_star} sits on a region "
                                f"boundary of {region} at t={t}")
                        entering = (on_lo and e.kxi > 0) or (on_hi and e.kxi < 0)
                        if not entering:
                            continue
                    elif not (lo < xi_star < hi):
                        continue
                    raw.append((xi_star, st.weight * coef * c))
        # merge coincident samples (distinct fronts crossing one point add up)
        raw.sort()
        merged: list[tuple[float, float]] = []
        for xi_star, w in raw:
            if merged and abs(merged[-1][0] - xi_star) <= tol:
                merged[-1] = (merged[-1][0], merged[-1][1] + w)
            else:
                merged.append((xi_star, w))
        return merged
