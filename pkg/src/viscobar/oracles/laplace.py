"""Numerical Bromwich inversion of the Laplace-domain Green's function.

The transformed Green's function is evaluated directly from the two
boundary-anchored solutions (hyperbolic closed forms, no series expansion)
and inverted along a vertical contour with the de Hoog-Knight-Stokes
quotient-difference algorithm.  This path shares no code with the
traveling-wave engine and serves as its oracle.
"""
from __future__ import annotations

import math

import numpy as np

from ..config import BarConfig, denominator_data, validate
from ..errors import NoConvergence

#: default truncation error target of the continued-fraction acceleration
DEFAULT_TOL = 1e-10
#: default number of contour modes (2M+1 transform evaluations); the window
#: T = t with this degree resolves steps ~0.01 s away from t to ~1e-9
DEFAULT_DEGREE = 256
#: default window factor: the Fourier series lives on [0, 2*window*t)
DEFAULT_WINDOW = 1.0
#: exponent magnitude above which the hyperbolic forms would overflow
MAX_EXPONENT = 650.0


def _phi(cfg: BarConfig, x, s):
    arg = s * x / cfg.c
    return np.cosh(arg) + cfg.h1 * np.sinh(arg)


def _psi(cfg: BarConfig, x, s):
    arg = s * (cfg.L - x) / cfg.c
    return np.cosh(arg) + cfg.h2 * np.sinh(arg)


def _phi_damped(cfg: BarConfig, x, s):
    """Left-anchored solution including the internal-damper jump at a."""
    out = _phi(cfg, x, s)
    if cfg.has_internal_damper and x >= cfg.a:
        out = out + 2 * cfg.h3 * _phi(cfg, cfg.a, s) * np.sinh(s * (x - cfg.a) / cfg.c)
    return out


def _psi_damped(cfg: BarConfig, x, s):
    out = _psi(cfg, x, s)
    if cfg.has_internal_damper and x <= cfg.a:
        out = out + 2 * cfg.h3 * _psi(cfg, cfg.a, s) * np.sinh(s * (cfg.a - x) / cfg.c)
    return out


def _char_denominator(cfg: BarConfig, s):
    """Wronskian-derived characteristic function in hyperbolic form."""
    h1, h2, h3 = cfg.h1, cfg.h2, cfg.h3
    u = s * cfg.L / cfg.c
    if not cfg.has_internal_damper:
        return (1 + h1 * h2) * np.sinh(u) + (h1 + h2) * np.cosh(u)
    v = s * (cfg.L - 2 * cfg.a) / cfg.c
    return ((1 + h1 * h2 + h3 * (h1 + h2)) * np.sinh(u)
            + (h1 + h2 + h3 * (1 + h1 * h2)) * np.cosh(u)
            + h3 * (h2 - h1) * np.sinh(v)
            + h3 * (1 - h1 * h2) * np.cosh(v))


def greens_laplace(config: BarConfig, x: float, xi: float, s):
    """G(x, xi, s) by the direct piecewise formula.

    For xi right of the damper, G = c/(s Delta_a) * phi_a(min) psi(max);
    for xi left of it, G = c/(s Delta_a) * phi(min) psi_a(max), where the
    subscripted solutions carry the damper jump.
    """
    cfg = validate(config)
    s = np.asarray(s, dtype=complex)
    lo, hi = (x, xi) if x <= xi else (xi, x)
    if cfg.has_internal_damper and xi < cfg.a:
        num = _phi(cfg, lo, s) * _psi_damped(cfg, hi, s)
    elif cfg.has_internal_damper:
        num = _phi_damped(cfg, lo, s) * _psi(cfg, hi, s)
    else:
        num = _phi(cfg, lo, s) * _psi(cfg, hi, s)
    return cfg.c * num / (s * _char_denominator(cfg, s))


def contour_abscissa(config: BarConfig) -> float:
    """Upper bound on the real parts of the Green's-function singularities.

    Zeros of 1 + sum b_k e^{-alpha_k s} must satisfy
    sum |b_k| e^{-alpha_k Re(s)} >= 1; bisection on that envelope gives a
    rigorous bound.  The 1/s pole pins the bound at >= 0.
    """
    den = denominator_data(config)
    if den.m == 0:
        return 0.0

    def envelope(sigma):
        return sum(abs(b) * math.exp(-al * sigma)
                   for b, al in zip(den.b, den.alpha))

    if envelope(0.0) < 1.0:
        return 0.0
    lo, hi = 0.0, 1.0
    while envelope(hi) >= 1.0:
        hi *= 2.0
        if hi > 1e6:
            raise NoConvergence("could not bound denominator zeros")
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if envelope(mid) >= 1.0:
            lo = mid
        else:
            hi = mid
    return hi


def _dehoog(F, t: float, T: float, alpha: float, tol: float, M: int) -> float:
    """One-point inverse transform by the accelerated Fourier series of
    de Hoog, Knight & Stokes (quotient-difference continued fraction)."""
    gamma = alpha - math.log(tol) / (2.0 * T)
    s = gamma + 1j * math.pi * np.arange(2 * M + 1) / T
    fp = np.asarray(F(s), dtype=complex)
    fp[0] *= 0.5

    # quotient-difference table for the continued-fraction coefficients
    e = np.zeros((2 * M + 1, M + 1), dtype=complex)
    q = np.zeros((2 * M + 1, M + 1), dtype=complex)
    q[: 2 * M, 1] = fp[1 : 2 * M + 1] / fp[: 2 * M]
    for r in range(1, M + 1):
        mr = 2 * (M - r) + 1
        e[:mr, r] = q[1 : mr + 1, r] - q[:mr, r] + e[1 : mr + 1, r - 1]
        if r < M:
            with np.errstate(invalid="ignore", divide="ignore"):
                q[: mr - 1, r + 1] = (q[1:mr, r] * e[1:mr, r] / e[: mr - 1, r])
    d = np.zeros(2 * M + 1, dtype=complex)
    d[0] = fp[0]
    d[1::2] = -q[0, 1 : M + 1]
    d[2::2] = -e[0, 1 : M + 1]

    # evaluate the continued fraction by recurrence with the improved remainder
    z = np.exp(1j * math.pi * t / T)
    A_prev, A_cur = 0.0 + 0j, d[0]
    B_prev, B_cur = 1.0 + 0j, 1.0 + 0j
    for i in range(1, 2 * M):
        A_prev, A_cur = A_cur, A_cur + d[i] * z * A_prev
        B_prev, B_cur = B_cur, B_cur + d[i] * z * B_prev
    brem = 0.5 * (1.0 + (d[2 * M - 1] - d[2 * M]) * z)
    rem = -brem * (1.0 - np.sqrt(1.0 + d[2 * M] * z / brem ** 2))
    A_last = A_cur + rem * A_prev
    B_last = B_cur + rem * B_prev
    return float(math.exp(gamma * t) / T * (A_last / B_last).real)


def invert(F, t: float, alpha: float = 0.0, tol: float = DEFAULT_TOL,
           degree: int = DEFAULT_DEGREE, check: float | None = 1e-6,
           scale: float = 1.0, window: float = DEFAULT_WINDOW) -> float:
    """Invert the transform F at time t > 0.

    ``alpha`` must bound the real parts of all singularities; ``scale`` is
    the largest factor multiplying s inside F (L/c here), used to guard
    against overflow of the hyperbolic forms.  When ``check`` is set, a
    second inversion at a higher degree estimates the error and a
    disagreement beyond ``check`` raises :class:`NoConvergence`.
    """
    if t <= 0.0:
        raise ValueError("inversion requires t > 0")
    T = window * t
    gamma = alpha - math.log(tol) / (2.0 * T)
    if gamma * scale > MAX_EXPONENT:
        raise NoConvergence("contour abscissa too large for double precision")
    f1 = _dehoog(F, t, T, alpha, tol, degree)
    if check is None:
        return f1
    # escalate the degree until two estimates agree (points squeezed between
    # nearby staircase jumps need more modes)
    for _ in range(3):
        f2 = _dehoog(F, t, T, alpha, tol, degree + degree // 2)
        if math.isfinite(f1) and math.isfinite(f2) and abs(f1 - f2) <= check:
            return f2
        degree *= 2
        f1 = _dehoog(F, t, T, alpha, tol, degree)
    raise NoConvergence(
        f"inversion estimates disagree by {abs(f1 - f2):.3e} at t={t}")


def laplace_invert_G(config: BarConfig, x: float, xi: float, t: float,
                     degree: int = DEFAULT_DEGREE,
                     check: float | None = 1e-6) -> float:
    """Time-domain Green's function by numerical Bromwich inversion.

    Accuracy is limited near step discontinuities (the Fourier series rings
    there); keep the evaluation time away from wavefront arrivals.
    """
    cfg = validate(config)
    alpha = contour_abscissa(cfg)
    return invert(lambda s: greens_laplace(cfg, x, xi, s), t,
                  alpha=alpha, degree=degree, check=check, scale=cfg.L / cfg.c)


def _gauss_exp_moment(lam, p: float, q: float, mu: float, w: float):
    """int_p^q exp(lam*xi) exp(-((xi-mu)/w)^2) dxi for complex lam (vectorized).

    Evaluated through the scaled Faddeeva function so that the e^{lam^2 w^2/4}
    growth of erf at complex arguments cancels analytically; stable for
    arbitrarily large |Im lam|.
    """
    from scipy.special import wofz

    lam = np.asarray(lam, dtype=complex)
    P = lam * mu + lam * lam * w * w / 4.0

    def erf_weighted(z):
        # e^P * erf(z - lam w/2), with erf folded to Re >= 0 via oddness
        zeta = z - lam * w / 2.0
        sgn = np.where(zeta.real >= 0.0, 1.0, -1.0)
        expo = lam * mu + lam * w * z - z * z
        return sgn * (np.exp(P) - np.exp(expo) * wofz(1j * sgn * zeta))

    zp, zq = (p - mu) / w, (q - mu) / w
    return 0.5 * math.sqrt(math.pi) * w * (erf_weighted(zq) - erf_weighted(zp))


def _pulse_greens_integral(cfg: BarConfig, pulse, x: float, s):
    """int_0^L G(x, xi, s) u0(xi) dxi exactly for a Gaussian pulse u0.

    On each segment cut by xi = x and xi = a the xi-factor of G is a fixed
    combination of e^{+/- s xi / c}, so the integral reduces to closed-form
    Gaussian-exponential moments.
    """
    s = np.asarray(s, dtype=complex)
    c, L = cfg.c, cfg.L
    lam_p, lam_m = s / c, -s / c
    h1, h2, h3 = cfg.h1, cfg.h2, cfg.h3
    a = cfg.a if cfg.has_internal_damper else None
    mu, w = pulse.center, pulse.width

    def moments(terms, p, q):
        """terms: (coef(s) array or scalar, lam array) pairs."""
        acc = np.zeros_like(s)
        for coef, lam in terms:
            acc = acc + coef * _gauss_exp_moment(lam, p, q, mu, w)
        return acc

    # xi-factor expansions in e^{+/- s xi/c}
    phi_terms = [(0.5 * (1 + h1), lam_p), (0.5 * (1 - h1), lam_m)]
    psi_terms = [(0.5 * (1 + h2) * np.exp(s * L / c), lam_m),
                 (0.5 * (1 - h2) * np.exp(-s * L / c), lam_p)]
    if a is not None:
        phi_at_a = _phi(cfg, a, s)
        psi_at_a = _psi(cfg, a, s)
        # phi_a(xi) = phi(xi) + 2 h3 phi(a) sinh(s(xi-a)/c) for xi > a
        phi_a_terms = phi_terms + [
            (h3 * phi_at_a * np.exp(-s * a / c), lam_p),
            (-h3 * phi_at_a * np.exp(s * a / c), lam_m)]
        # psi_a(xi) = psi(xi) + 2 h3 psi(a) sinh(s(a-xi)/c) for xi < a
        psi_a_terms = psi_terms + [
            (h3 * psi_at_a * np.exp(s * a / c), lam_m),
            (-h3 * psi_at_a * np.exp(-s * a / c), lam_p)]
    else:
        phi_a_terms, psi_a_terms = phi_terms, psi_terms

    acc = np.zeros_like(s)
    if a is None or x <= a:
        # [0, x): psi_a(x) phi(xi); (x, a): phi(x) psi_a(xi); (a, L]: phi_a(x) psi(xi)
        hi = a if a is not None else L
        acc += _psi_damped(cfg, x, s) * moments(phi_terms, 0.0, x)
        acc += _phi(cfg, x, s) * moments(psi_a_terms, x, hi)
        if a is not None:
            acc += _phi_damped(cfg, x, s) * moments(psi_terms, a, L)
    else:
        # [0, a): psi_a(x) phi(xi); (a, x): psi(x) phi_a(xi); (x, L]: phi_a(x) psi(xi)
        acc += _psi_damped(cfg, x, s) * moments(phi_terms, 0.0, a)
        acc += _psi(cfg, x, s) * moments(phi_a_terms, a, x)
        acc += _phi_damped(cfg, x, s) * moments(psi_terms, x, L)
    return pulse.amplitude * cfg.c * acc / (s * _char_denominator(cfg, s))


def laplace_invert_U(config: BarConfig, pulse, x: float, t: float,
                     forcing=None, degree: int = DEFAULT_DEGREE,
                     check: float | None = 1e-6) -> float:
    """Response u(x, t) by inverting the transformed solution

        U(x,s) = (1/c)[h1 G(x,0,s) u0(0) + h2 G(x,L,s) u0(L)
                       + 2 h3 G(x,a,s) u0(a)]
                 + (s/c^2) int G(x,xi,s) u0(xi) dxi
                 + (F0/(rho_A c^2)) G(x,x_F,s) s/(s^2+omega^2).

    ``pulse`` is a :class:`viscobar.response.GaussianPulse` or None (the xi
    integral is done in closed form, exact for all contour modes);
    ``forcing`` an optional point-harmonic force.  Fully independent of the
    traveling-wave assembly.
    """
    cfg = validate(config)
    if pulse is None and forcing is None:
        return 0.0
    alpha = contour_abscissa(cfg)

    def U(s):
        s = np.asarray(s, dtype=complex)
        out = np.zeros_like(s)
        c = cfg.c
        if pulse is not None:
            if cfg.h1 != 0.0:
                out += (cfg.h1 / c) * float(pulse(0.0)) * greens_laplace(cfg, x, 0.0, s)
            if cfg.h2 != 0.0:
                out += (cfg.h2 / c) * float(pulse(cfg.L)) * greens_laplace(cfg, x, cfg.L, s)
            if cfg.has_internal_damper:
                out += (2 * cfg.h3 / c) * float(pulse(cfg.a)) \
                    * greens_laplace(cfg, x, cfg.a, s)
            out += (s / c ** 2) * _pulse_greens_integral(cfg, pulse, x, s)
        if forcing is not None:
            hat_cos = s / (s ** 2 + forcing.omega ** 2)
            out += (forcing.amplitude / (cfg.rho_A * c ** 2)) * hat_cos \
                * greens_laplace(cfg, x, forcing.position, s)
        return out

    return invert(U, t, alpha=alpha, degree=degree, check=check,
                  scale=cfg.L / cfg.c)
