"""Series enumeration and the step-sum Green's function evaluator."""
import math

import numpy as np
import pytest

from viscobar.config import BarConfig, denominator_data
from viscobar.dalembert import GammaEvaluator, enumerate_terms
from viscobar.errors import WavefrontSample

BAR = dict(L=1.8, c=1.5, a=0.9)
CFG_S3 = BarConfig(**BAR, h1=0.5, h2=1.0, h3=0.7)      # transparent right
CFG_GEN = BarConfig(**BAR, h1=0.5, h2=0.7, h3=0.6)     # three exponents
CFG_S5 = BarConfig(**BAR, h1=0.9, h2=0.9, h3=0.6)      # near-transparent ends
FREE = BarConfig(L=1.8, c=1.5, h1=1.0, h2=1.0)


def test_enumerate_single_exponent():
    den = denominator_data(BarConfig(L=1.8, c=1.5, h1=0.5, h2=0.5))
    terms = enumerate_terms(den, 3.6)
    assert [t.order for t in terms] == [0, 1]
    r1r2 = (1 / 3) ** 2
    assert terms[0].weight == 1.0 and terms[0].delay == 0.0
    assert terms[1].weight == pytest.approx(r1r2, rel=1e-14)
    assert terms[1].delay == pytest.approx(2.4)


def test_enumerate_three_exponents_horizon():
    den = denominator_data(CFG_S5)
    terms = enumerate_terms(den, 10.0)
    assert max(t.order for t in terms) == 8
    # completeness: brute force over all compositions up to order 9
    seen = {t.counts for t in terms}
    for n1 in range(10):
        for n2 in range(10 - n1):
            for n3 in range(10 - n1 - n2):
                delay = n1 * den.alpha[0] + n2 * den.alpha[1] + n3 * den.alpha[2]
                if delay <= 10.0:
                    assert (n1, n2, n3) in seen


def test_multinomial_weights():
    den = denominator_data(CFG_GEN)
    b1, b2, b3 = den.b
    terms = {t.counts: t for t in enumerate_terms(den, 5.0)}
    assert terms[(2, 0, 0)].weight == pytest.approx(b1 ** 2, rel=1e-14)
    assert terms[(1, 1, 0)].weight == pytest.approx(2 * b1 * b2, rel=1e-14)
    assert terms[(0, 2, 0)].weight == pytest.approx(b2 ** 2, rel=1e-14)
    assert terms[(1, 0, 1)].weight == pytest.approx(2 * b1 * b3, rel=1e-14)
    assert terms[(1, 0, 0)].weight == pytest.approx(-b1, rel=1e-14)


def test_two_exponent_compositions():
    # a matched internal damper (h3 = 1) kills the full round-trip term,
    # leaving two active exponents
    cfg = BarConfig(**BAR, h1=0.5, h2=0.7, h3=1.0)
    den = denominator_data(cfg)
    assert den.m == 2
    order2 = [t for t in enumerate_terms(den, 10.0) if t.order == 2]
    assert [t.counts for t in order2] == [(2, 0), (1, 1), (0, 2)]
    b1, b2 = den.b
    assert [t.weight for t in order2] == pytest.approx(
        [b1 ** 2, 2 * b1 * b2, b2 ** 2], rel=1e-14)


def test_large_order_weights_use_stable_path():
    # orders beyond the exact-factorial range still match the direct formula
    from viscobar.dalembert import _term_weight

    b = (0.3, 0.2)
    counts = (15, 10)   # n = 25
    n = sum(counts)
    direct = (-1.0) ** n * math.comb(25, 15) * b[0] ** 15 * b[1] ** 10
    assert _term_weight(counts, b) == pytest.approx(direct, rel=1e-12)


def test_gamma_free_space_is_single_step():
    ev = GammaEvaluator(FREE)
    rng = np.random.default_rng(1)
    x = rng.uniform(0, 1.8, 200)
    xi = rng.uniform(0, 1.8, 200)
    t = rng.uniform(0, 3.0, 200)
    got = ev.gamma(x, xi, t)
    want = 0.75 * (1.5 * t >= np.abs(x - xi))
    assert np.array_equal(got, want)


def test_term_counts_of_reference_scenarios():
    ev3 = GammaEvaluator(CFG_S3)
    assert ev3.path == "transparent-right"
    assert ev3.term_count(1.5) == 2

    ev5 = GammaEvaluator(CFG_S5)
    assert ev5.path == "general"
    assert ev5.max_order_used(10.0) == 8


def test_specialization_equivalence_small_grid():
    x = np.linspace(0.011, 1.789, 15)[:, None, None]
    xi = np.linspace(0.013, 1.787, 14)[None, :, None]
    t = np.linspace(0.017, 3.41, 9)[None, None, :]

    gen = GammaEvaluator(CFG_S3, path="general").gamma(x, xi, t)
    ded = GammaEvaluator(CFG_S3, path="transparent-right").gamma(x, xi, t)
    assert np.max(np.abs(gen - ded)) < 1e-14

    cfg2 = BarConfig(L=1.8, c=1.5, h1=0.5, h2=0.7)
    gen2 = GammaEvaluator(cfg2, path="general").gamma(x, xi, t)
    ded2 = GammaEvaluator(cfg2, path="no-internal").gamma(x, xi, t)
    assert np.max(np.abs(gen2 - ded2)) < 1e-14


def test_gamma_symmetry():
    rng = np.random.default_rng(8)
    ev = GammaEvaluator(CFG_GEN, t_max=4.0)
    x = rng.uniform(0, 1.8, 100)
    xi = rng.uniform(0, 1.8, 100)
    t = rng.uniform(0, 4.0, 100)
    assert np.max(np.abs(ev.gamma(x, xi, t) - ev.gamma(xi, x, t))) < 1e-13


def test_gamma_causality():
    rng = np.random.default_rng(12)
    ev = GammaEvaluator(CFG_GEN, t_max=3.0)
    for _ in range(300):
        x, xi = rng.uniform(0, 1.8, 2)
        if abs(x - xi) < 1e-3:
            continue
        t = rng.uniform(0.0, abs(x - xi) / 1.5 * 0.999)
        assert ev.gamma(x, xi, t) == 0.0


def test_truncation_exactness_bitwise():
    ev_full = GammaEvaluator(CFG_GEN)
    rng = np.random.default_rng(3)
    x = rng.uniform(0, 1.8, 50)
    xi = rng.uniform(0, 1.8, 50)
    for t in (1.1, 2.3, 3.49):
        n_horizon = math.floor(t / denominator_data(CFG_GEN).alpha_min)
        lo = GammaEvaluator(CFG_GEN, max_order=n_horizon)
        hi = GammaEvaluator(CFG_GEN, max_order=n_horizon + 5)
        gl = lo.gamma(x, xi, np.full_like(x, t))
        gh = hi.gamma(x, xi, np.full_like(x, t))
        assert np.array_equal(gl, gh)
        assert np.array_equal(gl, ev_full.gamma(x, xi, np.full_like(x, t)))


def test_attenuation_bound():
    den = denominator_data(CFG_S5)
    bmax = max(abs(b) for b in den.b)
    for term in enumerate_terms(den, 10.0):
        assert abs(term.weight) <= (den.m * bmax) ** term.order + 1e-300


def _weight_at(samples, xi_star, tol=1e-9):
    return sum(w for xs, w in samples if abs(xs - xi_star) <= tol)


def test_gamma_t_samples_free_space():
    ev = GammaEvaluator(FREE)
    x, t = 0.8, 0.3
    samples = ev.gamma_t_classical(x, t)
    c = 1.5
    assert _weight_at(samples, x - c * t) == pytest.approx(c * c / 2)
    assert _weight_at(samples, x + c * t) == pytest.approx(c * c / 2)


def test_gamma_t_samples_reflected_term():
    # transparent right, no internal damper: extra sample at ct - x with R1 weight
    cfg = BarConfig(L=1.8, c=1.5, h1=0.5, h2=1.0)
    ev = GammaEvaluator(cfg)
    x, t = 0.4, 0.5
    c, r1 = 1.5, 1.0 / 3.0
    samples = ev.gamma_t_classical(x, t)
    assert _weight_at(samples, c * t - x) == pytest.approx(c * c / 2 * r1)


def test_gamma_t_samples_at_t0_reproduce_initial_state():
    c, h3 = 1.5, CFG_GEN.h3
    ev = GammaEvaluator(CFG_GEN)
    for x in (0.3, 1.4):
        samples = ev.gamma_t_classical(x, 0.0, boundary="advance")
        assert sum(w for _, w in samples) == pytest.approx(c ** 2)
        assert all(abs(xs - x) < 1e-12 for xs, _ in samples)
    # at the damper the point-damper boundary term supplies the balance:
    # (1/c^2) sum(w) + (2 h3 / c) Gamma(a, a, 0) = 1
    a = CFG_GEN.a
    samples = ev.gamma_t_classical(a, 0.0, boundary="advance")
    total = sum(w for _, w in samples) / c ** 2
    total += (2 * h3 / c) * ev.gamma(a, a, 0.0)
    assert total == pytest.approx(1.0, rel=1e-13)


def test_gamma_t_boundary_sample_raises():
    ev = GammaEvaluator(FREE)
    # x + c t lands exactly on the bar end: the front is leaving the domain
    with pytest.raises(WavefrontSample):
        ev.gamma_t_classical(0.3, 1.0)   # 0.3 + 1.5 = 1.8 = L
    # advancing drops the leaving front (its weight hands over to the
    # boundary term switching on at the same instant); the left-moving front
    # exited earlier, so nothing remains
    assert ev.gamma_t_classical(0.3, 1.0, boundary="advance") == []
