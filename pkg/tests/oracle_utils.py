"""Brute-force numerical oracles shared by the tests.

These deliberately know nothing about the engine's internal step structure:
jump locations are detected numerically by scanning and bisection.
"""
from __future__ import annotations

import numpy as np


def detect_jumps(f, lo: float, hi: float, n_scan: int, rel_jump: float = 0.01):
    """Locate discontinuities of f on [lo, hi] by scanning and bisection.

    A step between adjacent scan points counts as a jump when it exceeds
    ``rel_jump`` times the overall scale; smooth variation over one scan cell
    is far below that for the integrands used here.
    """
    xs = np.linspace(lo, hi, n_scan + 1)
    vals = np.asarray(f(xs), float)
    scale = max(1e-300, float(np.max(np.abs(vals))))
    thresh = rel_jump * scale
    jumps = []
    for i in np.nonzero(np.abs(np.diff(vals)) > thresh)[0]:
        a, b = xs[i], xs[i + 1]
        fa = vals[i]
        for _ in range(50):
            m = 0.5 * (a + b)
            fm = float(np.asarray(f(np.array([m])))[0])
            if abs(fm - fa) > thresh:
                b = m
            else:
                a, fa = m, fm
        jumps.append(0.5 * (a + b))
    return jumps


def simpson_piecewise(f, lo: float, hi: float, n_panels: int,
                      jumps=None) -> float:
    """Composite Simpson with panel edges snapped to the given jump
    abscissae, so each smooth span is integrated at full order."""
    edges = [lo, hi] + [j for j in (jumps or []) if lo < j < hi]
    edges = np.unique(np.asarray(edges, float))
    total = 0.0
    eps = 1e-12 * (hi - lo)
    for a, b in zip(edges[:-1], edges[1:]):
        if b - a <= 2 * eps:
            continue
        n = max(2, int(round(n_panels * (b - a) / (hi - lo))))
        xs = np.linspace(a + eps, b - eps, 2 * n + 1)
        ys = np.asarray(f(xs), float)
        h = (xs[-1] - xs[0]) / (2 * n)
        total += h / 3.0 * (ys[0] + ys[-1] + 4 * ys[1::2].sum() + 2 * ys[2:-1:2].sum())
    return total
