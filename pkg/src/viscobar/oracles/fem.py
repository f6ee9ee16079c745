"""Linear finite-element comparator with Newmark average-acceleration stepping.

Uniform linear elements, consistent (tridiagonal) mass matrix, stiffness
EA/l [[1,-1],[-1,1]], and lumped dashpots: c*rho_A*h1 at node 0,
c*rho_A*h2 at the last node and 2*c*rho_A*h3 at the damper node.  The damper
position must coincide with a mesh node.  The integrator is the
unconditionally stable average-acceleration Newmark scheme; with all
dampers off it conserves the discrete energy to roundoff, which is checked.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_solve_banded, cholesky_banded

from ..config import BarConfig, validate
from ..errors import BadGeometry, Unstable

#: relative discrete-energy drift allowed in the conservative (h = 0) case
ENERGY_DRIFT_TOL = 1e-6


@dataclass
class FemModel:
    """Assembled matrices in symmetric-banded (upper) storage."""

    config: BarConfig
    nodes: np.ndarray           # node positions
    mass: np.ndarray            # (2, n) upper banded, symmetric tridiagonal
    stiffness: np.ndarray       # (2, n) upper banded
    damping: np.ndarray         # (n,) diagonal dashpots
    damper_node: int | None

    @property
    def n_nodes(self) -> int:
        return self.nodes.size

    @property
    def element_length(self) -> float:
        return self.nodes[1] - self.nodes[0]


def build_fem(config: BarConfig, n_elements: int) -> FemModel:
    """Assemble mass, stiffness and dashpot matrices on a uniform mesh.

    Raises
    ------
    BadGeometry
        If the internal damper does not land on a mesh node (choose
        n_elements so that a / L * n_elements is an integer).
    """
    cfg = validate(config)
    if n_elements < 1:
        raise BadGeometry("need at least one element")
    n = n_elements + 1
    nodes = np.linspace(0.0, cfg.L, n)
    le = cfg.L / n_elements
    rho_A, EA, c = cfg.rho_A, cfg.EA, cfg.c

    damper_node = None
    if cfg.has_internal_damper:
        k = cfg.a / cfg.L * n_elements
        damper_node = int(round(k))
        if abs(k - damper_node) > 1e-9:
            raise BadGeometry(
                f"damper at a={cfg.a} does not coincide with a node of a "
                f"{n_elements}-element mesh")

    # upper banded storage: row 0 = superdiagonal (shifted right), row 1 = diagonal
    mass = np.zeros((2, n))
    stiff = np.zeros((2, n))
    m_off, m_diag = rho_A * le / 6.0, 2.0 * rho_A * le / 6.0
    k_off, k_diag = -EA / le, EA / le
    mass[1, :] = 2 * m_diag
    mass[1, 0] = mass[1, -1] = m_diag
    mass[0, 1:] = m_off
    stiff[1, :] = 2 * k_diag
    stiff[1, 0] = stiff[1, -1] = k_diag
    stiff[0, 1:] = k_off

    damping = np.zeros(n)
    damping[0] = c * rho_A * cfg.h1
    damping[-1] += c * rho_A * cfg.h2
    if damper_node is not None:
        damping[damper_node] += 2.0 * c * rho_A * cfg.h3

    return FemModel(cfg, nodes, mass, stiff, damping, damper_node)


def _banded_matvec(banded: np.ndarray, v: np.ndarray) -> np.ndarray:
    out = banded[1] * v
    out[:-1] += banded[0, 1:] * v[1:]
    out[1:] += banded[0, 1:] * v[:-1]
    return out


def _nodal_force(model: FemModel, forcing, t: float) -> np.ndarray:
    f = np.zeros(model.n_nodes)
    if forcing is None:
        return f
    # point harmonic: consistent load of a delta is the shape-function value
    le = model.element_length
    pos = forcing.position
    j = min(int(pos / le), model.n_nodes - 2)
    w = pos / le - j
    amp = forcing.amplitude * math.cos(forcing.omega * t)
    f[j] += (1.0 - w) * amp
    f[j + 1] += w * amp
    return f


def fem_solve(config: BarConfig, init, forcing=None, *,
              t_end: float, n_elements: int, record_t=None,
              dt: float | None = None):
    """Newmark average-acceleration time stepping of M a + C v + K u = F.

    ``record_t`` (default: 65 uniform times) must be a uniform grid; the
    step is chosen to divide its spacing and respect dt <= 0.5 le / c.
    Returns a :class:`viscobar.response.ResponseField` on (nodes, record_t).

    Raises
    ------
    Unstable
        If the discrete energy of an undamped, unforced run drifts by more
        than 1e-6 relative.
    """
    from ..response import ResponseField, _callable_on_arrays

    model = build_fem(config, n_elements)
    cfg = model.config
    if record_t is None:
        record_t = np.linspace(0.0, t_end, 65)
    record_t = np.asarray(record_t, float)
    if record_t.size > 2:
        gaps = np.diff(record_t)
        if np.max(np.abs(gaps - gaps[0])) > 1e-9 * gaps[0]:
            raise ValueError("record_t must be a uniform grid")
    spacing = record_t[1] - record_t[0] if record_t.size > 1 else t_end
    dt_max = 0.5 * model.element_length / cfg.c
    if dt is not None and dt > dt_max:
        raise ValueError(f"dt={dt} violates dt <= 0.5*le/c = {dt_max:g}")
    substeps = max(1, int(math.ceil(spacing / (dt if dt is not None else dt_max))))
    dt = spacing / substeps

    u0 = _callable_on_arrays(init.u0) if init.u0 is not None else None
    v0 = _callable_on_arrays(init.v0) if init.v0 is not None else None
    u = u0(model.nodes).astype(float) if u0 is not None else np.zeros(model.n_nodes)
    v = v0(model.nodes).astype(float) if v0 is not None else np.zeros(model.n_nodes)

    mass_cho = cholesky_banded(model.mass)
    rhs0 = _nodal_force(model, forcing, 0.0) - model.damping * v \
        - _banded_matvec(model.stiffness, u)
    acc = cho_solve_banded((mass_cho, False), rhs0)

    # constant effective matrix of the average-acceleration update
    eff = model.mass.copy()
    eff[1] += 0.5 * dt * model.damping + 0.25 * dt * dt * model.stiffness[1]
    eff[0] += 0.25 * dt * dt * model.stiffness[0]
    eff_cho = cholesky_banded(eff)

    conservative = (cfg.h1 == cfg.h2 == cfg.h3 == 0.0) and forcing is None

    def energy(u, v):
        return 0.5 * v @ _banded_matvec(model.mass, v) \
            + 0.5 * u @ _banded_matvec(model.stiffness, u)

    e0 = energy(u, v)
    out = np.empty((model.n_nodes, record_t.size))
    out[:, 0] = u
    t = record_t[0]
    for j in range(1, record_t.size):
        for _ in range(substeps):
            t += dt
            u_pred = u + dt * v + 0.25 * dt * dt * acc
            v_pred = v + 0.5 * dt * acc
            rhs = _nodal_force(model, forcing, t) - model.damping * v_pred \
                - _banded_matvec(model.stiffness, u_pred)
            acc_new = cho_solve_banded((eff_cho, False), rhs)
            u = u_pred + 0.25 * dt * dt * acc_new
            v = v_pred + 0.5 * dt * acc_new
            acc = acc_new
        out[:, j] = u
        if conservative and e0 > 0.0:
            drift = abs(energy(u, v) - e0) / e0
            if drift > ENERGY_DRIFT_TOL:
                raise Unstable(f"energy drift {drift:.2e} at t={t:g}")

    return ResponseField(x=model.nodes, t=record_t, u=out,
                         meta={"n_elements": n_elements, "dt": dt,
                               "config": cfg})
