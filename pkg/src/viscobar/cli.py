"""Command-line front end.

Subcommands
-----------
greens      Gamma(x, xi, t) over the time grid: rows t,gamma,terms_used
respond     full field: rows x,t,u (optionally a plot script)
compare     engine vs an oracle (fem | laplace): rows x,t,u_engine,u_oracle,abs_err
truncation  error of order-truncated sums at t_max: rows x,u_exact,err_N...
energy      energy and damper flux over the time grid: rows t,energy,flux

Exit codes: 0 success / within tolerance, 2 scenario or configuration error,
3 computation error, 4 comparison tolerance exceeded.
"""
from __future__ import annotations

import argparse
import sys

import numpy as np

from .dalembert import GammaEvaluator
from .errors import ScenarioError, ViscobarError
from .oracles.fem import fem_solve
from .oracles.laplace import laplace_invert_U
from .response import energy_and_flux, solve
from .scenario import Scenario, load_scenario

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_COMPUTE = 3
EXIT_TOLERANCE = 4


def _fmt(v) -> str:
    return format(float(v), ".17g")


def _write_output(lines: list[str], out_path: str | None) -> None:
    text = "\n".join(lines) + "\n"
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _write_plot_script(path: str, csv_path: str | None, kind: str) -> None:
    csv = csv_path or "output.csv"
    if kind == "respond":
        body = f"""\
#!/usr/bin/env python3
\"\"\"Surface and contour view of a response field (rows x,t,u).\"\"\"
import sys
import numpy as np
import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

path = sys.argv[1] if len(sys.argv) > 1 else {csv!r}
data = np.genfromtxt(path, delimiter=",", names=True)
x = np.unique(data["x"]); t = np.unique(data["t"])
u = data["u"].reshape(x.size, t.size)
fig = plt.figure(figsize=(11, 4.5))
ax = fig.add_subplot(1, 2, 1)
cs = ax.contourf(t, x, u, levels=30)
fig.colorbar(cs, ax=ax, label="u [m]")
ax.set_xlabel("t [s]"); ax.set_ylabel("x [m]")
ax3 = fig.add_subplot(1, 2, 2, projection="3d")
T, X = np.meshgrid(t, x)
ax3.plot_surface(X, T, u, cmap="viridis", linewidth=0)
ax3.set_xlabel("x [m]"); ax3.set_ylabel("t [s]"); ax3.set_zlabel("u [m]")
fig.tight_layout()
fig.savefig(path.rsplit(".", 1)[0] + ".png", dpi=150)
"""
    else:  # truncation
        body = f"""\
#!/usr/bin/env python3
\"\"\"Log-scale truncation errors along the bar (rows x,u_exact,err_N...).\"\"\"
import sys
import numpy as np
import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

path = sys.argv[1] if len(sys.argv) > 1 else {csv!r}
data = np.genfromtxt(path, delimiter=",", names=True)
names = [n for n in data.dtype.names if n.startswith("err_")]
fig, ax = plt.subplots(figsize=(7, 4.5))
for name in names:
    ax.semilogy(data["x"], np.maximum(data[name], 1e-18), label=name)
ax.set_xlabel("x [m]"); ax.set_ylabel("|u_N - u_exact| [m]")
ax.legend(); fig.tight_layout()
fig.savefig(path.rsplit(".", 1)[0] + ".png", dpi=150)
"""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(body)


def cmd_greens(sc: Scenario, x: float, xi: float, out: str | None) -> int:
    ev = GammaEvaluator(sc.config, path=sc.path, t_max=sc.t_max,
                        max_order=sc.max_order)
    lines = ["t,gamma,terms_used"]
    for t in sc.t_grid:
        g = ev.gamma(x, xi, t)
        lines.append(f"{_fmt(t)},{_fmt(g)},{ev.term_count(float(t))}")
    _write_output(lines, out)
    return EXIT_OK


def cmd_respond(sc: Scenario, out: str | None) -> int:
    field = solve(sc.config, sc.init, sc.forcing, x=sc.x_grid, t=sc.t_grid,
                  path=sc.path, max_order=sc.max_order)
    lines = ["x,t,u"]
    for i, xv in enumerate(field.x):
        for j, tv in enumerate(field.t):
            lines.append(f"{_fmt(xv)},{_fmt(tv)},{_fmt(field.u[i, j])}")
    _write_output(lines, out)
    if sc.plot_script_path:
        _write_plot_script(sc.plot_script_path, out or sc.csv_path, "respond")
    return EXIT_OK


def _compare_fem(sc: Scenario):
    field = solve(sc.config, sc.init, sc.forcing, x=sc.x_grid, t=sc.t_grid,
                  path=sc.path, max_order=sc.max_order)
    fem = fem_solve(sc.config, sc.init, sc.forcing, t_end=sc.t_max,
                    n_elements=sc.fem_elements, record_t=sc.t_grid)
    rows = []
    for j, tv in enumerate(sc.t_grid):
        fem_x = np.interp(sc.x_grid, fem.x, fem.u[:, j])
        for i, xv in enumerate(sc.x_grid):
            rows.append((xv, tv, field.u[i, j], fem_x[i]))
    return rows


def _compare_laplace(sc: Scenario):
    if sc.pulse is None and sc.forcing is None:
        raise ScenarioError("laplace comparison needs a gaussian pulse or forcing")
    ev = GammaEvaluator(sc.config, path=sc.path, t_max=sc.t_max,
                        max_order=sc.max_order)
    # deterministic off-front sample set, away from staircase jumps
    rng = np.random.default_rng(20210825)
    L, c = sc.config.L, sc.config.c
    margin = max(0.0101 * L / c, 0.015 * sc.t_max)
    pts = []
    guard = 0
    while len(pts) < sc.compare_points and guard < 100 * sc.compare_points:
        guard += 1
        x = rng.uniform(0.03 * L, 0.97 * L)
        t = rng.uniform(max(0.05, 0.05 * sc.t_max), sc.t_max)
        probes = [0.0, L, x] + ([sc.config.a] if sc.config.has_internal_damper else [])
        if sc.forcing is not None:
            probes.append(sc.forcing.position)
        gaps = []
        for xi in probes:
            arr = ev.arrival_times(x, xi, sc.t_max)
            if arr.size:
                gaps.append(np.min(np.abs(arr - t)))
        if not gaps or min(gaps) > margin:
            pts.append((x, t))
    rows = []
    for x, t in pts:
        u_eng = float(solve(sc.config, sc.init, sc.forcing, x=[x], t=[t],
                            path=sc.path, max_order=sc.max_order).u[0, 0])
        u_orc = laplace_invert_U(sc.config, sc.pulse, x, t, forcing=sc.forcing)
        rows.append((x, t, u_eng, u_orc))
    return rows


def cmd_compare(sc: Scenario, oracle: str, out: str | None) -> int:
    rows = _compare_fem(sc) if oracle == "fem" else _compare_laplace(sc)
    lines = ["x,t,u_engine,u_oracle,abs_err"]
    max_err = 0.0
    for xv, tv, ue, uo in rows:
        err = abs(ue - uo)
        max_err = max(max_err, err)
        lines.append(f"{_fmt(xv)},{_fmt(tv)},{_fmt(ue)},{_fmt(uo)},{_fmt(err)}")
    verdict = "PASS" if max_err <= sc.tolerance else "FAIL"
    lines.append(f"# max_abs_err,{_fmt(max_err)},tolerance,{_fmt(sc.tolerance)},{verdict}")
    _write_output(lines, out)
    if out:
        print(f"max_abs_err = {_fmt(max_err)} ({verdict}, tolerance {_fmt(sc.tolerance)})")
    return EXIT_OK if verdict == "PASS" else EXIT_TOLERANCE


def cmd_truncation(sc: Scenario, orders: list[int], out: str | None) -> int:
    if sc.forcing is None:
        raise ScenarioError("truncation study requires a forced scenario")
    t = sc.t_max
    exact = solve(sc.config, sc.init, sc.forcing, x=sc.x_grid, t=[t],
                  path=sc.path).u[:, 0]
    errs = []
    for n in orders:
        trunc = solve(sc.config, sc.init, sc.forcing, x=sc.x_grid, t=[t],
                      path=sc.path, max_order=n).u[:, 0]
        errs.append(np.abs(trunc - exact))
    header = "x,u_exact," + ",".join(f"err_{n}" for n in orders)
    lines = [header]
    for i, xv in enumerate(sc.x_grid):
        row = [_fmt(xv), _fmt(exact[i])] + [_fmt(e[i]) for e in errs]
        lines.append(",".join(row))
    _write_output(lines, out)
    if sc.plot_script_path:
        _write_plot_script(sc.plot_script_path, out or sc.csv_path, "truncation")
    return EXIT_OK


def cmd_energy(sc: Scenario, out: str | None) -> int:
    if sc.forcing is not None:
        raise ScenarioError("energy audit requires an unforced scenario")
    lines = ["t,energy,flux"]
    for t in sc.t_grid:
        xi_e, flux = energy_and_flux(sc.config, sc.init, float(t), path=sc.path)
        lines.append(f"{_fmt(t)},{_fmt(xi_e)},{_fmt(flux)}")
    _write_output(lines, out)
    return EXIT_OK


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="viscobar",
        description="Exact traveling-wave solver for a bar with viscous dampers")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--scenario", required=True, help="scenario file path")
        p.add_argument("--out", default=None, help="CSV output path (default: stdout)")

    p = sub.add_parser("greens", help="Green's function at one (x, xi)")
    add_common(p)
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--xi", type=float, required=True)

    p = sub.add_parser("respond", help="full response field")
    add_common(p)

    p = sub.add_parser("compare", help="engine vs oracle")
    add_common(p)
    p.add_argument("--oracle", choices=("fem", "laplace"), default="fem")

    p = sub.add_parser("truncation", help="truncated-series error study")
    add_common(p)
    p.add_argument("--orders", default="0,1,2",
                   help="comma-separated truncation orders")

    p = sub.add_parser("energy", help="energy and flux audit")
    add_common(p)
    return parser


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        sc = load_scenario(args.scenario)
        if args.command == "greens":
            if not (0.0 <= args.x <= sc.config.L and 0.0 <= args.xi <= sc.config.L):
                raise ScenarioError("--x and --xi must lie inside the bar")
        out = args.out or sc.csv_path
    except (ScenarioError, ViscobarError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        if args.command == "greens":
            return cmd_greens(sc, args.x, args.xi, out)
        if args.command == "respond":
            return cmd_respond(sc, out)
        if args.command == "compare":
            return cmd_compare(sc, args.oracle, out)
        if args.command == "truncation":
            try:
                orders = sorted({int(tok) for tok in args.orders.split(",") if tok})
            except ValueError:
                print(f"error: bad --orders {args.orders!r}", file=sys.stderr)
                return EXIT_CONFIG
            if not orders or min(orders) < 0:
                print("error: --orders must be nonnegative integers", file=sys.stderr)
                return EXIT_CONFIG
            return cmd_truncation(sc, orders, out)
        if args.command == "energy":
            return cmd_energy(sc, out)
        raise AssertionError(args.command)
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ViscobarError, ValueError) as exc:
        print(f"computation error: {exc}", file=sys.stderr)
        return EXIT_COMPUTE


if __name__ == "__main__":
    sys.exit(main())
