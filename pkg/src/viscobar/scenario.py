"""Plain-text scenario files: dotted key = value pairs, strictly validated.

Example
-------
    # pulse hitting an internal damper, transparent right end
    bar.L = 1.8
    bar.c = 1.5
    bar.a = 0.9
    dampers.h1 = 0.5
    dampers.h2 = 1.0
    dampers.h3 = 0.7
    initial.pulse = gaussian
    initial.pulse.center = 0.45
    initial.pulse.width = 0.09
    initial.pulse.amplitude = 0.01
    grid.nx = 64
    grid.nt = 64
    grid.t_max = 1.5

Unknown keys are errors.  ``initial.velocity`` may only be ``none``; initial
velocities are available through the library API.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import BarConfig, validate
from .errors import ScenarioError, ViscobarError
from .response import GaussianPulse, InitialData, PointHarmonic

_KNOWN_KEYS = {
    "bar.L": float, "bar.c": float, "bar.a": float, "bar.rhoA": float,
    "dampers.h1": float, "dampers.h2": float, "dampers.h3": float,
    "initial.pulse": str, "initial.pulse.center": float,
    "initial.pulse.width": float, "initial.pulse.amplitude": float,
    "initial.velocity": str,
    "forcing.kind": str, "forcing.x": float, "forcing.F0": float,
    "forcing.omega": float,
    "grid.nx": int, "grid.nt": int, "grid.t_max": float,
    "output.csv": str, "output.plot_script": str,
    "compare.tolerance": float, "compare.fem_elements": int,
    "compare.points": int,
    "engine.path": str, "engine.max_order": int,
}

_REQUIRED = ("bar.L", "bar.c", "grid.nx", "grid.nt", "grid.t_max")


@dataclass
class Scenario:
    """Validated scenario: configuration, data, grids and output options."""

    config: BarConfig
    init: InitialData
    forcing: PointHarmonic | None
    nx: int
    nt: int
    t_max: float
    csv_path: str | None
    plot_script_path: str | None
    tolerance: float
    fem_elements: int
    compare_points: int
    path: str
    max_order: int | None
    pulse: GaussianPulse | None

    @property
    def x_grid(self) -> np.ndarray:
        return np.linspace(0.0, self.config.L, self.nx)

    @property
    def t_grid(self) -> np.ndarray:
        return np.linspace(0.0, self.t_max, self.nt)


def parse_scenario_text(text: str) -> dict:
    """Parse dotted key = value lines into a typed flat dict."""
    values: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ScenarioError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, _, val = line.partition("=")
        key, val = key.strip(), val.strip()
        if key not in _KNOWN_KEYS:
            raise ScenarioError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise ScenarioError(f"line {lineno}: duplicate key {key!r}")
        typ = _KNOWN_KEYS[key]
        try:
            values[key] = typ(val)
        except ValueError as exc:
            raise ScenarioError(
                f"line {lineno}: bad value for {key}: {val!r}") from exc
    return values


def load_scenario(path: str) -> Scenario:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ScenarioError(f"cannot read scenario file {path}: {exc}") from exc
    return build_scenario(parse_scenario_text(text))


def build_scenario(values: dict) -> Scenario:
    for key in _REQUIRED:
        if key not in values:
            raise ScenarioError(f"missing required key {key!r}")

    config = BarConfig(
        L=values["bar.L"], c=values["bar.c"],
        h1=values.get("dampers.h1", 0.0),
        h2=values.get("dampers.h2", 0.0),
        h3=values.get("dampers.h3", 0.0),
        a=values.get("bar.a"),
        rho_A=values.get("bar.rhoA", 1.0),
    )
    try:
        validate(config)
    except ViscobarError as exc:
        raise ScenarioError(f"invalid bar configuration: {exc}") from exc

    vel = values.get("initial.velocity", "none")
    if vel != "none":
        raise ScenarioError("initial.velocity supports only 'none'")

    pulse_kind = values.get("initial.pulse", "none")
    pulse = None
    if pulse_kind == "gaussian":
        center = values.get("initial.pulse.center", 0.25 * config.L)
        width = values.get("initial.pulse.width", 0.05 * config.L)
        amplitude = values.get("initial.pulse.amplitude", 0.01)
        if width <= 0:
            raise ScenarioError("initial.pulse.width must be positive")
        pulse = GaussianPulse(center, width, amplitude)
        init = InitialData(u0=pulse, du0=pulse.slope)
    elif pulse_kind == "none":
        init = InitialData()
        for sub in ("center", "width", "amplitude"):
            if f"initial.pulse.{sub}" in values:
                raise ScenarioError(
                    f"initial.pulse.{sub} given but initial.pulse = none")
    else:
        raise ScenarioError(f"unknown initial.pulse kind {pulse_kind!r}")

    forcing_kind = values.get("forcing.kind", "none")
    if forcing_kind == "point_harmonic":
        for sub in ("forcing.x", "forcing.F0", "forcing.omega"):
            if sub not in values:
                raise ScenarioError(f"point_harmonic forcing requires {sub}")
        if not (0.0 < values["forcing.x"] < config.L):
            raise ScenarioError("forcing.x must lie inside the bar")
        forcing = PointHarmonic(position=values["forcing.x"],
                                amplitude=values["forcing.F0"],
                                omega=values["forcing.omega"])
    elif forcing_kind == "none":
        forcing = None
        for sub in ("forcing.x", "forcing.F0", "forcing.omega"):
            if sub in values:
                raise ScenarioError(f"{sub} given but forcing.kind = none")
    else:
        raise ScenarioError(f"unknown forcing.kind {forcing_kind!r}")

    nx, nt, t_max = values["grid.nx"], values["grid.nt"], values["grid.t_max"]
    if nx < 2 or nt < 2:
        raise ScenarioError("grid.nx and grid.nt must be at least 2")
    if t_max <= 0:
        raise ScenarioError("grid.t_max must be positive")

    path = values.get("engine.path", "auto")
    if path not in ("auto", "general", "no-internal", "transparent-right"):
        raise ScenarioError(f"unknown engine.path {path!r}")

    return Scenario(
        config=config, init=init, forcing=forcing,
        nx=nx, nt=nt, t_max=t_max,
        csv_path=values.get("output.csv"),
        plot_script_path=values.get("output.plot_script"),
        tolerance=values.get("compare.tolerance", 5e-3),
        fem_elements=values.get("compare.fem_elements", 200),
        compare_points=values.get("compare.points", 64),
        path=path,
        max_order=values.get("engine.max_order"),
        pulse=pulse,
    )
