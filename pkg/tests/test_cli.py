"""Scenario parsing and the command-line interface."""
import numpy as np
import pytest

from viscobar.cli import main
from viscobar.errors import ScenarioError
from viscobar.scenario import build_scenario, load_scenario, parse_scenario_text

REFERENCE = """\
# pulse scenario
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
grid.nx = 16
grid.nt = 16
grid.t_max = 1.5
compare.tolerance = 5e-3
compare.fem_elements = 200
"""

FREE_SPACE = """\
bar.L = 1.8
bar.c = 1.5
dampers.h1 = 1.0
dampers.h2 = 1.0
initial.pulse = gaussian
grid.nx = 8
grid.nt = 21
grid.t_max = 0.4
"""

FORCED = """\
bar.L = 1.8
bar.c = 1.5
bar.a = 0.9
dampers.h1 = 0.9
dampers.h2 = 0.9
dampers.h3 = 0.6
forcing.kind = point_harmonic
forcing.x = 0.45
forcing.F0 = 1.0
forcing.omega = 4.0
grid.nx = 12
grid.nt = 6
grid.t_max = 10.0
"""

RIGID = """\
bar.L = 1.8
bar.c = 1.5
grid.nx = 8
grid.nt = 5
grid.t_max = 2.0
"""


def _write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def test_scenario_round_trip(tmp_path):
    sc = load_scenario(_write(tmp_path, "ref.scn", REFERENCE))
    assert sc.config.h2 == 1.0 and sc.config.a == 0.9
    assert sc.pulse is not None and sc.pulse.width == 0.09
    assert sc.t_grid[-1] == 1.5 and sc.x_grid.size == 16


@pytest.mark.parametrize("line,message", [
    ("bar.unknown = 3", "unknown key"),
    ("bar.rhoA = abc", "bad value"),
    ("bar.rhoA", "expected"),
    ("initial.velocity = sine", "only 'none'"),
])
def test_scenario_rejects_bad_input(line, message):
    with pytest.raises(ScenarioError, match=message):
        build_scenario(parse_scenario_text(REFERENCE + line))


def test_scenario_rejects_duplicates_and_missing():
    with pytest.raises(ScenarioError, match="duplicate"):
        parse_scenario_text("bar.L = 1\nbar.L = 2\n")
    with pytest.raises(ScenarioError, match="missing required"):
        build_scenario(parse_scenario_text("bar.L = 1.8\nbar.c = 1.5\n"))


def test_scenario_rejects_orphan_subkeys():
    text = RIGID + "initial.pulse.width = 0.1\n"
    with pytest.raises(ScenarioError, match="initial.pulse = none"):
        build_scenario(parse_scenario_text(text))
    text = RIGID + "forcing.F0 = 1.0\n"
    with pytest.raises(ScenarioError, match="forcing.kind = none"):
        build_scenario(parse_scenario_text(text))


def test_greens_steps_at_the_front(tmp_path, capsys):
    scn = _write(tmp_path, "free.scn", FREE_SPACE)
    assert main(["greens", "--scenario", scn, "--x", "0.5", "--xi", "0.2"]) == 0
    rows = capsys.readouterr().out.strip().splitlines()
    assert rows[0] == "t,gamma,terms_used"
    data = np.array([[float(v) for v in r.split(",")] for r in rows[1:]])
    # front arrives at t = 0.3/1.5 = 0.2; H(0) = 1 at the grid point t = 0.2
    before = data[data[:, 0] < 0.2 - 1e-12]
    at_after = data[data[:, 0] >= 0.2 - 1e-12]
    assert np.all(before[:, 1] == 0.0)
    assert np.all(at_after[:, 1] == 0.75)
    assert np.all(data[:, 2] == 1)


def test_greens_term_count_of_reference_scenario(tmp_path, capsys):
    scn = _write(tmp_path, "ref.scn", REFERENCE)
    assert main(["greens", "--scenario", scn, "--x", "0.5", "--xi", "0.2"]) == 0
    rows = capsys.readouterr().out.strip().splitlines()
    last = rows[-1].split(",")
    assert float(last[0]) == 1.5
    assert int(last[2]) == 2


def test_respond_rigid_bar_constant(tmp_path, capsys):
    scn = _write(tmp_path, "rigid.scn",
                 RIGID + "initial.pulse = gaussian\ninitial.pulse.width = 1e9\n")
    assert main(["respond", "--scenario", scn]) == 0
    rows = capsys.readouterr().out.strip().splitlines()[1:]
    u = np.array([float(r.split(",")[2]) for r in rows])
    assert np.max(np.abs(u - u[0])) < 1e-12


def test_respond_writes_file_and_plot_script(tmp_path):
    out = tmp_path / "resp.csv"
    script = tmp_path / "plot.py"
    scn = _write(tmp_path, "ref.scn",
                 REFERENCE + f"output.plot_script = {script}\n")
    assert main(["respond", "--scenario", scn, "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "x,t,u" and len(lines) == 1 + 16 * 16
    assert script.exists() and "contourf" in script.read_text()


def test_compare_fem_within_tolerance(tmp_path, capsys):
    scn = _write(tmp_path, "ref.scn", REFERENCE)
    assert main(["compare", "--scenario", scn, "--oracle", "fem"]) == 0
    out = capsys.readouterr().out.strip().splitlines()
    assert out[-1].startswith("# max_abs_err") and out[-1].endswith("PASS")


def test_compare_coarse_fem_fails_tolerance(tmp_path, capsys):
    scn = _write(tmp_path, "coarse.scn",
                 REFERENCE.replace("compare.fem_elements = 200",
                                   "compare.fem_elements = 20")
                 .replace("compare.tolerance = 5e-3",
                          "compare.tolerance = 1e-4"))
    assert main(["compare", "--scenario", scn, "--oracle", "fem"]) == 4
    out = capsys.readouterr().out.strip().splitlines()
    assert out[-1].endswith("FAIL")


def test_compare_laplace(tmp_path, capsys):
    scn = _write(tmp_path, "ref.scn",
                 REFERENCE.replace("compare.tolerance = 5e-3",
                                   "compare.tolerance = 1e-6")
                 + "compare.points = 8\n")
    assert main(["compare", "--scenario", scn, "--oracle", "laplace"]) == 0


def test_respond_forced_scenario_sustains_oscillation(tmp_path, capsys):
    scn = _write(tmp_path, "forced.scn", FORCED)
    assert main(["respond", "--scenario", scn]) == 0
    rows = capsys.readouterr().out.strip().splitlines()[1:]
    data = np.array([[float(v) for v in r.split(",")] for r in rows])
    late = data[data[:, 1] == 10.0]
    assert np.max(np.abs(late[:, 2])) > 1e-2   # forcing keeps the bar moving


def test_truncation_reaches_exactness(tmp_path, capsys):
    scn = _write(tmp_path, "forced.scn", FORCED)
    assert main(["truncation", "--scenario", scn, "--orders", "0,1,8"]) == 0
    rows = capsys.readouterr().out.strip().splitlines()
    assert rows[0] == "x,u_exact,err_0,err_1,err_8"
    data = np.array([[float(v) for v in r.split(",")] for r in rows[1:]])
    assert np.all(data[:, 4] == 0.0)          # order >= horizon: bitwise zero
    assert np.max(data[:, 3]) < np.max(data[:, 2])


def test_truncation_requires_forcing(tmp_path, capsys):
    scn = _write(tmp_path, "rigid.scn", RIGID)
    assert main(["truncation", "--scenario", scn]) == 2


def test_energy_command(tmp_path, capsys):
    scn = _write(tmp_path, "pulse.scn", """\
bar.L = 1.8
bar.c = 1.5
dampers.h1 = 0.4
dampers.h2 = 0.6
initial.pulse = gaussian
initial.pulse.center = 0.9
initial.pulse.width = 0.09
grid.nx = 4
grid.nt = 5
grid.t_max = 0.5123
""")
    assert main(["energy", "--scenario", scn]) == 0
    rows = capsys.readouterr().out.strip().splitlines()
    assert rows[0] == "t,energy,flux"
    data = np.array([[float(v) for v in r.split(",")] for r in rows[1:]])
    assert np.all(data[:, 1] > 0)
    assert np.all(np.diff(data[:, 1]) <= 1e-12)   # dampers only dissipate


def test_energy_rejects_forced_scenario(tmp_path):
    scn = _write(tmp_path, "forced.scn", FORCED)
    assert main(["energy", "--scenario", scn]) == 2


def test_exit_code_on_bad_scenario(tmp_path, capsys):
    scn = _write(tmp_path, "bad.scn", "bar.L = -1\nbar.c = 1\n"
                 "grid.nx = 4\ngrid.nt = 4\ngrid.t_max = 1\n")
    out = tmp_path / "never.csv"
    assert main(["respond", "--scenario", scn, "--out", str(out)]) == 2
    assert not out.exists()   # invalid scenarios never produce output files
    assert main(["respond", "--scenario", str(tmp_path / "missing.scn")]) == 2


def test_exit_code_on_computation_error(tmp_path):
    # a wavefront sits exactly on the bar end at one of the energy times
    scn = _write(tmp_path, "edge.scn", """\
bar.L = 1.8
bar.c = 1.5
dampers.h1 = 1.0
dampers.h2 = 1.0
initial.pulse = gaussian
initial.pulse.center = 0.9
initial.pulse.width = 0.09
grid.nx = 4
grid.nt = 3
grid.t_max = 1.2
""")
    assert main(["energy", "--scenario", scn]) == 3


def test_csv_determinism(tmp_path):
    scn = _write(tmp_path, "ref.scn", REFERENCE)
    out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["respond", "--scenario", scn, "--out", str(out1)]) == 0
    assert main(["respond", "--scenario", scn, "--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()
