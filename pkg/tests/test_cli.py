import csv
import json

import numpy as np
import pytest

from lipstep.cli import SCAN_COLUMNS, TRAJECTORY_COLUMNS, fmt, main, read_scan_csv
from lipstep.config import BUNDLED, ConfigError, load_config, parse_config
from lipstep.scanner import compare_costs, scan_grid

SMALL_SCAN = """
[grid]
x_lo = 0.02
x_hi = 0.05
x_step = 0.01
v_lo = -0.17
v_hi = -0.07
v_step = 0.05
"""

SHORT_SIM = """
[target]
T_sd = 0.8
xd_d = 0.5

[scenario]
t_end = 1.5

[push p]
t_start = 0.5
duration = 0.2
accel = -2.0
"""


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def header(path):
    with open(path, newline="") as fh:
        return next(csv.reader(fh))


class TestConfig:
    @pytest.mark.parametrize("name", BUNDLED)
    def test_bundled(self, name):
        cfg = load_config(name)
        assert cfg.scenario.target.xd_d == 0.5

    def test_defaults(self):
        cfg = parse_config("")
        assert cfg.problem.bounds.T_min == 0.6 and cfg.grid.shape == (81, 81)

    def test_unknown_key(self):
        with pytest.raises(ConfigError, match="L_maxx"):
            parse_config("[bounds]\nL_maxx = 0.5\n")

    def test_unknown_section(self):
        with pytest.raises(ConfigError, match="solver"):
            parse_config("[solver]\ntol = 1\n")

    def test_bad_number(self):
        with pytest.raises(ConfigError, match="z_c"):
            parse_config("[lip]\nz_c = tall\n")

    def test_theta(self):
        cfg = parse_config("[bounds]\ntheta_m = 0.4636476090008061\n")
        assert cfg.problem.bounds.L_max == pytest.approx(0.5)

    def test_theta_and_length(self):
        with pytest.raises(ConfigError):
            parse_config("[bounds]\ntheta_m = 0.4\nL_max = 0.5\n")

    def test_push_sections(self):
        cfg = parse_config("[push b]\nt_start=2\nduration=0.1\naccel=1\n[push a]\nt_start=1\nduration=0.1\naccel=-1\n")
        assert [e.t_start for e in cfg.scenario.pushes] == [1.0, 2.0]

    def test_push_missing_field(self):
        with pytest.raises(ConfigError, match="accel"):
            parse_config("[push a]\nt_start=1\nduration=0.1\n")

    def test_weights_pair(self):
        cfg = parse_config("[weights]\nW2 = 50, 1\n")
        assert cfg.problem.weights.W2 == (50.0, 1.0)
        with pytest.raises(ConfigError):
            parse_config("[weights]\nW2 = 50\n")


class TestExitCodes:
    def test_no_args(self):
        assert main([]) == 1

    def test_help(self, capsys):
        assert main(["--help"]) == 0

    def test_missing_config(self, tmp_path):
        assert main(["simulate", "--config", str(tmp_path / "nope.ini"), "--out", str(tmp_path / "t.csv")]) == 1

    def test_bad_bounds_named(self, tmp_path, capsys):
        cfg = write(tmp_path, "bad.ini", "[bounds]\nT_min = 2.5\nT_max = 2.0\n")
        assert main(["simulate", "--config", cfg, "--out", str(tmp_path / "t.csv")]) == 1
        assert "T_min" in capsys.readouterr().err

    def test_unknown_key(self, tmp_path, capsys):
        cfg = write(tmp_path, "bad.ini", "[target]\nspeed = 1\n")
        assert main(["scan", "--config", cfg, "--out", str(tmp_path / "s.csv")]) == 1
        assert "speed" in capsys.readouterr().err

    def test_fall_exit(self, tmp_path):
        cfg = write(tmp_path, "fall.ini", "[scenario]\nt_end = 3.0\n[push p]\nt_start=1\nduration=0.5\naccel=-30\n")
        out = tmp_path / "t.csv"
        assert main(["simulate", "--config", cfg, "--out", str(out)]) == 2
        assert json.loads((tmp_path / "t_summary.json").read_text())["fell"] is True


def test_simulate_outputs(tmp_path):
    cfg = write(tmp_path, "sim.ini", SHORT_SIM)
    out = tmp_path / "traj.csv"
    assert main(["simulate", "--config", cfg, "--out", str(out)]) == 0
    assert header(out) == TRAJECTORY_COLUMNS
    with open(out, newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 150
    assert header(tmp_path / "traj_steps.csv") == ["t", "foot_world", "p"]
    summary = json.loads((tmp_path / "traj_summary.json").read_text())
    assert summary["fell"] is False
    assert summary["step_count"] == len(summary["step_durations"])


@pytest.fixture(scope="module")
def scanned(tmp_path_factory):
    d = tmp_path_factory.mktemp("scan")
    cfg = write(d, "grid.ini", SMALL_SCAN)
    out = d / "scan.csv"
    assert main(["scan", "--config", cfg, "--out", str(out)]) == 0
    return d, cfg, out


def test_scan_header(scanned):
    _, _, out = scanned
    assert header(out) == SCAN_COLUMNS


def test_round_trip(scanned):
    _, cfg, out = scanned
    c = load_config(cfg)
    direct = compare_costs(scan_grid(c.grid, c.problem)).diffs
    cells, shape = read_scan_csv(out)
    assert shape == c.grid.shape
    reread = compare_costs(cells).diffs
    np.testing.assert_allclose(reread, direct, rtol=0, atol=1e-12)


def test_compare_outputs(scanned, capsys):
    d, cfg, out = scanned
    diff = d / "diff.csv"
    assert main(["compare", "--scan", str(out), "--out", str(diff), "--config", cfg]) == 0
    stats = json.loads(capsys.readouterr().out)
    assert stats["cells"] == 12
    assert header(diff) == ["x", "xd", "cost_h", "cost_s", "diff"]
    assert header(d / "diff_ridge.csv") == ["row", "col", "x", "xd", "critical_offset", "kind"]
    assert stats["ridge_energy"] >= 2


def test_compare_missing_columns(tmp_path):
    bad = write(tmp_path, "bad.csv", "x,xd,cost_h\n0,0,1\n")
    assert main(["compare", "--scan", bad, "--out", str(tmp_path / "d.csv")]) == 1


def test_scan_single_approach(tmp_path):
    cfg = write(tmp_path, "g.ini", SMALL_SCAN)
    out = tmp_path / "s.csv"
    assert main(["scan", "--config", cfg, "--out", str(out), "--approach", "sequential"]) == 0
    with open(out, newline="") as fh:
        row = next(csv.DictReader(fh))
    assert row["cost_h"] == "" and row["cost_s"] != ""


def test_bench_states_file(tmp_path, capsys):
    states = write(tmp_path, "st.csv", "x,xd,T_elap\n0.0,0.5,0.6\n0.1,-0.3,0.2\n")
    out = tmp_path / "b.json"
    assert main(["bench", "--config", "nominal", "--states", states, "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["holistic"]["n"] == 2 and doc["ratio"] > 1


def test_bench_bad_states(tmp_path):
    states = write(tmp_path, "st.csv", "a,b\n1,2\n")
    assert main(["bench", "--config", "nominal", "--states", states]) == 1


@pytest.mark.parametrize("v", [0.1, 1 / 3, -2.0000000000000004, 1e-300, 12345.678901234567])
def test_float_text_exact(v):
    assert float(fmt(v)) == v


def test_float_text_missing():
    assert fmt(None) == "" and fmt(float("nan")) == ""
