import json
import math
from pathlib import Path

import numpy as np
import pytest

from oracles import toda_order0
from takiff_toda.cli import main, parse_config, ConfigError
from takiff_toda.solutions import sl2_three_body_zero_velocity

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


def write(tmp_path, cfg, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(cfg))
    return path


def read_csv(path):
    header = path.read_text().splitlines()[0].split(",")
    return header, np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)


def sl2_rest(x, T=2.0, dt=1e-3):
    return {
        "algebra": "A", "rank": 1, "N": 2,
        "initial": {"chart": "sl2-rescaled", "preset": "zero-velocity", "q": [list(x)]},
        "integrator": {"scheme": "rk4", "dt": dt, "T": T},
        "outputs": {"trajectory_csv": "traj.csv", "diagnostics_json": "diag.json"},
    }


def test_simulate_rest_matches_closed_form(tmp_path, capsys):
    x = [0.3, -0.6, 0.8]
    assert main(["simulate", "--config", str(write(tmp_path, sl2_rest(x)))]) == 0
    header, data = read_csv(tmp_path / "traj.csv")
    assert header == ["t", "q_1_0", "q_1_1", "q_1_2", "p_1_0", "p_1_1", "p_1_2", "H", "f_0_2", "f_1_2", "f_2_2"]
    assert data.shape == (2001, len(header))
    want = np.array([sl2_three_body_zero_velocity(t, *x) for t in data[:, 0]])
    assert np.max(np.abs(data[:, 1:4] / math.sqrt(2) - want)) <= 1e-6
    diag = json.loads((tmp_path / "diag.json").read_text())
    assert diag["steps"] == 2000
    assert max(diag["max_drift"].values()) <= 1e-6
    assert diag["final_H"] == pytest.approx(diag["initial_H"], rel=1e-10)
    assert json.loads(capsys.readouterr().out) == diag


def test_simulate_is_reproducible_and_full_precision(tmp_path):
    cfg = write(tmp_path, sl2_rest([0.1, 0.2, 0.3], T=0.1, dt=0.01))
    main(["simulate", "--config", str(cfg), "--trajectory-csv", str(tmp_path / "a.csv")])
    main(["simulate", "--config", str(cfg), "--trajectory-csv", str(tmp_path / "b.csv")])
    a = (tmp_path / "a.csv").read_text()
    assert a == (tmp_path / "b.csv").read_text()
    row = a.splitlines()[3].split(",")
    assert all(len(v.split("e")[0].lstrip("-").replace(".", "")) == 17 for v in row)


def test_short_horizon_is_config_error(tmp_path, capsys):
    cfg = sl2_rest([0, 0, 0], T=0.05, dt=0.1)
    assert main(["simulate", "--config", str(write(tmp_path, cfg))]) == 2
    assert "at least dt" in capsys.readouterr().err


@pytest.mark.parametrize("broken", [
    {"algebra": "A", "rank": 1},
    {"algebra": "Z", "N": 1},
    {"algebra": "A", "rank": 1, "N": 1, "initial": {"q": [[0, 0, 0]], "p": [[0, 0, 0]]}},
    {"algebra": "A", "rank": 1, "N": 1, "integrator": {"scheme": "euler"}},
])
def test_malformed_configs(tmp_path, broken):
    assert main(["simulate", "--config", str(write(tmp_path, broken))]) == 2


def test_unparseable_file(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    assert main(["verify", "--config", str(path)]) == 2
    assert main(["verify", "--config", str(tmp_path / "missing.json")]) == 2


def test_blowup_exit_code(tmp_path):
    cfg = {"algebra": "A", "rank": 1, "N": 1,
           "initial": {"preset": "zero-velocity", "q": [[30.0, 0.0]]},
           "integrator": {"dt": 0.1, "T": 1.0}}
    assert main(["simulate", "--config", str(write(tmp_path, cfg))]) == 3


def test_solve_factorized_and_jet_agree(tmp_path):
    base = {"algebra": "A", "rank": 1, "N": 2,
            "initial": {"chart": "sl2-rescaled", "q": [[0.2, -0.1, 0.4]], "p": [[0.3, 0.5, -0.2]]},
            "integrator": {"dt": 0.05, "T": 1.0}}
    for kind in ("factorized", "jet"):
        cfg = dict(base, solver={"kind": kind}, outputs={"trajectory_csv": f"{kind}.csv"})
        assert main(["solve", "--config", str(write(tmp_path, cfg, f"{kind}.json"))]) == 0
    h1, a = read_csv(tmp_path / "factorized.csv")
    h2, b = read_csv(tmp_path / "jet.csv")
    assert h1 == h2 and a.shape == (21, len(h1))
    assert np.max(np.abs(a - b)) <= 1e-10


def test_solve_factorized_on_sl3_is_unavailable(tmp_path):
    cfg = {"algebra": "A", "rank": 2, "N": 1,
           "initial": {"preset": "zero-velocity", "q": [[0, 0], [0, 0]]},
           "solver": {"kind": "factorized"}}
    assert main(["solve", "--config", str(write(tmp_path, cfg))]) == 4


def test_solve_soliton_order_zero_column(tmp_path):
    cfg = {"algebra": "lattice", "window": [-10, 10], "N": 1,
           "integrator": {"dt": 0.25, "T": 2.0},
           "solver": {"kind": "soliton", "x0": [0.7, 0.1], "x1": [0.2, -0.3], "sites": [-1, 0, 3], "sign": -1},
           "outputs": {"trajectory_csv": "sol.csv"}}
    assert main(["solve", "--config", str(write(tmp_path, cfg))]) == 0
    header, data = read_csv(tmp_path / "sol.csv")
    assert header == ["t", "r_-1_0", "r_-1_1", "r_0_0", "r_0_1", "r_3_0", "r_3_1"]
    k0 = 0.5 * math.acosh(2 * math.exp(0.5) - 1)
    for row in data:
        for col, j in ((1, -1), (3, 0), (5, 3)):
            assert row[col] == pytest.approx(toda_order0(j, row[0], k0, -1), abs=1e-13)


def test_solve_soliton_needs_lattice(tmp_path):
    cfg = {"algebra": "A", "rank": 1, "N": 1, "solver": {"kind": "soliton", "x0": [1, 0], "x1": [0, 0]}}
    assert main(["solve", "--config", str(write(tmp_path, cfg))]) == 4


def test_verify_default_sl2(tmp_path, capsys):
    cfg = {"algebra": "A", "rank": 1, "N": 2, "outputs": {"report_json": "report.json"}}
    assert main(["verify", "--config", str(write(tmp_path, cfg))]) == 0
    report = json.loads((tmp_path / "report.json").read_text())
    assert all(v["pass"] for v in report.values())
    assert set(report) >= {"ring_axioms", "darboux_roundtrip", "lax_residual", "bracket_commutation"}
    for v in report.values():
        assert set(v) >= {"pass", "worst_value", "tolerance"}


def test_verify_singular_pairing(tmp_path, capsys):
    cfg = {"algebra": "custom", "pairing": [[1.0, 2.0], [2.0, 4.0]], "N": 1}
    assert main(["verify", "--config", str(write(tmp_path, cfg))]) == 5
    report = json.loads(capsys.readouterr().out)
    assert not report["darboux_roundtrip"]["pass"]
    assert "SingularPairingError" in report["darboux_roundtrip"]["error"]


def test_verify_unknown_check_is_config_error(tmp_path):
    cfg = {"algebra": "A", "rank": 1, "N": 1, "verify": ["nope"]}
    assert main(["verify", "--config", str(write(tmp_path, cfg))]) == 2


def test_parse_config_resolves_relative_paths(tmp_path):
    cfg = parse_config({"algebra": "A", "rank": 1, "N": 0, "outputs": {"trajectory_csv": "x/y.csv"}}, tmp_path)
    assert cfg.output_path("trajectory_csv") == tmp_path / "x" / "y.csv"
    with pytest.raises(ConfigError):
        parse_config([1, 2])


@pytest.mark.parametrize("name,command", [
    ("sl2_n2_zero_velocity.json", "simulate"),
    ("sl3_n2.json", "simulate"),
    ("sl2_jet_solve.json", "solve"),
    ("soliton.json", "solve"),
    ("verify_sl2_n2.json", "verify"),
])
def test_shipped_configs_run(tmp_path, name, command):
    data = json.loads((CONFIGS / name).read_text())
    data["outputs"] = {k: str(tmp_path / Path(v).name) for k, v in data.get("outputs", {}).items()}
    assert main([command, "--config", str(write(tmp_path, data))]) == 0
