import json

import pandas as pd
import pytest
from scipy.optimize import OptimizeResult

from src.app.lab import GCFLab
from src.cli.config import (
    build_config,
    cell_updates,
    load_config,
    parse_assignments,
)
from src.cli.main import EXIT_CONFIG, EXIT_PASS, EXIT_PIPELINE, main
from src.cli.sweep import cell_config, sweep_cells
from src.common.errors import ConfigError


@pytest.fixture
def out_dir(tmp_path, monkeypatch):
    monkeypatch.setenv("GCF_LAB_OUT", str(tmp_path))
    return tmp_path


def test_parse_assignments():
    raw = parse_assignments(
        [
            "# flow settings",
            "n = 2",
            "alpha = 0.5  # principal regime",
            "",
            "cap_angles = 0.1, 0.01",
            "sweep.m = 1, 1.5",
        ]
    )
    assert raw == {
        "n": "2",
        "alpha": "0.5",
        "cap_angles": ["0.1", "0.01"],
        "sweep": {"m": ["1", "1.5"]},
    }
    with pytest.raises(ConfigError):
        parse_assignments(["no equals sign"])


def test_load_config_with_overrides(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("n = 2\nalpha = 0.5\nshape = spheroid\n")
    config = load_config(path, ["p=0.5", "snapshots=50"])
    assert config.n == 2
    assert config.p == pytest.approx(0.5)
    assert config.alpha == pytest.approx(2.0)
    assert config.snapshots == 50
    with pytest.raises(ConfigError):
        load_config(tmp_path / "missing.cfg")


def test_config_defaults_and_errors():
    config = build_config({"n": "1"})
    assert (config.alpha, config.p) == (1.0, 0.0)
    assert config.node_count == 64
    assert build_config({"p": "1.5"}).alpha is None
    with pytest.raises(ConfigError):
        build_config({"bogus": "1"})
    with pytest.raises(ConfigError):
        build_config({"alpha": "1", "p": "0.5"})
    with pytest.raises(ConfigError):
        build_config({"sweep": {"colour": ["1"]}})


def test_empty_config_is_rejected(tmp_path, out_dir):
    with pytest.raises(ConfigError):
        build_config({})
    with pytest.raises(ConfigError):
        load_config()
    blank = tmp_path / "blank.cfg"
    blank.write_text("# nothing set\n\n")
    with pytest.raises(ConfigError):
        load_config(blank, out=str(out_dir))
    assert load_config(overrides=["n=2"], out="elsewhere").out == "elsewhere"
    assert main(["flow"]) == EXIT_CONFIG
    assert not (out_dir / "summary.json").exists()


def test_sweep_cells_and_updates(tmp_path):
    config = build_config(
        {"n": 2, "out": str(tmp_path), "sweep": {"m": [1, 1.5], "n": [2]}}
    )
    cells = sweep_cells(config)
    assert cells == [{"m": 1.0, "n": 2.0}, {"m": 1.5, "n": 2.0}]
    assert cell_updates(config, cells[1]) == {
        "p": 0.5,
        "n": 2.0,
        "alpha": None,
    }
    cell = cell_config(config, cells[1])
    assert cell.p == pytest.approx(0.5)
    assert cell.alpha == pytest.approx(2.0)
    assert cell.sweep == {}
    assert cell.out == str(tmp_path / "m=1.5_n=2")


def test_unknown_key_exits_with_config_error(out_dir):
    assert main(["flow", "--set", "bogus=1"]) == EXIT_CONFIG
    assert main(["ode", "--config", str(out_dir / "nope.cfg")]) == EXIT_CONFIG


def test_bad_range_exits_with_pipeline_error(out_dir):
    argv = ["holder", "--set", "holder_source=chou_wang", "--set", "n=1"]
    assert main(argv + ["--set", "p=0"]) == EXIT_PIPELINE


def test_ode_command_writes_artifacts(out_dir):
    argv = ["ode", "--set", "n=2", "--set", "p=0", "--set", "mesh=512"]
    assert main(argv) == EXIT_PASS

    summary = json.loads((out_dir / "summary.json").read_text())
    assert list(summary) == sorted(summary)
    assert summary["command"] == "ode"
    assert summary["passed"] is True
    assert summary["checks"] == {"certified": True, "ode_residual": True}
    assert summary["config"]["mesh"] == 512
    profile = pd.read_csv(out_dir / "profile.csv")
    assert list(profile.columns) == [
        "r", "w", "w_r", "w_rr", "h", "h_r", "h_rr", "E"
    ]
    log = json.loads((out_dir / "convergence_log.json").read_text())
    assert log["certified"] is True
    assert (out_dir / "profile.svg").exists()


def test_holder_command_on_local_example(out_dir):
    argv = [
        "holder",
        "--set", "holder_source=chou_wang",
        "--set", "n=2",
        "--set", "p=0.5",
    ]
    assert main(argv) == EXIT_PASS
    summary = json.loads((out_dir / "summary.json").read_text())
    assert summary["results"]["k"] == 2
    assert all(summary["checks"].values())


def test_sweep_marks_failed_cells(out_dir):
    argv = [
        "sweep",
        "--set", "sweep_target=holder",
        "--set", "holder_source=chou_wang",
        "--set", "n=2",
        "--set", "sweep.p=1, 0.5",
        "--set", "plots=false",
    ]
    assert main(argv) == 1
    frame = pd.read_csv(out_dir / "sweep.csv")
    assert list(frame["key"]) == ["p=0.5", "p=1"]
    assert list(frame["verdict"]) == ["pass", "error"]
    assert (out_dir / "p=0.5" / "summary.json").exists()


def test_sweep_marks_inscribed_ball_failures(out_dir, monkeypatch):
    def infeasible(*args, **kwargs):
        return OptimizeResult(success=False, status=2, message="infeasible", x=None)

    monkeypatch.setattr("src.geometry.shape.linprog", infeasible)
    argv = [
        "sweep",
        "--set", "sweep_target=flow",
        "--set", "shape=ball",
        "--set", "sweep.alpha=1, 2",
        "--set", "plots=false",
    ]
    assert main(argv) == 1
    frame = pd.read_csv(out_dir / "sweep.csv")
    assert list(frame["verdict"]) == ["error", "error"]
    assert frame["error"].str.contains("inscribed ball LP failed").all()


def test_flow_run_on_round_circle(tmp_path):
    config = build_config(
        {
            "shape": "ball",
            "snapshots": 40,
            "plots": False,
            "out": str(tmp_path),
        }
    )
    outcome = GCFLab().run(config, "flow")
    assert outcome.passed
    assert outcome.results["terminated_by"] == "min_radius"
    assert outcome.results["inscribed_barrier_time"] == pytest.approx(0.5)
    frame = pd.read_csv(tmp_path / "trajectory.csv")
    assert list(frame.columns) == [
        "t", "lambda_max", "K_max", "inradius", "diameter", "F_max"
    ]


def test_bounds_run_on_round_sphere(tmp_path):
    config = build_config(
        {
            "n": 2,
            "alpha": 0.5,
            "shape": "ball",
            "t_end": 0.2,
            "plots": False,
            "out": str(tmp_path),
        }
    )
    outcome = GCFLab().execute(config, "bounds")
    assert outcome.checks == {
        "gauss": True,
        "lambda": True,
        "lambda_viscosity": True,
    }
    assert set(outcome.documents) == {
        "bound_gauss",
        "bound_lambda",
        "bound_lambda_viscosity",
    }


def test_soliton_run(tmp_path):
    config = build_config(
        {"p": 0.0, "snapshots": 40, "plots": False, "out": str(tmp_path)}
    )
    outcome = GCFLab().execute(config, "soliton")
    assert outcome.checks == {"self_similar": True}
    assert outcome.results["alpha"] == pytest.approx(1.0)


def test_measure_rejects_p_above_one(tmp_path):
    config = build_config({"n": 2, "p": 1.5, "out": str(tmp_path)})
    with pytest.raises(ConfigError):
        GCFLab().execute(config, "measure")


if __name__ == "__main__":
    pytest.main()
