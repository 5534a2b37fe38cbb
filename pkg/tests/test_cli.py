"""End-to-end runs of the command-line entry point."""

import numpy as np
import pytest
import yaml

from multipath_dpe.cli import main
from multipath_dpe.scenario import load_preset

TINY = [
    "--set",
    "trials=2",
    "--set",
    "duration=0.4",
    "--set",
    "grid.half_extent=3.0",
    "--set",
    "name=clitiny",
]


def test_missing_subcommand_is_usage_error(capsys):
    with pytest.raises(SystemExit) as err:
        main([])
    assert err.value.code == 2
    capsys.readouterr()


def test_unknown_flag_is_usage_error(capsys):
    with pytest.raises(SystemExit) as err:
        main(["simulate", "--scenario", "ci_single_bs", "--bogus"])
    assert err.value.code == 2
    capsys.readouterr()


def test_missing_scenario_file_returns_2(tmp_path, capsys):
    code = main(["simulate", "--scenario", str(tmp_path / "absent.yaml"), "--out", str(tmp_path)])
    assert code == 2
    assert "error" in capsys.readouterr().err


def test_bad_override_returns_1(tmp_path, capsys):
    code = main(
        ["simulate", "--scenario", "ci_single_bs", "--out", str(tmp_path), "--set", "trials=0"]
    )
    assert code == 1
    assert "trials" in capsys.readouterr().err


def test_simulate_writes_rmse_and_traces(tmp_path, capsys):
    code = main(["simulate", "--scenario", "ci_single_bs", "--out", str(tmp_path)] + TINY)
    assert code == 0
    out = capsys.readouterr().out
    assert "clitiny" in out and "final RMSE" in out
    assert (tmp_path / "rmse_clitiny.csv").exists()
    traces = sorted(tmp_path.glob("trace_clitiny_*.csv"))
    assert len(traces) == 2


def test_simulate_no_traces(tmp_path, capsys):
    code = main(
        ["simulate", "--scenario", "ci_single_bs", "--out", str(tmp_path), "--no-traces"] + TINY
    )
    assert code == 0
    capsys.readouterr()
    assert (tmp_path / "rmse_clitiny.csv").exists()
    assert list(tmp_path.glob("trace_*.csv")) == []


def test_simulate_reruns_bitwise_identical(tmp_path, capsys):
    dir_a = tmp_path / "a"
    dir_b = tmp_path / "b"
    assert main(["simulate", "--scenario", "ci_single_bs", "--out", str(dir_a)] + TINY) == 0
    assert main(["simulate", "--scenario", "ci_single_bs", "--out", str(dir_b)] + TINY) == 0
    capsys.readouterr()
    assert (dir_a / "rmse_clitiny.csv").read_bytes() == (dir_b / "rmse_clitiny.csv").read_bytes()
    assert (
        dir_a / "trace_clitiny_0.csv"
    ).read_bytes() == (dir_b / "trace_clitiny_0.csv").read_bytes()


def test_seed_flag_changes_header_and_results(tmp_path, capsys):
    dir_a = tmp_path / "a"
    dir_b = tmp_path / "b"
    args_a = ["simulate", "--scenario", "ci_single_bs", "--out", str(dir_a), "--no-traces"] + TINY
    args_b = args_a[:4] + [str(dir_b)] + args_a[5:] + ["--seed", "7"]
    assert main(args_a) == 0
    assert main(args_b) == 0
    capsys.readouterr()
    text_a = (dir_a / "rmse_clitiny.csv").read_text()
    text_b = (dir_b / "rmse_clitiny.csv").read_text()
    assert "# master_seed=7" in text_b
    assert "# master_seed=7" not in text_a
    assert text_a != text_b


def test_scenario_file_round_trip(tmp_path, capsys):
    scenario = load_preset("ci_single_bs", overrides=["trials=1", "duration=0.3", "name=fromfile"])
    path = tmp_path / "scene.yaml"
    path.write_text(yaml.safe_dump(scenario.to_dict()))
    code = main(["simulate", "--scenario", str(path), "--out", str(tmp_path), "--no-traces"])
    assert code == 0
    capsys.readouterr()
    assert (tmp_path / "rmse_fromfile.csv").exists()


def test_feasibility_report(capsys):
    assert main(["feasibility"]) == 0
    out = capsys.readouterr().out
    assert "snapshots          16" in out
    assert "bandwidth interval [5.1, 37.5] kHz" in out
    assert "100 m" in out and "20 m" in out


def test_feasibility_too_slow_fading_returns_1(capsys):
    code = main(["feasibility", "--doppler-spread", "30000"])
    assert code == 1
    assert "coherence" in capsys.readouterr().err


def test_feasibility_empty_interval_returns_1(capsys):
    # long explicit coherence time keeps the window valid, so only the
    # bandwidth interval check can reject
    code = main(["feasibility", "--doppler-spread", "30000", "--coherence-time", "1.0"])
    assert code == 1
    assert "empty" in capsys.readouterr().err


def test_feasibility_sweep_csv(tmp_path, capsys):
    assert main(["feasibility", "--out", str(tmp_path)]) == 0
    capsys.readouterr()
    lines = (tmp_path / "feasibility_sweep.csv").read_text().splitlines()
    assert lines[0] == "bandwidth_hz,sampling_interval_s"
    assert len(lines) > 10


def test_spectrum_writes_grid_csv(tmp_path, capsys):
    scenario = load_preset("ci_single_bs")
    code = main(["spectrum", "--scenario", "ci_single_bs", "--out", str(tmp_path)])
    assert code == 0
    assert "top angles" in capsys.readouterr().out
    lines = (tmp_path / "spectrum_ci_single_bs.csv").read_text().splitlines()
    header_rows = [line for line in lines if line.startswith("#")]
    assert any("config_hash=" in line for line in header_rows)
    body = [line for line in lines if line and not line.startswith("#")]
    assert body[0] == "angle_rad,power"
    assert len(body) - 1 == scenario.music_grid_points
    angles = np.array([float(line.split(",")[0]) for line in body[1:]])
    assert np.all(np.diff(angles) > 0)
    assert np.all(np.abs(angles) < np.pi / 2)


def test_validate_passes(capsys):
    assert main(["validate"]) == 0
    out = capsys.readouterr().out
    assert "[FAIL]" not in out
    assert out.count("[PASS]") >= 8
