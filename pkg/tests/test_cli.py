import json

import pytest

from monotone_markov_models import EmptySampleError, NonFiniteSampleError, cli
from monotone_markov_models.cli import main
from monotone_markov_models.const import ExitCode


def simulate(tmp_path, name, *extra):
    out = tmp_path / name
    code = main(["simulate", "--seed", "7", "--out", str(out), *extra])
    return code, out


def test_version_and_usage_errors():
    assert main(["--version"]) == 0
    assert main([]) == ExitCode.BAD_CONFIG
    assert main(["simulate", "--model", "ou", "--out", "x.csv"]) == ExitCode.BAD_CONFIG
    assert main(["simulate", "--model", "ou", "--config", "a.json", "--seed", "1", "--out", "x.csv"]) == 2


def test_simulate_is_reproducible(tmp_path):
    code_a, first = simulate(tmp_path, "a.csv", "--model", "income-drift", "--horizon", "200")
    code_b, second = simulate(tmp_path, "b.csv", "--model", "income-drift", "--horizon", "200")
    assert code_a == code_b == ExitCode.OK
    assert first.read_bytes() == second.read_bytes()
    assert (tmp_path / "a_jumps.csv").read_bytes() == (tmp_path / "b_jumps.csv").read_bytes()
    assert first.read_text().splitlines()[0] == "t,X_t"


def test_simulate_ou_at_zero_horizon(tmp_path):
    code, out = simulate(tmp_path, "ou.csv", "--model", "ou", "--horizon", "0", "--from", "10")
    assert code == ExitCode.OK
    assert out.read_text().splitlines() == ["t,X_t", "0,10"]


def test_simulate_discrete_model_in_steps(tmp_path):
    code, out = simulate(tmp_path, "belief.csv", "--model", "belief", "--steps", "25")
    assert code == ExitCode.OK
    assert len(out.read_text().splitlines()) == 27


def test_simulate_from_config_file(tmp_path):
    config = tmp_path / "flip.json"
    config.write_text(json.dumps({"reflection": {"slope": 0.3, "noise_sd": 2.0}}))
    code, _ = simulate(tmp_path, "flip.csv", "--config", str(config), "--steps", "5")
    assert code == ExitCode.OK


@pytest.mark.parametrize(
    "args",
    [
        ["--model", "no-such-model"],
        ["--model", "ou", "--horizon", "-1"],
        ["--model", "belief", "--steps", "-3"],
    ],
)
def test_simulate_bad_configuration(tmp_path, args):
    code, _ = simulate(tmp_path, "bad.csv", *args)
    assert code == ExitCode.BAD_CONFIG


def test_simulate_invalid_config_file(tmp_path):
    config = tmp_path / "bad.json"
    config.write_text(json.dumps({"ou": {"theta": 1.0}}))
    code, _ = simulate(tmp_path, "bad.csv", "--config", str(config))
    assert code == ExitCode.BAD_CONFIG


def test_converge_writes_csv_and_summary(tmp_path, capsys):
    out = tmp_path / "ou_curve.csv"
    code = main(["converge", "--model", "ou", "--seed", "3", "--from", "10", "--checkpoints", "0.5,1,2",
                 "--n-paths", "2000", "--out", str(out)])
    assert code == ExitCode.OK
    summary = json.loads(capsys.readouterr().out)
    assert summary["model"] == "ou"
    assert summary["n_paths"] == 2000
    assert json.loads((tmp_path / "ou_curve.csv.json").read_text()) == summary
    assert out.read_text().splitlines()[0] == "t,beta_hat,bound"


def test_converge_without_closed_form(tmp_path):
    out = tmp_path / "curve.csv"
    args = ["converge", "--model", "income-jump", "--seed", "3", "--out", str(out)]
    assert main(args + ["--target", "analytic"]) == ExitCode.BAD_CONFIG
    assert main(args + ["--from", "high", "--target-size", "1000"]) == ExitCode.BAD_CONFIG


def test_tail_on_synthetic_pareto(tmp_path, capsys):
    out = tmp_path / "tail.json"
    code = main(["tail", "--seed", "5", "--synthetic-alpha", "2", "--n-events", "50000", "--out", str(out)])
    assert code == ExitCode.OK
    estimate = json.loads(out.read_text())
    assert estimate["alpha"] == pytest.approx(2.0, rel=0.15)
    assert estimate["theoretical_alpha"] == 2.0
    assert json.loads(capsys.readouterr().out) == estimate


def test_tail_with_too_few_events():
    assert main(["tail", "--seed", "5", "--synthetic-alpha", "2", "--n-events", "50"]) == ExitCode.INSUFFICIENT_TAIL


@pytest.mark.parametrize("error", [NonFiniteSampleError(), EmptySampleError()])
def test_bad_samples_map_to_a_simulation_error(monkeypatch, error):
    def failing_estimate(*args, **kwargs):
        raise error

    monkeypatch.setattr(cli, "hill_tail_exponent", failing_estimate)
    assert main(["tail", "--seed", "5", "--synthetic-alpha", "2", "--n-events", "1000"]) == ExitCode.SIMULATION_ERROR


def test_check_passes_for_a_monotone_model(capsys):
    code = main(["check", "--model", "ou", "--seed", "1", "--trials", "200", "--steps", "10",
                 "--n-paths", "1000", "--horizon", "5"])
    assert code == ExitCode.OK
    output = capsys.readouterr().out
    assert "PASS monotone coupling" in output


def test_check_passes_every_certificate_for_the_wage_ladder(capsys):
    code = main(["check", "--model", "wage", "--seed", "1"])
    assert code == ExitCode.OK
    output = capsys.readouterr().out
    for name in ["monotone coupling", "monotone flags", "monotone mixing", "order reversal", "tightness"]:
        assert f"PASS {name}" in output
    assert "FAIL" not in output


def test_check_finds_stable_belief_intervals(capsys):
    code = main(["check", "--model", "belief", "--seed", "1", "--n-paths", "2000"])
    assert code == ExitCode.OK
    output = capsys.readouterr().out
    assert "PASS monotone coupling" in output
    assert "PASS tightness" in output


def test_check_fails_for_the_order_reversing_model(capsys):
    code = main(["check", "--model", "flip", "--seed", "1", "--trials", "200", "--steps", "10",
                 "--n-paths", "1000", "--horizon", "5"])
    assert code == ExitCode.CHECK_FAILED
    assert "FAIL monotone coupling" in capsys.readouterr().out


def test_figure_outputs(tmp_path):
    code = main(["figure", "--id", "wage", "--seed", "11", "--horizon", "50", "--grid-points", "11",
                 "--n-paths", "1000", "--out-dir", str(tmp_path)])
    assert code == ExitCode.OK
    path_lines = (tmp_path / "wage_path.csv").read_text().splitlines()
    assert path_lines[0] == "t,X_t,w_t"
    assert len(path_lines) == 12
    jumps = (tmp_path / "wage_jumps.csv").read_text().splitlines()
    assert jumps[0] == "T_n,Z_n,event"
    assert jumps[1].endswith(",start")
    assert all(line.split(",")[2] in ("destruction", "offer") for line in jumps[2:])
    assert len((tmp_path / "wage_histogram.csv").read_text().splitlines()) == 101
    assert (tmp_path / "wage_stationary.csv").exists()


def test_figure_rejects_unknown_id(tmp_path):
    assert main(["figure", "--id", "ou", "--seed", "1", "--out-dir", str(tmp_path)]) == ExitCode.BAD_CONFIG
