import csv
import io
import json
import subprocess
import sys

import pytest

from chowla_ff.chowla import SWEEP_COLUMNS
from chowla_ff.cli import RunConfig, main, parse_q_list

SWEEP_ARGS = ["sweep", "--n", "2", "--r", "2", "--eps", "1,2", "--q", "3,5,7,9,11,13"]


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_corr_value(capsys):
    code, out, _ = run(["corr", "--p", "3", "--n", "2", "--alpha", "0", "--alpha", "1", "--eps", "1,1"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["value"] == -3 and doc["agree"]
    assert [r["method"] for r in doc["results"]] == ["direct", "charsum"]


def test_corr_csv_single_method(capsys):
    code, out, _ = run(["corr", "--q", "5", "--n", "2", "--r", "2", "--method", "charsum", "--format", "csv"], capsys)
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 1 and rows[0]["method"] == "charsum" and rows[0]["value"] == "-5"


def test_corr_polynomial_shift(capsys):
    # --alpha 1,0,2 is 1 + 2x^2
    code, out, _ = run(["corr", "--p", "5", "--n", "3", "--alpha", "0", "--alpha", "1,0,2", "--eps", "1,2"], capsys)
    assert code == 0
    assert json.loads(out)["spec"]["alphas"] == [[], [1, 0, 2]]


def test_sweep_csv(capsys):
    code, out, _ = run(SWEEP_ARGS, capsys)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == ",".join(SWEEP_COLUMNS)
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 6
    for row in rows:
        assert row["status"] == "ok"
        assert row["C_direct"] == row["C_charsum"]
        assert abs(int(row["C_direct"])) <= float(row["bound"])
        assert len(row["normalized"].split(".")[1]) == 6


def test_sweep_deterministic_across_workers(capsys):
    outs = []
    for w in ("1", "4"):
        code, out, _ = run(SWEEP_ARGS + ["--no-timing", "--workers", w], capsys)
        assert code == 0
        outs.append(out)
    assert outs[0] == outs[1]


def test_sweep_json(capsys):
    code, out, _ = run(SWEEP_ARGS + ["--format", "json", "--no-timing"], capsys)
    doc = json.loads(out)
    assert code == 0 and len(doc) == 6 and list(doc[0]) == list(SWEEP_COLUMNS)


def test_sweep_to_file(tmp_path, capsys):
    path = tmp_path / "sweep.csv"
    code, out, _ = run(SWEEP_ARGS + ["-o", str(path)], capsys)
    assert code == 0 and out == ""
    assert path.read_text().count("\n") == 7


def test_badset_json(capsys):
    code, out, _ = run(["badset", "--p", "7", "--n", "3", "--alpha", "0", "--alpha", "1", "--eps", "1,1"], capsys)
    assert code == 0
    rep = json.loads(out)["report"]
    assert rep["count_A"] == 7 and rep["bounds_hold"] and rep["cover_holds"]


def test_verify_char3_degree3(capsys):
    code, out, _ = run(["verify", "--p", "3", "--k", "2", "--n", "3"], capsys)
    assert code == 0
    assert "FAIL" not in out
    assert "deg D_f" in out


def test_selftest_quick(capsys):
    code, out, _ = run(["selftest", "--quick"], capsys)
    assert code == 0
    assert out.strip().endswith("checks passed")


def test_config_file_and_flag_precedence(tmp_path, capsys):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"p": 5, "n": 2, "alpha": ["0", "1"], "eps": [1, 1], "method": "direct"}))
    code, out, _ = run(["corr", "--config", str(cfg)], capsys)
    assert code == 0 and json.loads(out)["spec"]["q"] == 5
    code, out, _ = run(["corr", "--config", str(cfg), "--p", "3"], capsys)
    assert code == 0 and json.loads(out)["value"] == -3


def test_sweep_config_with_per_q_shifts(tmp_path, capsys):
    cfg = tmp_path / "sweep.json"
    cfg.write_text(json.dumps({"n": 2, "r": 2, "eps": "1,1", "q": [3, 5], "alphas_by_q": {"5": ["0", "0,1"]}}))
    code, out, _ = run(["sweep", "--config", str(cfg), "--no-timing"], capsys)
    assert code == 0
    assert len(out.splitlines()) == 3


@pytest.mark.parametrize("argv", [
    ["corr", "--p", "3", "--n", "2", "--eps", "2,2"],
    ["corr", "--p", "4", "--n", "2", "--r", "2"],
    ["corr", "--p", "2", "--n", "2", "--r", "2"],
    ["corr", "--p", "3", "--r", "2"],
    ["corr", "--p", "3", "--n", "2", "--alpha", "0", "--alpha", "0"],
    ["corr", "--p", "3", "--n", "2", "--r", "2", "--budget", "0"],
    ["corr", "--p", "3", "--n", "2", "--r", "2", "--config", "/nonexistent.json"],
    ["sweep", "--n", "2", "--r", "3", "--eps", "1,1", "--q", "3"],
])
def test_config_errors_exit_2(argv, capsys):
    code, _, err = run(argv, capsys)
    assert code == 2 and err.startswith("error:")


def test_unknown_config_key(tmp_path, capsys):
    cfg = tmp_path / "bad.json"
    cfg.write_text(json.dumps({"n": 2, "colour": "blue"}))
    assert run(["corr", "--config", str(cfg)], capsys)[0] == 2


def test_budget_exit_3(capsys, monkeypatch):
    code, _, err = run(["corr", "--p", "3", "--n", "2", "--r", "2", "--budget", "5"], capsys)
    assert code == 3 and "18" in err
    monkeypatch.setenv("CHOWLA_FF_BUDGET", "10")
    code, _, err = run(SWEEP_ARGS, capsys)
    assert code == 3 and "needs" in err
    assert run(["verify", "--p", "3", "--n", "9", "--budget", "1000"], capsys)[0] == 3


def test_failed_check_exit_1(capsys, monkeypatch):
    import chowla_ff.cli as cli
    from chowla_ff.chowla import CorrelationResult

    real = cli.correlation_charsum

    def broken(spec, budget=None, workers=1):
        r = real(spec, budget, workers)
        return CorrelationResult(r.value + 1, r.q, r.n, r.r, r.bound, r.bound_ceiling, r.trivial_bound, r.method)

    monkeypatch.setattr(cli, "correlation_charsum", broken)
    code, _, err = run(["corr", "--p", "3", "--n", "2", "--r", "2"], capsys)
    assert code == 1
    assert "'q': 3" in err and "[-3, -2]" in err


def test_parse_q_list():
    assert parse_q_list("3-13") == [3, 5, 7, 9, 11, 13]
    assert parse_q_list("3,25,27-29") == [3, 25, 27, 29]


def test_run_config_validation():
    with pytest.raises(ValueError):
        RunConfig(command="frobnicate")
    with pytest.raises(ValueError):
        RunConfig(command="corr", workers=0)


def test_console_script_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "chowla_ff.cli", "corr", "--p", "3", "--n", "2", "--alpha", "0", "--alpha", "1", "--eps", "1,1"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0 and json.loads(proc.stdout)["value"] == -3
