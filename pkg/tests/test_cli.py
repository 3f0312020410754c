"""Command line surface: parsing, output formats, exit codes, determinism."""

import csv
import io
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from quasirel import cli, default_rng, random_pair, save_pair
from quasirel.cli import main, parse_dims, render_rows
from quasirel.states import state_pair


def _csv_rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def _run(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_parse_dims():
    assert parse_dims("2,4..6,9") == [2, 4, 5, 6, 9]
    assert parse_dims("3") == [3]
    with pytest.raises(ValueError):
        parse_dims("4..2")
    with pytest.raises(ValueError):
        parse_dims("two")


def test_render_rows_formats():
    rows = [{"x": 0.1, "flag": True, "name": "a"}]
    text = render_rows(rows, ["x", "flag", "name"], "csv")
    assert text.splitlines()[0] == "x,flag,name"
    assert text.splitlines()[1] == "0.10000000000000001,true,a"
    doc = json.loads(render_rows(rows, ["x", "flag", "name"], "json"))
    assert doc[0]["flag"] is True


def test_paper_example_frozen_rows(capsys):
    code, out, _ = _run(capsys, ["paper-example", "--dims", "3..16"])
    assert code == 0
    rows = _csv_rows(out)
    assert len(rows) == 14
    by_d = {int(r["d"]): r for r in rows}
    for d, row in by_d.items():
        assert float(row["trace_dist"]) == pytest.approx(2.0 - 4.0 / d, abs=1e-12)
    assert float(by_d[5]["new_bound"]) == pytest.approx(1.2, abs=1e-12)
    assert by_d[5]["winner_per_base"] == "e=old;2=tie"
    assert float(by_d[10]["trace_dist"]) == pytest.approx(1.6, abs=1e-12)
    assert float(by_d[10]["new_bound"]) < float(by_d[10]["ae11_natural"])
    assert "ae11_natural" in rows[0]


def test_divergence_on_saved_pair(tmp_path, capsys):
    rng = default_rng(61)
    pair = random_pair(3, rng)
    path = tmp_path / "pair.json"
    save_pair(path, pair, seed=61)
    code, out, err = _run(
        capsys, ["divergence", "--pair-file", str(path), "--f", "neg-log"]
    )
    assert code == 0
    rows = _csv_rows(out)
    methods = {r["method"] for r in rows}
    assert methods == {"spectral", "superoperator", "direct"}
    values = [float(r["value"]) for r in rows]
    assert max(values) - min(values) < 1e-9 * max(values)


def test_divergence_identical_states_is_zero(tmp_path, capsys):
    rng = default_rng(62)
    rho = random_pair(3, rng).rho
    path = tmp_path / "same.json"
    save_pair(path, state_pair(rho, rho))
    code, out, _ = _run(
        capsys, ["divergence", "--pair-file", str(path), "--q", "1.5"]
    )
    assert code == 0
    for row in _csv_rows(out):
        assert abs(float(row["value"])) < 1e-12


def test_divergence_rejects_both_generators(capsys):
    code, _, err = _run(
        capsys, ["divergence", "--f", "neg-log", "--q", "0.5"]
    )
    assert code == 3
    assert "error" in err


def test_bounds_command_clean(capsys):
    code, out, _ = _run(
        capsys, ["bounds", "--dims", "2", "--seed", "5", "--f", "neg-log"]
    )
    assert code == 0
    rows = _csv_rows(out)
    names = {r["bound_name"] for r in rows}
    assert "pinsker_lower" in names
    assert "ae11_upper" in names
    for row in rows:
        if row["applicable"] == "true" and row["slack"]:
            assert float(row["slack"]) >= -1e-10


def test_sweep_deterministic_across_jobs(tmp_path, capsys):
    argv = ["sweep", "--dims", "2,3", "--trials", "6", "--seed", "9",
            "--f", "neg-log", "--q", "0.5"]
    out1 = tmp_path / "a.csv"
    out2 = tmp_path / "b.csv"
    assert main(argv + ["--out", str(out1), "--jobs", "1"]) == 0
    assert main(argv + ["--out", str(out2), "--jobs", "3"]) == 0
    capsys.readouterr()
    assert out1.read_bytes() == out2.read_bytes()


def test_sweep_classical_pairs(capsys):
    code, out, err = _run(
        capsys, ["sweep", "--dims", "4", "--trials", "5", "--seed", "3",
                 "--pair-kind", "classical", "--f", "neg-log"]
    )
    assert code == 0
    rows = _csv_rows(out)
    # the commuting-gated bound applies beyond qubits here
    gated = [r for r in rows if r["bound_name"] == "qubit_classical_upper"]
    assert gated and all(r["applicable"] == "true" for r in gated)
    assert "zero violations" in err


def test_conjecture_stdout_record(capsys):
    code, out, err = _run(
        capsys, ["conjecture", "--dims", "3", "--trials", "30", "--seed", "12"]
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["trial_count"] == 30
    assert doc["max_ratio"] <= 1.0 + 1e-10
    assert "max_ratio" in err


def test_repr_check_reports_ok(capsys):
    code, out, _ = _run(capsys, ["repr-check", "--f", "neg-power:p=0.5"])
    assert code == 0
    rows = _csv_rows(out)
    assert len(rows) == 1
    assert rows[0]["ok"] == "true"
    assert float(rows[0]["max_rel_error"]) < 1e-6
    assert float(rows[0]["b"]) == pytest.approx(math.cos(math.pi / 4.0), abs=1e-12)


def test_repr_check_rejects_density_free_generator(capsys):
    code, _, err = _run(capsys, ["repr-check", "--f", "tsallis:q=2.0"])
    assert code == 3
    assert "error" in err


def test_config_file_and_flag_precedence(tmp_path, capsys):
    config = tmp_path / "cfg.json"
    config.write_text(json.dumps({"dims": "3", "trials": 4, "seed": 8}))
    code, out, _ = _run(
        capsys, ["sweep", "--config", str(config), "--f", "neg-log",
                 "--trials", "2"]
    )
    assert code == 0
    rows = _csv_rows(out)
    assert {r["dim"] for r in rows} == {"3"}  # from config
    assert len({r["pair_tag"] for r in rows}) == 2  # flag overrides config


def test_exit_code_parse_errors(tmp_path, capsys):
    with pytest.raises(SystemExit) as exc:
        main(["sweep", "--no-such-flag"])
    assert exc.value.code == 2
    capsys.readouterr()
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, _ = _run(capsys, ["sweep", "--config", str(bad)])
    assert code == 2
    listy = tmp_path / "list.json"
    listy.write_text("[1, 2]")
    assert main(["sweep", "--config", str(listy)]) == 2
    capsys.readouterr()


def test_exit_code_validation_errors(capsys):
    assert main(["sweep", "--dims", "1", "--f", "neg-log"]) == 3
    assert main(["divergence", "--f", "sinh"]) == 3
    assert main(["sweep", "--q", "1.0"]) == 3
    capsys.readouterr()


def test_exit_code_io_errors(tmp_path, capsys):
    missing_cfg = tmp_path / "nope.json"
    assert main(["sweep", "--config", str(missing_cfg)]) == 4
    target = tmp_path / "no-dir" / "out.csv"
    assert main(["paper-example", "--out", str(target)]) == 4
    capsys.readouterr()


def test_exit_code_verification_failure(monkeypatch, capsys):
    fake_row = {
        "dim": 2, "seed": 0, "pair_tag": "random:000000", "f_name": "neg-log",
        "q": "", "bound_name": "pinsker_lower", "bound_value": 1.0,
        "divergence": 0.5, "slack": -1.0, "applicable": True,
    }
    monkeypatch.setattr(
        cli, "sweep_bounds", lambda *a, **k: ([fake_row], [fake_row])
    )
    code, _, err = _run(capsys, ["sweep", "--dims", "2", "--trials", "1",
                                 "--f", "neg-log"])
    assert code == 5
    assert "negative-slack" in err


def test_console_entry_point_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "quasirel.cli", "paper-example", "--dims", "5"],
        capture_output=True, text=True, timeout=60,
    )
    assert proc.returncode == 0
    assert "1.2" in proc.stdout
