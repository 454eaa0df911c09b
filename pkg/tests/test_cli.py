"""End-to-end CLI tests: file outputs, determinism, exit codes."""
import csv
import json
import subprocess
import sys

import jsonschema
import numpy as np
import pytest

from pdem.cli import parse_alpha
from pdem.verify import REPORT_SCHEMA


def run_cli(*args, cwd=None):
    return subprocess.run([sys.executable, "-m", "pdem", *args],
                          capture_output=True, text=True, cwd=cwd)


def read_csv(path):
    with open(path, newline="") as fh:
        first = fh.readline()
        assert first.startswith("# config = ")
        config = json.loads(first[len("# config = "):])
        rows = list(csv.DictReader(fh))
    return config, rows


def test_help():
    res = run_cli("--help")
    assert res.returncode == 0
    for cmd in ("eigen", "cs", "observables", "figures", "verify"):
        assert cmd in res.stdout


def test_parse_alpha():
    assert parse_alpha("1.5") == 1.5 + 0.0j
    assert parse_alpha("1+0.5i") == 1.0 + 0.5j
    assert parse_alpha("-2i") == -2.0j
    from pdem.cli import ConfigError
    with pytest.raises(ConfigError):
        parse_alpha("abc")


def test_eigen_output(tmp_path):
    res = run_cli("eigen", "--n", "0,1", "--out", str(tmp_path))
    assert res.returncode == 0
    for n in (0, 1):
        config, rows = read_csv(tmp_path / f"eigen_n{n}.csv")
        assert config["lambda"] == 2.0
        assert len(rows) == config["grid"]["n"] == 801
        psi = np.array([float(r["psi"]) for r in rows])
        dens = np.array([float(r["density"]) for r in rows])
        assert np.max(np.abs(dens - psi * psi)) < 1e-15
        x = np.array([float(r["x"]) for r in rows])
        assert np.trapezoid(dens, x) == pytest.approx(1.0, abs=1e-6)


def test_eigen_deterministic(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert run_cli("eigen", "--n", "2", "--out", str(a)).returncode == 0
    assert run_cli("eigen", "--n", "2", "--out", str(b)).returncode == 0
    first = (a / "eigen_n2.csv").read_bytes()
    second = (b / "eigen_n2.csv").read_bytes()
    assert first == second
    assert b"\r" not in first  # LF only


def test_cs_output(tmp_path):
    res = run_cli("cs", "--alpha", "1,1+0.5i", "--t", "0,3", "--out", str(tmp_path))
    assert res.returncode == 0
    config, rows = read_csv(tmp_path / "cs.csv")
    assert len(rows) == 2 * 2 * 801
    labels = {(r["alpha_re"], r["alpha_im"]) for r in rows}
    assert len(labels) == 2
    assert all(float(r["density"]) >= 0.0 for r in rows)


def test_observables_json(tmp_path):
    res = run_cli("observables", "--alpha", "0.5,2", "--format", "json",
                  "--out", str(tmp_path))
    assert res.returncode == 0
    payload = json.loads((tmp_path / "observables.json").read_text())
    assert len(payload["rows"]) == 2
    for row in payload["rows"]:
        assert row["product"] == pytest.approx(row["bound"], abs=1e-9)
        assert abs(row["sum_identity_residual"]) < 1e-9
        assert row["varH"] >= 0.0


def test_config_file_round_trip(tmp_path):
    cfg = {
        "units": "atomic",
        "lambda": 1.0,
        "grid": {"xmin": -8.0, "xmax": 16.0, "n": 401},
        "truncation": {"tol": 1e-10, "cap": 300},
    }
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps(cfg))
    res = run_cli("eigen", "--n", "0", "--config", str(cfg_path), "--out", str(tmp_path))
    assert res.returncode == 0
    echoed, rows = read_csv(tmp_path / "eigen_n0.csv")
    assert echoed["lambda"] == 1.0
    assert echoed["grid"] == {"xmin": -8.0, "xmax": 16.0, "n": 401}
    assert len(rows) == 401


def test_figures_output(tmp_path):
    res = run_cli("figures", "--out", str(tmp_path))
    assert res.returncode == 0
    cfg1, rows1 = read_csv(tmp_path / "fig1.csv")
    assert len(rows1) == 3 * 3 * 801
    cfg2, rows2 = read_csv(tmp_path / "fig2.csv")
    assert len(rows2) == 3 * 41 * 281
    assert all(float(r["density"]) >= 0.0 for r in rows1)


def test_verify_success(tmp_path):
    res = run_cli("verify", "--out", str(tmp_path))
    assert res.returncode == 0
    assert "overall: PASS" in res.stdout
    assert res.stdout.count("[PASS]") == 15
    report = json.loads((tmp_path / "verify_report.json").read_text())
    jsonschema.validate(report, REPORT_SCHEMA)
    assert report["pass"] is True


def test_verify_fault_injection(tmp_path):
    res = run_cli("verify", "--out", str(tmp_path), "--inject-fault", "spectrum")
    assert res.returncode == 1
    assert "[FAIL]" in res.stdout
    report = json.loads((tmp_path / "verify_report.json").read_text())
    jsonschema.validate(report, REPORT_SCHEMA)
    assert report["pass"] is False


def test_bad_config_exit_code(tmp_path):
    missing = run_cli("eigen", "--config", str(tmp_path / "nope.json"))
    assert missing.returncode == 2
    bad_json = tmp_path / "bad.json"
    bad_json.write_text("{not json")
    res = run_cli("eigen", "--config", str(bad_json))
    assert res.returncode == 2
    assert "error:" in res.stderr


def test_bad_profile_exit_code(tmp_path):
    res = run_cli("eigen", "--profile", "cubic", "--out", str(tmp_path))
    assert res.returncode == 2


def test_bad_alpha_exit_code(tmp_path):
    res = run_cli("cs", "--alpha", "zzz", "--out", str(tmp_path))
    assert res.returncode == 2
