import json
import shutil
import subprocess
import sys
from pathlib import Path

import pytest

from qclab.cli import Scenario, list_catalog, main, run_scenario, run_suite
from qclab.errors import ConfigError

SCEN = Path(__file__).resolve().parents[1] / "scenarios"


def _strip_timing(rep):
    rep = json.loads(json.dumps(rep, default=str))
    rep["provenance"].pop("timing")
    return rep


def test_identity_scenario_passes(tmp_path):
    assert main(["run", str(SCEN / "identity_laplace.ini"), "--out", str(tmp_path)]) == 0
    rep = json.loads((tmp_path / "identity_laplace.report.json").read_text())
    assert rep["passed"] and rep["results"]["collar_profile"]["verdict"] == "plateau"
    assert (tmp_path / "identity_laplace.solution.csv").exists()
    assert (tmp_path / "identity_laplace.collar.csv").exists()
    assert rep["scenario"]["boundary"]["expr"] == "exp(i*t)"


def test_runs_are_deterministic_modulo_timing(tmp_path):
    sc = Scenario.from_file(SCEN / "sphere_rho.ini").with_overrides(n=65, seed=7)
    a = run_scenario(sc, tmp_path / "a")
    b = run_scenario(sc, tmp_path / "b")
    assert _strip_timing(a) == _strip_timing(b)
    for name in ("solution", "mu"):
        fa = (tmp_path / "a" / f"sphere_rho.{name}.csv").read_bytes()
        assert fa == (tmp_path / "b" / f"sphere_rho.{name}.csv").read_bytes()


def test_echoed_config_round_trips(tmp_path):
    sc = Scenario.from_file(SCEN / "sphere_rho.ini")
    rep = run_scenario(sc.with_overrides(n=65))
    again = Scenario.from_dict(rep["scenario"])
    assert again.config == sc.with_overrides(n=65).config
    path = tmp_path / "echo.ini"
    path.write_text(again.to_ini())
    assert Scenario.from_file(path).config == again.config


def test_invalid_scenario_exits_2_without_output(tmp_path, capsys):
    out = tmp_path / "out"
    assert main(["run", str(SCEN / "invalid" / "bad_surface.ini"), "--out", str(out)]) == 2
    assert not out.exists()
    assert "klein_bottle" in capsys.readouterr().err


@pytest.mark.parametrize("cfg", [
    {"scenario": {"name": "x"}, "boundary": {"expr": "exp(i*t)"}, "solver": {"kind": "magic"}},
    {"scenario": {"name": "x", "n": "8"}, "boundary": {"expr": "exp(i*t)"}},
    {"scenario": {"name": "x"}, "boundary": {"expr": "exp(i*t)"}, "bogus": {}},
    {"scenario": {"name": "x", "colour": "red"}, "boundary": {"expr": "exp(i*t)"}},
    {"scenario": {"name": "x"}, "boundary": {"expr": "import os"}},
    {"scenario": {"name": "x"}, "boundary": {"expr": "exp(i*t)"},
     "diagnostics": {"run": "beltrami, telepathy"}},
])
def test_invalid_configs_raise(cfg):
    with pytest.raises(ConfigError):
        Scenario.from_dict(cfg)


def test_failing_expectation_gives_exit_1(tmp_path):
    text = (SCEN / "identity_laplace.ini").read_text().replace("k_max = 1e-6", "k_max = -1")
    (tmp_path / "strict.ini").write_text(text)
    assert main(["run", str(tmp_path / "strict.ini"), "--out", str(tmp_path / "o")]) == 1


def test_suite(tmp_path, capsys):
    d = tmp_path / "suite"
    d.mkdir()
    shutil.copy(SCEN / "identity_laplace.ini", d)
    assert main(["suite", str(d), "--out", str(tmp_path / "o")]) == 0
    assert "identity_laplace.ini" in capsys.readouterr().out
    shutil.copy(SCEN / "invalid" / "bad_surface.ini", d)
    rows, failed = run_suite(d)
    assert failed and [r["status"] for r in rows] == ["fail", "pass"]


def test_empty_suite_and_missing_directory(tmp_path):
    assert run_suite(tmp_path) == ([], False)
    assert main(["suite", str(tmp_path / "nope")]) == 2


def test_catalog_filter(capsys):
    assert main(["catalog", "surface"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines and all("surface" in line for line in lines)
    assert lines == sorted(lines)
    assert any(line.startswith("surface sphere_cap") for line in lines)
    assert list_catalog("no-such-entry") == []


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "qclab", "catalog", "solver"],
                         capture_output=True, text=True, check=True).stdout
    assert "solver laplace" in out
