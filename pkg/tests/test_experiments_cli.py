import json
import subprocess
import sys
from pathlib import Path

import pytest

from coherence_lab import ENGINE_VERSION, SCHEMA_VERSION
from coherence_lab.cli import main
from coherence_lab.config import ConfigError, from_dict, load_config
from coherence_lab.demazure_data import data_dir
from coherence_lab.experiments import dumps_report, example_config, run

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


@pytest.mark.parametrize("name", ["sweep_sl2.toml", "kk_sl3.toml", "fundamental_sl3.toml", "demazure_sl2.toml"])
def test_configs_pass(name):
    report = run(load_config(CONFIGS / name))
    assert report["passed"] and report["complete"]
    assert report["summary"]["counterexamples"] == []
    assert report["schema_version"] == SCHEMA_VERSION
    assert all(r["engine_version"] == ENGINE_VERSION for r in report["records"])


def test_report_is_reproducible_across_workers():
    one = dumps_report(run(load_config(CONFIGS / "sweep_sl2.toml", {"workers": 1})))
    two = dumps_report(run(load_config(CONFIGS / "sweep_sl2.toml", {"workers": 3})))
    assert one == two
    assert one == dumps_report(run(load_config(CONFIGS / "sweep_sl2.toml", {"workers": 1})))


def test_timings_only_on_request():
    cfg = load_config(CONFIGS / "sweep_sl2.toml", {"timings": True})
    assert "seconds" in json.dumps(run(cfg))
    assert "seconds" not in json.dumps(run(load_config(CONFIGS / "sweep_sl2.toml")))


def test_config_errors(tmp_path):
    with pytest.raises(ConfigError):
        from_dict({"experiment": "conjecture_sweep", "bogus": 1})
    with pytest.raises(ConfigError):
        from_dict({"experiment": "conjecture_sweep", "n": 2}).validate()
    with pytest.raises(ConfigError):
        from_dict({"experiment": "demazure", "instances": [{"modules": ["missing.json"]}]}).validate()
    bad = tmp_path / "bad.toml"
    bad.write_text("experiment = [")
    with pytest.raises(ConfigError):
        load_config(bad)


def test_failing_record_carries_rerun():
    report = run(from_dict({"experiment": "conjecture_sweep", "lambdas": [[[1, 0], [1, 0]]],
                            "labeling": "main-body", "operator_preset": "appendix"}).validate())
    (rec,) = report["records"]
    if not rec["passed"]:
        assert report["summary"]["counterexamples"] == [rec["rerun"]]
    again = run(from_dict(dict(rec["rerun"])).validate())
    assert again["records"][0]["dim_S"] == rec["dim_S"]


def test_cli_exit_codes(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert main(["example", "sec7.2", "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["passed"] and out.with_suffix(".tsv").is_file()
    assert main(["run", str(CONFIGS / "sweep_sl2.toml"), "--out", str(tmp_path / "s.json")]) == 0
    assert main(["suite", "--fault", "gt_coefficient", "--out", str(tmp_path / "f.json")]) == 1
    witness = [r for r in json.loads((tmp_path / "f.json").read_text())["records"] if not r["passed"]]
    assert witness and "witness" in witness[0]
    bad = tmp_path / "bad.toml"
    bad.write_text('experiment = "nope"\n')
    assert main(["run", str(bad)]) == 2
    assert main(["check-module", str(data_dir() / "fusion_w2.json")]) == 0
    junk = tmp_path / "junk.json"
    junk.write_text("{}")
    assert main(["check-module", str(junk)]) == 1


def test_cli_incomplete_run(tmp_path):
    out = tmp_path / "inc.json"
    assert main(["example", "sec7.1", "--max-entries", "3", "--out", str(out)]) == 1
    data = json.loads(out.read_text())
    assert not data["complete"] and not data["passed"]
    inc = [r for r in data["records"] if r.get("incomplete")]
    assert inc and all("partial" in r for r in inc)
    assert data["summary"]["counterexamples"] == []


def test_cli_version():
    proc = subprocess.run([sys.executable, "-m", "coherence_lab.cli", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert f"engine {ENGINE_VERSION}" in proc.stdout and f"schema {SCHEMA_VERSION}" in proc.stdout


def test_example_labeling_override():
    cfg = example_config("sec7.2", labeling="main-body")
    assert cfg.labeling == "main-body"
    with pytest.raises(ValueError):
        example_config("sec9")


def test_demazure_rerun_runs_from_any_directory(tmp_path, monkeypatch):
    report = run(load_config(CONFIGS / "demazure_sl2.toml"))
    fragment = [r for r in report["records"] if r["instance"] == "non_example"][0]["rerun"]
    monkeypatch.chdir(tmp_path)
    again = run(from_dict(fragment).validate())
    assert again["passed"] and again["records"][0]["dim_S"] == 14
