"""End-to-end driver tests: config validation, artifacts, determinism."""

import json
from pathlib import Path

import numpy as np
import pytest

from pbitsim.cli import main, run_experiment
from pbitsim.config import ConfigError, parse_config, serialize_config

COMPARE_CFG = """
[experiment]
kind = compare
seed = 9
output_dir = {out}

[model]
kind = tfim
m = 4
j = 1.0
gamma_x = 10.0

[mapping]
replicas = 10

[sampler]
beta = 0.5
sweeps = 20000
burn_in = 500
"""

FACTOR_CFG = """
[experiment]
kind = factor
seed = 3
output_dir = {out}

[factor]
bits = 2
n = 6
mode = ca
ensembles = 5
replicas = 4

[schedule]
kind = beta_ramp
start = 1.0
end = 0.1
steps = 400
"""


def test_compare_experiment_artifacts(tmp_path):
    cfg = parse_config(COMPARE_CFG.format(out=tmp_path / "run"))
    manifest = run_experiment(cfg, "cfgtext")
    out = tmp_path / "run"
    assert (out / "exact_histogram.csv").exists()
    assert (out / "psl_histogram.csv").exists()
    assert (out / "manifest.json").exists()
    summary = json.loads((out / "psl_summary.json").read_text())
    assert summary["tvd"] < 0.2
    rows = (out / "exact_histogram.csv").read_text().strip().splitlines()
    assert rows[0] == "state_index,probability"
    assert len(rows) == 17  # header + 16 states
    assert manifest["experiment"] == "compare"
    assert manifest["seed"] == 9


def test_determinism_byte_identical(tmp_path):
    texts = {}
    for name in ("a", "b"):
        cfg = parse_config(COMPARE_CFG.format(out=tmp_path / name))
        run_experiment(cfg, "same")
        texts[name] = {
            p.name: p.read_bytes()
            for p in sorted((tmp_path / name).iterdir())
            if p.name != "manifest.json"  # contains wall-clock timing
        }
    assert texts["a"] == texts["b"]


def test_factor_experiment(tmp_path):
    cfg = parse_config(FACTOR_CFG.format(out=tmp_path / "f"))
    run_experiment(cfg, "")
    rows = (tmp_path / "f" / "factor_ca_trace.csv").read_text().strip().splitlines()
    assert rows[0] == "ensemble_id,p,q,success"
    assert len(rows) == 1 + 5 * 4  # per-replica samples
    summary = json.loads((tmp_path / "f" / "factor_ca_summary.json").read_text())
    assert 0.0 <= summary["success_probability"] <= 1.0
    assert summary["samples"] == 20


def test_gamma_zero_rejected():
    bad = COMPARE_CFG.format(out="x").replace("gamma_x = 10.0", "gamma_x = 0.0")
    with pytest.raises(ConfigError, match="gamma_x"):
        parse_config(bad)


def test_unparseable_value_names_key():
    bad = COMPARE_CFG.format(out="x").replace("beta = 0.5", "beta = hot")
    with pytest.raises(ConfigError, match=r"\[sampler\] beta"):
        parse_config(bad)


def test_missing_required_key():
    bad = COMPARE_CFG.format(out="x").replace("m = 4\n", "")
    with pytest.raises(ConfigError, match="required"):
        parse_config(bad)


def test_config_roundtrip_identity():
    cfg = parse_config(COMPARE_CFG.format(out="somewhere"))
    again = parse_config(serialize_config(cfg))
    assert again.sections == cfg.sections
    assert again.kind == cfg.kind and again.seed == cfg.seed


def test_cli_exit_codes(tmp_path):
    path = tmp_path / "c.ini"
    path.write_text(COMPARE_CFG.format(out=tmp_path / "out"))
    assert main(["compare", "--config", str(path)]) == 0
    assert (tmp_path / "out" / "manifest.json").exists()
    # experiment mismatch between CLI and config
    assert main(["exact", "--config", str(path)]) == 2
    # validation failure
    bad = tmp_path / "bad.ini"
    bad.write_text(COMPARE_CFG.format(out=tmp_path / "o2").replace(
        "gamma_x = 10.0", "gamma_x = 0.0"))
    assert main(["compare", "--config", str(bad)]) == 2
    # missing file
    assert main(["compare", "--config", str(tmp_path / "nope.ini")]) == 2


def test_cli_overrides(tmp_path):
    path = tmp_path / "c.ini"
    path.write_text(COMPARE_CFG.format(out=tmp_path / "ignored"))
    assert main(["compare", "--config", str(path), "--seed", "77",
                 "--out", str(tmp_path / "forced")]) == 0
    manifest = json.loads((tmp_path / "forced" / "manifest.json").read_text())
    assert manifest["seed"] == 77


def test_exact_experiment(tmp_path):
    cfg_text = """
[experiment]
kind = exact
output_dir = {out}

[model]
kind = heisenberg
m = 4
jx = 1.0
jy = 1.0
jz = 1.0
gamma_x = 0.5

[sampler]
beta = 1.0
"""
    cfg = parse_config(cfg_text.format(out=tmp_path))
    run_experiment(cfg, "")
    probs = np.loadtxt(tmp_path / "exact_histogram.csv", delimiter=",",
                       skiprows=1)[:, 1]
    assert probs.sum() == pytest.approx(1.0, abs=1e-9)
