"""Experiment configuration: INI-style text files, validated up front.

Grammar: `[section]` headers with `key = value` lines; `#` or `;` comments.
Sections and keys are documented in the README. Every value is validated
against the target module's preconditions before any computation starts,
and errors name the offending key.
"""

import configparser
import io
from dataclasses import dataclass, field

import numpy as np

from .exact import QuantumModelSpec, heisenberg_spec, tfim_spec

EXPERIMENT_KINDS = ("exact", "psl", "compare", "anneal", "factor", "device")
SCALES = ("desk", "paper")


class ConfigError(ValueError):
    """Invalid experiment configuration; message names the offending key."""


@dataclass
class ExperimentConfig:
    kind: str
    seed: int = 0
    output_dir: str = "out"
    scale: str = "desk"
    sections: dict = field(default_factory=dict)

    def section(self, name) -> dict:
        return self.sections.get(name, {})


def _get(sec: dict, section: str, key: str, cast, default=None, required=False):
    if key not in sec:
        if required:
            raise ConfigError(f"[{section}] {key}: required key missing")
        return default
    raw = sec[key]
    try:
        if cast is bool:
            if raw.lower() in ("true", "yes", "1", "on"):
                return True
            if raw.lower() in ("false", "no", "0", "off"):
                return False
            raise ValueError(raw)
        return cast(raw)
    except ValueError as exc:
        raise ConfigError(f"[{section}] {key}: cannot parse {raw!r} as {cast.__name__}") from exc


def parse_config(text: str) -> ExperimentConfig:
    cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"config syntax: {exc}") from exc
    sections = {name: dict(cp[name]) for name in cp.sections()}
    exp = sections.get("experiment", {})
    kind = _get(exp, "experiment", "kind", str, required=True)
    if kind not in EXPERIMENT_KINDS:
        raise ConfigError(f"[experiment] kind: {kind!r} not in {EXPERIMENT_KINDS}")
    scale = _get(exp, "experiment", "scale", str, default="desk")
    if scale not in SCALES:
        raise ConfigError(f"[experiment] scale: {scale!r} not in {SCALES}")
    cfg = ExperimentConfig(
        kind=kind,
        seed=_get(exp, "experiment", "seed", int, default=0),
        output_dir=_get(exp, "experiment", "output_dir", str, default="out"),
        scale=scale,
        sections=sections,
    )
    validate_config(cfg)
    return cfg


def load_config(path) -> ExperimentConfig:
    with open(path) as f:
        return parse_config(f.read())


def serialize_config(cfg: ExperimentConfig) -> str:
    cp = configparser.ConfigParser()
    for name, sec in cfg.sections.items():
        cp[name] = {k: str(v) for k, v in sec.items()}
    buf = io.StringIO()
    cp.write(buf)
    return buf.getvalue()


def model_spec(cfg: ExperimentConfig) -> QuantumModelSpec:
    sec = cfg.section("model")
    kind = _get(sec, "model", "kind", str, required=True)
    M = _get(sec, "model", "m", int, required=True)
    try:
        if kind == "tfim":
            return tfim_spec(
                M,
                _get(sec, "model", "j", float, required=True),
                _get(sec, "model", "gamma_x", float, default=0.0),
                _get(sec, "model", "gamma_z", float, default=0.0),
            )
        if kind == "heisenberg":
            return heisenberg_spec(
                M,
                _get(sec, "model", "jx", float, required=True),
                _get(sec, "model", "jy", float, required=True),
                _get(sec, "model", "jz", float, required=True),
                _get(sec, "model", "gamma_x", float, required=True),
            )
    except ValueError as exc:
        raise ConfigError(f"[model] {exc}") from exc
    raise ConfigError(f"[model] kind: unknown model {kind!r}")


def validate_config(cfg: ExperimentConfig):
    """Cross-check every referenced precondition before running anything."""
    kind = cfg.kind
    if kind in ("exact", "psl", "compare", "device"):
        spec = model_spec(cfg)
        sec = cfg.section("sampler")
        beta = _get(sec, "sampler", "beta", float, required=True)
        if not (np.isfinite(beta) and beta > 0):
            raise ConfigError("[sampler] beta: must be finite and positive")
    if kind in ("psl", "compare", "device"):
        spec = model_spec(cfg)
        if spec.gamma_x <= 0:
            raise ConfigError("[model] gamma_x: replica mapping needs gamma_x > 0 "
                              "(the inter-slice coupling diverges)")
        n = _get(cfg.section("mapping"), "mapping", "replicas", int, required=True)
        if n < 2:
            raise ConfigError("[mapping] replicas: need at least 2")
    if kind in ("psl", "compare"):
        sec = cfg.section("sampler")
        sweeps = _get(sec, "sampler", "sweeps", int, required=True)
        burn = _get(sec, "sampler", "burn_in", int, default=0)
        if not sweeps > burn >= 0:
            raise ConfigError("[sampler] sweeps: need sweeps > burn_in >= 0")
    if kind in ("anneal", "factor"):
        sec = cfg.section("schedule")
        sk = _get(sec, "schedule", "kind", str, required=True)
        if sk not in ("beta_ramp", "gamma_ramp"):
            raise ConfigError("[schedule] kind: beta_ramp or gamma_ramp")
        steps = _get(sec, "schedule", "steps", int, required=True)
        if steps < 1:
            raise ConfigError("[schedule] steps: must be >= 1")
        start = _get(sec, "schedule", "start", float, required=True)
        end = _get(sec, "schedule", "end", float, required=True)
        if sk == "gamma_ramp":
            if start <= 0 or end <= 0:
                raise ConfigError("[schedule] start/end: gamma must stay positive")
            if _get(sec, "schedule", "fixed_beta", float, default=0.0) <= 0:
                raise ConfigError("[schedule] fixed_beta: required positive for gamma_ramp")
        else:
            if start <= 0 or end <= 0:
                raise ConfigError("[schedule] start/end: beta^-1 must stay positive")
    if kind == "anneal":
        model_spec(cfg)
    if kind == "factor":
        sec = cfg.section("factor")
        bits = _get(sec, "factor", "bits", int, required=True)
        if bits < 2:
            raise ConfigError("[factor] bits: need >= 2")
        value = _get(sec, "factor", "n", int, required=True)
        if not 0 <= value < (1 << (2 * bits)):
            raise ConfigError(f"[factor] n: {value} does not fit a {2 * bits}-bit product")
        mode = _get(sec, "factor", "mode", str, required=True)
        if mode not in ("ca", "sqa"):
            raise ConfigError("[factor] mode: ca or sqa")
        if _get(sec, "factor", "ensembles", int, default=100) < 1:
            raise ConfigError("[factor] ensembles: need >= 1")
