"""Experiment driver: config in, reproducible CSV artifacts + manifest out.

    pbitsim <exact|psl|compare|anneal|factor|device> --config FILE
            [--seed INT] [--out DIR] [--scale desk|paper]

Every experiment is a pure function of (config, seed): rerunning a config
byte-reproduces its outputs. Exit codes: 0 ok, 2 validation error,
1 runtime error.
"""

import argparse
import hashlib
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .annealing import make_linear_schedule, run_ca, run_sqa
from .config import ConfigError, ExperimentConfig, model_spec, parse_config, _get
from .device import (MagnetParams, MTJParams, ReadoutLaw, calibrate_readout,
                     mtj_conductance, run_device_network, run_sllg,
                     simulate_transfer)
from .exact import build_hamiltonian, joint_distribution, magnetization_z, thermal_expectation
from .factorizer import build_multiplier, clamp_and_solve
from .graph import serialize_lattice
from .histogram import save_histogram_csv, total_variation
from .sampler import SamplerConfig, run_chain
from .trotter import chain_cost_graph, map_heisenberg, map_tfim


def _write(path: Path, text: str):
    path.write_text(text)
    return path


def _trace_csv(path: Path, columns, rows):
    lines = [",".join(columns)]
    for row in rows:
        lines.append(",".join(repr(float(v)) if isinstance(v, (float, np.floating))
                              else str(v) for v in row))
    return _write(path, "\n".join(lines) + "\n")


def export_results(out: Path, name: str, histogram=None, trace_columns=None,
                   trace_rows=None, summary=None):
    """Standard artifact set: histogram CSV, trace CSV, structured summary."""
    written = []
    if histogram is not None:
        p = out / f"{name}_histogram.csv"
        save_histogram_csv(p, histogram)
        written.append(p)
    if trace_rows is not None:
        written.append(_trace_csv(out / f"{name}_trace.csv", trace_columns, trace_rows))
    if summary is not None:
        written.append(_write(out / f"{name}_summary.json",
                              json.dumps(summary, indent=2, sort_keys=True) + "\n"))
    return written


def _map_lattice(cfg, spec, beta):
    n = _get(cfg.section("mapping"), "mapping", "replicas", int, required=True)
    if spec.kind == "tfim":
        return map_tfim(spec, n, beta)
    return map_heisenberg(spec, n, beta)


def _run_exact(cfg: ExperimentConfig, out: Path):
    spec = model_spec(cfg)
    beta = _get(cfg.section("sampler"), "sampler", "beta", float, required=True)
    H = build_hamiltonian(spec)
    hist = joint_distribution(H, beta, spec.M)
    mz = thermal_expectation(H, magnetization_z(spec.M), beta)
    summary = {"experiment": "exact", "beta": beta, "mz": mz}
    return export_results(out, "exact", histogram=hist, summary=summary)


def _psl_stats(cfg, spec, beta):
    lattice = _map_lattice(cfg, spec, beta)
    sec = cfg.section("sampler")
    sc = SamplerConfig(
        beta=beta,
        sweeps=_get(sec, "sampler", "sweeps", int, required=True),
        seed=cfg.seed,
        order=_get(sec, "sampler", "order", str, default="sequential"),
        burn_in=_get(sec, "sampler", "burn_in", int, default=0),
    )
    return lattice, run_chain(lattice, sc)


def _run_psl(cfg: ExperimentConfig, out: Path):
    spec = model_spec(cfg)
    beta = _get(cfg.section("sampler"), "sampler", "beta", float, required=True)
    lattice, stats = _psl_stats(cfg, spec, beta)
    rows = list(zip(range(len(stats.mz_trace)),
                    stats.mz_trace.tolist(),
                    stats.energy_trace.tolist()))
    written = export_results(
        out, "psl", histogram=stats.histogram,
        trace_columns=("sweep", "mz", "energy"), trace_rows=rows,
        summary={"experiment": "psl", "beta": beta,
                 "mz_mean": float(stats.mz_trace.mean()),
                 "ess": stats.ess,
                 "n_pbits": lattice.graph.n})
    written.append(_write(out / "psl_lattice.txt", serialize_lattice(lattice)))
    return written


def _run_compare(cfg: ExperimentConfig, out: Path):
    spec = model_spec(cfg)
    beta = _get(cfg.section("sampler"), "sampler", "beta", float, required=True)
    H = build_hamiltonian(spec)
    exact_hist = joint_distribution(H, beta, spec.M)
    _, stats = _psl_stats(cfg, spec, beta)
    tvd = total_variation(exact_hist.probs, stats.histogram.probs)
    written = export_results(out, "exact", histogram=exact_hist)
    written += export_results(
        out, "psl", histogram=stats.histogram,
        summary={"experiment": "compare", "beta": beta, "tvd": tvd,
                 "mz_exact": thermal_expectation(H, magnetization_z(spec.M), beta),
                 "mz_psl": float(stats.mz_trace.mean()),
                 "ess": stats.ess})
    return written


def _run_anneal(cfg: ExperimentConfig, out: Path):
    spec = model_spec(cfg)
    if spec.kind != "tfim":
        raise ConfigError("[model] kind: annealing drives the tfim cost graph")
    cost = chain_cost_graph(spec)
    sec = cfg.section("schedule")
    sched = make_linear_schedule(
        _get(sec, "schedule", "start", float, required=True),
        _get(sec, "schedule", "end", float, required=True),
        _get(sec, "schedule", "steps", int, required=True),
        kind=_get(sec, "schedule", "kind", str, required=True),
        fixed_beta=_get(sec, "schedule", "fixed_beta", float, default=0.0),
    )
    replicas = _get(sec, "schedule", "replicas", int, default=10)
    rows = []
    if sched.kind == "beta_ramp":
        res = run_ca(cost, sched, replicas, seed=cfg.seed, record_trace=True)
        betas, gammas = res.betas, np.zeros_like(res.betas)
        for r in range(replicas):
            for s in range(sched.steps):
                decoded = int((res.trace[r, s] > 0) @ (1 << np.arange(spec.M)))
                rows.append((s, betas[s], gammas[s], r, decoded))
    else:
        res = run_sqa(cost, replicas, sched, seed=cfg.seed, record_trace=True)
        for s in range(sched.steps):
            state = res.trace[s].reshape(replicas, spec.M)
            for r in range(replicas):
                decoded = int((state[r] > 0) @ (1 << np.arange(spec.M)))
                rows.append((s, res.betas[s], res.gammas[s], r, decoded))
    summary = {"experiment": "anneal", "kind": sched.kind,
               "final_states": [int((row > 0) @ (1 << np.arange(len(row))))
                                for row in res.final_states]}
    return export_results(out, "anneal",
                          trace_columns=("step", "beta", "gamma", "replica_id",
                                         "decoded_value"),
                          trace_rows=rows, summary=summary)


def _run_factor(cfg: ExperimentConfig, out: Path):
    sec = cfg.section("factor")
    bits = _get(sec, "factor", "bits", int, required=True)
    value = _get(sec, "factor", "n", int, required=True)
    mode = _get(sec, "factor", "mode", str, required=True)
    ensembles = _get(sec, "factor", "ensembles", int, default=100)
    replicas = _get(sec, "factor", "replicas", int, default=10)
    ssec = cfg.section("schedule")
    sched = make_linear_schedule(
        _get(ssec, "schedule", "start", float, required=True),
        _get(ssec, "schedule", "end", float, required=True),
        _get(ssec, "schedule", "steps", int, required=True),
        kind=_get(ssec, "schedule", "kind", str, required=True),
        fixed_beta=_get(ssec, "schedule", "fixed_beta", float, default=0.0),
    )
    circuit = build_multiplier(bits)
    stats, answers = clamp_and_solve(circuit, value, mode, sched, ensembles,
                                     seed=cfg.seed, replicas=replicas)
    rows = []
    for e, ens in enumerate(answers):
        for p, q in ens:
            rows.append((e, p, q, int(p * q == value)))
    summary = {
        "experiment": "factor", "mode": mode, "N": value, "bits": bits,
        "success_probability": stats.probability,
        "std_error": stats.std_error,
        "samples": stats.n_total,
        "breakdown": {f"{p}x{q}": c for (p, q), c in stats.breakdown.most_common()},
    }
    return export_results(out, f"factor_{mode}",
                          trace_columns=("ensemble_id", "p", "q", "success"),
                          trace_rows=rows, summary=summary)


def _run_device(cfg: ExperimentConfig, out: Path):
    spec = model_spec(cfg)
    if spec.kind != "tfim":
        raise ConfigError("[model] kind: the device network emulates the tfim mapping")
    beta = _get(cfg.section("sampler"), "sampler", "beta", float, required=True)
    dsec = cfg.section("device")
    duration = _get(dsec, "device", "duration_ns", float, default=250.0) * 1e-9
    vdd = _get(dsec, "device", "vdd", float, default=0.8)
    v0 = _get(dsec, "device", "v0", float, default=0.040)
    calibrate = _get(dsec, "device", "calibrate", bool, default=True)
    magnet = MagnetParams()
    mtj = MTJParams()
    law = (calibrate_readout(magnet, mtj, v0=v0, vdd=vdd, seed=cfg.seed + 11)
           if calibrate else ReadoutLaw(v0=v0))
    lattice = _map_lattice(cfg, spec, beta)
    hist, mz_trace = run_device_network(lattice, beta, magnet, mtj, law,
                                        vdd=vdd, duration=duration,
                                        seed=cfg.seed)
    exact_hist = joint_distribution(build_hamiltonian(spec), beta, spec.M)
    tvd = total_variation(hist.probs, exact_hist.probs)
    # short single-device reference trace at V_IN = 0
    m_trace = run_sllg((0.0, 0.0, 1.0), 2000, magnet, seed=cfg.seed)
    g = mtj_conductance(m_trace[:, 2], mtj)
    vmid = vdd / (1.0 + g / mtj.g0)  # divider against R_T(0) = 1/g0
    rows = [(t, m_trace[t, 0], m_trace[t, 1], m_trace[t, 2], g[t], vmid[t])
            for t in range(len(m_trace))]
    vins = np.linspace(-3 * v0, 3 * v0, 13)
    thresh, _ = simulate_transfer(vins, duration=40e-9, params=magnet,
                                  mtj=mtj, law=law, vdd=vdd,
                                  seed=cfg.seed + 23)
    written = [_trace_csv(out / "device_transfer.csv", ("vin_V", "avg_out"),
                          list(zip(vins.tolist(), thresh.tolist())))]
    written += export_results(out, "device_exact", histogram=exact_hist)
    written += export_results(
        out, "device", histogram=hist,
        trace_columns=("t_ps", "mx", "my", "mz", "G_S", "Vout_V"),
        trace_rows=rows,
        summary={"experiment": "device", "beta": beta, "tvd": tvd,
                 "duration_ns": duration * 1e9, "calibrated": calibrate})
    return written


RUNNERS = {
    "exact": _run_exact,
    "psl": _run_psl,
    "compare": _run_compare,
    "anneal": _run_anneal,
    "factor": _run_factor,
    "device": _run_device,
}


def run_experiment(cfg: ExperimentConfig, config_text: str = "") -> dict:
    """Execute the configured experiment; returns the result manifest."""
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    t0 = time.perf_counter()
    written = RUNNERS[cfg.kind](cfg, out)
    elapsed = time.perf_counter() - t0
    digest = hashlib.sha256(
        (config_text + f"|seed={cfg.seed}").encode()).hexdigest()
    manifest = {
        "experiment": cfg.kind,
        "seed": cfg.seed,
        "scale": cfg.scale,
        "config": cfg.sections,
        "config_sha256": digest,
        "outputs": [str(p) for p in written],
        "wall_seconds": elapsed,
        "versions": {"pbitsim": __version__, "numpy": np.__version__},
    }
    _write(out / "manifest.json", json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return manifest


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="pbitsim",
        description="p-bit emulation of sign-problem-free spin models")
    parser.add_argument("experiment", choices=sorted(RUNNERS),
                        help="experiment kind (must match the config)")
    parser.add_argument("--config", required=True, help="INI-style config file")
    parser.add_argument("--seed", type=int, default=None, help="override config seed")
    parser.add_argument("--out", default=None, help="override output directory")
    parser.add_argument("--scale", choices=("desk", "paper"), default=None,
                        help="desk (default) or paper-scale run")
    args = parser.parse_args(argv)
    try:
        config_text = Path(args.config).read_text()
        cfg = parse_config(config_text)
        if cfg.kind != args.experiment:
            raise ConfigError(
                f"[experiment] kind: config says {cfg.kind!r}, "
                f"command line says {args.experiment!r}")
        if args.seed is not None:
            cfg.seed = args.seed
        if args.out is not None:
            cfg.output_dir = args.out
        if args.scale is not None:
            cfg.scale = args.scale
    except (OSError, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        manifest = run_experiment(cfg, config_text)
    except Exception as exc:  # runtime failure after validation
        print(f"runtime error: {exc}", file=sys.stderr)
        return 1
    print(json.dumps(manifest, indent=2, sort_keys=True))
    return 0


if __name__ == "__main__":
    sys.exit(main())
