"""Classical annealing (temperature ramp) and simulated quantum annealing
(transverse-field ramp over a replica lattice with live re-weighting of the
inter-slice coupling).

CA runs m non-interacting copies of the cost graph, sweeping each once per
schedule step at beta = 1 / (current beta^-1 value); answers are read per
copy, matching how CA replicas are pooled when compared against SQA. SQA
builds the replica lattice once and, before each step's sweeps, recomputes
every inter-slice weight from the current transverse field at fixed beta;
the answer is read once per lattice by per-column majority vote.
"""

from collections import Counter
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .graph import ClampSet, InteractionGraph
from .sampler import _apply_clamps, _kernel_args, _random_initial, _update_order
from .trotter import map_ising, perp_coupling

SCHEDULE_KINDS = ("beta_ramp", "gamma_ramp")


@dataclass
class Schedule:
    """Linear ramp: value(s) = start + (end-start) * s/(steps-1).

    beta_ramp values are inverse *temperatures'* reciprocals, i.e. beta^-1
    (the classical annealing knob); gamma_ramp values are the transverse
    field at fixed inverse temperature fixed_beta.
    """

    kind: str
    start: float
    end: float
    steps: int
    fixed_beta: float = 0.0

    def __post_init__(self):
        if self.kind not in SCHEDULE_KINDS:
            raise ValueError(f"kind must be one of {SCHEDULE_KINDS}")
        if self.steps < 1:
            raise ValueError("steps must be >= 1")
        if self.kind == "gamma_ramp":
            if self.start <= 0 or self.end <= 0:
                raise ValueError("gamma must stay positive for the whole ramp")
            if self.fixed_beta <= 0:
                raise ValueError("gamma_ramp needs fixed_beta > 0")

    def values(self) -> np.ndarray:
        if self.steps == 1:
            return np.array([float(self.start)])
        return self.start + (self.end - self.start) * np.arange(self.steps) / (self.steps - 1)


def make_linear_schedule(start: float, end: float, steps: int,
                         kind: str = "beta_ramp", fixed_beta: float = 0.0) -> Schedule:
    return Schedule(kind, start, end, steps, fixed_beta)


@dataclass
class AnnealResult:
    """final_states has one row per replica (CA) or one row per lattice
    column readout (SQA); trace holds per-step snapshots when requested.
    success is filled in by ensemble_stats once a target predicate exists."""

    final_states: np.ndarray
    trace: np.ndarray | None
    betas: np.ndarray
    gammas: np.ndarray | None = None
    success: np.ndarray | None = None


def run_ca(graph: InteractionGraph, beta_schedule: Schedule, replicas: int,
           seed: int = 0, sweeps_per_step: int = 1,
           clamps: ClampSet | None = None, record_trace: bool = False,
           order: str = "sequential") -> AnnealResult:
    """Anneal `replicas` independent copies of the cost graph."""
    if beta_schedule.kind != "beta_ramp":
        raise ValueError("classical annealing takes a beta_ramp schedule")
    inv_beta = beta_schedule.values()
    if np.any(inv_beta <= 0):
        raise ValueError("beta^-1 must stay positive")
    betas = 1.0 / inv_beta
    upd = _update_order(graph.n, clamps)
    finals = np.zeros((replicas, graph.n), dtype=np.int8)
    traces = (np.zeros((replicas, beta_schedule.steps, graph.n), dtype=np.int8)
              if record_trace else None)
    no_perp = np.zeros((0, 2), dtype=np.int64)
    no_w = np.zeros(0)
    snap_dummy = np.zeros((1, 1), dtype=np.int8)
    for r in range(replicas):
        rng_state = _kernels.seed_state(seed + r)
        state = _random_initial(graph.n, rng_state)
        _apply_clamps(state, clamps)
        snaps = traces[r] if record_trace else snap_dummy
        _kernels.anneal_run(state, *_kernel_args(graph), betas, upd,
                            order == "random", sweeps_per_step, no_perp, no_w,
                            snaps, record_trace, rng_state)
        finals[r] = np.where(state > 0, 1, -1)
    return AnnealResult(finals, traces, betas)


def run_sqa(cost_graph: InteractionGraph, n: int, gamma_schedule: Schedule,
            seed: int = 0, sweeps_per_step: int = 1,
            clamps: ClampSet | None = None, record_trace: bool = False,
            order: str = "sequential") -> AnnealResult:
    """Transverse-field anneal of the n-replica lattice built from an Ising
    cost graph (pair terms + biases; this is the TFIM form).

    Column clamps apply to every slice. The returned final_states holds the
    per-column majority-vote readout (ties break toward +1) as a single
    row; the raw lattice snapshot trace is per-step when requested.
    """
    if gamma_schedule.kind != "gamma_ramp":
        raise ValueError("SQA takes a gamma_ramp schedule")
    beta = gamma_schedule.fixed_beta
    gammas = gamma_schedule.values()
    lattice = map_ising(cost_graph, n, beta, gammas[0])
    graph = lattice.graph
    perp_w = np.array([perp_coupling(beta, g, n) for g in gammas])
    perp_slots = graph.pair_term_slots[lattice.perp_term_ids]
    lat_clamps = _replicate_clamps(clamps, cost_graph.n, n)
    upd = _update_order(graph.n, lat_clamps)
    rng_state = _kernels.seed_state(seed)
    state = _random_initial(graph.n, rng_state)
    _apply_clamps(state, lat_clamps)
    snaps = (np.zeros((gamma_schedule.steps, graph.n), dtype=np.int8)
             if record_trace else np.zeros((1, 1), dtype=np.int8))
    betas = np.full(gamma_schedule.steps, beta)
    _kernels.anneal_run(state, *_kernel_args(graph), betas, upd,
                        order == "random", sweeps_per_step, perp_slots,
                        perp_w, snaps, record_trace, rng_state)
    graph.set_pair_weights(lattice.perp_term_ids,
                           np.full(len(lattice.perp_term_ids), perp_w[-1]))
    readout = majority_readout(state, cost_graph.n, n)
    return AnnealResult(readout[None, :], snaps if record_trace else None,
                        betas, gammas)


def _replicate_clamps(clamps: ClampSet | None, M: int, n: int):
    if clamps is None:
        return None
    idx = np.concatenate([clamps.indices + k * M for k in range(n)])
    vals = np.tile(clamps.values, n)
    return ClampSet(idx, vals)


def majority_readout(lattice_state, M: int, slices: int) -> np.ndarray:
    """Per-column majority vote across slices; ties break toward +1."""
    cols = np.asarray(lattice_state, dtype=float).reshape(slices, M).sum(axis=0)
    return np.where(cols >= 0, 1, -1).astype(np.int8)


@dataclass
class EnsembleStats:
    n_total: int
    n_success: int
    probability: float
    std_error: float
    breakdown: Counter


def ensemble_stats(results, target_predicate, decode=None) -> EnsembleStats:
    """Success probability with a binomial standard error and a per-answer
    breakdown. `results` is an iterable of AnnealResult; every row of
    final_states counts as one sample (CA replicas pool, SQA gives one)."""
    n_total = 0
    n_success = 0
    breakdown: Counter = Counter()
    for res in results:
        flags = []
        for row in res.final_states:
            n_total += 1
            answer = decode(row) if decode is not None else tuple(row)
            breakdown[answer] += 1
            ok = bool(target_predicate(answer))
            flags.append(ok)
            n_success += ok
        res.success = np.array(flags, dtype=bool)
    if n_total == 0:
        raise ValueError("no anneal results to aggregate")
    p = n_success / n_total
    se = float(np.sqrt(p * (1.0 - p) / n_total))
    return EnsembleStats(n_total, n_success, p, se, breakdown)
