"""Sequential p-bit Gibbs dynamics over an interaction graph.

The update rule for p-bit i at dimensionless time t is

    m_i(t+1) = sgn[ r + tanh(beta * I_i(t)) ],

with r drawn fresh and uniform on (-1, 1) and I_i the local input computed
from the *current* state (all earlier updates within the sweep are
visible). sgn(0) counts as +1. One sweep updates every free p-bit exactly
once, in fixed index order by default or in a fresh random permutation per
sweep.
"""

import math
import time
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .graph import ClampSet, InteractionGraph, ReplicaLattice
from .histogram import Histogram, counts_to_histogram

UPDATE_ORDERS = ("sequential", "random")


@dataclass
class SamplerConfig:
    beta: float
    sweeps: int
    seed: int = 0
    order: str = "sequential"
    burn_in: int = 0
    record_energy: bool = True
    record_hist: bool = True

    def __post_init__(self):
        if self.order not in UPDATE_ORDERS:
            raise ValueError(f"order must be one of {UPDATE_ORDERS}")
        if not (self.sweeps > self.burn_in >= 0):
            raise ValueError("need sweeps > burn_in >= 0")
        if not (np.isfinite(self.beta) and self.beta > 0):
            raise ValueError("beta must be finite and positive")


@dataclass
class RunStatistics:
    """Per-sweep traces plus the pooled slice histogram of one chain."""

    mz_trace: np.ndarray
    energy_trace: np.ndarray | None
    histogram: Histogram | None
    final_state: np.ndarray
    ess: float = float("nan")
    updates_per_second: float = float("nan")


def pbit_step(field_value: float, beta: float, rng) -> int:
    """Single stochastic update: sgn[r + tanh(beta * field)], r ~ U(-1, 1)."""
    r = rng.uniform(-1.0, 1.0)
    return 1 if r + math.tanh(beta * field_value) >= 0.0 else -1


def local_field(state, i: int, graph: InteractionGraph) -> float:
    """I_i = -dE/dm_i; see InteractionGraph.local_field."""
    return graph.local_field(state, i)


def classical_energy(state, graph: InteractionGraph) -> float:
    return graph.energy(state)


def sweep(state, graph: InteractionGraph, beta: float, rng,
          order: str = "sequential") -> np.ndarray:
    """Pure-python reference sweep (the kernels are the fast path)."""
    state = np.asarray(state, dtype=float).copy()
    idx = np.arange(graph.n)
    if order == "random":
        rng.shuffle(idx)
    for i in idx:
        state[i] = pbit_step(graph.local_field(state, i), beta, rng)
    return state


def random_state(n: int, rng) -> np.ndarray:
    return rng.choice(np.array([-1.0, 1.0]), size=n)


def _graph_and_shape(target):
    if isinstance(target, ReplicaLattice):
        return target.graph, target.M, target.slices
    return target, target.n, 1


def _kernel_args(graph):
    return (graph.pair_ptr, graph.pair_nbr, graph.pair_nbr_w, graph.quad_ptr,
            graph.quad_partners, graph.quad_term_w, graph.bias)


def _update_order(n, clamps: ClampSet | None):
    if clamps is None:
        return np.arange(n, dtype=np.int64)
    mask = np.ones(n, dtype=bool)
    mask[clamps.indices] = False
    return np.nonzero(mask)[0].astype(np.int64)


def _apply_clamps(state, clamps: ClampSet | None):
    if clamps is not None:
        state[clamps.indices] = clamps.values.astype(float)


def run_chain(target, config: SamplerConfig, clamps: ClampSet | None = None,
              initial_state=None) -> RunStatistics:
    """Run burn_in + recorded sweeps; collect traces and, when the target
    is a replica lattice, the pooled per-slice histogram."""
    graph, M, slices = _graph_and_shape(target)
    want_hist = config.record_hist and isinstance(target, ReplicaLattice)
    rng_state = _kernels.seed_state(config.seed)
    if initial_state is None:
        state = _random_initial(graph.n, rng_state)
    else:
        state = np.asarray(initial_state, dtype=float).copy()
    _apply_clamps(state, clamps)
    order = _update_order(graph.n, clamps)
    recorded = config.sweeps - config.burn_in
    hist_counts = np.zeros(2**M if want_hist else 1)
    mz_trace = np.zeros(recorded)
    e_trace = np.zeros(recorded if config.record_energy else 1)
    t0 = time.perf_counter()
    _kernels.gibbs_run(state, *_kernel_args(graph), config.beta, order,
                       config.order == "random", config.sweeps,
                       config.burn_in, M, slices, want_hist, True,
                       config.record_energy, hist_counts, mz_trace, e_trace,
                       rng_state)
    elapsed = time.perf_counter() - t0
    hist = counts_to_histogram(hist_counts, M) if want_hist else None
    return RunStatistics(
        mz_trace=mz_trace,
        energy_trace=e_trace if config.record_energy else None,
        histogram=hist,
        final_state=state.astype(np.int8),
        ess=effective_sample_size(mz_trace),
        updates_per_second=config.sweeps * len(order) / max(elapsed, 1e-12),
    )


def _random_initial(n, rng_state):
    state = np.empty(n)
    for i in range(n):
        state[i] = 1.0 if _kernels._rng_pm1(rng_state) >= 0.0 else -1.0
    return state


def replica_histogram(slice_states, M: int) -> Histogram:
    """Pool bipolar slice states (rows of length M, or of length M*slices
    which are reshaped) into a normalized histogram."""
    S = np.asarray(slice_states)
    if S.ndim != 2:
        raise ValueError("expected a 2D trace of slice states")
    if S.shape[1] != M:
        if S.shape[1] % M:
            raise ValueError("row length is not a multiple of M")
        S = S.reshape(-1, M)
    bits = (S > 0).astype(np.int64)
    weights = 1 << np.arange(M - 1, -1, -1)
    idx = bits @ weights
    counts = np.bincount(idx, minlength=2**M).astype(float)
    return counts_to_histogram(counts, M)


def effective_sample_size(trace) -> float:
    """ESS of a scalar trace from its integrated autocorrelation time.

    Reported alongside pooled histograms because adjacent sweeps (and
    adjacent slices) are correlated even though samples are pooled as if
    independent.
    """
    x = np.asarray(trace, dtype=float)
    n = len(x)
    if n < 8:
        return float(n)
    x = x - x.mean()
    var = float(x @ x) / n
    if var == 0.0:
        return float(n)
    nfft = 1 << (2 * n - 1).bit_length()
    f = np.fft.rfft(x, nfft)
    acf = np.fft.irfft(f * np.conj(f))[:n] / (var * n)
    tau = 1.0
    for k in range(1, min(n // 2, 10000)):
        if acf[k] < 0.05:
            break
        tau += 2.0 * acf[k]
    return n / tau


def measure_throughput(target, beta: float, seed: int = 0,
                       min_seconds: float = 0.5) -> float:
    """Sustained p-bit updates/second of the sweep kernel, recording off."""
    graph, M, slices = _graph_and_shape(target)
    rng_state = _kernels.seed_state(seed)
    state = _random_initial(graph.n, rng_state)
    order = np.arange(graph.n, dtype=np.int64)
    dummy_hist = np.zeros(1)
    dummy = np.zeros(1)
    # warm the JIT
    _kernels.gibbs_run(state, *_kernel_args(graph), beta, order, False, 2, 1,
                       M, slices, False, False, False, dummy_hist, dummy,
                       dummy, rng_state)
    sweeps = 64
    while True:
        t0 = time.perf_counter()
        _kernels.gibbs_run(state, *_kernel_args(graph), beta, order, False,
                           sweeps, sweeps - 1, M, slices, False, False,
                           False, dummy_hist, dummy, dummy, rng_state)
        elapsed = time.perf_counter() - t0
        if elapsed >= min_seconds:
            return sweeps * graph.n / elapsed
        sweeps *= 2
