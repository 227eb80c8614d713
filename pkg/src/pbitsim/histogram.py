"""Probability histograms over spin-chain basis states.

State encoding convention (used everywhere in this package):
up -> bit 1, down -> bit 0, and site 1 is the most significant bit.
The all-down chain is state 0 and the all-up chain is state 2**M - 1,
so an 8-site chain runs from 0 to 255.
"""

from dataclasses import dataclass

import numpy as np

NORM_TOL = 1e-12


@dataclass
class Histogram:
    """Normalized probability table over the 2**M basis states of M spins."""

    M: int
    probs: np.ndarray

    def __post_init__(self):
        self.probs = np.asarray(self.probs, dtype=float)
        if self.probs.shape != (2**self.M,):
            raise ValueError(f"expected {2**self.M} probabilities, got {self.probs.shape}")
        if np.any(self.probs < -NORM_TOL):
            raise ValueError("negative probability")
        if abs(self.probs.sum() - 1.0) > 1e-9:
            raise ValueError(f"histogram not normalized: sum={self.probs.sum()!r}")

    def tvd(self, other: "Histogram") -> float:
        if other.M != self.M:
            raise ValueError("site count mismatch")
        return total_variation(self.probs, other.probs)


def total_variation(p, q) -> float:
    """TVD = 0.5 * sum |p_i - q_i|."""
    return 0.5 * float(np.abs(np.asarray(p, float) - np.asarray(q, float)).sum())


def spins_to_index(spins) -> int:
    """Decimal state of a bipolar spin pattern (site 1 first, i.e. MSB first)."""
    idx = 0
    for m in spins:
        idx = (idx << 1) | (1 if m > 0 else 0)
    return idx


def index_to_spins(index: int, M: int) -> np.ndarray:
    """Inverse of spins_to_index; returns an array of -1/+1."""
    bits = (index >> np.arange(M - 1, -1, -1)) & 1
    return (2 * bits - 1).astype(np.int8)


def counts_to_histogram(counts, M: int) -> Histogram:
    counts = np.asarray(counts, dtype=float)
    total = counts.sum()
    if total <= 0:
        raise ValueError("empty counts")
    return Histogram(M, counts / total)


def save_histogram_csv(path, hist: Histogram):
    """Write `state_index,probability` rows."""
    with open(path, "w") as f:
        f.write("state_index,probability\n")
        for i, p in enumerate(hist.probs):
            f.write(f"{i},{float(p)!r}\n")


def load_histogram_csv(path) -> Histogram:
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    probs = np.zeros(len(data))
    probs[data[:, 0].astype(int)] = data[:, 1]
    M = int(round(np.log2(len(probs))))
    return Histogram(M, probs)
