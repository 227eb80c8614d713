"""Classical p-bit interaction graphs: pairwise + 4-body couplings and biases.

Energy convention: E(m) = - sum_pairs w_ij m_i m_j - sum_quads w m_i m_j m_k m_l
- sum_i b_i m_i, with m in {-1,+1}. Lower energy is more probable; the local
input current of p-bit i is I_i = -dE/dm_i.

Duplicate terms (same member set) are summed at insertion, so the sampler's
field accumulation can stay a plain sum over stored terms.
"""

from dataclasses import dataclass

import numpy as np


class GraphBuilder:
    """Accumulates coupling terms; build() freezes them into arrays."""

    def __init__(self, n: int):
        if n < 1:
            raise ValueError("need at least one p-bit")
        self.n = n
        self._pairs: dict[tuple[int, int], float] = {}
        self._quads: dict[tuple[int, int, int, int], float] = {}
        self._bias = np.zeros(n)

    def _check(self, idx):
        for i in idx:
            if not 0 <= i < self.n:
                raise ValueError(f"p-bit index {i} outside 0..{self.n - 1}")
        if len(set(idx)) != len(idx):
            raise ValueError(f"coupling members must be distinct, got {idx}")

    def add_pair(self, i: int, j: int, w: float):
        self._check((i, j))
        key = (i, j) if i < j else (j, i)
        self._pairs[key] = self._pairs.get(key, 0.0) + w

    def add_quad(self, i: int, j: int, k: int, l: int, w: float):
        self._check((i, j, k, l))
        key = tuple(sorted((i, j, k, l)))
        self._quads[key] = self._quads.get(key, 0.0) + w

    def add_bias(self, i: int, b: float):
        self._check((i,))
        self._bias[i] += b

    def build(self) -> "InteractionGraph":
        pairs = sorted(self._pairs.items())
        quads = sorted(self._quads.items())
        pair_members = np.array([k for k, _ in pairs], dtype=np.int64).reshape(-1, 2)
        pair_w = np.array([w for _, w in pairs], dtype=float)
        quad_members = np.array([k for k, _ in quads], dtype=np.int64).reshape(-1, 4)
        quad_w = np.array([w for _, w in quads], dtype=float)
        return InteractionGraph(self.n, pair_members, pair_w, quad_members, quad_w,
                                self._bias.copy())


class InteractionGraph:
    """Frozen term lists plus a CSR adjacency index for O(degree) fields.

    pair_w may be rewritten in place through set_pair_weights (used by the
    transverse-field annealer); everything else is immutable after build.
    """

    def __init__(self, n, pair_members, pair_w, quad_members, quad_w, bias):
        self.n = int(n)
        self.pair_members = pair_members
        self.pair_w = pair_w
        self.quad_members = quad_members
        self.quad_w = quad_w
        self.bias = bias
        self._build_adjacency()

    def _build_adjacency(self):
        n = self.n
        deg = np.zeros(n + 1, dtype=np.int64)
        for i, j in self.pair_members:
            deg[i + 1] += 1
            deg[j + 1] += 1
        self.pair_ptr = np.cumsum(deg)
        self.pair_nbr = np.zeros(self.pair_ptr[-1], dtype=np.int64)
        self.pair_nbr_w = np.zeros(self.pair_ptr[-1])
        # csr slot of each (term, endpoint) so in-place re-weighting can
        # touch both copies of a term's weight
        self.pair_term_slots = np.zeros((len(self.pair_w), 2), dtype=np.int64)
        fill = self.pair_ptr[:-1].copy()
        for t, (i, j) in enumerate(self.pair_members):
            w = self.pair_w[t]
            self.pair_nbr[fill[i]] = j
            self.pair_nbr_w[fill[i]] = w
            self.pair_term_slots[t, 0] = fill[i]
            fill[i] += 1
            self.pair_nbr[fill[j]] = i
            self.pair_nbr_w[fill[j]] = w
            self.pair_term_slots[t, 1] = fill[j]
            fill[j] += 1

        qdeg = np.zeros(n + 1, dtype=np.int64)
        for members in self.quad_members:
            for i in members:
                qdeg[i + 1] += 1
        self.quad_ptr = np.cumsum(qdeg)
        self.quad_partners = np.zeros((self.quad_ptr[-1], 3), dtype=np.int64)
        self.quad_term_w = np.zeros(self.quad_ptr[-1])
        fill = self.quad_ptr[:-1].copy()
        for t, members in enumerate(self.quad_members):
            for i in members:
                others = [x for x in members if x != i]
                self.quad_partners[fill[i]] = others
                self.quad_term_w[fill[i]] = self.quad_w[t]
                fill[i] += 1

    def set_pair_weights(self, term_ids, new_w):
        """Rewrite selected pair-term weights, keeping CSR copies in sync."""
        new_w = np.asarray(new_w, dtype=float)
        self.pair_w[term_ids] = new_w
        slots = self.pair_term_slots[term_ids]
        self.pair_nbr_w[slots[:, 0]] = new_w
        self.pair_nbr_w[slots[:, 1]] = new_w

    def copy(self) -> "InteractionGraph":
        return InteractionGraph(self.n, self.pair_members.copy(), self.pair_w.copy(),
                                self.quad_members.copy(), self.quad_w.copy(),
                                self.bias.copy())

    # -- reference evaluations (vectorized over states) ----------------------

    def energy(self, state) -> float:
        """E(m) for one bipolar state vector."""
        m = np.asarray(state, dtype=float)
        e = -float(self.bias @ m)
        if len(self.pair_w):
            e -= float(self.pair_w @ (m[self.pair_members[:, 0]] * m[self.pair_members[:, 1]]))
        if len(self.quad_w):
            prod = np.prod(m[self.quad_members], axis=1)
            e -= float(self.quad_w @ prod)
        return e

    def energies(self, states) -> np.ndarray:
        """E(m) for a (nstates, n) array of bipolar states."""
        S = np.asarray(states, dtype=float)
        e = -(S @ self.bias)
        if len(self.pair_w):
            e -= (S[:, self.pair_members[:, 0]] * S[:, self.pair_members[:, 1]]) @ self.pair_w
        if len(self.quad_w):
            e -= (S[:, self.quad_members[:, 0]] * S[:, self.quad_members[:, 1]]
                  * S[:, self.quad_members[:, 2]] * S[:, self.quad_members[:, 3]]) @ self.quad_w
        return e

    def local_field(self, state, i: int) -> float:
        """I_i = -dE/dm_i = b_i + sum_j w_ij m_j + sum_quads w * (other three)."""
        m = np.asarray(state, dtype=float)
        f = float(self.bias[i])
        lo, hi = self.pair_ptr[i], self.pair_ptr[i + 1]
        f += float(self.pair_nbr_w[lo:hi] @ m[self.pair_nbr[lo:hi]])
        lo, hi = self.quad_ptr[i], self.quad_ptr[i + 1]
        if hi > lo:
            f += float(self.quad_term_w[lo:hi] @ np.prod(m[self.quad_partners[lo:hi]], axis=1))
        return f

    def term_multiset(self):
        """Canonical (members, weight) list, for round-trip checks."""
        out = [(tuple(mm), w) for mm, w in zip(self.pair_members, self.pair_w)]
        out += [(tuple(mm), w) for mm, w in zip(self.quad_members, self.quad_w)]
        return sorted(out)


@dataclass
class ClampSet:
    """P-bits frozen at fixed values; the sampler never updates them."""

    indices: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        self.indices = np.asarray(self.indices, dtype=np.int64)
        self.values = np.asarray(self.values, dtype=np.int8)
        if self.indices.shape != self.values.shape:
            raise ValueError("indices/values length mismatch")
        if not np.all(np.abs(self.values) == 1):
            raise ValueError("clamp values must be bipolar")
        if len(np.unique(self.indices)) != len(self.indices):
            raise ValueError("duplicate clamp index")


class ReplicaLattice:
    """InteractionGraph plus (site, slice) indexing from the Trotter mapping.

    P-bit layout: index_of(site, slice) = slice * M + site with 0-based
    arguments, periodic in the slice direction. perp_term_ids names the
    pair terms that carry the inter-slice coupling, so a transverse-field
    schedule can rescale them in place between sweeps.
    """

    def __init__(self, graph: InteractionGraph, M: int, slices: int,
                 perp_term_ids=None):
        if graph.n != M * slices:
            raise ValueError("graph size != M * slices")
        self.graph = graph
        self.M = M
        self.slices = slices
        self.perp_term_ids = (np.zeros(0, dtype=np.int64) if perp_term_ids is None
                              else np.asarray(perp_term_ids, dtype=np.int64))

    def index_of(self, site: int, slice_: int) -> int:
        """0-based site/slice; slice wraps periodically."""
        if not 0 <= site < self.M:
            raise ValueError("site out of range")
        return (int(slice_) % self.slices) * self.M + site

    def set_perp_weight(self, w: float):
        """Rescale every inter-slice term to weight w (no sampling may be
        running concurrently)."""
        self.graph.set_pair_weights(self.perp_term_ids,
                                    np.full(len(self.perp_term_ids), float(w)))


def serialize_lattice(lattice: ReplicaLattice) -> str:
    """Line-oriented text form: header, `order members... weight` terms,
    then `bias i value` lines. Indices are 0-based."""
    g = lattice.graph
    lines = [f"{lattice.M} {lattice.slices}"]
    for (i, j), w in zip(g.pair_members, g.pair_w):
        lines.append(f"2 {i} {j} {float(w)!r}")
    for (i, j, k, l), w in zip(g.quad_members, g.quad_w):
        lines.append(f"4 {i} {j} {k} {l} {float(w)!r}")
    for i, b in enumerate(g.bias):
        if b != 0.0:
            lines.append(f"bias {i} {float(b)!r}")
    return "\n".join(lines) + "\n"


def parse_lattice(text: str) -> ReplicaLattice:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    M, slices = (int(x) for x in lines[0].split())
    builder = GraphBuilder(M * slices)
    for ln in lines[1:]:
        parts = ln.split()
        if parts[0] == "bias":
            builder.add_bias(int(parts[1]), float(parts[2]))
        elif parts[0] == "2":
            builder.add_pair(int(parts[1]), int(parts[2]), float(parts[3]))
        elif parts[0] == "4":
            builder.add_quad(*(int(x) for x in parts[1:5]), float(parts[5]))
        else:
            raise ValueError(f"bad term line: {ln!r}")
    return ReplicaLattice(builder.build(), M, slices)
