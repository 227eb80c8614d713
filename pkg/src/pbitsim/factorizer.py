"""Invertible binary multiplier built from p-bit logic gates.

Gates are energy wells: pair couplings and biases whose degenerate ground
states are exactly the gate's truth table, with a positive gap to every
invalid row. Wiring two gate terminals together merges the two p-bits into
one node that accumulates both sets of incident terms; this keeps the
problem size down and is validated by exhaustive enumeration. Clamping the
product register turns the forward multiplier into a factorizer for CA or
SQA.

Gate constants come from arithmetic penalty identities (the exhaustive
ground-state oracle is the contract, not the specific numbers):
  AND        : the binary penalty  A*B - 2(A+B)*C + 3C
  FULL_ADDER : (a + b + cin - sum - 2*cout)^2 plus a 4-body parity bonus
               -t * a*b*cin*sum (sum = a*b*cin on every valid row), which
               removes the compensating sum/carry local minimum
both normalized so the largest pair coupling magnitude is 1 before the
overall weight_scale; annealing ramps then start genuinely hot at
beta ~ 1 and freeze by beta ~ 10. Structural zero inputs (each row's
first carry-in, row 1's missing top addend) are p-bits pinned low by a
strong bias, which keeps every adder cell's parity term intact.
"""

from dataclasses import dataclass, field

import numpy as np

from .annealing import (AnnealResult, Schedule, ensemble_stats, run_ca,
                        run_sqa)
from .graph import ClampSet, GraphBuilder, InteractionGraph


@dataclass
class GateBlock:
    name: str
    variables: tuple
    pair_terms: tuple       # ((local_i, local_j, weight), ...)
    biases: tuple           # one per variable
    truth_table: frozenset  # valid bipolar assignments
    quad_terms: tuple = ()  # ((i, j, k, l, weight), ...)


AND_BLOCK = GateBlock(
    name="AND",
    variables=("a", "b", "out"),
    pair_terms=((0, 1, -0.5), (0, 2, 1.0), (1, 2, 1.0)),
    biases=(0.5, 0.5, -1.0),
    truth_table=frozenset(
        (a, b, (a > 0 and b > 0) * 2 - 1) for a in (-1, 1) for b in (-1, 1)
    ),
)

FULL_ADDER_BLOCK = GateBlock(
    name="FULL_ADDER",
    variables=("a", "b", "cin", "sum", "cout"),
    pair_terms=(
        (0, 1, -0.5), (0, 2, -0.5), (1, 2, -0.5),
        (0, 3, 0.5), (1, 3, 0.5), (2, 3, 0.5),
        (0, 4, 1.0), (1, 4, 1.0), (2, 4, 1.0),
        (3, 4, -1.0),
    ),
    biases=(0.0, 0.0, 0.0, 0.0, 0.0),
    quad_terms=((0, 1, 2, 3, 0.5),),
    truth_table=frozenset(
        (a, b, c, a * b * c, (a + b + c > 0) * 2 - 1)
        for a in (-1, 1) for b in (-1, 1) for c in (-1, 1)
    ),
)

ZERO_PIN_BIAS = -2.0  # bias holding a structural-zero p-bit at -1


def gate_block(kind: str) -> GateBlock:
    blocks = {"AND": AND_BLOCK, "FULL_ADDER": FULL_ADDER_BLOCK}
    if kind not in blocks:
        raise ValueError(f"unknown gate kind {kind!r}")
    return blocks[kind]


@dataclass
class CircuitGraph:
    graph: InteractionGraph
    node_roles: dict
    a_bits: np.ndarray       # operand register node ids, LSB first
    b_bits: np.ndarray
    p_bits: np.ndarray       # product register node ids, LSB first
    merged_pairs: list = field(default_factory=list)


class _CircuitBuilder:
    """Fresh node per gate terminal; equality links either merge nodes
    (union-find) or become strong ferromagnetic bonds when merge=False."""

    def __init__(self):
        self.roles = []
        self.pairs = []   # (u, v, w) on raw node ids
        self.quads = []   # (u, v, x, y, w)
        self.biases = []  # (u, b)
        self.links = []   # equality constraints (u, v)

    def new_node(self, role: str) -> int:
        self.roles.append(role)
        return len(self.roles) - 1

    def add_gate(self, block: GateBlock, prefix: str):
        ids = [self.new_node(f"{prefix}.{v}") for v in block.variables]
        for i, j, w in block.pair_terms:
            self.pairs.append((ids[i], ids[j], w))
        for i, j, k, l, w in block.quad_terms:
            self.quads.append((ids[i], ids[j], ids[k], ids[l], w))
        for i, b in enumerate(block.biases):
            if b:
                self.biases.append((ids[i], b))
        return ids

    def link(self, u: int, v: int):
        self.links.append((u, v))

    def finalize(self, merge: bool = True, link_weight: float = 4.0):
        n_raw = len(self.roles)
        parent = list(range(n_raw))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        merged_pairs = []
        if merge:
            for u, v in self.links:
                ru, rv = find(u), find(v)
                if ru != rv:
                    parent[max(ru, rv)] = min(ru, rv)
                merged_pairs.append((u, v))
        live = sorted({find(x) for x in range(n_raw)})
        remap = {r: i for i, r in enumerate(live)}

        def node_of(x):
            return remap[find(x)]

        b = GraphBuilder(len(live))
        for u, v, w in self.pairs:
            b.add_pair(node_of(u), node_of(v), w)
        for u, v, x, y, w in self.quads:
            b.add_quad(node_of(u), node_of(v), node_of(x), node_of(y), w)
        for u, bias in self.biases:
            b.add_bias(node_of(u), bias)
        if not merge:
            for u, v in self.links:
                b.add_pair(node_of(u), node_of(v), link_weight)
        roles = {}
        for x in range(n_raw):
            roles.setdefault(node_of(x), []).append(self.roles[x])
        return b.build(), roles, node_of, merged_pairs


def build_multiplier(bits: int, merge: bool = True, link_weight: float = 4.0,
                     weight_scale: float = 2.0) -> CircuitGraph:
    """Array multiplier: bits x bits operands into a 2*bits product.

    AND blocks form the partial products pp[i][j]; full-adder rows
    accumulate them with rippling carries. Structural zero inputs (first
    carry-in of each row, the missing top term of row 1) are folded into
    biases rather than kept as clamped nodes.

    weight_scale multiplies every coupling and bias uniformly (ground
    states are unchanged). The default 2.0 is calibrated so both annealing
    windows behave: CA's beta ramp 1 -> 10 starts hot and ends frozen, and
    SQA at beta = 10 with 10 slices keeps slices mobile while columns
    condense.
    """
    if bits < 2:
        raise ValueError("need at least 2-bit operands")
    cb = _CircuitBuilder()
    a_ops = [cb.new_node(f"a{i}") for i in range(bits)]
    b_ops = [cb.new_node(f"b{j}") for j in range(bits)]
    pp = [[None] * bits for _ in range(bits)]
    for j in range(bits):
        for i in range(bits):
            ids = cb.add_gate(AND_BLOCK, f"and_{i}_{j}")
            cb.link(ids[0], a_ops[i])
            cb.link(ids[1], b_ops[j])
            pp[i][j] = ids[2]
    product = [pp[0][0]]
    prev_sum = [pp[i][0] for i in range(1, bits)]  # significances 1..bits-1
    prev_top = None                                # significance bits of row j-1
    for j in range(1, bits):
        carry = None
        cur_sum = []
        for i in range(bits):
            ids = cb.add_gate(FULL_ADDER_BLOCK, f"fa_{j}_{i}")
            fa_a, fa_b, fa_cin, fa_sum, fa_cout = ids
            if i < bits - 1:
                cb.link(fa_a, prev_sum[i])
            elif prev_top is not None:
                cb.link(fa_a, prev_top)
            else:
                cb.biases.append((fa_a, ZERO_PIN_BIAS))  # missing top addend
            cb.link(fa_b, pp[i][j])
            if carry is None:
                cb.biases.append((fa_cin, ZERO_PIN_BIAS))  # no carry into the row
            else:
                cb.link(fa_cin, carry)
            carry = fa_cout
            cur_sum.append(fa_sum)
        product.append(cur_sum[0])
        prev_sum = cur_sum[1:]
        prev_top = carry
    product.extend(prev_sum)
    product.append(prev_top)
    if weight_scale != 1.0:
        cb.pairs = [(u, v, w * weight_scale) for u, v, w in cb.pairs]
        cb.biases = [(u, b * weight_scale) for u, b in cb.biases]
        link_weight *= weight_scale
    graph, roles, node_of, merged = cb.finalize(merge, link_weight)
    return CircuitGraph(
        graph=graph,
        node_roles=roles,
        a_bits=np.array([node_of(x) for x in a_ops], dtype=np.int64),
        b_bits=np.array([node_of(x) for x in b_ops], dtype=np.int64),
        p_bits=np.array([node_of(x) for x in product], dtype=np.int64),
        merged_pairs=merged,
    )


def _int_to_bipolar(value: int, nbits: int) -> np.ndarray:
    bits = (value >> np.arange(nbits)) & 1
    return (2 * bits - 1).astype(np.int8)


def _bipolar_to_int(values) -> int:
    bits = (np.asarray(values) > 0).astype(int)
    return int(bits @ (1 << np.arange(len(bits))))


def clamp_product(circuit: CircuitGraph, value: int) -> ClampSet:
    nbits = len(circuit.p_bits)
    if not 0 <= value < (1 << nbits):
        raise ValueError(f"{value} does not fit the {nbits}-bit product register")
    return ClampSet(circuit.p_bits, _int_to_bipolar(value, nbits))


def decode_factors(state, circuit: CircuitGraph) -> tuple:
    """Binary-decode the two operand registers (-1 -> 0, +1 -> 1)."""
    state = np.asarray(state)
    return (_bipolar_to_int(state[circuit.a_bits]),
            _bipolar_to_int(state[circuit.b_bits]))


def decode_product(state, circuit: CircuitGraph) -> int:
    return _bipolar_to_int(np.asarray(state)[circuit.p_bits])


def clamp_and_solve(circuit: CircuitGraph, value: int, mode: str,
                    schedule: Schedule, ensembles: int, seed: int = 0,
                    replicas: int = 10, sweeps_per_step: int = 1):
    """Anneal the product-clamped circuit `ensembles` times.

    CA counts one sample per replica (replicas are independent copies, so
    each contributes an answer); SQA counts one per ensemble (the whole
    replica lattice reads out once, by majority vote). Returns
    (EnsembleStats, per-ensemble answer list).
    """
    clamps = clamp_product(circuit, value)
    results = []
    answers = []
    for e in range(ensembles):
        if mode == "ca":
            res = run_ca(circuit.graph, schedule, replicas,
                         seed=seed + 7919 * e, sweeps_per_step=sweeps_per_step,
                         clamps=clamps)
        elif mode == "sqa":
            res = run_sqa(circuit.graph, replicas, schedule,
                          seed=seed + 7919 * e, sweeps_per_step=sweeps_per_step,
                          clamps=clamps)
        else:
            raise ValueError("mode must be 'ca' or 'sqa'")
        results.append(res)
        answers.append([decode_factors(row, circuit) for row in res.final_states])
    stats = ensemble_stats(results, lambda pq: pq[0] * pq[1] == value,
                           decode=lambda row: decode_factors(row, circuit))
    return stats, answers


def enumerate_ground_states(graph: InteractionGraph, tol: float = 1e-9):
    """Exhaustive chunked scan of all 2**n states: (min energy, ground
    states, gap to the first excited level)."""
    if graph.n > 26:
        raise ValueError("exhaustive enumeration capped at 26 p-bits")
    total = 1 << graph.n
    chunk = min(total, 1 << 18)
    shifts = np.arange(graph.n)[None, :]
    e0 = np.inf
    gap_level = np.inf
    ground_chunks = []
    for start in range(0, total, chunk):
        states = np.arange(start, min(start + chunk, total), dtype=np.int64)
        S = (((states[:, None] >> shifts) & 1) * 2 - 1).astype(np.int8)
        E = graph.energies(S)
        lo = E.min()
        if lo < e0 - tol:
            ground_chunks = []
            gap_level = min(gap_level, e0)  # old ground level is excited now
            e0 = lo
        if lo <= e0 + tol:
            ground_chunks.append(S[E <= e0 + tol].copy())
        above = E[E > e0 + tol]
        if len(above):
            gap_level = min(gap_level, above.min())
    ground = np.concatenate(ground_chunks) if ground_chunks else np.zeros((0, graph.n), np.int8)
    gap = float(gap_level - e0) if np.isfinite(gap_level) else float("inf")
    return float(e0), ground, gap
