"""Gate wells, multiplier wiring, node merging, and invertible operation.

Everything structural is validated by exhaustive enumeration; the gate
weight values themselves are free choices locked only through these
oracles.
"""

import numpy as np
import pytest

from pbitsim.annealing import make_linear_schedule, run_ca
from pbitsim.factorizer import (build_multiplier, clamp_and_solve,
                                clamp_product, decode_factors, decode_product,
                                enumerate_ground_states, gate_block)
from pbitsim.graph import ClampSet, GraphBuilder


def block_graph(block):
    b = GraphBuilder(len(block.variables))
    for i, j, w in block.pair_terms:
        b.add_pair(i, j, w)
    for i, j, k, l, w in block.quad_terms:
        b.add_quad(i, j, k, l, w)
    for i, bias in enumerate(block.biases):
        if bias:
            b.add_bias(i, bias)
    return b.build()


class TestGateBlocks:
    def test_and_ground_states(self):
        block = gate_block("AND")
        e0, ground, gap = enumerate_ground_states(block_graph(block))
        assert len(ground) == 4
        assert gap > 0
        assert {tuple(int(x) for x in g) for g in ground} == set(block.truth_table)

    def test_full_adder_ground_states(self):
        block = gate_block("FULL_ADDER")
        e0, ground, gap = enumerate_ground_states(block_graph(block))
        assert len(ground) == 8
        assert gap > 0
        assert {tuple(int(x) for x in g) for g in ground} == set(block.truth_table)

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            gate_block("XOR")


class TestMultiplierStructure:
    def test_node_counts(self):
        # operands 2B + partial products B^2 + adder sums/carries 2B(B-1)
        # + B pinned structural zeros = 3B^2 + B
        for bits in (2, 3, 4):
            circuit = build_multiplier(bits)
            assert circuit.graph.n == 3 * bits * bits + bits
        unmerged = build_multiplier(2, merge=False)
        assert unmerged.graph.n > build_multiplier(2).graph.n
        assert len(build_multiplier(2).merged_pairs) > 0

    def test_registers_are_disjoint_and_complete(self):
        c = build_multiplier(3)
        assert len(c.a_bits) == 3 and len(c.b_bits) == 3 and len(c.p_bits) == 6
        assert len(set(c.a_bits) | set(c.b_bits) | set(c.p_bits)) == 12

    def test_weights_sparse_and_discrete(self):
        # couplings come from a small finite set; fan-in stays bounded as
        # the multiplier grows
        values = set()
        degrees = []
        for bits in (2, 3, 4):
            g = build_multiplier(bits).graph
            values |= {round(float(w), 9) for w in g.pair_w}
            values |= {round(float(w), 9) for w in g.quad_w}
            degrees.append(int(np.diff(g.pair_ptr).max()))
        assert len(values) <= 12
        assert degrees[2] <= degrees[1] + 2  # no growth with operand width
        assert max(degrees) <= 16

    def test_every_ground_state_is_a_multiplication(self):
        c = build_multiplier(2)
        _, ground, gap = enumerate_ground_states(c.graph)
        assert gap > 0
        seen = set()
        for state in ground:
            a, b = decode_factors(state, c)
            p = decode_product(state, c)
            assert a * b == p
            seen.add((a, b))
        assert seen == {(a, b) for a in range(4) for b in range(4)}

    def test_merging_preserves_ground_set(self):
        merged = build_multiplier(2)
        unmerged = build_multiplier(2, merge=False, link_weight=4.0)
        _, g_m, gap_m = enumerate_ground_states(merged.graph)
        _, g_u, gap_u = enumerate_ground_states(unmerged.graph)
        assert gap_m > 0 and gap_u > 0
        answers_m = sorted((decode_factors(s, merged) for s in g_m))
        answers_u = sorted((decode_factors(s, unmerged) for s in g_u))
        assert answers_m == answers_u
        assert len(g_m) == len(g_u)


class TestClamping:
    def _clamped_ground_answers(self, circuit, value):
        clamps = clamp_product(circuit, value)
        n = circuit.graph.n
        states = np.arange(1 << n)
        S = (((states[:, None] >> np.arange(n)[None, :]) & 1) * 2 - 1).astype(np.int8)
        mask = np.all(S[:, clamps.indices] == clamps.values, axis=1)
        S = S[mask]
        E = circuit.graph.energies(S)
        ground = S[E <= E.min() + 1e-9]
        return sorted({decode_factors(s, circuit) for s in ground})

    def test_clamping_prunes_to_factor_pairs(self):
        c = build_multiplier(2)
        for value in (1, 2, 3, 4, 6, 9):
            answers = self._clamped_ground_answers(c, value)
            expected = sorted({(a, b) for a in range(4) for b in range(4)
                               if a * b == value})
            assert answers == expected

    def test_out_of_range_value(self):
        c = build_multiplier(2)
        with pytest.raises(ValueError):
            clamp_product(c, 16)
        with pytest.raises(ValueError):
            clamp_product(c, -1)

    def test_clamped_bits_never_updated(self):
        c = build_multiplier(2)
        clamps = clamp_product(c, 6)
        sched = make_linear_schedule(1.0, 0.2, 50)
        res = run_ca(c.graph, sched, replicas=4, seed=2, clamps=clamps)
        for row in res.final_states:
            assert decode_product(row, c) == 6


class TestDecode:
    def test_known_registers(self):
        c = build_multiplier(4)
        state = -np.ones(c.graph.n, dtype=np.int8)
        # 11 = 1011b, 13 = 1101b, LSB-first registers
        for k, bit in enumerate([1, 1, 0, 1]):
            state[c.a_bits[k]] = 2 * bit - 1
        for k, bit in enumerate([1, 0, 1, 1]):
            state[c.b_bits[k]] = 2 * bit - 1
        assert decode_factors(state, c) == (11, 13)

    def test_all_down_is_zero(self):
        c = build_multiplier(3)
        assert decode_factors(-np.ones(c.graph.n), c) == (0, 0)

    def test_roundtrip_clamp_encoding(self):
        c = build_multiplier(3)
        for value in (0, 1, 17, 63):
            clamps = clamp_product(c, value)
            state = np.zeros(c.graph.n, dtype=np.int8)
            state[clamps.indices] = clamps.values
            assert decode_product(state, c) == value


class TestForwardMultiplication:
    def test_clamped_operands_produce_product(self):
        c = build_multiplier(4)
        idx = np.concatenate([c.a_bits, c.b_bits])
        vals = np.concatenate([
            (2 * ((5 >> np.arange(4)) & 1) - 1),
            (2 * ((7 >> np.arange(4)) & 1) - 1),
        ]).astype(np.int8)
        clamps = ClampSet(idx, vals)
        sched = make_linear_schedule(1.0, 0.1, 10000)
        res = run_ca(c.graph, sched, replicas=80, seed=4, clamps=clamps,
                     order="random")
        ok = sum(decode_product(row, c) == 35 for row in res.final_states)
        assert ok / 80 >= 0.95


class TestSolve:
    def test_desk_scale_sqa_and_ca(self):
        # calibrated desk-scale run; the acceptance suite runs the full
        # 100-ensemble version, this is a faster smoke of the same setup
        c = build_multiplier(4)
        sqa_sched = make_linear_schedule(3.0, 0.1, 10000, kind="gamma_ramp",
                                         fixed_beta=10.0)
        stats_sqa, _ = clamp_and_solve(c, 35, "sqa", sqa_sched, ensembles=12,
                                       seed=50)
        ca_sched = make_linear_schedule(1.0, 0.1, 10000)
        stats_ca, _ = clamp_and_solve(c, 35, "ca", ca_sched, ensembles=12,
                                      seed=51)
        assert stats_sqa.probability >= 0.9
        assert stats_ca.probability >= 0.5
        answers = set(stats_sqa.breakdown) | set(stats_ca.breakdown)
        assert answers & {(5, 7), (7, 5)}
