"""Quantum-to-classical mapping tests: closed forms vs independent oracles."""

import numpy as np
import pytest
from scipy.linalg import expm

from pbitsim.exact import heisenberg_spec, tfim_spec
from pbitsim.graph import parse_lattice, serialize_lattice
from pbitsim.trotter import (cell_density_matrix, cell_hamiltonian,
                             chain_cost_graph, consolidate, dense_weight_matrix,
                             heisenberg_cell, map_heisenberg, map_ising,
                             map_tfim, perp_coupling)


class TestPerpCoupling:
    def test_high_precision_values(self):
        # frozen from a 30-digit evaluation of -log(tanh(beta*gx/n))/(2 beta)
        assert perp_coupling(0.5, 10.0, 10) == pytest.approx(
            0.771936832905304725, abs=1e-12)
        assert perp_coupling(10.0, 1.0, 250) == pytest.approx(
            0.160970447958997819, abs=1e-12)

    def test_limits(self):
        assert 0.0 < perp_coupling(1.0, 15.0, 1) < 1e-12
        assert perp_coupling(1.0, 1e-6, 1) > 6.0
        big, small = perp_coupling(1.0, 0.01, 1), perp_coupling(1.0, 10.0, 1)
        assert big > small > 0.0

    def test_degenerate_input(self):
        with pytest.raises(ValueError):
            perp_coupling(1.0, 0.0, 4)
        with pytest.raises(ValueError):
            perp_coupling(1.0, -2.0, 4)
        with pytest.raises(ValueError):
            perp_coupling(0.0, 1.0, 4)


class TestMapTfim:
    def test_fig6_lattice(self):
        lat = map_tfim(tfim_spec(4, 1.0, 10.0), 10, 0.5)
        g = lat.graph
        assert g.n == 40
        assert lat.slices == 10
        perp = set(lat.perp_term_ids)
        for t, w in enumerate(g.pair_w):
            if t in perp:
                assert w == pytest.approx(0.771936832905304725, abs=1e-12)
            else:
                assert w == pytest.approx(0.1, abs=1e-15)
        assert np.all(g.bias == 0.0)

    def test_bond_counts(self):
        lat = map_tfim(tfim_spec(4, 1.0, 2.0), 10, 0.5)
        assert len(lat.graph.pair_w) == 4 * 10 + 4 * 10
        assert len(lat.graph.quad_w) == 0

    def test_fig2_lattice_biases(self):
        lat = map_tfim(tfim_spec(8, 2.0, 1.0, 1.0), 250, 10.0)
        assert lat.graph.n == 2000
        assert np.allclose(lat.graph.bias, 1.0 / 250)

    def test_small_n_rejected(self):
        with pytest.raises(ValueError):
            map_tfim(tfim_spec(4, 1.0, 1.0), 1, 1.0)

    def test_periodic_slice_indexing(self):
        lat = map_tfim(tfim_spec(4, 1.0, 1.0), 5, 1.0)
        assert lat.index_of(2, 5) == lat.index_of(2, 0)
        assert lat.index_of(1, 3) == 3 * 4 + 1


class TestHeisenbergCell:
    def test_matrix_layout(self):
        m = cell_density_matrix(1.0, 0.7, 0.4, 2.0, 3)
        assert m[0, 0] == m[3, 3]
        assert m[1, 1] == m[2, 2]
        assert m[0, 3] == m[3, 0]
        assert m[1, 2] == m[2, 1]
        off = [m[0, 1], m[0, 2], m[1, 0], m[2, 0], m[1, 3], m[2, 3], m[3, 1], m[3, 2]]
        assert np.allclose(off, off[0])
        assert np.allclose(m, m.T)

    def test_matches_matrix_exponential(self):
        rng = np.random.default_rng(42)
        for _ in range(50):
            jx, jy = rng.uniform(-2, 2, size=2)
            gx = rng.uniform(1e-3, 3)
            beta = rng.uniform(0.1, 10)
            n = int(rng.integers(1, 9))
            ref = expm(-(beta / n) * cell_hamiltonian(jx, jy, gx))
            got = cell_density_matrix(jx, jy, gx, beta, n)
            scale = max(1.0, np.abs(ref).max())
            assert np.max(np.abs(got - ref)) <= 1e-9 * scale

    def test_example_cell_vs_expm(self):
        ref = expm(-1.0 / 2 * cell_hamiltonian(1.0, 1.0, 0.2))
        got = cell_density_matrix(1.0, 1.0, 0.2, 1.0, 2)
        assert np.max(np.abs(got - ref)) < 1e-10

    def test_t_from_f_consistency(self):
        c = heisenberg_cell(1.0, 0.6, 0.9, 0.3, 1.7, 4)
        beta = 1.7
        assert c.t1 == pytest.approx((c.f1 + c.f2 + c.f3 + c.f4) / (4 * beta), abs=1e-12)
        assert c.t2 == pytest.approx((c.f1 + c.f2 - c.f3 - c.f4) / (4 * beta), abs=1e-12)
        assert c.t3 == pytest.approx((c.f1 - c.f2 + c.f3 - c.f4) / (4 * beta), abs=1e-12)
        assert c.t4 == pytest.approx((c.f1 - c.f2 - c.f3 + c.f4) / (4 * beta), abs=1e-12)
        assert c.t0 == pytest.approx(0.9 / (2 * 4))

    def test_gamma_zero_degenerate(self):
        with pytest.raises(ValueError, match="gamma_x"):
            heisenberg_cell(1.0, 1.0, 1.0, 0.0, 1.0, 2)

    def test_energy_relation_all_16_elements(self):
        # -(1/beta) log of every block element equals the cell energy model
        # up to one additive constant
        jx, jy, jz, gx, beta, n = 1.3, 0.7, 0.5, 0.9, 2.0, 3
        c = heisenberg_cell(jx, jy, jz, gx, beta, n)
        block = cell_density_matrix(jx, jy, gx, beta, n)

        def basis_index(ma, mb):  # up=+1 is matrix index 0
            return (0 if ma == 1 else 2) + (0 if mb == 1 else 1)

        residuals = []
        for m1 in (-1, 1):
            for m2 in (-1, 1):
                for m3 in (-1, 1):
                    for m4 in (-1, 1):
                        lhs = -np.log(block[basis_index(m1, m2),
                                            basis_index(m3, m4)]) / beta
                        body = (-c.t1 * (m1 * m3 + m2 * m4)
                                - c.t2 * (m1 * m4 + m2 * m3)
                                - c.t3 * (m1 * m2 + m3 * m4)
                                - c.t4 * m1 * m2 * m3 * m4)
                        residuals.append(lhs - body)
        const = np.mean(residuals)
        assert np.max(np.abs(np.array(residuals) - const)) < 1e-9
        assert const == pytest.approx(2 * c.eps, abs=1e-9)

    def test_truth_table_conditional_log_ratio(self):
        # beta * local field on m1 must equal the f-table and the exhaustive
        # Boltzmann conditional for all 8 conditioning rows
        rng = np.random.default_rng(5)
        for _ in range(10):
            jx, jy = rng.uniform(-1.5, 1.5, size=2)
            gx = rng.uniform(0.05, 2.5)
            beta = rng.uniform(0.2, 5)
            n = int(rng.integers(1, 6))
            try:
                c = heisenberg_cell(jx, jy, 0.3, gx, beta, n)
            except ValueError:
                continue  # non-positive block entry: couplings undefined there
            table = {(1, 1, 1): c.f1, (1, 1, 0): c.f2, (1, 0, 1): c.f3,
                     (1, 0, 0): c.f4, (0, 1, 1): -c.f4, (0, 1, 0): -c.f3,
                     (0, 0, 1): -c.f2, (0, 0, 0): -c.f1}

            def cell_energy(m1, m2, m3, m4):
                return (-c.t1 * (m1 * m3 + m2 * m4) - c.t2 * (m1 * m4 + m2 * m3)
                        - c.t3 * (m1 * m2 + m3 * m4) - c.t4 * m1 * m2 * m3 * m4)

            for (s3, s4, s2), fval in table.items():
                m2, m3, m4 = 2 * s2 - 1, 2 * s3 - 1, 2 * s4 - 1
                field = (c.t3 * m2 + c.t1 * m3 + c.t2 * m4
                         + c.t4 * m2 * m3 * m4)
                assert beta * field == pytest.approx(fval, abs=1e-10)
                log_ratio = 0.5 * (-beta * cell_energy(1, m2, m3, m4)
                                   + beta * cell_energy(-1, m2, m3, m4))
                assert log_ratio == pytest.approx(fval, abs=1e-10)


class TestMapHeisenberg:
    def test_shape_and_quad_count(self):
        lat = map_heisenberg(heisenberg_spec(4, 1.0, 1.0, 1.0, 0.5), 2, 1.0)
        assert lat.slices == 4
        assert lat.graph.n == 16
        assert len(lat.graph.quad_w) == (4 // 2) * 4

    def test_duplicate_bond_summing(self):
        spec = heisenberg_spec(4, 1.0, 1.0, 1.0, 0.5)
        lat = map_heisenberg(spec, 2, 1.0)
        c = heisenberg_cell(1.0, 1.0, 1.0, 0.5, 1.0, 2)
        g = lat.graph
        # horizontal in-slice bonds carry t0 + t3 where a cell edge overlaps
        found = False
        for (i, j), w in zip(g.pair_members, g.pair_w):
            if i // 4 == j // 4 and abs(i - j) == 1:  # same slice, adjacent sites
                assert w == pytest.approx(c.t0 + c.t3, abs=1e-12)
                found = True
        assert found

    def test_exhaustive_small_lattice_matches_quantum(self):
        # M=2, n=2 -> 8 p-bits: exact Boltzmann sum over all 256 lattice
        # states, pooled per slice, vs the quantum diagonal distribution
        from pbitsim.exact import build_hamiltonian, joint_distribution

        spec = heisenberg_spec(2, 1.0, 0.7, 0.9, 0.8)
        beta = 1.2
        lat = map_heisenberg(spec, 2, beta)
        g = lat.graph
        states = np.arange(1 << g.n)
        S = (((states[:, None] >> np.arange(g.n)[None, :]) & 1) * 2 - 1).astype(float)
        E = g.energies(S)
        w = np.exp(-beta * (E - E.min()))
        w /= w.sum()
        probs = np.zeros(4)
        for k in range(lat.slices):
            idx = np.zeros(len(states), dtype=int)
            for i in range(lat.M):
                idx = (idx << 1) | (S[:, lat.index_of(i, k)] > 0).astype(int)
            np.add.at(probs, idx, w)
        probs /= lat.slices
        hq = joint_distribution(build_hamiltonian(spec), beta, 2)
        assert 0.5 * np.abs(probs - hq.probs).sum() < 0.05  # finite-n error only

    def test_gamma_z_bias_optional(self):
        spec = heisenberg_spec(4, 1.0, 1.0, 1.0, 0.5)
        assert np.all(map_heisenberg(spec, 2, 1.0).graph.bias == 0.0)
        lat = map_heisenberg(spec, 2, 1.0, gamma_z=0.8)
        assert np.allclose(lat.graph.bias, 0.8 / 4)


class TestConsolidate:
    def test_torus_degree(self):
        lat = map_tfim(tfim_spec(8, 2.0, 1.0, 1.0), 250, 10.0)
        g = consolidate(lat)
        degrees = np.diff(g.pair_ptr)
        assert np.all(degrees == 4)  # 2 ring + 2 slice neighbors

    def test_all_up_energy(self):
        lat = map_tfim(tfim_spec(4, 1.0, 2.0, 0.3), 4, 1.0)
        g = consolidate(lat)
        e = g.energy(np.ones(g.n))
        assert e == pytest.approx(-g.pair_w.sum() - g.bias.sum(), abs=1e-12)

    def test_roundtrip_preserves_terms(self):
        lat = map_heisenberg(heisenberg_spec(4, 1.0, 0.8, 0.9, 0.4), 3, 1.5)
        text = serialize_lattice(lat)
        lat2 = parse_lattice(text)
        assert lat2.M == lat.M and lat2.slices == lat.slices
        assert lat.graph.term_multiset() == lat2.graph.term_multiset()
        assert np.allclose(lat.graph.bias, lat2.graph.bias)

    def test_dense_weight_matrix_symmetric(self):
        lat = map_tfim(tfim_spec(4, 1.0, 1.0), 3, 1.0)
        W = dense_weight_matrix(lat.graph)
        assert np.allclose(W, W.T)
        assert W.shape == (12, 12)


def test_map_ising_replicates_diagonal_quads():
    # diagonal 4-body cost terms replicate per slice with weight w/n,
    # exactly like pair terms (they commute with everything diagonal)
    from pbitsim.graph import GraphBuilder

    b = GraphBuilder(4)
    b.add_quad(0, 1, 2, 3, 1.0)
    b.add_pair(0, 1, 2.0)
    lat = map_ising(b.build(), 4, 1.0, 1.0)
    assert len(lat.graph.quad_w) == 4
    assert np.allclose(lat.graph.quad_w, 0.25)
    members = {tuple(mm) for mm in lat.graph.quad_members}
    assert members == {(k * 4, k * 4 + 1, k * 4 + 2, k * 4 + 3) for k in range(4)}
