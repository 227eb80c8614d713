"""Interaction-graph construction, adjacency indexing, and energy/field duality."""

import numpy as np
import pytest

from pbitsim.graph import ClampSet, GraphBuilder


def random_graph(rng, n=10, n_pairs=14, n_quads=4):
    b = GraphBuilder(n)
    for _ in range(n_pairs):
        i, j = rng.choice(n, size=2, replace=False)
        b.add_pair(int(i), int(j), float(rng.normal()))
    for _ in range(n_quads):
        idx = rng.choice(n, size=4, replace=False)
        b.add_quad(*(int(x) for x in idx), float(rng.normal()))
    for i in range(n):
        b.add_bias(i, float(rng.normal() * 0.5))
    return b.build()


def test_duplicate_pairs_summed():
    b = GraphBuilder(3)
    b.add_pair(0, 1, 1.5)
    b.add_pair(1, 0, 2.5)
    g = b.build()
    assert len(g.pair_w) == 1
    assert g.pair_w[0] == 4.0


def test_duplicate_quads_summed():
    b = GraphBuilder(5)
    b.add_quad(0, 1, 2, 3, 1.0)
    b.add_quad(3, 2, 1, 0, 0.25)
    g = b.build()
    assert len(g.quad_w) == 1
    assert g.quad_w[0] == 1.25


def test_members_must_be_distinct():
    b = GraphBuilder(4)
    with pytest.raises(ValueError):
        b.add_pair(1, 1, 1.0)
    with pytest.raises(ValueError):
        b.add_quad(0, 1, 2, 2, 1.0)


def test_adjacency_is_inverse_index():
    rng = np.random.default_rng(3)
    g = random_graph(rng)
    # rebuild incident term lists from the CSR and compare with term lists
    for i in range(g.n):
        nbrs = sorted(zip(g.pair_nbr[g.pair_ptr[i]:g.pair_ptr[i + 1]],
                          g.pair_nbr_w[g.pair_ptr[i]:g.pair_ptr[i + 1]]))
        expected = sorted((j if a == i else a, w)
                          for (a, j), w in zip(g.pair_members, g.pair_w)
                          if i in (a, j))
        assert nbrs == expected
        q_count = g.quad_ptr[i + 1] - g.quad_ptr[i]
        assert q_count == sum(1 for mm in g.quad_members if i in mm)


def test_local_field_pair_and_bias():
    b = GraphBuilder(2)
    b.add_pair(0, 1, 1.0)
    b.add_bias(0, 0.5)
    g = b.build()
    assert g.local_field([1.0, 1.0], 0) == pytest.approx(1.5)


def test_local_field_quad_contribution():
    b = GraphBuilder(4)
    b.add_quad(0, 1, 2, 3, 0.3)
    g = b.build()
    assert g.local_field([1.0, 1.0, 1.0, -1.0], 0) == pytest.approx(-0.3)


def test_energy_examples():
    b = GraphBuilder(4)
    for i in range(4):
        b.add_pair(i, (i + 1) % 4, 1.0)
    g = b.build()
    assert g.energy([1, 1, 1, 1]) == pytest.approx(-4.0)
    # global flip leaves even-order energy unchanged
    rng = np.random.default_rng(0)
    m = rng.choice([-1.0, 1.0], size=4)
    assert g.energy(m) == pytest.approx(g.energy(-m))


def test_field_is_energy_derivative():
    rng = np.random.default_rng(11)
    for _ in range(20):
        g = random_graph(rng)
        m = rng.choice([-1.0, 1.0], size=g.n)
        for i in range(g.n):
            flipped = m.copy()
            flipped[i] = -flipped[i]
            delta = g.energy(flipped) - g.energy(m)
            assert delta == pytest.approx(2.0 * m[i] * g.local_field(m, i), abs=1e-10)


def test_energies_vectorized_matches_scalar():
    rng = np.random.default_rng(7)
    g = random_graph(rng, n=8)
    S = rng.choice([-1.0, 1.0], size=(32, 8))
    ev = g.energies(S)
    for k in range(32):
        assert ev[k] == pytest.approx(g.energy(S[k]), abs=1e-12)


def test_set_pair_weights_updates_csr():
    b = GraphBuilder(3)
    b.add_pair(0, 1, 1.0)
    b.add_pair(1, 2, 2.0)
    g = b.build()
    g.set_pair_weights(np.array([1]), np.array([5.0]))
    assert g.local_field([1.0, 1.0, 1.0], 2) == pytest.approx(5.0)
    assert g.local_field([1.0, 1.0, 1.0], 1) == pytest.approx(6.0)


def test_clamp_validation():
    with pytest.raises(ValueError):
        ClampSet(np.array([0, 0]), np.array([1, 1]))
    with pytest.raises(ValueError):
        ClampSet(np.array([0]), np.array([2]))
