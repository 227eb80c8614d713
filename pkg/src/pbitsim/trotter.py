"""Quantum-to-classical mapping: replica lattices from spin-chain models.

A d=1 quantum model at inverse temperature beta becomes a d+1 classical
p-bit lattice. For the transverse-field Ising chain the mapping uses n
replica slices with in-slice couplings J/n, biases Gamma_z/n, and the
inter-slice coupling

    J_perp = -1/(2 beta) * log tanh(beta Gamma_x / n),

periodic in the slice direction. For the Heisenberg chain the bond set is
split into two non-commuting halves, giving 2n slices and a chessboard of
4-spin cells; each shaded cell carries two-body couplings t1 (vertical),
t2 (diagonal), t3 (horizontal) and a 4-body term t4, with coefficients
given in closed form below. Diagonal zz bonds contribute t0 = Jz/(2n) in
every slice.
"""

import math
from dataclasses import dataclass

import numpy as np

from .exact import QuantumModelSpec
from .graph import GraphBuilder, InteractionGraph, ReplicaLattice


def perp_coupling(beta: float, gamma_x: float, n: int) -> float:
    """Inter-slice coupling; positive, diverging as gamma_x -> 0."""
    if beta <= 0:
        raise ValueError("beta must be positive")
    if n < 1:
        raise ValueError("need at least one replica")
    if gamma_x <= 0:
        raise ValueError("perp coupling diverges at gamma_x <= 0")
    return -math.log(math.tanh(beta * gamma_x / n)) / (2.0 * beta)


def map_ising(graph: InteractionGraph, n: int, beta: float, gamma_x: float,
              gamma_z_bias: bool = True) -> ReplicaLattice:
    """Replicate an arbitrary Ising cost graph into n coupled slices.

    In-slice weights (pair and diagonal 4-body alike) and, optionally,
    biases are divided by n; every column (i, k)-(i, k+1) gets the
    transverse coupling, periodic in k. This is the general form behind
    map_tfim and the annealer.
    """
    if n < 2:
        raise ValueError("need n >= 2 slices for an imaginary-time ring")
    jperp = perp_coupling(beta, gamma_x, n)
    M = graph.n
    b = GraphBuilder(M * n)
    for k in range(n):
        off = k * M
        for (i, j), w in zip(graph.pair_members, graph.pair_w):
            b.add_pair(off + i, off + j, w / n)
        for (i, j, kk, l), w in zip(graph.quad_members, graph.quad_w):
            b.add_quad(off + i, off + j, off + kk, off + l, w / n)
        if gamma_z_bias:
            for i in range(M):
                if graph.bias[i] != 0.0:
                    b.add_bias(off + i, graph.bias[i] / n)
    for k in range(n):
        off, offn = k * M, ((k + 1) % n) * M
        for i in range(M):
            b.add_pair(off + i, offn + i, jperp)
    g = b.build()
    # inter-slice terms are exactly those crossing a slice boundary
    slice_of = g.pair_members // M
    perp_ids = np.nonzero(slice_of[:, 0] != slice_of[:, 1])[0]
    return ReplicaLattice(g, M, n, perp_ids)


def chain_cost_graph(spec: QuantumModelSpec) -> InteractionGraph:
    """The classical (diagonal) part of a TFIM chain as a cost graph."""
    b = GraphBuilder(spec.M)
    for i in range(spec.M):
        b.add_pair(i, (i + 1) % spec.M, float(spec.couplings[i]))
        if spec.gamma_z:
            b.add_bias(i, spec.gamma_z)
    return b.build()


def map_tfim(spec: QuantumModelSpec, n: int, beta: float) -> ReplicaLattice:
    """TFIM chain -> n-slice classical lattice (see module docstring)."""
    if spec.kind != "tfim":
        raise ValueError("map_tfim needs a tfim spec")
    return map_ising(chain_cost_graph(spec), n, beta, spec.gamma_x)


@dataclass
class HeisenbergCellCoefficients:
    """Closed-form 4-spin cell data for one shaded chessboard cell.

    x1..x5 are the distinct entries of the 4x4 two-site density block
    exp(-beta zeta / n); f1..f4 are the half-log ratios entering the
    conditional-probability truth table; t0..t4 are the lattice couplings.
    The additive constant eps of the cell energy relation is recorded but
    never enters the lattice (it cancels in the Boltzmann weights).
    """

    jx: float
    jy: float
    jz: float
    gamma_x: float
    beta: float
    n: int
    x: float
    x1: float
    x2: float
    x3: float
    x4: float
    x5: float
    f1: float
    f2: float
    f3: float
    f4: float
    t0: float
    t1: float
    t2: float
    t3: float
    t4: float
    eps: float


def cell_density_block(jx, jy, gamma_x, beta, n):
    """x1..x5 of exp(-beta zeta / n) in closed form (no positivity needed)."""
    x = math.sqrt(gamma_x**2 + jy**2)
    if x <= 0:
        raise ValueError("gamma_x and jy cannot both vanish (zero bond gap)")
    a = beta / n
    ch, sh = math.cosh(a * x), math.sinh(a * x)
    e1 = math.exp(a * jx)
    x1 = 0.5 * e1 * (ch - (jy / x) * sh) + 0.5 * math.exp(-a * (jx - jy))
    x2 = 0.5 * e1 * (ch - (jy / x) * sh) - 0.5 * math.exp(-a * (jx - jy))
    x3 = 0.5 * e1 * (ch + (jy / x) * sh) + 0.5 * math.exp(-a * (jx + jy))
    x4 = 0.5 * e1 * (ch + (jy / x) * sh) - 0.5 * math.exp(-a * (jx + jy))
    x5 = 0.5 * e1 * (gamma_x / x) * sh
    return x, x1, x2, x3, x4, x5


def cell_density_matrix(jx, jy, gamma_x, beta, n) -> np.ndarray:
    """The full 4x4 block, for comparison against a matrix exponential."""
    _, x1, x2, x3, x4, x5 = cell_density_block(jx, jy, gamma_x, beta, n)
    return np.array([[x1, x5, x5, x2],
                     [x5, x3, x4, x5],
                     [x5, x4, x3, x5],
                     [x2, x5, x5, x1]])


def cell_hamiltonian(jx, jy, gamma_x) -> np.ndarray:
    """zeta: the two-site bond Hamiltonian whose exponential the block is."""
    sx = np.array([[0.0, 1.0], [1.0, 0.0]])
    syy = np.array([[0.0, 0.0, 0.0, -1.0],
                    [0.0, 0.0, 1.0, 0.0],
                    [0.0, 1.0, 0.0, 0.0],
                    [-1.0, 0.0, 0.0, 0.0]])
    i2 = np.eye(2)
    return (-jx * np.kron(sx, sx) - jy * syy
            - 0.5 * gamma_x * (np.kron(sx, i2) + np.kron(i2, sx)))


def heisenberg_cell(jx, jy, jz, gamma_x, beta, n) -> HeisenbergCellCoefficients:
    """Closed-form cell coefficients; raises on a degenerate (log of <= 0)
    block, which happens exactly when gamma_x = 0 (x5 vanishes)."""
    if beta <= 0 or n < 1:
        raise ValueError("need beta > 0 and n >= 1")
    x, x1, x2, x3, x4, x5 = cell_density_block(jx, jy, gamma_x, beta, n)
    if gamma_x <= 0 or x5 <= 0:
        raise ValueError("gamma_x = 0 makes x5 = 0: cell couplings diverge "
                         "(no transverse matrix element)")
    if min(x1, x2, x3, x4) <= 0:
        raise ValueError("non-positive density-block entry: cell couplings undefined "
                         f"(x1..x4 = {x1, x2, x3, x4})")
    l1, l2, l3, l4, l5 = (math.log(v) for v in (x1, x2, x3, x4, x5))
    t1 = (l1 - l2 + l3 - l4) / (8 * beta)
    t2 = (l1 - l2 - l3 + l4) / (8 * beta)
    t3 = (l1 + l2 - l3 - l4) / (8 * beta)
    t4 = (l1 + l2 + l3 + l4 - 4 * l5) / (8 * beta)
    f1 = 0.5 * (l1 - l5)
    f2 = 0.5 * (l5 - l2)
    f3 = 0.5 * (l5 - l4)
    f4 = 0.5 * (l3 - l5)
    eps = -(l1 + l2 + l3 + l4 + 4 * l5) / (16 * beta)
    return HeisenbergCellCoefficients(jx, jy, jz, gamma_x, beta, n,
                                      x, x1, x2, x3, x4, x5,
                                      f1, f2, f3, f4,
                                      jz / (2 * n), t1, t2, t3, t4, eps)


def map_heisenberg(spec: QuantumModelSpec, n: int, beta: float,
                   gamma_z: float = 0.0) -> ReplicaLattice:
    """Heisenberg chain -> 2n-slice chessboard lattice.

    Shaded cells sit between slices k and k+1 on site pairs (0,1),(2,3),...
    for even k and (1,2),(3,4),... for odd k (0-based, periodic both ways).
    Wherever a cell's horizontal t3 bond coincides with a t0 bond the two
    are summed into one stored term. gamma_z adds an optional per-p-bit
    bias gamma_z/(2n); the plain model has none.
    """
    if spec.kind != "heisenberg":
        raise ValueError("map_heisenberg needs a heisenberg spec")
    if spec.M % 2 != 0:
        raise ValueError("chessboard pairing needs even M")
    if n < 1:
        raise ValueError("need n >= 1")
    M = spec.M
    slices = 2 * n
    cell = heisenberg_cell(spec.jx, spec.jy, spec.jz, spec.gamma_x, beta, n)
    b = GraphBuilder(M * slices)

    def pid(site, k):
        return (k % slices) * M + (site % M)

    for k in range(slices):
        for i in range(M):
            b.add_pair(pid(i, k), pid(i + 1, k), cell.t0)
            if gamma_z:
                b.add_bias(pid(i, k), gamma_z / (2 * n))
    for k in range(slices):
        start = 0 if k % 2 == 0 else 1
        for c in range(M // 2):
            i = start + 2 * c
            a, bb = pid(i, k), pid(i + 1, k)          # lower edge
            c1, c2 = pid(i, k + 1), pid(i + 1, k + 1)  # upper edge
            b.add_pair(a, c1, cell.t1)
            b.add_pair(bb, c2, cell.t1)
            b.add_pair(a, c2, cell.t2)
            b.add_pair(bb, c1, cell.t2)
            b.add_pair(a, bb, cell.t3)
            b.add_pair(c1, c2, cell.t3)
            b.add_quad(a, bb, c1, c2, cell.t4)
    return ReplicaLattice(b.build(), M, slices)


def consolidate(lattice: ReplicaLattice) -> InteractionGraph:
    """Flat (Mn x Mn)-sized interaction graph with adjacency built."""
    return lattice.graph


def dense_weight_matrix(graph: InteractionGraph) -> np.ndarray:
    """Symmetric pairwise weight matrix W (quad terms are not representable
    here; raises if any exist)."""
    if len(graph.quad_w):
        raise ValueError("graph has 4-body terms; no dense pairwise form")
    W = np.zeros((graph.n, graph.n))
    for (i, j), w in zip(graph.pair_members, graph.pair_w):
        W[i, j] += w
        W[j, i] += w
    return W
