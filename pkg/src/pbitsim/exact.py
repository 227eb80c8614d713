"""Brute-force quantum oracle: dense Pauli algebra and thermal averages.

Every operator here is a real symmetric 2**M x 2**M matrix. sigma_y never
appears alone -- only in sigma_y sigma_y bond products, which are real --
so the whole module works in real arithmetic. Site count is capped at
EXACT_MAX_SITES; this is an oracle for validating the samplers, never the
hot path.

Matrix basis ordering is the usual Kronecker ordering: basis vector 0 is
all-up. Note that this is bit-complemented relative to the Histogram
state encoding (up = 1 there), and joint_distribution converts.
"""

from dataclasses import dataclass

import numpy as np

from .histogram import Histogram

EXACT_MAX_SITES = 12

PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]])
PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]])
# i*sigma_y is real; used in pairs, where (i sy)(i sy) = -sy sy
PAULI_IY = np.array([[0.0, 1.0], [-1.0, 0.0]])
ID2 = np.eye(2)

SYMMETRY_TOL = 1e-12


@dataclass
class QuantumModelSpec:
    """Declarative description of a 1D quantum spin chain (periodic).

    kind "tfim": couplings holds the M bond strengths J_{i,i+1} (bond M
    wraps to site 1); gamma_x and gamma_z are the transverse/longitudinal
    fields. kind "heisenberg": jx, jy, jz are the bond constants (uniform)
    and gamma_x the transverse field; M must be even for the chessboard
    mapping.
    """

    kind: str
    M: int
    couplings: np.ndarray | None = None
    jx: float = 0.0
    jy: float = 0.0
    jz: float = 0.0
    gamma_x: float = 0.0
    gamma_z: float = 0.0

    def __post_init__(self):
        if self.kind not in ("tfim", "heisenberg"):
            raise ValueError(f"unknown model kind {self.kind!r}")
        if not 1 <= self.M <= EXACT_MAX_SITES:
            raise ValueError(f"M={self.M} outside [1, {EXACT_MAX_SITES}]")
        if self.kind == "tfim":
            if self.couplings is None:
                raise ValueError("tfim spec needs a coupling list")
            self.couplings = np.asarray(self.couplings, dtype=float)
            if self.couplings.shape != (self.M,):
                raise ValueError("periodic chain needs exactly M couplings")
        else:
            if self.M % 2 != 0:
                raise ValueError("heisenberg chessboard mapping needs even M")


def tfim_spec(M, J, gamma_x, gamma_z=0.0) -> QuantumModelSpec:
    """Uniform-J transverse-field Ising chain."""
    return QuantumModelSpec("tfim", M, couplings=np.full(M, float(J)),
                            gamma_x=gamma_x, gamma_z=gamma_z)


def heisenberg_spec(M, jx, jy, jz, gamma_x) -> QuantumModelSpec:
    return QuantumModelSpec("heisenberg", M, jx=jx, jy=jy, jz=jz, gamma_x=gamma_x)


def _embed(mat2, M, j):
    """I (x) ... (x) mat2 (x) ... (x) I with mat2 at 1-based slot j."""
    op = np.array([[1.0]])
    for k in range(1, M + 1):
        op = np.kron(op, mat2 if k == j else ID2)
    return op


def embed_pauli(M: int, j: int, axis: str) -> np.ndarray:
    """Pauli operator at site j of an M-site chain, as a dense real matrix.

    axis "y" is rejected: a lone sigma_y is imaginary. Use embed_pauli_yy
    for the (real) bond product.
    """
    if not 1 <= j <= M:
        raise ValueError(f"site {j} outside 1..{M}")
    if axis == "x":
        return _embed(PAULI_X, M, j)
    if axis == "z":
        return _embed(PAULI_Z, M, j)
    if axis == "y":
        raise ValueError("lone sigma_y is not real; use embed_pauli_yy for bond products")
    raise ValueError(f"unknown axis {axis!r}")


def embed_pauli_yy(M: int, i: int, j: int | None = None) -> np.ndarray:
    """sigma_y_i sigma_y_j as a real matrix: -(i sy)_i (i sy)_j.

    j defaults to the periodic neighbor i+1, the only place the chain
    Hamiltonians need a y operator.
    """
    if j is None:
        j = i % M + 1
    if i == j:
        raise ValueError("need two distinct sites")
    return -_embed(PAULI_IY, M, i) @ _embed(PAULI_IY, M, j)


def _check_symmetric(H):
    if np.max(np.abs(H - H.T)) > SYMMETRY_TOL * max(1.0, np.max(np.abs(H))):
        raise AssertionError("assembled operator is not symmetric")
    return H


def build_hamiltonian(spec: QuantumModelSpec) -> np.ndarray:
    """Assemble H with the overall minus sign (lower energy = aligned)."""
    M = spec.M
    dim = 2**M
    H = np.zeros((dim, dim))
    if spec.kind == "tfim":
        for i in range(1, M + 1):
            ip = i % M + 1
            H -= spec.couplings[i - 1] * embed_pauli(M, i, "z") @ embed_pauli(M, ip, "z")
            H -= spec.gamma_x * embed_pauli(M, i, "x")
            H -= spec.gamma_z * embed_pauli(M, i, "z")
    else:
        for i in range(1, M + 1):
            ip = i % M + 1
            H -= spec.jz * embed_pauli(M, i, "z") @ embed_pauli(M, ip, "z")
            H -= spec.jx * embed_pauli(M, i, "x") @ embed_pauli(M, ip, "x")
            H -= spec.jy * embed_pauli_yy(M, i, ip)
            H -= spec.gamma_x * embed_pauli(M, i, "x")
    return _check_symmetric(H)


def magnetization_z(M: int) -> np.ndarray:
    """Site-averaged sigma_z operator, sum_j sigma_z_j / M."""
    return sum(embed_pauli(M, j, "z") for j in range(1, M + 1)) / M


def thermal_expectation(H: np.ndarray, S: np.ndarray, beta: float) -> float:
    """Tr[S exp(-beta H)] / Tr[exp(-beta H)].

    The ground-state energy is subtracted before exponentiating; this
    rescales numerator and denominator identically so the result is
    unchanged while exp stays bounded at large beta.
    """
    if H.shape != S.shape:
        raise ValueError("operator dimension mismatch")
    if not np.isfinite(beta) or beta <= 0:
        raise ValueError("beta must be finite and positive")
    w, V = np.linalg.eigh(H)
    weights = np.exp(-beta * (w - w[0]))
    diag_S = np.einsum("ik,ij,jk->k", V, S, V)
    return float(diag_S @ weights / weights.sum())


def pattern_projector(pattern) -> np.ndarray:
    """Projector onto one basis pattern, prod_k (I +/- sigma_z_k)/2.

    pattern entries are +1/up or -1/down (any iterable of that sign
    convention). The result is diagonal and idempotent.
    """
    pattern = list(pattern)
    M = len(pattern)
    dim = 2**M
    P = np.eye(dim)
    for k, s in enumerate(pattern, start=1):
        sign = 1.0 if s > 0 else -1.0
        P = P @ ((np.eye(dim) + sign * embed_pauli(M, k, "z")) / 2.0)
    return P


def joint_distribution(H: np.ndarray, beta: float, M: int | None = None) -> Histogram:
    """Histogram of all 2**M basis-state probabilities under exp(-beta H).

    Equivalent to thermal_expectation(H, pattern_projector(s), beta) for
    every pattern s, but computed in one eigendecomposition. Output indices
    follow the Histogram encoding (up = 1), which bit-complements the
    matrix basis ordering (up = 0).
    """
    dim = H.shape[0]
    if M is None:
        M = int(round(np.log2(dim)))
    if 2**M != dim:
        raise ValueError("dimension is not 2**M")
    if not np.isfinite(beta) or beta <= 0:
        raise ValueError("beta must be finite and positive")
    w, V = np.linalg.eigh(H)
    weights = np.exp(-beta * (w - w[0]))
    diag_rho = (V**2) @ weights
    diag_rho /= diag_rho.sum()
    probs = diag_rho[::-1].copy()  # bit complement == index reversal
    return Histogram(M, probs)


def is_stoquastic(H: np.ndarray, tol: float = 1e-12) -> bool:
    """True iff every off-diagonal entry is <= 0 (computational basis)."""
    off = H - np.diag(np.diag(H))
    return bool(np.max(off) <= tol)


def exp_nonnegative(H: np.ndarray, beta: float, tol: float = 1e-10) -> bool:
    """Companion check: all entries of exp(-beta H) are >= 0."""
    w, V = np.linalg.eigh(H)
    E = (V * np.exp(-beta * (w - w[0]))) @ V.T
    return bool(np.min(E) >= -tol * np.max(np.abs(E)))


def save_matrix_csv(path, A: np.ndarray):
    """Row-major CSV dump, one matrix row per line (debugging aid)."""
    np.savetxt(path, np.asarray(A), delimiter=",")
