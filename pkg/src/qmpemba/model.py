"""Operators for the dissipative power-law Ising chain.

Conventions used throughout the package:

- Basis ordering: index 0 = |up>, index 1 = |down>; sigma_z = diag(+1, -1).
- Site 1 is the most significant tensor factor, so the computational basis
  index of a product state reads as a bit string with site 1 first.
- Vectorization is column-stacking (Fortran order): vec(A X B) = (B^T (x) A) vec(X).
- Rates and energies are expressed in units of the decay rate gamma, which
  defaults to 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_PAULI = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
    "plus": np.array([[0, 1], [0, 0]], dtype=complex),
    "minus": np.array([[0, 0], [1, 0]], dtype=complex),
}


@dataclass(frozen=True)
class ChainParams:
    """Physical parameters of the open spin chain.

    omega is the transverse field, v the Ising interaction strength and
    alpha the power-law exponent of the interaction decay. epsilon is the
    overlap threshold used by the rotation scans.
    """

    n_spins: int
    omega: float
    v: float
    alpha: float
    gamma: float = 1.0
    epsilon: float = 1e-2
    boundary: str = "open"

    def __post_init__(self) -> None:
        if self.n_spins < 1:
            raise ValueError(f"n_spins must be >= 1, got {self.n_spins}")
        if self.gamma <= 0:
            raise ValueError(f"gamma must be > 0, got {self.gamma}")
        if self.epsilon <= 0:
            raise ValueError(f"epsilon must be > 0, got {self.epsilon}")
        if self.alpha < 0:
            raise ValueError(f"alpha must be >= 0, got {self.alpha}")
        if self.boundary != "open":
            raise ValueError(f"unsupported boundary {self.boundary!r}")

    @property
    def dim_hilbert(self) -> int:
        return 2**self.n_spins

    @property
    def dim_liouville(self) -> int:
        return 4**self.n_spins


def pauli(axis: str) -> np.ndarray:
    """Single-spin operator: 'x', 'y', 'z', 'plus' (|up><down|) or 'minus' (|down><up|)."""
    try:
        return _PAULI[axis].copy()
    except KeyError:
        raise ValueError(f"unknown axis {axis!r}") from None


def embed(op: np.ndarray, site: int, n_spins: int) -> np.ndarray:
    """Embed a single-site operator at site `site` (1-based) of an n_spins chain."""
    if not 1 <= site <= n_spins:
        raise ValueError(f"site {site} out of range 1..{n_spins}")
    left = np.eye(2 ** (site - 1), dtype=complex)
    right = np.eye(2 ** (n_spins - site), dtype=complex)
    return np.kron(np.kron(left, op), right)


def build_hamiltonian(p: ChainParams) -> np.ndarray:
    """Transverse field plus power-law sigma_z sigma_z couplings, open boundaries."""
    d = p.dim_hilbert
    h = np.zeros((d, d), dtype=complex)
    for k in range(1, p.n_spins + 1):
        h += p.omega * embed(pauli("x"), k, p.n_spins)
    for k in range(1, p.n_spins + 1):
        zk = embed(pauli("z"), k, p.n_spins)
        for m in range(k + 1, p.n_spins + 1):
            zm = embed(pauli("z"), m, p.n_spins)
            h += (p.v / abs(k - m) ** p.alpha) * (zk @ zm)
    return h


def build_jump_ops(p: ChainParams) -> list[np.ndarray]:
    """One decay operator sqrt(gamma) sigma_minus per site."""
    root = np.sqrt(p.gamma)
    return [root * embed(pauli("minus"), k, p.n_spins) for k in range(1, p.n_spins + 1)]


def vec(mat: np.ndarray) -> np.ndarray:
    """Column-stacking vectorization."""
    return np.asarray(mat, dtype=complex).reshape(-1, order="F")


def unvec(v: np.ndarray, dim: int) -> np.ndarray:
    """Inverse of `vec`."""
    return np.asarray(v, dtype=complex).reshape((dim, dim), order="F")


@dataclass(frozen=True)
class Generator:
    """Dense matrix form of the master-equation generator.

    `matrix` acts on column-stacked density matrices: vec(W[rho]) = matrix @ vec(rho).
    """

    dim_hilbert: int
    matrix: np.ndarray
    convention: str = "column-stacking"


def assemble_generator(h: np.ndarray, jump_ops: list[np.ndarray]) -> Generator:
    """Build the generator matrix from a Hamiltonian and jump operators.

    M = -i (I(x)H - H^T(x)I) + sum_k [ L_k*(x)L_k - 1/2 I(x)(L_k^dag L_k)
        - 1/2 (L_k^dag L_k)^T(x)I ]
    """
    d = h.shape[0]
    if h.shape != (d, d):
        raise ValueError("Hamiltonian must be square")
    herm_defect = np.abs(h - h.conj().T).max()
    if herm_defect > 1e-12:
        raise ValueError(f"Hamiltonian not hermitian (defect {herm_defect:.2e})")
    ident = np.eye(d, dtype=complex)
    m = -1j * (np.kron(ident, h) - np.kron(h.T, ident))
    for lk in jump_ops:
        if lk.shape != (d, d):
            raise ValueError("jump operator dimension mismatch")
        ldl = lk.conj().T @ lk
        m += np.kron(lk.conj(), lk)
        m -= 0.5 * np.kron(ident, ldl)
        m -= 0.5 * np.kron(ldl.T, ident)
    return Generator(dim_hilbert=d, matrix=m)


def build_generator(p: ChainParams) -> Generator:
    """Convenience: Hamiltonian + jump operators + assembly in one call."""
    return assemble_generator(build_hamiltonian(p), build_jump_ops(p))


def apply_generator(g: Generator, rho: np.ndarray) -> np.ndarray:
    """W[rho] via matrix-vector product in the vectorized representation."""
    d = g.dim_hilbert
    if rho.shape != (d, d):
        raise ValueError(f"state dimension {rho.shape} does not match generator ({d})")
    return unvec(g.matrix @ vec(rho), d)


def apply_adjoint(g: Generator, obs: np.ndarray) -> np.ndarray:
    """Dual action on observables: W^dag[A] = i[H,A] + sum_k (L^dag A L - 1/2 {L^dag L, A}).

    With column stacking this is the conjugate transpose of the generator
    matrix acting on vec(A), which makes tr(A W[rho]) = tr(W^dag[A] rho) exact.
    """
    d = g.dim_hilbert
    if obs.shape != (d, d):
        raise ValueError(f"observable dimension {obs.shape} does not match generator ({d})")
    return unvec(g.matrix.conj().T @ vec(obs), d)


def site_rotation(theta: float, phi: float) -> np.ndarray:
    """2x2 rotation exp(i phi sigma_z / 2) exp(i theta sigma_y / 2)."""
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    zp = np.exp(0.5j * phi)
    return np.array([[c * zp, s * zp], [-s / zp, c / zp]], dtype=complex)


def rotation_unitary(p: ChainParams, theta: float, phi: float) -> np.ndarray:
    """Global spin rotation: the same site_rotation applied to every spin."""
    u1 = site_rotation(theta, phi)
    u = np.array([[1.0]], dtype=complex)
    for _ in range(p.n_spins):
        u = np.kron(u, u1)
    return u
