"""Eigenmode analysis of the master-equation generator.

The generator is not hermitian, so every eigenvalue carries a left/right pair
of eigenmatrices. We pair them with the bilinear (non-conjugated) trace,
tr(l_j r_k) = delta_jk, because that is the pairing under which expansion
coefficients of a state are tr(l_k rho). LAPACK returns left and right
vectors in the same eigenvalue order, but inside degenerate clusters the two
sets need not be biorthogonal; clusters are therefore re-biorthogonalized
explicitly and reported as a pairing failure when that is impossible.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import scipy.linalg as la

from .model import ChainParams, Generator, unvec, vec

ZERO_MODE_TOL = 1e-9
CLUSTER_TOL = 1e-8
CONJ_PAIR_TOL = 1e-9
CONJ_MODE_TOL = 1e-6
SECTOR_TOL = 1e-7

SYMMETRIC = "symmetric"
OTHER = "other"
UNCLASSIFIED = "unclassified"


class SpectralError(RuntimeError):
    pass


class PairingError(SpectralError):
    """Left/right matching is ambiguous inside a degenerate eigenvalue cluster."""

    def __init__(self, message: str, cluster: np.ndarray | None = None):
        super().__init__(message)
        self.cluster = cluster


class DegenerateStationaryError(SpectralError):
    pass


@dataclass
class SpectralData:
    """Full eigensystem of one generator.

    eigenvalues are sorted ascending by |Re|, ties broken by Im then Re.
    Column k of right_cols is vec(r_k) with unit Frobenius norm; row k of
    left_rows is the functional rho -> tr(l_k rho), scaled to tr(l_k r_k) = 1.
    """

    eigenvalues: np.ndarray
    right_cols: np.ndarray
    left_rows: np.ndarray
    dim_hilbert: int
    cluster_ids: np.ndarray
    stationary: np.ndarray | None
    generator_matrix: np.ndarray
    sector_labels: list[str] = field(default_factory=list)
    sectors_classified: bool = False

    @property
    def n_modes(self) -> int:
        return self.eigenvalues.size

    def right_mode(self, k: int) -> np.ndarray:
        return unvec(self.right_cols[:, k], self.dim_hilbert)

    def left_mode(self, k: int) -> np.ndarray:
        return self.left_rows[k].reshape(self.dim_hilbert, self.dim_hilbert)

    def overlap(self, k: int, rho: np.ndarray) -> complex:
        """Expansion coefficient tr(l_k rho)."""
        return complex(self.left_rows[k] @ vec(rho))

    @cached_property
    def eigen_residuals(self) -> np.ndarray:
        """Per-mode ||M r_k - lambda_k r_k||_inf (right) plus the left analogue."""
        m = self.generator_matrix
        right = np.abs(m @ self.right_cols - self.right_cols * self.eigenvalues[None, :]).max(axis=0)
        left = np.abs(self.left_rows @ m - self.eigenvalues[:, None] * self.left_rows).max(axis=1)
        return np.maximum(right, left)

    @cached_property
    def biorth_residuals(self) -> np.ndarray:
        """Per-mode max_j |tr(l_k r_j) - delta_kj|."""
        gram = self.left_rows @ self.right_cols
        np.fill_diagonal(gram, gram.diagonal() - 1.0)
        return np.abs(gram).max(axis=1)

    @cached_property
    def trace_residuals(self) -> np.ndarray:
        """|tr(r_k)|; vanishes for every decaying mode."""
        d = self.dim_hilbert
        return np.abs(self.right_cols[:: d + 1, :].sum(axis=0))


def _cluster_eigenvalues(lam: np.ndarray, tol: float) -> np.ndarray:
    """Connected components of eigenvalues under |lam_i - lam_j| < tol."""
    n = lam.size
    order = np.lexsort((lam.imag, lam.real))
    parent = np.arange(n)

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    # sweep over real parts; points further apart than tol in Re cannot touch
    active: list[int] = []
    for pos in order:
        z = lam[pos]
        active = [a for a in active if z.real - lam[a].real < tol]
        for a in active:
            if abs(z - lam[a]) < tol:
                parent[find(pos)] = find(a)
        active.append(pos)

    roots = np.array([find(i) for i in range(n)])
    _, ids = np.unique(roots, return_inverse=True)
    return ids


def eigendecompose(g: Generator) -> SpectralData:
    """All eigenvalues of the generator with biorthonormal left/right modes.

    Raises PairingError when a degenerate cluster cannot be biorthogonalized
    (near-defective generator), rather than silently picking modes.
    """
    m = g.matrix
    lam, vl, vr = la.eig(m, left=True, right=True)
    # scipy's vl satisfies vl^H M = lam vl^H; the bilinear left vectors are its conjugate
    wl = vl.conj()

    order = np.lexsort((
        np.round(lam.real, 12),
        np.round(lam.imag, 12),
        np.round(np.abs(lam.real), 12),
    ))
    lam, wl, vr = lam[order], wl[:, order], vr[:, order]

    cluster_ids = _cluster_eigenvalues(lam, CLUSTER_TOL)
    for cid in range(cluster_ids.max() + 1):
        members = np.flatnonzero(cluster_ids == cid)
        if members.size == 1:
            continue
        block = wl[:, members].T @ vr[:, members]
        sv = la.svdvals(block)
        if sv[-1] < 1e-8 * max(1.0, sv[0]):
            raise PairingError(
                f"degenerate cluster of {members.size} modes near {lam[members[0]]:.6g} "
                f"cannot be biorthogonalized (sigma_min={sv[-1]:.2e})",
                cluster=lam[members],
            )
        wl[:, members] = wl[:, members] @ np.linalg.inv(block).T

    norms = np.linalg.norm(vr, axis=0)
    vr = vr / norms
    scale = np.einsum("ij,ij->j", wl, vr)
    bad = np.flatnonzero(np.abs(scale) < 1e-8)
    if bad.size:
        raise PairingError(
            f"left/right pairing nearly singular for modes {bad.tolist()}",
            cluster=lam[bad],
        )
    wl = wl / scale

    d = g.dim_hilbert
    zero = np.flatnonzero(np.abs(lam) < ZERO_MODE_TOL)
    stationary = None
    if zero.size == 1:
        r0 = unvec(vr[:, zero[0]], d)
        r0 = 0.5 * (r0 + r0.conj().T)
        stationary = r0 / np.trace(r0).real

    return SpectralData(
        eigenvalues=lam,
        right_cols=np.ascontiguousarray(vr),
        left_rows=np.ascontiguousarray(wl.T),
        dim_hilbert=d,
        cluster_ids=cluster_ids,
        stationary=stationary,
        generator_matrix=m,
        sector_labels=[UNCLASSIFIED] * lam.size,
    )


def stationary_state(sd: SpectralData) -> np.ndarray:
    """Hermitized, trace-normalized zero mode."""
    zero = np.flatnonzero(np.abs(sd.eigenvalues) < ZERO_MODE_TOL)
    if zero.size != 1:
        raise DegenerateStationaryError(
            f"degenerate stationary manifold: {zero.size} zero modes"
        )
    assert sd.stationary is not None
    return sd.stationary


def _site_permutation_index(perm: list[int], n_spins: int) -> np.ndarray:
    """Basis-index map of the operator sending site i to position perm[i]."""
    dim = 2**n_spins
    idx = np.zeros(dim, dtype=np.int64)
    for b in range(dim):
        out = 0
        for i in range(n_spins):
            bit = (b >> (n_spins - 1 - i)) & 1
            out |= bit << (n_spins - 1 - perm[i])
        idx[out] = b
    return idx


def symmetry_permutations(p: ChainParams) -> list[np.ndarray]:
    """Basis-index maps of the generating symmetries: reflection, and all
    adjacent transpositions when the interaction is range-independent."""
    n = p.n_spins
    perms = [list(range(n - 1, -1, -1))]
    if p.alpha == 0.0:
        for k in range(n - 1):
            t = list(range(n))
            t[k], t[k + 1] = t[k + 1], t[k]
            perms.append(t)
    return [_site_permutation_index(perm, n) for perm in perms]


def _conjugation_vec_permutation(idx: np.ndarray, dim: int) -> np.ndarray:
    """Vectorized-index form of rho -> P rho P^dag for a basis permutation."""
    return (idx[:, None] + dim * idx[None, :]).reshape(-1, order="F")


def _align_cluster_sectors(sd: SpectralData, index_maps: list[np.ndarray]) -> None:
    """Rotate degenerate-cluster bases onto symmetry-pure directions.

    Inside an exactly degenerate eigenspace the mode basis is arbitrary; the
    eigensolver may hand back combinations that straddle symmetry sectors.
    When the cluster span contains directions fixed by every generator, pick
    a basis that exposes them so classification and sector-restricted gap
    selection see clean modes.
    """
    d = sd.dim_hilbert
    vec_perms = [_conjugation_vec_permutation(idx, d) for idx in index_maps]
    rotated = False
    for cid in range(sd.cluster_ids.max() + 1):
        members = np.flatnonzero(sd.cluster_ids == cid)
        c = members.size
        if c == 1:
            continue
        r_block = sd.right_cols[:, members]
        l_block = sd.left_rows[members, :]
        actions = []
        for perm in vec_perms:
            image = r_block[perm, :]
            t = l_block @ image
            if np.linalg.norm(image - r_block @ t) > 1e-6:
                break  # cluster span not invariant; leave the basis alone
            actions.append(t - np.eye(c))
        else:
            fixed = la.null_space(np.vstack(actions), rcond=1e-6) if actions else np.eye(c)
            f = fixed.shape[1]
            if 0 < f < c:
                u_full, _, _ = la.svd(fixed)
                basis = np.hstack([fixed, u_full[:, f:]])
                sd.right_cols[:, members] = r_block @ basis
                sd.left_rows[members, :] = np.linalg.inv(basis) @ l_block
                rotated = True
    if rotated:
        norms = np.linalg.norm(sd.right_cols, axis=0)
        sd.right_cols /= norms
        scale = np.einsum("ki,ik->k", sd.left_rows, sd.right_cols)
        sd.left_rows /= scale[:, None]
        for cached in ("eigen_residuals", "biorth_residuals", "trace_residuals"):
            sd.__dict__.pop(cached, None)


def classify_sectors(sd: SpectralData, p: ChainParams) -> SpectralData:
    """Label every mode by its behaviour under the chain's spatial symmetries.

    A mode is `symmetric` when conjugation by every symmetry generator leaves
    its right eigenmatrix unchanged. Degenerate clusters are first rotated
    onto sector-pure bases where possible; members that still mix (not even
    proportional to their image) stay `unclassified`.
    """
    index_maps = symmetry_permutations(p)
    _align_cluster_sectors(sd, index_maps)
    _, counts = np.unique(sd.cluster_ids, return_counts=True)
    cluster_size = counts[sd.cluster_ids]
    labels = []
    for k in range(sd.n_modes):
        r = sd.right_mode(k)
        label = SYMMETRIC
        for idx in index_maps:
            image = r[np.ix_(idx, idx)]
            if np.linalg.norm(image - r) < SECTOR_TOL:
                continue
            coeff = np.vdot(r, image)  # r has unit Frobenius norm
            if np.linalg.norm(image - coeff * r) < SECTOR_TOL:
                label = OTHER
            else:
                label = UNCLASSIFIED if cluster_size[k] > 1 else OTHER
                break
        labels.append(label)
    sd.sector_labels = labels
    sd.sectors_classified = True
    return sd


@dataclass(frozen=True)
class GapReport:
    """Slowest and second-slowest decay channels of one generator."""

    lambda2: complex
    lambda3: complex
    tau2: float
    tau3: float
    ratio: float
    gap_is_complex: bool
    degenerate_gap: bool
    index2: int
    index3: int


def _conjugate_partner(sd: SpectralData, k: int, candidates: list[int]) -> int | None:
    lam = sd.eigenvalues
    target = np.conj(lam[k])
    if abs(lam[k].imag) > CONJ_PAIR_TOL:
        for k2 in candidates:
            if abs(lam[k2] - target) < CONJ_PAIR_TOL:
                return k2
        return None
    # real eigenvalue: a degenerate partner only counts as the same decay
    # channel when its mode is the hermitian conjugate of this one
    rk_dag = sd.right_mode(k).conj().T
    rk_dag = rk_dag / np.linalg.norm(rk_dag)
    best = None
    for k2 in candidates:
        if abs(lam[k2] - target) >= CONJ_PAIR_TOL:
            continue
        z = abs(np.vdot(sd.right_mode(k2), rk_dag))
        dist = np.sqrt(max(0.0, 2.0 * (1.0 - z)))
        if dist < CONJ_MODE_TOL and (best is None or dist < best[1]):
            best = (k2, dist)
    return None if best is None else best[0]


def gap_report(sd: SpectralData, restrict_to_symmetric: bool) -> GapReport:
    """Rank the nonzero decay channels; conjugate partners count as one.

    With restrict_to_symmetric, only modes labelled `symmetric` are eligible
    (classify_sectors must have run).
    """
    if restrict_to_symmetric and not sd.sectors_classified:
        raise ValueError("classify_sectors must run before a sector-restricted gap report")
    lam = sd.eigenvalues
    eligible = [
        k
        for k in range(sd.n_modes)
        if abs(lam[k]) >= ZERO_MODE_TOL
        and (not restrict_to_symmetric or sd.sector_labels[k] == SYMMETRIC)
    ]
    ranks: list[int] = []
    unclaimed = list(eligible)
    while unclaimed:
        k = unclaimed.pop(0)
        partner = _conjugate_partner(sd, k, unclaimed)
        if partner is not None:
            unclaimed.remove(partner)
        ranks.append(k)
        if len(ranks) >= 2:
            break
    if len(ranks) < 2:
        raise SpectralError(
            f"need at least two nonzero decay channels, found {len(ranks)}"
        )
    k2, k3 = ranks[0], ranks[1]
    l2, l3 = lam[k2], lam[k3]
    tau2 = -1.0 / l2.real
    tau3 = -1.0 / l3.real
    return GapReport(
        lambda2=complex(l2),
        lambda3=complex(l3),
        tau2=float(tau2),
        tau3=float(tau3),
        ratio=float(tau3 / tau2),
        gap_is_complex=bool(abs(l2.imag) > CONJ_PAIR_TOL),
        degenerate_gap=bool(abs(l2.real - l3.real) < CONJ_PAIR_TOL),
        index2=int(k2),
        index3=int(k3),
    )
