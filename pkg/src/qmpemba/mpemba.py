"""Rotation scans, acceleration areas and the exact overlap-cancelling unitary.

A relaxation speedup is available at angles (theta, phi) where the rotated
all-down state no longer feeds the slowest decay channel, i.e. where the
overlap chi(theta, phi) = |tr(l2 U rho0 U^dag)| drops below the threshold
epsilon. The fraction of the unit sphere satisfying that criterion is the
acceleration area A.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .model import ChainParams, build_generator, rotation_unitary
from .spectral import (
    SpectralData,
    SpectralError,
    classify_sectors,
    eigendecompose,
    gap_report,
)


class ConjugatePairGapError(RuntimeError):
    """The slowest mode is a conjugate pair; the exact construction needs a real gap."""


class NotHermitizableError(RuntimeError):
    pass


class TracelessnessError(RuntimeError):
    pass


def initial_ket(p: ChainParams) -> np.ndarray:
    """|down ... down> as a state vector."""
    ket = np.zeros(p.dim_hilbert, dtype=complex)
    ket[-1] = 1.0  # all bits set = every spin down
    return ket


def initial_state(p: ChainParams) -> np.ndarray:
    """Pure all-down density matrix."""
    ket = initial_ket(p)
    return np.outer(ket, ket.conj())


def chi_overlap(l2: np.ndarray, p: ChainParams, theta: float, phi: float) -> float:
    """Overlap modulus of the rotated initial state with the slow left mode.

    For a conjugate-pair gap, the representative l2 suffices: the partner's
    coefficient is the complex conjugate and has the same modulus.
    """
    u = rotation_unitary(p, theta, phi)
    psi = u @ initial_ket(p)
    return float(abs(np.vdot(psi, l2 @ psi)))


@dataclass
class OverlapMap:
    """chi on a midpoint angle grid, with the acceleration mask and its area."""

    grid_theta: np.ndarray
    grid_phi: np.ndarray
    chi: np.ndarray
    epsilon: float
    mask: np.ndarray
    area: float


def midpoint_grid(n_theta: int, n_phi: int) -> tuple[np.ndarray, np.ndarray]:
    thetas = (np.arange(n_theta) + 0.5) * np.pi / n_theta
    phis = (np.arange(n_phi) + 0.5) * 2.0 * np.pi / n_phi
    return thetas, phis


def area(overlap_map: OverlapMap) -> float:
    """Spherical fraction of the mask by midpoint quadrature, clamped to [0, 1]."""
    n_theta = overlap_map.grid_theta.size
    n_phi = overlap_map.grid_phi.size
    cell = (np.pi / n_theta) * (2.0 * np.pi / n_phi) / (4.0 * np.pi)
    total = cell * float(np.sum(np.sin(overlap_map.grid_theta)[:, None] * overlap_map.mask))
    return min(1.0, max(0.0, total))


def _scan_mode_index(
    sd: SpectralData, restrict_to_symmetric: bool, mode_index: int | None
) -> int:
    if mode_index is not None:
        return mode_index
    return gap_report(sd, restrict_to_symmetric).index2


def scan_angles(
    sd: SpectralData,
    p: ChainParams,
    n_theta: int,
    n_phi: int,
    *,
    restrict_to_symmetric: bool = True,
    mode_index: int | None = None,
    left_mode: np.ndarray | None = None,
) -> OverlapMap:
    """Evaluate chi on an n_theta x n_phi midpoint grid and mask chi <= epsilon.

    The scanned left mode defaults to the slowest eligible decay channel;
    mode_index picks a different mode, left_mode substitutes an explicit one.
    """
    if n_theta < 2 or n_phi < 2:
        raise ValueError("scan grid must be at least 2x2")
    if left_mode is None:
        left_mode = sd.left_mode(_scan_mode_index(sd, restrict_to_symmetric, mode_index))
    thetas, phis = midpoint_grid(n_theta, n_phi)
    chi = _kernels.chi_grid(left_mode, thetas, phis, p.n_spins)
    mask = chi <= p.epsilon
    result = OverlapMap(
        grid_theta=thetas,
        grid_phi=phis,
        chi=chi,
        epsilon=p.epsilon,
        mask=mask,
        area=0.0,
    )
    result.area = area(result)
    return result


def hermitize_left_mode(l2: np.ndarray) -> np.ndarray:
    """Rotate the arbitrary eigenvector phase away and symmetrize.

    The Frobenius hermiticity defect of e^{i psi} l2 is minimized when
    e^{2 i psi} tr(l2 @ l2) is real and positive. Only valid for a real,
    non-degenerate eigenvalue; anything else leaves a large defect and raises.
    """
    t = np.trace(l2 @ l2)
    psi = -0.5 * np.angle(t)
    rotated = np.exp(1j * psi) * l2
    defect = np.abs(rotated - rotated.conj().T).max()
    if defect > 1e-6 * max(1.0, np.abs(l2).max()):
        raise NotHermitizableError(
            f"left mode not phase-hermitizable (defect {defect:.2e}); "
            "the eigenvalue is not a real non-degenerate gap"
        )
    h = 0.5 * (rotated + rotated.conj().T)
    # the phase is only fixed mod pi; if the sign landed on a negative
    # semidefinite matrix, mirror it to the positive one
    evals = np.linalg.eigvalsh(h)
    if evals[-1] <= 1e-12 * max(1.0, abs(evals[0])):
        h = -h
    return h


def _rotation_onto(ket0: np.ndarray, target: np.ndarray) -> np.ndarray:
    """Unitary acting as a plane rotation taking ket0 to target, identity elsewhere."""
    d = ket0.size
    overlap = np.vdot(ket0, target)
    if abs(overlap) > 0:  # absorb the eigenvector phase so the rotation is real
        target = target * np.exp(-1j * np.angle(overlap))
    c = np.vdot(ket0, target).real
    if abs(c) >= 1.0 - 1e-14:
        return np.eye(d, dtype=complex)
    residual = target - c * ket0
    e2 = residual / np.linalg.norm(residual)
    beta = np.arccos(np.clip(c, -1.0, 1.0))
    outer11 = np.outer(ket0, ket0.conj())
    outer22 = np.outer(e2, e2.conj())
    outer21 = np.outer(e2, ket0.conj())
    r = np.eye(d, dtype=complex)
    r += (np.cos(beta) - 1.0) * (outer11 + outer22)
    r += np.sin(beta) * (outer21 - outer21.conj().T)
    return r


@dataclass
class IdealUnitaryResult:
    unitary: np.ndarray
    s: float
    alpha1: float
    alpha2: float
    phi1: np.ndarray
    phi2: np.ndarray
    residual_overlap: float
    used_zero_eigenvalue: bool


def build_overlap_cancelling_unitary(l2_hermitian: np.ndarray, ket0: np.ndarray) -> IdealUnitaryResult:
    """Exact unitary sending ket0 out of the support of a hermitian left mode.

    If the mode has a zero eigenvalue, rotating ket0 onto that eigenvector is
    enough. Otherwise mix the negative/positive eigenvector pair of smallest
    magnitudes with angle s = arctan(sqrt(-alpha1/alpha2)).
    """
    alphas, vecs = np.linalg.eigh(l2_hermitian)
    zeros = np.flatnonzero(np.abs(alphas) < 1e-10)
    if zeros.size:
        pick = max(zeros, key=lambda i: abs(np.vdot(vecs[:, i], ket0)))
        phi1 = vecs[:, pick]
        u = _rotation_onto(ket0, phi1)
        psi = u @ ket0
        residual = float(abs(np.vdot(psi, l2_hermitian @ psi)))
        return IdealUnitaryResult(
            unitary=u,
            s=0.0,
            alpha1=float(alphas[pick]),
            alpha2=0.0,
            phi1=phi1,
            phi2=phi1,
            residual_overlap=residual,
            used_zero_eigenvalue=True,
        )
    negative = np.flatnonzero(alphas < 0)
    positive = np.flatnonzero(alphas > 0)
    if negative.size == 0 or positive.size == 0:
        raise TracelessnessError(
            "left-mode eigenvalues do not change sign; "
            "normalization against the stationary state is broken upstream"
        )
    i1 = negative[np.argmin(np.abs(alphas[negative]))]
    i2 = positive[np.argmin(np.abs(alphas[positive]))]
    alpha1, alpha2 = float(alphas[i1]), float(alphas[i2])
    phi1, phi2 = vecs[:, i1], vecs[:, i2]
    r = _rotation_onto(ket0, phi1)
    s = float(np.arctan(np.sqrt(-alpha1 / alpha2)))
    # exp(-i s X) with X = |phi1><phi2| + |phi2><phi1| closes on the 2D span
    x = np.outer(phi1, phi2.conj()) + np.outer(phi2, phi1.conj())
    span = np.outer(phi1, phi1.conj()) + np.outer(phi2, phi2.conj())
    mixer = np.eye(ket0.size, dtype=complex) + (np.cos(s) - 1.0) * span - 1j * np.sin(s) * x
    u = mixer @ r
    psi = u @ ket0
    residual = float(abs(np.vdot(psi, l2_hermitian @ psi)))
    return IdealUnitaryResult(
        unitary=u,
        s=s,
        alpha1=alpha1,
        alpha2=alpha2,
        phi1=phi1,
        phi2=phi2,
        residual_overlap=residual,
        used_zero_eigenvalue=False,
    )


def hermitized_pair(sd: SpectralData, k: int) -> tuple[np.ndarray, np.ndarray]:
    """Hermitized l_k with r_k rescaled so the pair keeps tr(l_k r_k) = 1."""
    lh = hermitize_left_mode(sd.left_mode(k))
    rk = sd.right_mode(k)
    return lh, rk / np.trace(lh @ rk)


def ideal_unitary(
    sd: SpectralData,
    p: ChainParams,
    *,
    restrict_to_symmetric: bool = True,
    mode_index: int | None = None,
) -> IdealUnitaryResult:
    """Overlap-cancelling unitary for the slowest decay channel.

    Requires a real non-degenerate gap; a conjugate-pair gap has a
    non-hermitian left mode and no such construction.
    """
    if mode_index is None:
        report = gap_report(sd, restrict_to_symmetric)
        if report.gap_is_complex:
            raise ConjugatePairGapError(
                "conjugate-pair gap: the exact unitary construction does not apply"
            )
        mode_index = report.index2
    lh, _ = hermitized_pair(sd, mode_index)
    return build_overlap_cancelling_unitary(lh, initial_ket(p))


@dataclass
class CellResult:
    """One (omega, v) point of a parameter-plane sweep."""

    omega: float
    v: float
    alpha: float
    re_lambda2: float
    im_lambda2: float
    gap_is_complex: bool
    tau3_over_tau2: float
    area: float
    status: str  # "ok" or an error marker


@dataclass
class PlaneSweep:
    omega_axis: np.ndarray
    v_axis: np.ndarray
    alpha: float
    n_theta: int
    n_phi: int
    epsilon: float
    cells: list[CellResult]

    def cell(self, i_omega: int, j_v: int) -> CellResult:
        return self.cells[i_omega * self.v_axis.size + j_v]

    def grid(self, attr: str) -> np.ndarray:
        values = np.array([getattr(c, attr) for c in self.cells], dtype=float)
        return values.reshape(self.omega_axis.size, self.v_axis.size)


@dataclass
class CellSpectral:
    """Cacheable per-cell spectral summary; everything the scan needs downstream."""

    lambda2: complex
    lambda3: complex
    gap_is_complex: bool
    degenerate_gap: bool
    left_mode2: np.ndarray
    status: str


def cell_spectral(p: ChainParams) -> CellSpectral:
    """Assemble, decompose, classify and rank one parameter point."""
    try:
        sd = classify_sectors(eigendecompose(build_generator(p)), p)
        report = gap_report(sd, restrict_to_symmetric=True)
    except (SpectralError, ValueError, np.linalg.LinAlgError) as exc:
        return CellSpectral(
            lambda2=complex(np.nan, np.nan),
            lambda3=complex(np.nan, np.nan),
            gap_is_complex=False,
            degenerate_gap=False,
            left_mode2=np.zeros((p.dim_hilbert, p.dim_hilbert), dtype=complex),
            status=f"error: {exc}",
        )
    return CellSpectral(
        lambda2=report.lambda2,
        lambda3=report.lambda3,
        gap_is_complex=report.gap_is_complex,
        degenerate_gap=report.degenerate_gap,
        left_mode2=sd.left_mode(report.index2),
        status="ok",
    )


def _cell_from_spectral(
    spec: CellSpectral, p: ChainParams, n_theta: int, n_phi: int
) -> CellResult:
    if spec.status != "ok":
        return CellResult(
            omega=p.omega,
            v=p.v,
            alpha=p.alpha,
            re_lambda2=np.nan,
            im_lambda2=np.nan,
            gap_is_complex=False,
            tau3_over_tau2=np.nan,
            area=np.nan,
            status=spec.status,
        )
    thetas, phis = midpoint_grid(n_theta, n_phi)
    chi = _kernels.chi_grid(spec.left_mode2, thetas, phis, p.n_spins)
    mask = chi <= p.epsilon
    overlap_map = OverlapMap(thetas, phis, chi, p.epsilon, mask, 0.0)
    return CellResult(
        omega=p.omega,
        v=p.v,
        alpha=p.alpha,
        re_lambda2=float(spec.lambda2.real),
        im_lambda2=float(spec.lambda2.imag),
        gap_is_complex=spec.gap_is_complex,
        tau3_over_tau2=float(spec.lambda2.real / spec.lambda3.real),
        area=area(overlap_map),
        status="ok",
    )


def _sweep_worker(args: tuple) -> tuple[int, CellSpectral]:
    index, params = args
    return index, cell_spectral(params)


def plane_sweep(
    base: ChainParams,
    omega_axis: np.ndarray,
    v_axis: np.ndarray,
    scan_resolution: tuple[int, int] = (180, 360),
    *,
    workers: int = 1,
    cache=None,
) -> PlaneSweep:
    """Sweep the (omega, v) plane; each cell is decomposed independently.

    Failed cells carry an error marker instead of values. With a cache,
    spectral summaries are reused so a repeated sweep does no eigensolves.
    Results are merged by cell index, so output does not depend on workers.
    """
    omega_axis = np.asarray(omega_axis, dtype=float)
    v_axis = np.asarray(v_axis, dtype=float)
    if omega_axis.size == 0 or v_axis.size == 0:
        raise ValueError("sweep axes must be nonempty")
    n_theta, n_phi = scan_resolution
    points = [
        ChainParams(
            n_spins=base.n_spins,
            omega=float(om),
            v=float(vv),
            alpha=base.alpha,
            gamma=base.gamma,
            epsilon=base.epsilon,
            boundary=base.boundary,
        )
        for om in omega_axis
        for vv in v_axis
    ]
    summaries: list[CellSpectral | None] = [None] * len(points)
    pending = []
    for i, params in enumerate(points):
        hit = cache.lookup(params) if cache is not None else None
        if hit is not None:
            summaries[i] = hit
        else:
            pending.append((i, params))

    if workers > 1 and len(pending) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for i, spec in pool.map(_sweep_worker, pending, chunksize=1):
                summaries[i] = spec
    else:
        for i, params in pending:
            summaries[i] = cell_spectral(params)
    if cache is not None:
        for i, params in pending:
            cache.store(params, summaries[i])

    cells = [
        _cell_from_spectral(spec, params, n_theta, n_phi)
        for spec, params in zip(summaries, points)
    ]
    return PlaneSweep(
        omega_axis=omega_axis,
        v_axis=v_axis,
        alpha=base.alpha,
        n_theta=n_theta,
        n_phi=n_phi,
        epsilon=base.epsilon,
        cells=cells,
    )
