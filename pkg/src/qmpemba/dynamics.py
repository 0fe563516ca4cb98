"""Time evolution, distance-to-stationarity curves and decay-rate fits.

Two independent propagation routes are provided on purpose: the spectral
mode sum (reconstruct_state) and step-wise matrix exponentials (evolve).
They validate each other; neither is allowed to borrow the other's machinery.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg as la

from .model import Generator, unvec, vec
from .spectral import DegenerateStationaryError, SpectralData

RECONSTRUCTION_RESIDUE_TOL = 1e-6
DEFAULT_WINDOW = (1e-3, 1e-7)  # (d_hi, d_lo)


class WindowError(RuntimeError):
    pass


@dataclass
class Trajectory:
    times: np.ndarray
    distances: np.ndarray
    states: np.ndarray | None
    method: str


def reconstruct_state(sd: SpectralData, rho0: np.ndarray, t: float) -> np.ndarray:
    """Mode-sum propagation: rho(t) = sum_k tr(l_k rho0) r_k e^{lambda_k t}."""
    if t < 0:
        raise ValueError("t must be >= 0")
    coeffs = sd.left_rows @ vec(rho0)
    weights = coeffs * np.exp(sd.eigenvalues * t)
    rho = unvec(sd.right_cols @ weights, sd.dim_hilbert)
    residue = np.abs(rho - rho.conj().T).max() / 2.0
    if residue > RECONSTRUCTION_RESIDUE_TOL:
        warnings.warn(
            f"reconstruction residue {residue:.2e} exceeds {RECONSTRUCTION_RESIDUE_TOL:.0e}; "
            "biorthogonalization is suspect",
            stacklevel=2,
        )
    return 0.5 * (rho + rho.conj().T)


def trace_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Half the sum of singular values of a - b."""
    for mat in (a, b):
        defect = np.abs(mat - mat.conj().T).max()
        if defect > 1e-8:
            raise ValueError(f"non-hermitian input (defect {defect:.2e})")
    return float(0.5 * la.svdvals(a - b).sum())


def _stationary_from_generator(g: Generator) -> np.ndarray:
    """Kernel of the generator matrix via SVD; independent of the eigensolver."""
    kernel = la.null_space(g.matrix)
    if kernel.shape[1] > 1:
        raise DegenerateStationaryError(
            f"degenerate stationary manifold: kernel dimension {kernel.shape[1]}"
        )
    if kernel.shape[1] == 0:
        # no vector below the default rcond; take the smallest singular vector
        _, _, vh = la.svd(g.matrix)
        kernel = vh[-1].conj()[:, None]
    rho = unvec(kernel[:, 0], g.dim_hilbert)
    rho = 0.5 * (rho + rho.conj().T)
    return rho / np.trace(rho).real


def evolve(
    g: Generator,
    rho0: np.ndarray,
    times: np.ndarray,
    *,
    keep_states: bool = False,
    stationary: np.ndarray | None = None,
) -> Trajectory:
    """Propagate by matrix exponentials of the step generator.

    Step propagators are computed by scaling-and-squaring and reused when
    consecutive steps are equal. Distances are trace distances to the
    stationary state (computed from the generator kernel when not supplied).
    """
    times = np.asarray(times, dtype=float)
    if times.size == 0 or np.any(np.diff(times) <= 0) or times[0] < 0:
        raise ValueError("times must be increasing and start at >= 0")
    if stationary is None:
        stationary = _stationary_from_generator(g)
    d = g.dim_hilbert
    propagators: dict[float, np.ndarray] = {}
    state = vec(rho0)
    t_now = 0.0
    distances = np.empty(times.size)
    states = np.empty((times.size, d, d), dtype=complex) if keep_states else None
    for i, t in enumerate(times):
        dt = float(t - t_now)
        if dt > 0:
            step = propagators.get(dt)
            if step is None:
                step = la.expm(g.matrix * dt)
                propagators[dt] = step
            state = step @ state
            t_now = t
        rho = unvec(state, d)
        rho = 0.5 * (rho + rho.conj().T)
        if states is not None:
            states[i] = rho
        distances[i] = trace_distance(rho, stationary)
    return Trajectory(times=times, distances=distances, states=states, method="exponential_integrator")


def spectral_trajectory(
    sd: SpectralData,
    rho0: np.ndarray,
    times: np.ndarray,
    *,
    keep_states: bool = False,
) -> Trajectory:
    """Trajectory through the spectral mode sum, for cross-checks against evolve."""
    times = np.asarray(times, dtype=float)
    if times.size == 0 or np.any(np.diff(times) <= 0) or times[0] < 0:
        raise ValueError("times must be increasing and start at >= 0")
    if sd.stationary is None:
        raise DegenerateStationaryError("no unique stationary state")
    d = sd.dim_hilbert
    distances = np.empty(times.size)
    states = np.empty((times.size, d, d), dtype=complex) if keep_states else None
    for i, t in enumerate(times):
        rho = reconstruct_state(sd, rho0, float(t))
        if states is not None:
            states[i] = rho
        distances[i] = trace_distance(rho, sd.stationary)
    return Trajectory(times=times, distances=distances, states=states, method="spectral_reconstruction")


def log_times(t_max: float, n_samples: int = 400, decades: float = 3.0) -> np.ndarray:
    """Logarithmically spaced samples in (0, t_max]."""
    return np.logspace(np.log10(t_max) - decades, np.log10(t_max), n_samples)


def fit_decay_rate(traj: Trajectory, window: tuple[float, float] = DEFAULT_WINDOW) -> float:
    """Least-squares slope of ln d(t) over samples with d inside the window.

    The window is given in distance coordinates (d_hi, d_lo) so that it means
    the same thing across parameter points with very different timescales.
    """
    d_hi, d_lo = window
    if d_lo <= 0 or d_hi <= d_lo:
        raise ValueError("window must satisfy d_hi > d_lo > 0")
    d = traj.distances
    if d.min() > d_hi:
        raise WindowError(
            f"window not reached: min distance {d.min():.2e} stays above {d_hi:.0e}"
        )
    inside = (d <= d_hi) & (d >= d_lo)
    if inside.sum() < 5:
        raise WindowError(f"only {int(inside.sum())} samples inside the fitting window")
    slope, _ = np.polyfit(traj.times[inside], np.log(d[inside]), 1)
    return float(slope)
