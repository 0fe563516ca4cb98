"""Hot numeric kernels for the rotation-overlap scans.

The grid evaluation of |<psi(theta,phi)| l2 |psi(theta,phi)>| over the full
angle grid is the inner loop of every sweep cell. Two interchangeable
implementations exist:

- a numba @njit kernel (default when numba imports cleanly), and
- a pure-numpy fallback built on blocked einsum.

Set QMPEMBA_KERNEL=numpy to force the fallback; QMPEMBA_KERNEL=numba insists
on numba and raises if it is unavailable. `benchmarks/bench_chi_scan.py`
compares the two.
"""

from __future__ import annotations

import os

import numpy as np

_ENV_VAR = "QMPEMBA_KERNEL"


def chi_grid_numpy(l2: np.ndarray, thetas: np.ndarray, phis: np.ndarray, n_spins: int) -> np.ndarray:
    """Overlap moduli on the angle grid, vectorized over phi one theta row at a time."""
    out = np.empty((thetas.size, phis.size))
    zp = np.exp(0.5j * phis)
    for it, theta in enumerate(thetas):
        s, c = np.sin(theta / 2), np.cos(theta / 2)
        spinor = np.stack([s * zp, c / zp], axis=1)  # rotated |down> per phi
        psi = np.ones((phis.size, 1), dtype=complex)
        for _ in range(n_spins):
            psi = (psi[:, :, None] * spinor[:, None, :]).reshape(phis.size, -1)
        out[it] = np.abs(np.einsum("gi,ij,gj->g", psi.conj(), l2, psi, optimize=True))
    return out


def _build_numba_kernel():
    from numba import njit

    @njit(cache=True)
    def chi_grid_numba(l2, thetas, phis, n_spins):  # pragma: no cover - jitted
        dim = l2.shape[0]
        out = np.empty((thetas.size, phis.size))
        psi = np.empty(dim, np.complex128)
        for it in range(thetas.size):
            s = np.sin(0.5 * thetas[it])
            c = np.cos(0.5 * thetas[it])
            for ip in range(phis.size):
                zp = np.exp(0.5j * phis[ip])
                a = s * zp
                b = c / zp
                psi[0] = 1.0
                size = 1
                for _ in range(n_spins):
                    for i in range(size - 1, -1, -1):
                        amp = psi[i]
                        psi[2 * i] = amp * a
                        psi[2 * i + 1] = amp * b
                    size *= 2
                acc = 0.0 + 0.0j
                for i in range(dim):
                    row = 0.0 + 0.0j
                    for j in range(dim):
                        row += l2[i, j] * psi[j]
                    acc += np.conj(psi[i]) * row
                out[it, ip] = abs(acc)
        return out

    return chi_grid_numba


_CHI_GRID = None
_BACKEND = None


def _resolve_backend() -> tuple[str, object]:
    choice = os.environ.get(_ENV_VAR, "").strip().lower()
    if choice in ("numpy", "off"):
        return "numpy", chi_grid_numpy
    try:
        kernel = _build_numba_kernel()
    except ImportError:
        if choice == "numba":
            raise RuntimeError(f"{_ENV_VAR}=numba requested but numba is not importable")
        return "numpy", chi_grid_numpy
    return "numba", kernel


def active_backend() -> str:
    """Name of the kernel backend in use ('numba' or 'numpy')."""
    global _CHI_GRID, _BACKEND
    if _BACKEND is None:
        _BACKEND, _CHI_GRID = _resolve_backend()
    return _BACKEND


def chi_grid(l2: np.ndarray, thetas: np.ndarray, phis: np.ndarray, n_spins: int) -> np.ndarray:
    """|tr(l2 U rho0 U^dag)| on the (theta, phi) grid for the all-down initial state."""
    active_backend()
    l2 = np.ascontiguousarray(l2, dtype=complex)
    thetas = np.ascontiguousarray(thetas, dtype=float)
    phis = np.ascontiguousarray(phis, dtype=float)
    return _CHI_GRID(l2, thetas, phis, n_spins)
