import numpy as np
import pytest

from qmpemba import ChainParams, build_generator, _kernels
from qmpemba.spectral import classify_sectors, eigendecompose


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    # first chi_grid call may trigger JIT compilation; keep it out of timings
    _kernels.chi_grid(np.eye(2, dtype=complex), np.array([0.1, 0.2]), np.array([0.1, 0.2]), 1)


@pytest.fixture(scope="session")
def single_spin():
    p = ChainParams(n_spins=1, omega=0.0, v=0.0, alpha=0.0)
    sd = classify_sectors(eigendecompose(build_generator(p)), p)
    return p, sd


@pytest.fixture(scope="session")
def chain3():
    # generic interacting point with a real, sector-clean gap
    p = ChainParams(n_spins=3, omega=1.0, v=1.0, alpha=0.0)
    sd = classify_sectors(eigendecompose(build_generator(p)), p)
    return p, sd
