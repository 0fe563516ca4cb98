"""Spectral analysis of dissipative Ising chains and rotation-induced
relaxation speedup (the quantum Mpemba effect)."""

__version__ = "0.1.0"

from .model import (
    ChainParams,
    Generator,
    apply_adjoint,
    apply_generator,
    assemble_generator,
    build_generator,
    build_hamiltonian,
    build_jump_ops,
    embed,
    pauli,
    rotation_unitary,
)
from .spectral import (
    GapReport,
    SpectralData,
    classify_sectors,
    eigendecompose,
    gap_report,
    stationary_state,
)
from .mpemba import (
    IdealUnitaryResult,
    OverlapMap,
    PlaneSweep,
    area,
    chi_overlap,
    hermitize_left_mode,
    ideal_unitary,
    initial_state,
    plane_sweep,
    scan_angles,
)
from .dynamics import (
    Trajectory,
    evolve,
    fit_decay_rate,
    reconstruct_state,
    trace_distance,
)

__all__ = [
    "ChainParams",
    "Generator",
    "GapReport",
    "SpectralData",
    "IdealUnitaryResult",
    "OverlapMap",
    "PlaneSweep",
    "Trajectory",
    "apply_adjoint",
    "apply_generator",
    "area",
    "assemble_generator",
    "build_generator",
    "build_hamiltonian",
    "build_jump_ops",
    "chi_overlap",
    "classify_sectors",
    "eigendecompose",
    "embed",
    "evolve",
    "fit_decay_rate",
    "gap_report",
    "hermitize_left_mode",
    "ideal_unitary",
    "initial_state",
    "pauli",
    "plane_sweep",
    "reconstruct_state",
    "rotation_unitary",
    "scan_angles",
    "stationary_state",
    "trace_distance",
]
