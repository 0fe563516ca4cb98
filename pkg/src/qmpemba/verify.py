"""Self-contained invariant suite behind the `verify` subcommand.

Each check returns (name, passed, detail). The suite is meant for small
chains (n_spins <= 3) where a full decomposition takes well under a second.
"""

from __future__ import annotations

import numpy as np

from . import dynamics, model, mpemba, spectral


def _random_hermitian(rng: np.random.Generator, dim: int) -> np.ndarray:
    x = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return 0.5 * (x + x.conj().T)


def _random_state(rng: np.random.Generator, dim: int) -> np.ndarray:
    x = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    rho = x @ x.conj().T
    return rho / np.trace(rho).real


def run_invariant_suite(p: model.ChainParams, seed: int = 7) -> list[tuple[str, bool, str]]:
    rng = np.random.default_rng(seed)
    d = p.dim_hilbert
    gen = model.build_generator(p)
    results: list[tuple[str, bool, str]] = []

    def check(name: str, value: float, tol: float):
        results.append((name, bool(value < tol), f"{value:.3e} vs {tol:.0e}"))

    # generator-level invariants
    trace_row = np.abs(model.vec(np.eye(d)) @ gen.matrix).max()
    check("trace_preservation_left_null", trace_row, 1e-10)

    herm = 0.0
    dual = 0.0
    for _ in range(20):
        rho = _random_state(rng, d)
        w_rho = model.apply_generator(gen, rho)
        herm = max(herm, np.abs(w_rho - w_rho.conj().T).max())
        a = _random_hermitian(rng, d)
        lhs = np.trace(a @ w_rho)
        rhs = np.trace(model.apply_adjoint(gen, a) @ rho)
        dual = max(dual, abs(lhs - rhs))
    check("hermiticity_preservation", herm, 1e-11)
    check("dual_consistency", dual, 1e-10)

    theta, phi = rng.uniform(0, np.pi), rng.uniform(0, 2 * np.pi)
    u = model.rotation_unitary(p, theta, phi)
    check("rotation_unitarity", np.abs(u @ u.conj().T - np.eye(d)).max(), 1e-12)

    # spectral invariants
    sd = spectral.classify_sectors(spectral.eigendecompose(gen), p)
    lam = sd.eigenvalues
    check("eigenvalue_real_parts_nonpositive", float(lam.real.max()), 1e-9)
    # conjugation closure as nearest-neighbour matching; sorting is too
    # order-sensitive when real parts collide
    gaps = np.abs(lam[:, None] - np.conj(lam)[None, :]).min(axis=1)
    check("spectrum_conjugation_closed", float(gaps.max()), 1e-9)

    gram = sd.left_rows @ sd.right_cols
    check("biorthonormality", np.abs(gram - np.eye(gram.shape[0])).max(), 1e-8)

    nonzero = np.abs(lam) > spectral.ZERO_MODE_TOL
    check("decaying_modes_traceless", float(sd.trace_residuals[nonzero].max()), 1e-9)

    rho_ss = spectral.stationary_state(sd)
    check("stationary_is_fixed_point", np.abs(model.apply_generator(gen, rho_ss)).max(), 1e-9)
    check("stationary_positivity", max(0.0, -float(np.linalg.eigvalsh(rho_ss).min())), 1e-9)

    recon = 0.0
    eigrel = 0.0
    for _ in range(20):
        rho = _random_state(rng, d)
        coeffs = sd.left_rows @ model.vec(rho)
        rebuilt = model.unvec(sd.right_cols @ coeffs, d)
        recon = max(recon, float(np.linalg.norm(rebuilt - rho)))
        k = int(rng.integers(0, sd.n_modes))
        lhs = sd.overlap(k, model.apply_generator(gen, rho))
        rhs = lam[k] * sd.overlap(k, rho)
        eigrel = max(eigrel, abs(lhs - rhs))
    check("resolution_of_identity", recon, 1e-8)
    check("left_mode_eigen_relation", eigrel, 1e-9)

    report = spectral.gap_report(sd, restrict_to_symmetric=True)
    check("left_gap_mode_orthogonal_to_stationary", abs(sd.overlap(report.index2, rho_ss)), 1e-9)

    # propagation cross-check
    times = np.array([0.1, 0.4, 1.3, 3.7]) / p.gamma
    rho0 = _random_state(rng, d)
    traj_exp = dynamics.evolve(gen, rho0, times, keep_states=True)
    traj_spec = dynamics.spectral_trajectory(sd, rho0, times, keep_states=True)
    gap_dist = max(
        dynamics.trace_distance(a, b)
        for a, b in zip(traj_exp.states, traj_spec.states)
    )
    check("evolve_matches_reconstruction", gap_dist, 1e-7)

    # scan consistency: halving the threshold can only shrink the mask
    scan = mpemba.scan_angles(sd, p, 32, 64)
    tighter = scan.chi <= 0.5 * p.epsilon
    results.append((
        "mask_monotone_in_epsilon",
        bool(np.all(tighter <= scan.mask)),
        "tighter mask escaped the looser one",
    ))
    results.append((
        "area_in_unit_interval",
        bool(0.0 <= scan.area <= 1.0),
        f"area {scan.area}",
    ))
    return results
