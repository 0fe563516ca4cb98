"""Command-line interface: deterministic CSV/JSON emission of spectra, scans,
plane sweeps and trajectories, plus a parameter-keyed spectral cache.

Config files are flat `section.key = value` lines; command-line flags override
file values, and QMPEMBA_OUTDIR / QMPEMBA_WORKERS override both. All floats
are written with 17 significant digits so repeated runs are byte-identical.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__, dynamics, model, mpemba, spectral

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_SPECTRAL = 3
EXIT_DYNAMICS = 4

_SPECTRAL_ERRORS = (
    spectral.SpectralError,
    mpemba.ConjugatePairGapError,
    mpemba.NotHermitizableError,
    mpemba.TracelessnessError,
)


class ConfigError(Exception):
    pass


def fmt(x: float) -> str:
    """17 significant digits, locale independent; round-trips float64 exactly."""
    return format(float(x), ".17g")


# ---------------------------------------------------------------------------
# configuration
# ---------------------------------------------------------------------------

def _parse_bool(raw) -> bool:
    if isinstance(raw, bool):
        return raw
    low = str(raw).strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {raw!r}")


def _parse_float_list(raw) -> list[float]:
    if isinstance(raw, (list, tuple)):
        return [float(x) for x in raw]
    return [float(tok) for tok in str(raw).split(",") if tok.strip()]


# key -> (converter, default); None default means the key is required
_SCHEMA: dict[str, tuple] = {
    "model.n_spins": (int, None),
    "model.omega": (float, 1.0),
    "model.v": (float, 1.0),
    "model.alpha": (float, 0.0),
    "model.gamma": (float, 1.0),
    "model.epsilon": (float, 1e-2),
    "model.boundary": (str, "open"),
    "scan.n_theta": (int, 180),
    "scan.n_phi": (int, 360),
    "plane.omega_min": (float, 0.25),
    "plane.omega_max": (float, 3.0),
    "plane.omega_steps": (int, 8),
    "plane.v_min": (float, 0.25),
    "plane.v_max": (float, 8.0),
    "plane.v_steps": (int, 8),
    "plane.alpha_list": (_parse_float_list, [0.0]),
    "evolve.t_max_over_tau2": (float, 20.0),
    "evolve.n_samples": (int, 400),
    "evolve.window_hi": (float, 1e-3),
    "evolve.window_lo": (float, 1e-7),
    "evolve.mode": (str, "identity"),
    "evolve.theta": (float, 0.0),
    "evolve.phi": (float, 0.0),
    "output.directory": (str, "out"),
    "output.format": (str, "csv"),
    "output.emit_plot_scripts": (_parse_bool, False),
    "cache.enabled": (_parse_bool, False),
    "cache.directory": (str, ".qmpemba_cache"),
    "workers": (int, 1),
}

# keys that describe the computation, recorded as provenance; execution
# details (workers, cache, output paths) deliberately stay out so results
# are byte-identical regardless of how they were produced
_PROVENANCE_KEYS = [
    k
    for k in _SCHEMA
    if k.split(".")[0] in ("model", "scan", "plane", "evolve") or k == "output.format"
]


def _read_config_file(path: str) -> dict[str, str]:
    values: dict[str, str] = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {line!r}")
        key, _, raw = stripped.partition("=")
        values[key.strip()] = raw.strip()
    return values


@dataclass
class RunConfig:
    values: dict = field(default_factory=dict)

    def __getitem__(self, key: str):
        return self.values[key]

    def chain_params(self) -> model.ChainParams:
        return model.ChainParams(
            n_spins=self["model.n_spins"],
            omega=self["model.omega"],
            v=self["model.v"],
            alpha=self["model.alpha"],
            gamma=self["model.gamma"],
            epsilon=self["model.epsilon"],
            boundary=self["model.boundary"],
        )

    def provenance(self) -> dict:
        return {k: self.values[k] for k in sorted(_PROVENANCE_KEYS)}


def parse_config(path: str | None = None, overrides: dict | None = None) -> RunConfig:
    """Merge file values, overrides and defaults into a validated RunConfig."""
    raw: dict = {}
    if path is not None:
        raw.update(_read_config_file(path))
    for key, value in (overrides or {}).items():
        if value is not None:
            raw[key] = value

    values: dict = {}
    for key, value in raw.items():
        if key not in _SCHEMA:
            raise ConfigError(f"unknown config key: {key}")
        convert, _ = _SCHEMA[key]
        try:
            values[key] = convert(value)
        except (ValueError, TypeError) as exc:
            raise ConfigError(f"bad value for {key}: {value!r} ({exc})") from exc
    for key, (convert, default) in _SCHEMA.items():
        if key not in values:
            if default is None:
                raise ConfigError(f"{key.split('.')[-1]} missing (set {key})")
            values[key] = default

    if "QMPEMBA_OUTDIR" in os.environ:
        values["output.directory"] = os.environ["QMPEMBA_OUTDIR"]
    if "QMPEMBA_WORKERS" in os.environ:
        values["workers"] = int(os.environ["QMPEMBA_WORKERS"])

    _validate(values)
    return RunConfig(values=values)


def _validate(values: dict) -> None:
    def fail(key: str, why: str):
        raise ConfigError(f"{key}: {why}")

    if values["model.n_spins"] < 1:
        fail("model.n_spins", "must be >= 1")
    if values["model.gamma"] <= 0:
        fail("model.gamma", "must be > 0")
    if values["model.epsilon"] <= 0:
        fail("model.epsilon", "must be > 0")
    if values["model.alpha"] < 0:
        fail("model.alpha", "must be >= 0")
    if values["model.boundary"] != "open":
        fail("model.boundary", "only 'open' is supported")
    for key in ("scan.n_theta", "scan.n_phi"):
        if values[key] < 2:
            fail(key, "must be >= 2")
    for key in ("plane.omega_steps", "plane.v_steps"):
        if values[key] < 1:
            fail(key, "must be >= 1")
    if not values["plane.alpha_list"]:
        fail("plane.alpha_list", "must be nonempty")
    if values["plane.omega_max"] < values["plane.omega_min"]:
        fail("plane.omega_max", "must be >= plane.omega_min")
    if values["plane.v_max"] < values["plane.v_min"]:
        fail("plane.v_max", "must be >= plane.v_min")
    if values["evolve.n_samples"] < 2:
        fail("evolve.n_samples", "must be >= 2")
    if values["evolve.window_lo"] <= 0 or values["evolve.window_hi"] <= values["evolve.window_lo"]:
        fail("evolve.window_hi", "window must satisfy hi > lo > 0")
    if values["evolve.mode"] not in ("identity", "rotated", "ideal"):
        fail("evolve.mode", "must be identity, rotated or ideal")
    if values["output.format"] not in ("csv", "json"):
        fail("output.format", "must be csv or json")
    if values["workers"] < 1:
        fail("workers", "must be >= 1")
    outdir = Path(values["output.directory"])
    try:
        outdir.mkdir(parents=True, exist_ok=True)
        probe = outdir / ".write_probe"
        probe.write_text("")
        probe.unlink()
    except OSError as exc:
        fail("output.directory", f"not writable: {exc}")


def _axis(values: dict, prefix: str) -> np.ndarray:
    steps = values[f"plane.{prefix}_steps"]
    lo = values[f"plane.{prefix}_min"]
    hi = values[f"plane.{prefix}_max"]
    if steps == 1:
        return np.array([lo])
    return np.linspace(lo, hi, steps)


# ---------------------------------------------------------------------------
# spectral cache
# ---------------------------------------------------------------------------

class SpectralCache:
    """Per-parameter-point store of spectral summaries.

    Keys hash the physical parameters and the code version; epsilon and the
    angle grid are excluded because they only affect masks computed downstream.
    Writes go through a temp file + rename so concurrent readers never see a
    partial entry; a corrupt entry counts as a miss.
    """

    def __init__(self, directory: str | Path):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)
        self.hits = 0
        self.misses = 0

    @staticmethod
    def key(p: model.ChainParams) -> str:
        blob = json.dumps(
            {
                "n_spins": p.n_spins,
                "omega": repr(float(p.omega)),
                "v": repr(float(p.v)),
                "alpha": repr(float(p.alpha)),
                "gamma": repr(float(p.gamma)),
                "boundary": p.boundary,
                "version": __version__,
            },
            sort_keys=True,
        )
        return hashlib.sha256(blob.encode()).hexdigest()[:32]

    def _path(self, p: model.ChainParams) -> Path:
        return self.directory / f"{self.key(p)}.npz"

    def lookup(self, p: model.ChainParams) -> mpemba.CellSpectral | None:
        path = self._path(p)
        if not path.exists():
            self.misses += 1
            return None
        try:
            with np.load(path) as data:
                summary = mpemba.CellSpectral(
                    lambda2=complex(data["lambda2"]),
                    lambda3=complex(data["lambda3"]),
                    gap_is_complex=bool(data["gap_is_complex"]),
                    degenerate_gap=bool(data["degenerate_gap"]),
                    left_mode2=data["left_mode2"],
                    status=str(data["status"]),
                )
        except Exception as exc:
            print(f"warning: ignoring corrupt cache entry {path.name}: {exc}", file=sys.stderr)
            self.misses += 1
            return None
        self.hits += 1
        return summary

    def store(self, p: model.ChainParams, summary: mpemba.CellSpectral) -> None:
        path = self._path(p)
        tmp = path.with_name(path.stem + ".tmp.npz")
        with open(tmp, "wb") as fh:
            np.savez(
                fh,
                lambda2=np.complex128(summary.lambda2),
                lambda3=np.complex128(summary.lambda3),
                gap_is_complex=summary.gap_is_complex,
                degenerate_gap=summary.degenerate_gap,
                left_mode2=summary.left_mode2,
                status=summary.status,
            )
        os.replace(tmp, path)


def _make_cache(cfg: RunConfig) -> SpectralCache | None:
    if not cfg["cache.enabled"]:
        return None
    return SpectralCache(cfg["cache.directory"])


# ---------------------------------------------------------------------------
# emission
# ---------------------------------------------------------------------------

def _clean_status(status: str) -> str:
    return status.replace(",", ";").replace("\n", " ")


def _write_table(cfg: RunConfig, name: str, header: list[str], rows: list[list[str]]) -> Path:
    outdir = Path(cfg["output.directory"])
    if cfg["output.format"] == "csv":
        path = outdir / f"{name}.csv"
        lines = [",".join(header)] + [",".join(row) for row in rows]
        path.write_text("\n".join(lines) + "\n")
    else:
        path = outdir / f"{name}.json"
        records = [dict(zip(header, row)) for row in rows]
        path.write_text(json.dumps(records, indent=2, sort_keys=True) + "\n")
    return path


def _write_json(cfg: RunConfig, name: str, payload: dict) -> Path:
    path = Path(cfg["output.directory"]) / f"{name}.json"
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return path


def _write_effective_config(cfg: RunConfig) -> None:
    _write_json(cfg, "effective_config", cfg.provenance())


def _maybe_plot_script(cfg: RunConfig, name: str, body: str) -> None:
    if not cfg["output.emit_plot_scripts"] or cfg["output.format"] != "csv":
        return
    path = Path(cfg["output.directory"]) / f"{name}.gp"
    path.write_text(body)


def _gap_payload(report: spectral.GapReport) -> dict:
    return {
        "re_lambda2": report.lambda2.real,
        "im_lambda2": report.lambda2.imag,
        "re_lambda3": report.lambda3.real,
        "im_lambda3": report.lambda3.imag,
        "tau2": report.tau2,
        "tau3": report.tau3,
        "ratio": report.ratio,
        "gap_is_complex": report.gap_is_complex,
        "degenerate_gap": report.degenerate_gap,
    }


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_spectrum(cfg: RunConfig) -> int:
    p = cfg.chain_params()
    sd = spectral.classify_sectors(spectral.eigendecompose(model.build_generator(p)), p)
    report = spectral.gap_report(sd, restrict_to_symmetric=True)
    trace_res = sd.trace_residuals
    biorth_res = sd.biorth_residuals
    rows = [
        [
            str(k + 1),
            fmt(sd.eigenvalues[k].real),
            fmt(sd.eigenvalues[k].imag),
            sd.sector_labels[k],
            fmt(trace_res[k]),
            fmt(biorth_res[k]),
        ]
        for k in range(sd.n_modes)
    ]
    _write_table(cfg, "spectrum", ["index", "re_lambda", "im_lambda", "sector", "trace_residual", "biorth_residual"], rows)
    _write_json(cfg, "gap", _gap_payload(report))
    _write_effective_config(cfg)
    _maybe_plot_script(
        cfg,
        "spectrum",
        "set datafile separator ','\n"
        "set xlabel 'Re lambda'\nset ylabel 'Im lambda'\n"
        "plot 'spectrum.csv' every ::1 using 2:3 with points pt 7 notitle\n",
    )
    return EXIT_OK


def cmd_scan_angles(cfg: RunConfig) -> int:
    p = cfg.chain_params()
    sd = spectral.classify_sectors(spectral.eigendecompose(model.build_generator(p)), p)
    overlap = mpemba.scan_angles(sd, p, cfg["scan.n_theta"], cfg["scan.n_phi"])
    rows = []
    for i, theta in enumerate(overlap.grid_theta):
        for j, phi in enumerate(overlap.grid_phi):
            rows.append([
                fmt(theta),
                fmt(phi),
                fmt(overlap.chi[i, j]),
                str(int(overlap.mask[i, j])),
            ])
    _write_table(cfg, "scan", ["theta", "phi", "chi", "accelerated"], rows)
    _write_json(
        cfg,
        "scan_meta",
        {
            "epsilon": overlap.epsilon,
            "n_theta": int(overlap.grid_theta.size),
            "n_phi": int(overlap.grid_phi.size),
            "area": overlap.area,
        },
    )
    _write_effective_config(cfg)
    _maybe_plot_script(
        cfg,
        "scan",
        "set datafile separator ','\n"
        "set xlabel 'phi'\nset ylabel 'theta'\n"
        "plot 'scan.csv' every ::1 using 2:1:4 with points palette pt 5 notitle\n",
    )
    return EXIT_OK


def cmd_area_map(cfg: RunConfig) -> int:
    base = cfg.chain_params()
    cache = _make_cache(cfg)
    omega_axis = _axis(cfg.values, "omega")
    v_axis = _axis(cfg.values, "v")
    rows = []
    n_ok = 0
    n_cells = 0
    for alpha in cfg["plane.alpha_list"]:
        base_alpha = model.ChainParams(
            n_spins=base.n_spins,
            omega=base.omega,
            v=base.v,
            alpha=float(alpha),
            gamma=base.gamma,
            epsilon=base.epsilon,
            boundary=base.boundary,
        )
        sweep = mpemba.plane_sweep(
            base_alpha,
            omega_axis,
            v_axis,
            (cfg["scan.n_theta"], cfg["scan.n_phi"]),
            workers=cfg["workers"],
            cache=cache,
        )
        for cell in sweep.cells:
            n_cells += 1
            n_ok += cell.status == "ok"
            rows.append([
                fmt(cell.alpha),
                fmt(cell.omega),
                fmt(cell.v),
                fmt(cell.re_lambda2),
                fmt(cell.im_lambda2),
                str(int(cell.gap_is_complex)),
                fmt(cell.tau3_over_tau2),
                fmt(cell.area),
                _clean_status(cell.status),
            ])
    _write_table(
        cfg,
        "area_map",
        ["alpha", "omega", "v", "re_lambda2", "im_lambda2", "gap_is_complex", "tau3_over_tau2", "area", "cell_status"],
        rows,
    )
    _write_effective_config(cfg)
    _maybe_plot_script(
        cfg,
        "area_map",
        "set datafile separator ','\n"
        "set xlabel 'omega'\nset ylabel 'v'\n"
        "plot 'area_map.csv' every ::1 using 2:3:8 with points palette pt 5 ps 3 notitle\n",
    )
    if cache is not None:
        print(f"cache: {cache.hits} hits, {cache.misses} misses", file=sys.stderr)
    return EXIT_OK if n_ok >= 0.9 * n_cells else EXIT_SPECTRAL


def cmd_evolve(cfg: RunConfig) -> int:
    p = cfg.chain_params()
    gen = model.build_generator(p)
    sd = spectral.classify_sectors(spectral.eigendecompose(gen), p)
    report = spectral.gap_report(sd, restrict_to_symmetric=True)
    rho0 = mpemba.initial_state(p)
    mode = cfg["evolve.mode"]
    if mode == "rotated":
        u = model.rotation_unitary(p, cfg["evolve.theta"], cfg["evolve.phi"])
        rho0 = u @ rho0 @ u.conj().T
    elif mode == "ideal":
        result = mpemba.ideal_unitary(sd, p)
        rho0 = result.unitary @ rho0 @ result.unitary.conj().T
    times = dynamics.log_times(cfg["evolve.t_max_over_tau2"] * report.tau2, cfg["evolve.n_samples"])
    traj = dynamics.evolve(gen, rho0, times, stationary=spectral.stationary_state(sd))
    rate = dynamics.fit_decay_rate(traj, (cfg["evolve.window_hi"], cfg["evolve.window_lo"]))
    rows = [[fmt(t), fmt(d)] for t, d in zip(traj.times, traj.distances)]
    _write_table(cfg, "evolve", ["t", "trace_distance"], rows)
    _write_json(
        cfg,
        "fit",
        {
            "mode": mode,
            "fitted_rate": rate,
            "re_lambda2": report.lambda2.real,
            "re_lambda3": report.lambda3.real,
        },
    )
    _write_effective_config(cfg)
    _maybe_plot_script(
        cfg,
        "evolve",
        "set datafile separator ','\n"
        "set logscale y\nset xlabel 't'\nset ylabel 'trace distance'\n"
        "plot 'evolve.csv' every ::1 using 1:2 with lines notitle\n",
    )
    return EXIT_OK


def cmd_ideal_unitary(cfg: RunConfig) -> int:
    p = cfg.chain_params()
    sd = spectral.classify_sectors(spectral.eigendecompose(model.build_generator(p)), p)
    result = mpemba.ideal_unitary(sd, p)
    _write_json(
        cfg,
        "ideal_unitary",
        {
            "s": result.s,
            "alpha1": result.alpha1,
            "alpha2": result.alpha2,
            "residual_overlap": result.residual_overlap,
            "used_zero_eigenvalue": result.used_zero_eigenvalue,
        },
    )
    rows = []
    d = result.unitary.shape[0]
    for i in range(d):
        for j in range(d):
            rows.append([str(i), str(j), fmt(result.unitary[i, j].real), fmt(result.unitary[i, j].imag)])
    _write_table(cfg, "ideal_unitary_matrix", ["row", "col", "re", "im"], rows)
    _write_effective_config(cfg)
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    from . import verify

    p = cfg.chain_params()
    if p.n_spins > 3:
        raise ConfigError("verify runs at n_spins <= 3")
    results = verify.run_invariant_suite(p)
    failed = 0
    for name, ok, detail in results:
        print(f"{'PASS' if ok else 'FAIL'} {name}" + ("" if ok else f" ({detail})"))
        failed += not ok
    return EXIT_OK if failed == 0 else EXIT_SPECTRAL


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

_FLAG_TO_KEY = {
    "n_spins": "model.n_spins",
    "omega": "model.omega",
    "v": "model.v",
    "alpha": "model.alpha",
    "gamma": "model.gamma",
    "epsilon": "model.epsilon",
    "n_theta": "scan.n_theta",
    "n_phi": "scan.n_phi",
    "omega_min": "plane.omega_min",
    "omega_max": "plane.omega_max",
    "omega_steps": "plane.omega_steps",
    "v_min": "plane.v_min",
    "v_max": "plane.v_max",
    "v_steps": "plane.v_steps",
    "alpha_list": "plane.alpha_list",
    "t_max_over_tau2": "evolve.t_max_over_tau2",
    "n_samples": "evolve.n_samples",
    "window_hi": "evolve.window_hi",
    "window_lo": "evolve.window_lo",
    "mode": "evolve.mode",
    "theta": "evolve.theta",
    "phi": "evolve.phi",
    "outdir": "output.directory",
    "format": "output.format",
    "emit_plot_scripts": "output.emit_plot_scripts",
    "cache": "cache.enabled",
    "cache_dir": "cache.directory",
    "workers": "workers",
}


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="path to a key = value config file")
    common.add_argument("--n-spins", type=int, dest="n_spins")
    common.add_argument("--omega", type=float)
    common.add_argument("--v", type=float)
    common.add_argument("--alpha", type=float)
    common.add_argument("--gamma", type=float)
    common.add_argument("--epsilon", type=float)
    common.add_argument("--n-theta", type=int, dest="n_theta")
    common.add_argument("--n-phi", type=int, dest="n_phi")
    common.add_argument("--omega-min", type=float, dest="omega_min")
    common.add_argument("--omega-max", type=float, dest="omega_max")
    common.add_argument("--omega-steps", type=int, dest="omega_steps")
    common.add_argument("--v-min", type=float, dest="v_min")
    common.add_argument("--v-max", type=float, dest="v_max")
    common.add_argument("--v-steps", type=int, dest="v_steps")
    common.add_argument("--alpha-list", dest="alpha_list", help="comma-separated exponents")
    common.add_argument("--t-max-over-tau2", type=float, dest="t_max_over_tau2")
    common.add_argument("--n-samples", type=int, dest="n_samples")
    common.add_argument("--window-hi", type=float, dest="window_hi")
    common.add_argument("--window-lo", type=float, dest="window_lo")
    common.add_argument("--theta", type=float)
    common.add_argument("--phi", type=float)
    common.add_argument("--outdir")
    common.add_argument("--format", choices=["csv", "json"])
    common.add_argument("--emit-plot-scripts", action="store_const", const=True, dest="emit_plot_scripts")
    common.add_argument("--cache", action="store_const", const=True)
    common.add_argument("--no-cache", action="store_const", const=False, dest="cache")
    common.add_argument("--cache-dir", dest="cache_dir")
    common.add_argument("--workers", type=int)

    parser = argparse.ArgumentParser(prog="qmpemba", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("spectrum", parents=[common], help="eigenvalues, sectors and gap report")
    sub.add_parser("scan-angles", parents=[common], help="rotation-angle overlap scan")
    sub.add_parser("area-map", parents=[common], help="(omega, v) plane sweep")
    evolve_parser = sub.add_parser("evolve", parents=[common], help="trajectory and decay-rate fit")
    evolve_parser.add_argument("--mode", choices=["identity", "rotated", "ideal"])
    sub.add_parser("ideal-unitary", parents=[common], help="exact overlap-cancelling unitary")
    sub.add_parser("verify", parents=[common], help="run the invariant suite (n_spins <= 3)")
    return parser


_COMMANDS = {
    "spectrum": cmd_spectrum,
    "scan-angles": cmd_scan_angles,
    "area-map": cmd_area_map,
    "evolve": cmd_evolve,
    "ideal-unitary": cmd_ideal_unitary,
    "verify": cmd_verify,
}


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    overrides = {
        key: getattr(args, flag)
        for flag, key in _FLAG_TO_KEY.items()
        if getattr(args, flag, None) is not None
    }
    try:
        cfg = parse_config(args.config, overrides)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return _COMMANDS[args.command](cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except _SPECTRAL_ERRORS as exc:
        print(f"spectral error: {exc}", file=sys.stderr)
        return EXIT_SPECTRAL
    except dynamics.WindowError as exc:
        print(f"dynamics error: {exc}", file=sys.stderr)
        return EXIT_DYNAMICS


if __name__ == "__main__":
    sys.exit(main())
