import json

import numpy as np
import pytest

from qmpemba import cli
from qmpemba.cli import ConfigError, SpectralCache, fmt, parse_config
from qmpemba.model import ChainParams


def run_cli(args, outdir):
    return cli.main(args + ["--outdir", str(outdir)])


class TestParseConfig:
    def test_defaults_filled(self, tmp_path):
        cfg = parse_config(overrides={"model.n_spins": 2, "output.directory": str(tmp_path)})
        assert cfg["model.gamma"] == 1.0
        assert cfg["model.epsilon"] == 1e-2
        assert cfg["scan.n_theta"] == 180 and cfg["scan.n_phi"] == 360
        assert cfg["output.format"] == "csv"

    def test_n_spins_required(self, tmp_path):
        with pytest.raises(ConfigError, match="n_spins missing"):
            parse_config(overrides={"output.directory": str(tmp_path)})

    def test_unknown_key_named(self, tmp_path):
        config = tmp_path / "run.cfg"
        config.write_text("model.n_spins = 2\nmodel.typo = 3\n")
        with pytest.raises(ConfigError, match="model.typo"):
            parse_config(str(config))

    def test_flag_overrides_file(self, tmp_path):
        config = tmp_path / "run.cfg"
        config.write_text(
            "model.n_spins = 2\nmodel.omega = 1.0\n"
            f"output.directory = {tmp_path}\n"
        )
        cfg = parse_config(str(config), overrides={"model.omega": 2.0})
        assert cfg["model.omega"] == 2.0

    def test_comments_and_blank_lines(self, tmp_path):
        config = tmp_path / "run.cfg"
        config.write_text(
            "# a comment\n\nmodel.n_spins = 3  # trailing comment\n"
            f"output.directory = {tmp_path}\n"
        )
        assert parse_config(str(config))["model.n_spins"] == 3

    @pytest.mark.parametrize(
        "key,value,match",
        [
            ("model.n_spins", 0, "n_spins"),
            ("model.epsilon", -1.0, "epsilon"),
            ("scan.n_theta", 1, "n_theta"),
            ("output.format", "xml", "format"),
            ("evolve.mode", "sideways", "mode"),
            ("workers", 0, "workers"),
        ],
    )
    def test_out_of_range_values(self, tmp_path, key, value, match):
        overrides = {"model.n_spins": 2, "output.directory": str(tmp_path), key: value}
        with pytest.raises(ConfigError, match=match):
            parse_config(overrides=overrides)

    def test_unwritable_output_dir(self, tmp_path):
        blocker = tmp_path / "blocker"
        blocker.write_text("")  # a file where a directory is required
        with pytest.raises(ConfigError, match="output.directory"):
            parse_config(
                overrides={"model.n_spins": 2, "output.directory": str(blocker / "sub")}
            )

    def test_alpha_list_parsing(self, tmp_path):
        cfg = parse_config(
            overrides={
                "model.n_spins": 2,
                "plane.alpha_list": "0, 1.5, 3",
                "output.directory": str(tmp_path),
            }
        )
        assert cfg["plane.alpha_list"] == [0.0, 1.5, 3.0]

    def test_env_overrides(self, tmp_path, monkeypatch):
        other = tmp_path / "env_out"
        monkeypatch.setenv("QMPEMBA_OUTDIR", str(other))
        monkeypatch.setenv("QMPEMBA_WORKERS", "3")
        cfg = parse_config(overrides={"model.n_spins": 2, "output.directory": str(tmp_path)})
        assert cfg["output.directory"] == str(other)
        assert cfg["workers"] == 3


def test_fmt_round_trips_float64():
    rng = np.random.default_rng(0)
    for x in rng.standard_normal(100) * 10.0 ** rng.integers(-12, 12, 100):
        assert float(fmt(x)) == x


class TestSpectrumCommand:
    def test_single_spin_rows(self, tmp_path):
        assert run_cli(["spectrum", "--n-spins", "1", "--omega", "0", "--v", "0"], tmp_path) == 0
        lines = (tmp_path / "spectrum.csv").read_text().splitlines()
        assert lines[0] == "index,re_lambda,im_lambda,sector,trace_residual,biorth_residual"
        rows = [line.split(",") for line in lines[1:]]
        assert len(rows) == 4
        assert [float(r[1]) for r in rows] == [0.0, -0.5, -0.5, -1.0]
        assert abs(float(rows[0][1])) < 1e-9
        gap = json.loads((tmp_path / "gap.json").read_text())
        assert gap["re_lambda2"] == -0.5 and gap["re_lambda3"] == -1.0

    def test_byte_identical_reruns(self, tmp_path):
        args = ["spectrum", "--n-spins", "2", "--omega", "1.3", "--v", "0.8"]
        run_cli(args, tmp_path / "a")
        run_cli(args, tmp_path / "b")
        for name in ("spectrum.csv", "gap.json", "effective_config.json"):
            assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


class TestScanCommand:
    def test_rows_and_mask_recompute(self, tmp_path):
        code = run_cli(
            ["scan-angles", "--n-spins", "2", "--omega", "1", "--v", "1",
             "--n-theta", "10", "--n-phi", "20"],
            tmp_path,
        )
        assert code == 0
        lines = (tmp_path / "scan.csv").read_text().splitlines()
        assert len(lines) == 1 + 10 * 20
        meta = json.loads((tmp_path / "scan_meta.json").read_text())
        assert meta["n_theta"] == 10 and meta["n_phi"] == 20
        recomputed_area = 0.0
        cell = (np.pi / 10) * (2 * np.pi / 20) / (4 * np.pi)
        for line in lines[1:]:
            theta, _, chi, accel = line.split(",")
            assert (float(chi) <= meta["epsilon"]) == bool(int(accel))
            recomputed_area += cell * np.sin(float(theta)) * int(accel)
        assert abs(recomputed_area - meta["area"]) < 1e-12


class TestAreaMapCommand:
    ARGS = [
        "area-map", "--n-spins", "2",
        "--omega-min", "0.5", "--omega-max", "1.5", "--omega-steps", "2",
        "--v-min", "0.5", "--v-max", "1.5", "--v-steps", "2",
        "--n-theta", "24", "--n-phi", "48",
    ]

    def test_columns_and_ranges(self, tmp_path):
        assert run_cli(self.ARGS, tmp_path) == 0
        lines = (tmp_path / "area_map.csv").read_text().splitlines()
        header = lines[0].split(",")
        assert header == [
            "alpha", "omega", "v", "re_lambda2", "im_lambda2",
            "gap_is_complex", "tau3_over_tau2", "area", "cell_status",
        ]
        assert len(lines) == 5
        for line in lines[1:]:
            fields = line.split(",")
            assert fields[-1] == "ok"
            assert 0.0 < float(fields[6]) <= 1.0

    def test_cold_vs_warm_cache_byte_identical(self, tmp_path):
        cache_args = self.ARGS + ["--cache", "--cache-dir", str(tmp_path / "cache")]
        run_cli(cache_args, tmp_path / "cold")
        run_cli(cache_args, tmp_path / "warm")
        assert (tmp_path / "cold" / "area_map.csv").read_bytes() == (
            tmp_path / "warm" / "area_map.csv"
        ).read_bytes()

    def test_worker_count_does_not_change_output(self, tmp_path):
        run_cli(self.ARGS + ["--workers", "1"], tmp_path / "w1")
        run_cli(self.ARGS + ["--workers", "2"], tmp_path / "w2")
        assert (tmp_path / "w1" / "area_map.csv").read_bytes() == (
            tmp_path / "w2" / "area_map.csv"
        ).read_bytes()
        assert (tmp_path / "w1" / "effective_config.json").read_bytes() == (
            tmp_path / "w2" / "effective_config.json"
        ).read_bytes()

    def test_warm_cache_skips_eigendecompositions(self, tmp_path, monkeypatch):
        import qmpemba.mpemba as mp

        cache_args = self.ARGS + ["--cache", "--cache-dir", str(tmp_path / "cache")]
        run_cli(cache_args, tmp_path / "cold")

        calls = {"n": 0}
        original = mp.eigendecompose

        def counting(generator):
            calls["n"] += 1
            return original(generator)

        monkeypatch.setattr(mp, "eigendecompose", counting)
        run_cli(cache_args, tmp_path / "warm")
        assert calls["n"] == 0

    def test_epsilon_change_keeps_cache_valid(self, tmp_path, monkeypatch):
        import qmpemba.mpemba as mp

        cache_args = self.ARGS + ["--cache", "--cache-dir", str(tmp_path / "cache")]
        run_cli(cache_args, tmp_path / "cold")
        calls = {"n": 0}
        original = mp.eigendecompose

        def counting(generator):
            calls["n"] += 1
            return original(generator)

        monkeypatch.setattr(mp, "eigendecompose", counting)
        run_cli(cache_args + ["--epsilon", "0.05"], tmp_path / "eps")
        assert calls["n"] == 0
        # a changed interaction strength does invalidate the affected cells
        run_cli(cache_args + ["--v-max", "1.7"], tmp_path / "vshift")
        assert calls["n"] == 2


class TestCacheKeys:
    def test_identical_params_identical_key(self, tmp_path):
        a = ChainParams(n_spins=2, omega=1.0, v=1.0, alpha=0.0)
        b = ChainParams(n_spins=2, omega=1.0, v=1.0, alpha=0.0, epsilon=0.05)
        c = ChainParams(n_spins=2, omega=1.0 + 1e-15, v=1.0, alpha=0.0)
        assert SpectralCache.key(a) == SpectralCache.key(b)  # epsilon excluded
        assert SpectralCache.key(a) != SpectralCache.key(c)

    def test_corrupt_entry_is_a_miss(self, tmp_path, capsys):
        cache = SpectralCache(tmp_path)
        p = ChainParams(n_spins=2, omega=1.0, v=1.0, alpha=0.0)
        (tmp_path / f"{SpectralCache.key(p)}.npz").write_bytes(b"garbage")
        assert cache.lookup(p) is None
        assert cache.misses == 1
        assert "corrupt" in capsys.readouterr().err


class TestEvolveCommand:
    def test_identity_fit(self, tmp_path):
        code = run_cli(
            ["evolve", "--n-spins", "2", "--omega", "2.0", "--v", "1.5",
             "--n-samples", "150", "--mode", "identity"],
            tmp_path,
        )
        assert code == 0
        fit = json.loads((tmp_path / "fit.json").read_text())
        assert abs(fit["fitted_rate"] - fit["re_lambda2"]) / abs(fit["re_lambda2"]) < 0.05
        lines = (tmp_path / "evolve.csv").read_text().splitlines()[1:]
        times = [float(line.split(",")[0]) for line in lines]
        assert times[0] > 0 and np.all(np.diff(times) > 0)

    def test_ideal_mode_faster_rate(self, tmp_path):
        code = run_cli(
            ["evolve", "--n-spins", "2", "--omega", "2.0", "--v", "1.5",
             "--n-samples", "150", "--mode", "ideal"],
            tmp_path,
        )
        assert code == 0
        fit = json.loads((tmp_path / "fit.json").read_text())
        assert abs(fit["fitted_rate"] - fit["re_lambda3"]) / abs(fit["re_lambda3"]) < 0.05

    def test_rotated_mode(self, tmp_path):
        code = run_cli(
            ["evolve", "--n-spins", "2", "--omega", "2.0", "--v", "1.5",
             "--n-samples", "150", "--mode", "rotated", "--theta", "0.4", "--phi", "1.0"],
            tmp_path,
        )
        assert code == 0
        fit = json.loads((tmp_path / "fit.json").read_text())
        assert fit["mode"] == "rotated"
        assert fit["fitted_rate"] < 0


class TestExitCodes:
    def test_config_error(self, tmp_path, capsys):
        assert run_cli(["spectrum"], tmp_path) == cli.EXIT_CONFIG
        assert "n_spins missing" in capsys.readouterr().err

    def test_spectral_error_for_ideal_at_complex_gap(self, tmp_path, capsys):
        code = run_cli(
            ["evolve", "--n-spins", "2", "--omega", "0.1", "--v", "1.0", "--mode", "ideal"],
            tmp_path,
        )
        assert code == cli.EXIT_SPECTRAL
        assert "conjugate-pair" in capsys.readouterr().err

    def test_dynamics_error_for_unreachable_window(self, tmp_path, capsys):
        code = run_cli(
            ["evolve", "--n-spins", "2", "--omega", "2.0", "--v", "1.5",
             "--n-samples", "50", "--t-max-over-tau2", "0.01"],
            tmp_path,
        )
        assert code == cli.EXIT_DYNAMICS
        assert "window" in capsys.readouterr().err.lower()


class TestIdealUnitaryCommand:
    def test_writes_result_files(self, tmp_path):
        code = run_cli(
            ["ideal-unitary", "--n-spins", "2", "--omega", "2.0", "--v", "1.5"],
            tmp_path,
        )
        assert code == 0
        payload = json.loads((tmp_path / "ideal_unitary.json").read_text())
        assert payload["residual_overlap"] < 1e-10
        lines = (tmp_path / "ideal_unitary_matrix.csv").read_text().splitlines()
        assert len(lines) == 1 + 16


class TestVerifyCommand:
    def test_passes_at_small_size(self, tmp_path, capsys):
        code = run_cli(["verify", "--n-spins", "2", "--omega", "1.0", "--v", "1.0"], tmp_path)
        out = capsys.readouterr().out
        assert code == 0
        assert "FAIL" not in out
        assert out.count("PASS") >= 12

    def test_rejects_large_chains(self, tmp_path):
        assert run_cli(["verify", "--n-spins", "4"], tmp_path) == cli.EXIT_CONFIG


class TestOutputVariants:
    def test_json_format(self, tmp_path):
        code = run_cli(
            ["spectrum", "--n-spins", "1", "--omega", "0", "--v", "0", "--format", "json"],
            tmp_path,
        )
        assert code == 0
        records = json.loads((tmp_path / "spectrum.json").read_text())
        assert len(records) == 4
        assert float(records[3]["re_lambda"]) == -1.0

    def test_plot_scripts_emitted(self, tmp_path):
        code = run_cli(
            ["scan-angles", "--n-spins", "1", "--omega", "0", "--v", "0",
             "--n-theta", "6", "--n-phi", "6", "--emit-plot-scripts"],
            tmp_path,
        )
        assert code == 0
        script = (tmp_path / "scan.gp").read_text()
        assert "scan.csv" in script

    def test_effective_config_excludes_execution_details(self, tmp_path):
        run_cli(["spectrum", "--n-spins", "1", "--omega", "0", "--v", "0", "--workers", "2"], tmp_path)
        provenance = json.loads((tmp_path / "effective_config.json").read_text())
        assert "workers" not in provenance
        assert "output.directory" not in provenance
        assert provenance["model.n_spins"] == 1
