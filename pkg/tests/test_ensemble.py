import json
from pathlib import Path

import jsonschema
import pytest

from circleflow import ConfigError, RunConfig, contrast_h32, run_experiment, validation_checks
from circleflow.cli import main as cli_main

SEED = 20240817
SCHEMA = json.loads(
    (Path(__file__).resolve().parent.parent / "docs" / "summary.schema.json").read_text()
)


def base_config(tmp_path, **overrides):
    cfg = {
        "experiment": "simulate",
        "master_seed": SEED,
        "n_paths": 2,
        "record_every": 10,
        "output_dir": str(tmp_path / "out"),
        "solver": {
            "dt": 0.001,
            "horizon": 0.02,
            "mode_cutoff": 8,
            "grid_size": 64,
            "alpha": {"family": "exponential", "parameter": 1.0},
            "radius": 0.5,
            "k": 2,
            "scheme": "euler",
        },
    }
    cfg.update(overrides)
    return cfg


def write_config(tmp_path, name="config.json", **overrides):
    cfg = base_config(tmp_path, **overrides)
    path = tmp_path / name
    path.write_text(json.dumps(cfg))
    return path, cfg


class TestRunConfig:
    def test_round_trip_lossless(self, tmp_path):
        path, raw = write_config(tmp_path)
        cfg = RunConfig.from_file(path)
        again = RunConfig.from_dict(cfg.to_dict())
        assert again == cfg
        assert cfg.solver.dt == raw["solver"]["dt"]

    def test_unknown_experiment_rejected(self, tmp_path):
        path, _ = write_config(tmp_path, experiment="explode")
        with pytest.raises(ConfigError):
            RunConfig.from_file(path)

    def test_malformed_file_rejected(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        with pytest.raises(ConfigError):
            RunConfig.from_file(path)

    def test_solver_validation_propagates(self, tmp_path):
        path, _ = write_config(tmp_path)
        raw = json.loads(path.read_text())
        raw["solver"]["grid_size"] = 8  # below 4N
        path.write_text(json.dumps(raw))
        with pytest.raises(ConfigError):
            RunConfig.from_file(path)


class TestSimulateExperiment:
    def test_zero_horizon_single_row_per_path(self, tmp_path):
        path, raw = write_config(tmp_path, n_paths=3)
        data = json.loads(path.read_text())
        data["solver"]["horizon"] = 0.0
        path.write_text(json.dumps(data))
        cfg = RunConfig.from_file(path)
        code, artifacts = run_experiment(cfg)
        assert code == 0
        rows = (Path(raw["output_dir"]) / "paths.csv").read_text().strip().splitlines()
        assert rows[0] == "path_id,t,hk,min_deriv,stopped"
        assert len(rows) == 1 + 3
        for pid, row in enumerate(rows[1:]):
            assert row == f"{pid},0.0,0.0,1.0,0"

    def test_rerun_byte_identical(self, tmp_path):
        path, raw = write_config(tmp_path)
        cfg = RunConfig.from_file(path)
        run_experiment(cfg)
        first_csv = (Path(raw["output_dir"]) / "paths.csv").read_bytes()
        first_json = (Path(raw["output_dir"]) / "summary.json").read_bytes()
        run_experiment(cfg)
        assert (Path(raw["output_dir"]) / "paths.csv").read_bytes() == first_csv
        assert (Path(raw["output_dir"]) / "summary.json").read_bytes() == first_json

    def test_parallel_equals_serial(self, tmp_path):
        serial, _ = write_config(
            tmp_path, name="serial.json", output_dir=str(tmp_path / "a"), n_paths=4
        )
        parallel, _ = write_config(
            tmp_path, name="parallel.json", output_dir=str(tmp_path / "b"), workers=2, n_paths=4
        )
        run_experiment(RunConfig.from_file(serial))
        run_experiment(RunConfig.from_file(parallel))
        assert (tmp_path / "a" / "paths.csv").read_bytes() == (tmp_path / "b" / "paths.csv").read_bytes()

    def test_summary_validates_against_schema(self, tmp_path):
        path, raw = write_config(tmp_path)
        run_experiment(RunConfig.from_file(path))
        summary = json.loads((Path(raw["output_dir"]) / "summary.json").read_text())
        jsonschema.validate(summary, SCHEMA)
        assert summary["n_paths"] == 2
        assert len(summary["tau_r"]) == 2
        assert summary["hk_quantiles"]["p05"] is not None

    def test_quantiles_monotone(self, tmp_path):
        path, raw = write_config(tmp_path, n_paths=5)
        run_experiment(RunConfig.from_file(path))
        summary = json.loads((Path(raw["output_dir"]) / "summary.json").read_text())
        q = summary["hk_quantiles"]
        for lo, hi in zip(q["p05"], q["p50"]):
            assert lo <= hi + 1e-15
        for lo, hi in zip(q["p50"], q["p95"]):
            assert lo <= hi + 1e-15


class TestHittingExperiment:
    def test_tiny_radius_crosses_immediately(self, tmp_path):
        path, raw = write_config(tmp_path, experiment="hitting_times", radii=[1e-9], n_paths=4)
        code, _ = run_experiment(RunConfig.from_file(path))
        assert code == 0
        summary = json.loads((Path(raw["output_dir"]) / "summary.json").read_text())
        row = summary["extra"]["hitting_table"][0]
        assert row["mean_tau"] == pytest.approx(0.001)
        assert row["n_censored"] == 0

    def test_huge_radius_reported_as_lower_bound(self, tmp_path):
        path, raw = write_config(tmp_path, experiment="hitting_times", radii=[100.0], n_paths=3)
        code, _ = run_experiment(RunConfig.from_file(path))
        summary = json.loads((Path(raw["output_dir"]) / "summary.json").read_text())
        row = summary["extra"]["hitting_table"][0]
        assert row["n_censored"] == 3
        assert row["mean_tau"] == pytest.approx(0.02)  # the horizon
        assert row["mean_is_lower_bound"]

    def test_mean_nondecreasing_check_recorded(self, tmp_path):
        path, raw = write_config(
            tmp_path, experiment="hitting_times", radii=[0.02, 0.05], n_paths=6
        )
        data = json.loads(path.read_text())
        data["solver"]["horizon"] = 0.5
        path.write_text(json.dumps(data))
        code, _ = run_experiment(RunConfig.from_file(path))
        assert code == 0
        summary = json.loads((Path(raw["output_dir"]) / "summary.json").read_text())
        names = [c["name"] for c in summary["checks"]]
        assert "mean_tau_nondecreasing_in_radius" in names


class TestContrastExperiment:
    def test_zero_noise_sanity_ratio_is_one(self, tmp_path):
        path, _ = write_config(tmp_path, experiment="contrast_h32", n_paths=2)
        data = json.loads(path.read_text())
        data["solver"]["grid_size"] = 256
        data["solver"]["mode_cutoff"] = 32
        path.write_text(json.dumps(data))
        cfg = RunConfig.from_file(path)
        results = contrast_h32(cfg, noise_scale=0.0, n_paths=2)
        for family in ("exponential", "powerlaw"):
            assert results[family]["stability_ratio"] == 1.0
            assert all(v == 0.0 for v in results[family]["final_h3_low_cutoff"])

    def test_dichotomy_recorded(self, tmp_path):
        path, raw = write_config(tmp_path, experiment="contrast_h32", n_paths=2)
        data = json.loads(path.read_text())
        data["solver"]["grid_size"] = 256
        data["solver"]["mode_cutoff"] = 32
        data["solver"]["horizon"] = 0.05
        path.write_text(json.dumps(data))
        code, _ = run_experiment(RunConfig.from_file(path))
        assert code == 0
        summary = json.loads((Path(raw["output_dir"]) / "summary.json").read_text())
        values = {c["name"]: c["value"] for c in summary["checks"]}
        assert values["exponential_cutoff_doubling_stable"] < 1.05
        assert values["powerlaw_cutoff_doubling_unstable"] > 1.20


class TestValidationBattery:
    def test_at_least_ten_checks_all_pass(self):
        checks = validation_checks(SEED)
        assert len(checks) >= 10
        failed = [c["name"] for c in checks if not c["passed"]]
        assert failed == []

    def test_writes_report_with_values_and_bounds(self, tmp_path):
        path, raw = write_config(tmp_path, experiment="validate")
        code, artifacts = run_experiment(RunConfig.from_file(path))
        assert code == 0
        report = json.loads((Path(raw["output_dir"]) / "report.json").read_text())
        assert len(report["checks"]) >= 10
        for check in report["checks"]:
            assert {"name", "value", "bound", "passed"} <= set(check)


class TestFlowCheckExperiment:
    def test_sine_initial_map(self, tmp_path):
        path, raw = write_config(
            tmp_path, experiment="flow_check", xi_kind="sine", xi_amplitude=0.1, record_every=5,
        )
        data = json.loads(path.read_text())
        data["solver"]["grid_size"] = 256
        data["solver"]["horizon"] = 0.05
        path.write_text(json.dumps(data))
        code, _ = run_experiment(RunConfig.from_file(path))
        assert code == 0
        report = json.loads((Path(raw["output_dir"]) / "report.json").read_text())
        check = report["checks"][0]
        assert check["passed"]
        assert check["value"] <= 1e-4


class TestCli:
    def test_run_and_exit_codes(self, tmp_path, capsys):
        path, raw = write_config(tmp_path)
        assert cli_main(["run", str(path)]) == 0
        out = capsys.readouterr().out
        assert "paths.csv" in out and "summary.json" in out

    def test_config_error_exit_code(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{broken")
        assert cli_main(["run", str(bad)]) == 2

    def test_seed_and_out_overrides(self, tmp_path):
        path, raw = write_config(tmp_path)
        alt = tmp_path / "alt"
        assert cli_main(["run", str(path), "--seed", "7", "--out", str(alt)]) == 0
        assert (alt / "paths.csv").exists()
        baseline = Path(raw["output_dir"])
        cli_main(["run", str(path)])
        assert (alt / "paths.csv").read_bytes() != (baseline / "paths.csv").read_bytes()

    def test_subcommand_forces_experiment(self, tmp_path):
        path, raw = write_config(tmp_path)  # experiment says simulate
        assert cli_main(["validate", str(path), "--out", str(tmp_path / "v")]) == 0
        assert (tmp_path / "v" / "report.json").exists()

    def test_env_var_default_outdir(self, tmp_path, monkeypatch):
        path, _ = write_config(tmp_path, output_dir="")
        monkeypatch.setenv("CIRCLEFLOW_OUTDIR", str(tmp_path / "envout"))
        monkeypatch.chdir(tmp_path)
        assert cli_main(["run", str(path)]) == 0
        assert (tmp_path / "envout" / "paths.csv").exists()
