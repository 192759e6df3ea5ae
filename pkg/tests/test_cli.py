"""Command-line interface: exit codes, file outputs, determinism."""

from __future__ import annotations

import json

import numpy as np
import pytest

from conftest import BENCHMARK_MU, BENCHMARK_RF, BENCHMARK_SIGMA
from crra_opt import gamma_lower_bound, make_params, tangency, write_params_json
from crra_opt.cli import main

PRICES_CSV = """date,one,two
2024-01-01,100.0,50.0
2024-01-08,101.5,49.5
2024-01-15,103.0,50.5
2024-01-22,102.0,51.0
2024-01-29,104.5,50.0
2024-02-05,106.0,52.0
"""


@pytest.fixture
def benchmark_json(tmp_path):
    path = tmp_path / "benchmark.json"
    write_params_json(make_params(BENCHMARK_MU, BENCHMARK_SIGMA, BENCHMARK_RF), path)
    return path


@pytest.fixture
def prices_csv(tmp_path):
    path = tmp_path / "prices.csv"
    path.write_text(PRICES_CSV, encoding="utf-8")
    return path


class TestEstimate:
    def test_writes_params_and_prints_summary(self, tmp_path, prices_csv, capsys):
        out = tmp_path / "params.json"
        code = main(["estimate", "--prices", str(prices_csv), "--rf", "0.0006",
                     "--out", str(out)])
        assert code == 0
        captured = capsys.readouterr().out
        assert "assets k = 2" in captured
        assert "observations T = 6" in captured
        assert "1+4J" in captured
        payload = json.loads(out.read_text(encoding="utf-8"))
        assert payload["r_f"] == 0.0006
        assert payload["asset_names"] == ["one", "two"]

    def test_missing_file_is_io_error(self, tmp_path):
        code = main(["estimate", "--prices", str(tmp_path / "absent.csv"),
                     "--rf", "0.0", "--out", str(tmp_path / "p.json")])
        assert code == 2

    def test_constant_price_asset_is_validation_error(self, tmp_path):
        path = tmp_path / "flat.csv"
        path.write_text(
            "date,flat\n2024-01-01,100\n2024-01-08,100\n2024-01-15,100\n",
            encoding="utf-8",
        )
        code = main(["estimate", "--prices", str(path), "--rf", "0.0",
                     "--out", str(tmp_path / "p.json")])
        assert code == 3


class TestSolve:
    def test_analytical_report_to_stdout(self, benchmark_json, capsys):
        code = main(["solve", "--params", str(benchmark_json), "--gamma", "10",
                     "--method", "analytical"])
        assert code == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["method"] == "analytical"
        assert abs(payload["foc_residual"]) < 1e-10
        assert len(payload["weights"]) == 3
        assert payload["mean_excess"] ** 2 == pytest.approx(
            payload["J"] * payload["variance"], rel=1e-10
        )

    def test_gamma_below_bound_exit_4_with_bound_printed(self, benchmark_json, capsys):
        code = main(["solve", "--params", str(benchmark_json), "--gamma", "1.05",
                     "--method", "analytical"])
        assert code == 4
        assert "1.07722" in capsys.readouterr().err

    def test_gd_requires_samples_and_seed(self, benchmark_json):
        code = main(["solve", "--params", str(benchmark_json), "--gamma", "10",
                     "--method", "gd"])
        assert code == 3

    def test_gd_with_auto_eta_converges(self, tmp_path, benchmark_json):
        out = tmp_path / "gd.json"
        code = main(["solve", "--params", str(benchmark_json), "--gamma", "10",
                     "--method", "gd", "--samples", "50000", "--seed", "42",
                     "--out", str(out)])
        assert code == 0
        payload = json.loads(out.read_text(encoding="utf-8"))
        assert payload["converged"] is True
        assert payload["grad_norm"] <= 1e-8
        assert payload["method"] == "gd"

    def test_gd_iteration_cap_exit_5(self, benchmark_json):
        code = main(["solve", "--params", str(benchmark_json), "--gamma", "10",
                     "--method", "gd", "--samples", "2000", "--seed", "42",
                     "--eta", "0.1", "--max-iter", "5"])
        assert code == 5

    def test_all_reports_with_pairwise_distances(self, tmp_path, benchmark_json):
        out = tmp_path / "all.json"
        code = main(["solve", "--params", str(benchmark_json), "--gamma", "10",
                     "--method", "all", "--samples", "50000", "--seed", "42",
                     "--out", str(out)])
        assert code == 0
        payload = json.loads(out.read_text(encoding="utf-8"))
        assert set(payload) == {"analytical", "taylor", "gd", "weight_distance_inf"}
        distances = payload["weight_distance_inf"]
        assert set(distances) == {"analytical_taylor", "analytical_gd", "taylor_gd"}
        w_taylor = np.asarray(payload["taylor"]["weights"])
        w_gd = np.asarray(payload["gd"]["weights"])
        assert distances["taylor_gd"] == pytest.approx(
            float(np.max(np.abs(w_taylor - w_gd))), rel=1e-12
        )


class TestCompare:
    def test_gammas_below_bound_exit_4(self, tmp_path, benchmark_json):
        code = main(["compare", "--params", str(benchmark_json), "--gammas", "1.05",
                     "--samples", "100", "--seed", "1", "--outdir", str(tmp_path / "o")])
        assert code == 4

    def test_writes_expected_files(self, tmp_path, benchmark_json, capsys):
        outdir = tmp_path / "study"
        code = main(["compare", "--params", str(benchmark_json), "--gammas", "5,10",
                     "--samples", "5000", "--seed", "9", "--outdir", str(outdir)])
        assert code == 0
        assert (outdir / "comparison.csv").is_file()
        assert (outdir / "comparison.json").is_file()
        ecdfs = sorted(p.name for p in outdir.glob("ecdf_*.csv"))
        assert len(ecdfs) == 12  # 2 gammas x 3 methods x {wealth, utility}
        assert "ecdf_utility_gamma5_analytical.csv" in ecdfs
        assert "ecdf_wealth_gamma10_gd.csv" in ecdfs
        table = capsys.readouterr().out
        assert "gamma = 5" in table and "gamma = 10" in table
        csv_lines = (outdir / "comparison.csv").read_text(encoding="utf-8").splitlines()
        assert csv_lines[0] == "gamma,method,stat,value"
        assert len(csv_lines) == 1 + 2 * 3 * 4
        payload = json.loads((outdir / "comparison.json").read_text(encoding="utf-8"))
        assert payload["n"] == 5000 and payload["seed"] == 9
        assert set(payload["results"]) == {"5", "10"}
        assert set(payload["results"]["5"]) == {"analytical", "taylor", "gd"}
        cell = payload["results"]["5"]["gd"]
        assert {"weights", "stats", "infeasible_count"} <= set(cell)

    def test_byte_identical_reruns(self, tmp_path, benchmark_json):
        args = ["compare", "--params", str(benchmark_json), "--gammas", "5,10",
                "--samples", "5000", "--seed", "9"]
        assert main(args + ["--outdir", str(tmp_path / "a")]) == 0
        assert main(args + ["--outdir", str(tmp_path / "b")]) == 0
        files_a = sorted((tmp_path / "a").iterdir())
        files_b = sorted((tmp_path / "b").iterdir())
        assert [p.name for p in files_a] == [p.name for p in files_b]
        for pa, pb in zip(files_a, files_b):
            assert pa.read_bytes() == pb.read_bytes()


class TestFrontier:
    def test_sweep_rows_and_tangency_row(self, tmp_path, benchmark_json):
        out = tmp_path / "frontier.csv"
        code = main(["frontier", "--params", str(benchmark_json),
                     "--gamma-from", "2", "--gamma-to", "20", "--steps", "10",
                     "--out", str(out)])
        assert code == 0
        lines = out.read_text(encoding="utf-8").splitlines()
        assert lines[0] == "gamma,mean_excess,variance,tangency"
        rows = [line.split(",") for line in lines[1:]]
        sweep = [r for r in rows if r[3] == "false"]
        assert len(sweep) == 10
        means = np.array([float(r[1]) for r in sweep])
        variances = np.array([float(r[2]) for r in sweep])
        assert np.all(np.diff(means) < 0.0)
        assert np.all(np.diff(variances) < 0.0)
        p = make_params(BENCHMARK_MU, BENCHMARK_SIGMA, BENCHMARK_RF)
        j = (gamma_lower_bound(p) - 1.0) / 4.0
        for r in sweep:
            assert float(r[1]) ** 2 == pytest.approx(j * float(r[2]), rel=1e-10)
        tangency_rows = [r for r in rows if r[3] == "true"]
        assert len(tangency_rows) == 1
        assert float(tangency_rows[0][0]) == pytest.approx(tangency(p).gamma_tgc, rel=1e-12)

    def test_range_below_bound_exit_4(self, tmp_path, benchmark_json):
        code = main(["frontier", "--params", str(benchmark_json),
                     "--gamma-from", "1.01", "--gamma-to", "5", "--steps", "3",
                     "--out", str(tmp_path / "f.csv")])
        assert code == 4


class TestHelp:
    @pytest.mark.parametrize("command", ["estimate", "solve", "compare", "frontier"])
    def test_help_lists_flags_with_defaults(self, command, capsys):
        with pytest.raises(SystemExit) as excinfo:
            main([command, "--help"])
        assert excinfo.value.code == 0
        text = capsys.readouterr().out
        assert "--params" in text or "--prices" in text
        if command in ("solve", "compare"):
            assert "--eta" in text and "default" in text
            assert "--max-iter" in text
        if command == "compare":
            assert "--ecdf-points" in text
