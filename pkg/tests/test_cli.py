"""End-to-end runs of the command-line explorer."""

import json

import numpy as np
import pytest

from rdrobin.cli import main
from rdrobin.grid import Grid1D
from rdrobin.monotone import residual
from rdrobin.pairs import PairField
from rdrobin.reactions import example_family, min_ratio
from rdrobin.reporting import read_pair_csv, write_pair_csv


def run(*argv):
    return main([str(a) for a in argv])


def test_eigs_reports_threshold_and_profile(tmp_path):
    code = run("--grid", 256, "--out", tmp_path, "eigs")
    assert code == 0
    report = json.loads((tmp_path / "eigs_report.json").read_text())
    assert report["threshold"] == pytest.approx((np.pi / 2) ** 2, abs=1e-4)
    assert report["xi_sup"] == pytest.approx(0.625, abs=1e-8)
    assert abs(report["rho_at_threshold"]) < 1e-6
    for row in report["table"]:
        if abs(row["t"] - report["threshold"]) > 1e-3:
            assert np.sign(row["rho"]) == np.sign(report["threshold"] - row["t"])
    assert (tmp_path / "shift_table.csv").exists()
    assert (tmp_path / "eigs.png").stat().st_size > 0


def test_solve_live_point_roundtrip(tmp_path):
    code = run("--grid", 256, "--out", tmp_path, "solve", 1.3, 1.3)
    assert code == 0
    report = json.loads((tmp_path / "report.json").read_text())
    assert report["bracket_verified"]["sub"]["passed"]
    assert report["bracket_verified"]["super"]["passed"]
    assert report["minimal"]["converged"] and report["maximal"]["converged"]
    # emitted CSV re-imported and residual-checked
    grid = Grid1D(256)
    quad = example_family(1.0, 10.0)
    pair = read_pair_csv(tmp_path / "solution_1p3_1p3_from-sub.csv", grid)
    r_int, r_bnd = residual(grid, 1.3, 1.3, quad, pair)
    assert max(r_int, r_bnd) < 1e-6
    assert (tmp_path / "solution_1.3_1.3.png").exists()


def test_solve_refuses_subcritical(tmp_path, capsys):
    code = run("--grid", 128, "--out", tmp_path, "solve", 0.5, 0.5)
    assert code == 2
    assert "threshold" in capsys.readouterr().err


def test_solve_reports_dead_point(tmp_path, capsys):
    code = run("--grid", 128, "--out", tmp_path, "solve", 2.0, 2.0)
    assert code == 1
    assert "bracket construction failed" in capsys.readouterr().err


def test_sweep_live_ladder_and_determinism(tmp_path):
    args = ("--grid", 128, "--out", tmp_path, "sweep",
            "--t", 2.5, 2.6, 2.8)
    assert run(*args) == 0
    first = (tmp_path / "sweep.csv").read_bytes()
    assert run(*args) == 0
    assert (tmp_path / "sweep.csv").read_bytes() == first
    lines = first.decode().splitlines()
    assert lines[0].startswith("lambda,mu,t,")
    assert len(lines) == 4
    report = json.loads((tmp_path / "report.json").read_text())
    assert report["checks"]["rho_negative_throughout"]
    assert report["checks"]["near_threshold_decreasing_toward_threshold"]
    assert (tmp_path / "sweep.png").exists()


def test_sweep_dead_ladder_fails_growth_checks(tmp_path):
    code = run("--grid", 128, "--out", tmp_path, "sweep", "--t", 4.0, 6.0, 10.0)
    assert code == 1
    report = json.loads((tmp_path / "report.json").read_text())
    assert report["converged_rows"] == 0
    assert not report["checks"]["all_rows_converged"]
    rows = (tmp_path / "sweep.csv").read_text().splitlines()[1:]
    assert all(row.endswith("false") for row in rows)


def test_sweep_refuses_subthreshold_ladder(tmp_path, capsys):
    assert run("--grid", 128, "--out", tmp_path, "sweep", "--t", 1.0, 3.0) == 2
    assert "threshold" in capsys.readouterr().err


def test_verify_zero_pair_passes(tmp_path):
    grid = Grid1D(128)
    pair = PairField.from_arrays(grid, np.zeros(grid.size), np.zeros(grid.size))
    path = tmp_path / "zero.csv"
    write_pair_csv(path, pair)
    assert run("--grid", 128, "--out", tmp_path, "verify", path,
               "--kind", "sub", "--lam", 1.0, "--mu", 1.0) == 0
    report = json.loads((tmp_path / "verification.json").read_text())
    assert report["passed"] and report["worst_interior"] == [0.0, 0.0]


def test_verify_profile_pair_strict_inside_gate(tmp_path):
    grid = Grid1D(128)
    quad = example_family(1.0, 10.0)
    from rdrobin.grid import unit_source_solution

    xi = unit_source_solution(grid, 1.0)
    amp = 1.0 / xi.sup_norm()
    pair = PairField.from_arrays(grid, amp * xi.values, amp * xi.values)
    path = tmp_path / "profile.csv"
    write_pair_csv(path, pair)
    gate = min_ratio(quad, 1.0) / (2.0 * xi.sup_norm())
    lam = 0.9 * gate
    assert run("--grid", 128, "--out", tmp_path, "verify", path,
               "--kind", "super", "--strict",
               "--lam", lam, "--mu", lam) == 0
    # pushed outside the gate the same pair fails, with a printed witness
    assert run("--grid", 128, "--out", tmp_path, "verify", path,
               "--kind", "super", "--lam", 3 * gate, "--mu", 3 * gate) == 1


def test_verify_rejects_mismatched_grid(tmp_path, capsys):
    grid = Grid1D(64)
    pair = PairField.from_arrays(grid, np.zeros(grid.size), np.zeros(grid.size))
    path = tmp_path / "pair.csv"
    write_pair_csv(path, pair)
    assert run("--grid", 128, "--out", tmp_path, "verify", path,
               "--kind", "sub", "--lam", 1.0, "--mu", 1.0) == 2
    assert "cannot read pair" in capsys.readouterr().err


def test_multiplicity_reports_no_witness_for_builtin(tmp_path, capsys):
    code = run("--grid", 256, "--out", tmp_path, "multiplicity")
    assert code == 3
    out = capsys.readouterr().out
    assert "gates:" in out and "no certified witness" in out
    report = json.loads((tmp_path / "multiplicity.json").read_text())
    assert report["status"] == "no-certified-witness"
    w = report["window"]
    assert w["window"] is None
    assert w["q1"] == pytest.approx(1.0 / (2 * np.sqrt(2) - 2), abs=1e-9)
    assert w["gate_ratio"]["rhs"] == pytest.approx(20.0, rel=1e-6)
    assert (tmp_path / "multiplicity.png").exists()


def test_multiplicity_c1_override_recorded(tmp_path):
    assert run("--grid", 256, "--out", tmp_path, "--c1", 5.0,
               "multiplicity") == 3
    report = json.loads((tmp_path / "multiplicity.json").read_text())
    assert report["c1_overridden"] and report["window"]["c1"] == 5.0


def test_enumerate_writes_report_and_roots(tmp_path):
    code = run("--grid", 128, "--out", tmp_path, "enumerate", 1.3, 1.3,
               "--density", 64, "--write-roots")
    assert code == 0
    report = json.loads((tmp_path / "enumeration.json").read_text())
    assert report["positive_count"] >= 1
    assert report["trivial"] == {
        "u0": 0.0, "v0": 0.0, "boundary_residual": [0.0, 0.0], "refined": True
    }
    for i in range(len(report["roots"])):
        assert (tmp_path / f"root_{i:02d}.csv").exists()
    assert (tmp_path / "roots.png").exists()


def test_example_bundle_records_ladder_defect(tmp_path, capsys):
    # the splice-growth claim fails on the printed family (h turns negative
    # past its hump); the command records that and exits nonzero while the
    # remaining checks pass
    code = run("--grid", 128, "--out", tmp_path, "example")
    assert code == 1
    report = json.loads((tmp_path / "example_report.json").read_text())
    checks = report["checks"]
    assert checks["validators_pass"]
    assert checks["q2_ladder_decreasing"]
    assert checks["q1_value"]
    assert not checks["q1_ladder_increasing"]
    ladder = report["data"]["q1_ladder"]
    assert any("error" in e for e in ladder)
    assert checks["near_threshold_decreasing_where_defined"]


def test_no_figures_flag(tmp_path):
    assert run("--grid", 128, "--out", tmp_path, "--no-figures", "eigs") == 0
    assert not (tmp_path / "eigs.png").exists()


def test_config_error_exit(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"grid": "large"}')
    assert run("--config", bad, "--out", tmp_path, "eigs") == 2
    assert "configuration error" in capsys.readouterr().err
