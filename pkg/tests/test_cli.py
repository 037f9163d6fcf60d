"""Command-line front door: outputs, exit codes, determinism."""

import json

import numpy as np
import pytest

from henon_orlicz.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# ---------------------------------------------------------------------------
# catalog
# ---------------------------------------------------------------------------

def test_catalog_power_sum(capsys):
    code, out, _ = run(capsys, "catalog", "power_sum", "--p", "2", "--q", "3")
    assert code == 0
    data = json.loads(out)
    assert data["indices"]["p_minus"] == 2.0
    assert data["indices"]["p_plus"] == 3.0
    assert data["delta2"]["holds"] is True
    assert len(data["conjugate_samples"]) > 0


def test_catalog_rejects_sublinear_power(capsys):
    code, _, err = run(capsys, "catalog", "power", "--p", "0.5")
    assert code == 2
    assert "p > 1" in err


def test_catalog_loglog(capsys):
    code, out, _ = run(capsys, "catalog", "loglog", "--p", "2", "--s", "1")
    assert code == 0
    data = json.loads(out)
    assert data["indices"] == {"p_minus": 2.0, "p_plus": 3.0, "exact": True}


def test_catalog_positional_params(capsys):
    code, out, _ = run(capsys, "catalog", "power", "2.5")
    assert code == 0
    assert json.loads(out)["indices"]["p_plus"] == 2.5


# ---------------------------------------------------------------------------
# classify
# ---------------------------------------------------------------------------

def test_classify_existence_json(capsys):
    code, out, _ = run(capsys, "classify", "--n", "3", "--alpha", "1",
                       "--g", "power:2", "--h", "power:5", "--r", "power:5.5")
    assert code == 0
    data = json.loads(out)
    assert data["verdict"] == "ExistenceGuaranteed"


def test_classify_nonexistence(capsys):
    code, out, _ = run(capsys, "classify", "--n", "3", "--alpha", "1",
                       "--g", "power:2", "--h", "power:9")
    assert code == 0
    assert json.loads(out)["verdict"] == "NonexistenceGuaranteed"


def test_classify_missing_r_caveat(capsys):
    code, out, _ = run(capsys, "classify", "--n", "3", "--alpha", "1",
                       "--g", "power:2", "--h", "power:5")
    assert code == 0
    assert "caveat" in out


def test_classify_csv_row(capsys):
    code, out, _ = run(capsys, "classify", "--n", "3", "--alpha", "1",
                       "--g", "power:2", "--h", "power:9", "--format", "csv")
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 2
    assert "verdict" in lines[0]
    assert "NonexistenceGuaranteed" in lines[1]


def test_classify_config_error(capsys):
    code, _, err = run(capsys, "classify", "--n", "3", "--alpha", "1",
                       "--g", "power2", "--h", "power:5")
    assert code == 2
    assert "family:params" in err


def test_classify_from_config_file(tmp_path, capsys):
    cfg = {"spec": {"n": 3, "alpha": 1.0,
                    "G": {"family": "power", "p": 2},
                    "H": {"family": "power_sum", "p": 4, "q": 5}}}
    path = tmp_path / "run.json"
    path.write_text(json.dumps(cfg))
    code, out, _ = run(capsys, "classify", "--config", str(path))
    assert code == 0
    assert json.loads(out)["verdict"] == "Indeterminate"


# ---------------------------------------------------------------------------
# solve
# ---------------------------------------------------------------------------

def test_solve_shooting_writes_profile(tmp_path, capsys):
    code, out, _ = run(capsys, "solve", "--n", "3", "--alpha", "1",
                       "--g", "power:2", "--h", "power:4",
                       "--method", "shooting", "--grid-size", "128",
                       "--out", str(tmp_path), "--force")
    assert code == 0
    summary = json.loads(out)
    assert summary["residual"] <= 1e-4
    assert (tmp_path / "profile.csv").exists()
    text = (tmp_path / "profile.csv").read_text()
    assert text.splitlines()[0] == "r,u,du"
    prof = json.loads((tmp_path / "profile.json").read_text())
    assert len(prof["grid"]) == 129


def test_solve_refuses_supercritical(capsys):
    code, _, err = run(capsys, "solve", "--n", "3", "--alpha", "1",
                       "--g", "power:2", "--h", "power:9")
    assert code == 4
    assert "refused" in err


def test_solve_mountain_pass_emits_telemetry(tmp_path, capsys):
    code, out, _ = run(capsys, "solve", "--n", "3", "--alpha", "1",
                       "--g", "power:2", "--h", "power:4",
                       "--method", "mountain-pass", "--grid-size", "64",
                       "--out", str(tmp_path), "--force")
    assert code == 0
    assert json.loads(out)["critical_value"] > 0
    tele = (tmp_path / "telemetry.csv").read_text().splitlines()
    assert tele[0] == "iteration,max_energy,residual,j_max,step"
    assert len(tele) > 1
    max_energy = [float(row.split(",")[1]) for row in tele[1:]]
    assert all(b <= a + 1e-9 for a, b in zip(max_energy, max_energy[1:]))


def test_solve_numerical_failure_exit(capsys):
    # an empty shooting bracket reports a numerical failure (exit 3)
    code, _, err = run(capsys, "solve", "--n", "3", "--alpha", "1",
                       "--g", "power:2", "--h", "power:4",
                       "--method", "shooting", "--grid-size", "32",
                       "--d-min", "1e-4", "--d-max", "2e-4", "--force")
    assert code == 3
    assert "no sign change" in err


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

@pytest.fixture
def manufactured_profile(tmp_path):
    from henon_orlicz.radial import RadialGrid, RadialProfile
    grid = RadialGrid.uniform(1024)
    prof = RadialProfile.from_callable(grid, lambda r: 1 - r ** 2,
                                       lambda r: -2 * r)
    path = tmp_path / "profile.csv"
    path.write_text(prof.to_csv())
    return path


def test_verify_default_checks(manufactured_profile, capsys):
    code, out, _ = run(capsys, "verify", "--n", "3", "--alpha", "0",
                       "--g", "power:2", "--h", "power:4",
                       "--profile", str(manufactured_profile))
    assert code == 0
    data = json.loads(out)
    assert set(data["checks"]) == {"pohozaev", "strauss", "residual", "levels"}


def test_verify_malformed_csv(tmp_path, capsys):
    path = tmp_path / "bad.csv"
    path.write_text("r,u,du\n0,1,0\n0.5,not-a-number,0\n1,0,-2\n")
    code, _, err = run(capsys, "verify", "--n", "3", "--alpha", "0",
                       "--g", "power:2", "--h", "power:4",
                       "--profile", str(path))
    assert code == 2
    assert "line 3" in err


def test_verify_selected_checks(manufactured_profile, capsys):
    code, out, _ = run(capsys, "verify", "--n", "3", "--alpha", "0",
                       "--g", "power:2", "--h", "power:4",
                       "--profile", str(manufactured_profile),
                       "--checks", "strauss,levels")
    assert code == 0
    data = json.loads(out)
    assert set(data["checks"]) == {"strauss", "levels"}
    levels = data["checks"]["levels"]
    assert all(b <= a + 1e-15 for a, b in zip(levels, levels[1:]))


# ---------------------------------------------------------------------------
# sweep
# ---------------------------------------------------------------------------

def test_sweep_single_point_matches_classify(capsys):
    code, out, _ = run(capsys, "sweep", "--n", "3", "--alpha", "0",
                       "--g", "power:2", "--h", "power:4",
                       "--alpha-range", "1:1:1", "--q-range", "9:9:1")
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 2
    row = lines[1].split(",")
    assert row[0] == "1" and row[1] == "9"
    assert row[2] == "NonexistenceGuaranteed"


def test_sweep_concurrent_bytes_identical(capsys):
    args = ["sweep", "--n", "3", "--alpha", "0", "--g", "power:2",
            "--h", "power:4", "--alpha-range", "0:2:4", "--q-range", "3:9:4"]
    code, serial, _ = run(capsys, *args, "--jobs", "1")
    assert code == 0
    code, threaded, _ = run(capsys, *args, "--jobs", "4")
    assert code == 0
    assert serial == threaded


def test_sweep_rerun_bytes_identical(capsys):
    args = ["sweep", "--n", "3", "--alpha", "0", "--g", "power:2",
            "--h", "power:4", "--alpha-range", "0:1:3", "--q-range", "4:8:3"]
    _, first, _ = run(capsys, *args)
    _, second, _ = run(capsys, *args)
    assert first == second


def test_sweep_bad_range(capsys):
    code, _, err = run(capsys, "sweep", "--n", "3", "--alpha", "0",
                       "--g", "power:2", "--h", "power:4",
                       "--alpha-range", "abc", "--q-range", "1:2:3")
    assert code == 2
    assert "lo:hi:count" in err
