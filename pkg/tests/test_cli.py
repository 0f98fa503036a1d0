import json
from pathlib import Path

import pytest

from qudisc.cli import main

GOLDEN = Path(__file__).parent / "golden"


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_dims_table(capsys):
    code, out, _ = run_cli(capsys, "dims", "--n", "2")
    assert code == 0
    record = json.loads(out)
    assert record["results"]["s3"] == 8
    assert record["results"]["i0"] == 2


def test_dims_n3_i0(capsys):
    code, out, _ = run_cli(capsys, "dims", "--n", "3")
    assert code == 0
    assert json.loads(out)["results"]["i0"] == 8


def test_dims_rejects_n1(capsys):
    code, _, err = run_cli(capsys, "dims", "--n", "1")
    assert code == 2
    assert "error" in err


def test_verify_passes(capsys):
    code, out, _ = run_cli(capsys, "verify", "--n-max", "2")
    assert code == 0
    assert "overall: pass" in out


def test_verify_unattainable_tolerance_fails(capsys):
    code, out, _ = run_cli(capsys, "verify", "--n-max", "2", "--tol", "1e-30")
    assert code == 1
    assert "FAIL" in out


def test_verify_rejects_bad_nmax(capsys):
    code, _, err = run_cli(capsys, "verify", "--n-max", "0")
    assert code == 2
    assert "error" in err


def test_verify_json_mode(capsys):
    code, out, _ = run_cli(capsys, "verify", "--n-max", "2", "--json")
    assert code == 0
    record = json.loads(out)
    assert record["results"]["passed"] is True
    assert len(record["results"]["checks"]) > 20


def test_verify_env_tolerance(capsys, monkeypatch):
    monkeypatch.setenv("QUDISC_TOL", "1e-30")
    code, _, _ = run_cli(capsys, "verify", "--n-max", "2")
    assert code == 1


def test_scan_row_at_x2(capsys):
    code, out, _ = run_cli(capsys, "scan", "--n", "2", "--eta1", "0.5", "--steps", "4")
    assert code == 0
    rows = [line for line in out.splitlines() if line and line[0].isdigit()]
    by_x = {row.split(",")[1]: row.split(",") for row in rows}
    assert abs(float(by_x["2"][2]) - 1 / 6) < 1e-12


def test_scan_degenerate_grid(capsys):
    code, out, _ = run_cli(capsys, "scan", "--n", "2", "--eta1", "0.5", "--steps", "1")
    assert code == 0
    rows = [line for line in out.splitlines() if line and line[0].isdigit()]
    assert [row.split(",")[1] for row in rows] == ["1", "4"]


def test_scan_rejects_degenerate_priors(capsys):
    code, _, err = run_cli(capsys, "scan", "--n", "2", "--eta1", "1.0")
    assert code == 2
    assert "error" in err


def test_optimal_middle(capsys):
    code, out, _ = run_cli(capsys, "optimal", "--n", "2", "--eta1", "0.5")
    assert code == 0
    record = json.loads(out)
    assert record["results"]["regime"] == "middle"
    assert abs(record["results"]["p_avg_opt"] - 1 / 6) < 1e-12


def test_optimal_low_regime(capsys):
    code, out, _ = run_cli(capsys, "optimal", "--n", "2", "--eta1", "0.1")
    record = json.loads(out)
    assert code == 0
    assert record["results"]["regime"] == "low"
    assert abs(record["results"]["p_avg_opt"] - 0.225) < 1e-12


def test_optimal_with_overlap(capsys):
    code, out, _ = run_cli(capsys, "optimal", "--eta1", "0.5", "--overlap-sq", "0")
    record = json.loads(out)
    assert code == 0
    assert abs(record["results"]["p_pure_opt"] - 1 / 3) < 1e-12


def test_simulate_single_shot(capsys):
    code, out, _ = run_cli(
        capsys, "simulate", "--eta1", "0.5", "--x", "2", "--shots", "1", "--seed", "0"
    )
    assert code == 0
    record = json.loads(out)
    assert sum(record["results"]["counts"].values()) == 1


def test_simulate_seed_repeatable(capsys):
    argv = ["simulate", "--eta1", "0.3", "--x", "2.5", "--shots", "200", "--seed", "7"]
    code1, out1, _ = run_cli(capsys, *argv)
    code2, out2, _ = run_cli(capsys, *argv)
    assert code1 == code2 == 0
    assert out1 == out2


def test_simulate_omega1_and_x_exclusive(capsys):
    with pytest.raises(SystemExit) as excinfo:
        main(["simulate", "--eta1", "0.5", "--x", "2", "--omega1", "0.3",
              "--shots", "10"])
    assert excinfo.value.code == 2


def test_prepare_writes_network(tmp_path, capsys):
    source = tmp_path / "amps.txt"
    source.write_text("0.6\n0, 0.8\n")
    out_file = tmp_path / "net.txt"
    code, out, _ = run_cli(capsys, "prepare", str(source), "--out", str(out_file))
    assert code == 0
    record = json.loads(out)
    assert record["results"]["column_error"] < 1e-10
    assert out_file.read_text().startswith("MODES 2\nBS 1 2 ")


def test_prepare_basis_vector(tmp_path, capsys):
    source = tmp_path / "amps.txt"
    source.write_text("1\n0\n0\n")
    code, out, _ = run_cli(capsys, "prepare", str(source))
    assert code == 0
    assert json.loads(out.split("MODES 3\n", 1)[1])["results"]["layers"] == 0


def test_prepare_rejects_unnormalized(tmp_path, capsys):
    source = tmp_path / "amps.txt"
    source.write_text("1\n1\n")
    code, _, err = run_cli(capsys, "prepare", str(source))
    assert code == 2
    assert "error" in err


@pytest.mark.parametrize(
    "name,argv",
    [
        ("dims_n3.txt", ["dims", "--n", "3"]),
        ("scan_n2_eta05_steps4.txt", ["scan", "--n", "2", "--eta1", "0.5", "--steps", "4"]),
        (
            "optimal_n2_eta05_overlap0.txt",
            ["optimal", "--n", "2", "--eta1", "0.5", "--overlap-sq", "0"],
        ),
    ],
)
def test_golden_outputs(capsys, name, argv):
    code, out, _ = run_cli(capsys, *argv)
    assert code == 0
    assert out == (GOLDEN / name).read_text()
