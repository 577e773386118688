"""End-to-end CLI behavior: solving, verification, exit codes, determinism."""

import subprocess
import sys

import pytest
import yaml

from vmint.cli import main

BASIC = """\
ground: {size: 3, labels: [a, b, c]}
matroids:
  M1: {kind: uniform, rank: 2}
valuations:
  v1: {kind: modular_on_matroid, matroid: M1, weights: ["1", "2", "4"]}
  v2: {kind: modular_on_matroid, matroid: M1, weights: ["4", "2", "1"]}
problem: {type: v_geq_k, oracles: [v1, v2], k: 2}
"""


@pytest.fixture
def basic_instance(tmp_path):
    path = tmp_path / "basic.yaml"
    path.write_text(BASIC)
    return str(path)


def test_solve_reports_value_and_witness(basic_instance, tmp_path, capsys):
    out = tmp_path / "report.yaml"
    code = main(["solve", "-i", basic_instance, "--verify", "--brute",
                 "--out", str(out)])
    assert code == 0
    report = yaml.safe_load(out.read_text())
    assert report["status"] == "optimal"
    assert report["value"] == "9"
    assert report["witness"]["matched"] == ["a", "b"]
    assert report["verified"] is True
    assert report["brute_checked"] is True


def test_k_override_flag(basic_instance, capsys):
    code = main(["solve", "-i", basic_instance, "--k", "1"])
    assert code == 0
    report = yaml.safe_load(capsys.readouterr().out)
    assert report["value"] == "6"


def test_infeasible_exit_code(tmp_path, capsys):
    text = BASIC.replace("type: v_geq_k, oracles: [v1, v2], k: 2",
                         "type: v_eq_k, oracles: [v1, v2], k: 0")
    path = tmp_path / "inst.yaml"
    path.write_text(text)
    code = main(["solve", "-i", str(path)])
    assert code == 2


def test_invalid_instance_exit_code(tmp_path, capsys):
    path = tmp_path / "broken.yaml"
    path.write_text("ground: {size: 3}\nproblem: {type: nonsense}\n")
    assert main(["solve", "-i", str(path)]) == 3


def test_parse_error_names_field(tmp_path, capsys):
    path = tmp_path / "broken.yaml"
    path.write_text(
        "ground: {size: 2, labels: [a, b]}\n"
        "valuations:\n  v1: {kind: modular_on_matroid, matroid: MX,"
        " weights: ['1', '2']}\n"
        "problem: {type: v_geq_k, oracles: [v1, v1], k: 0}\n")
    assert main(["solve", "-i", str(path)]) == 3
    err = capsys.readouterr().err
    assert "MX" in err


def test_resource_limit_exit_code(basic_instance, capsys):
    assert main(["solve", "-i", basic_instance, "--brute", "--limit", "1"]) == 4


def test_reports_are_byte_identical(basic_instance, tmp_path):
    first = tmp_path / "a.yaml"
    second = tmp_path / "b.yaml"
    assert main(["solve", "-i", basic_instance, "--out", str(first)]) == 0
    assert main(["solve", "-i", basic_instance, "--out", str(second)]) == 0
    assert first.read_bytes() == second.read_bytes()


def test_verify_round_trip_without_resolve(basic_instance, tmp_path, capsys):
    report_path = tmp_path / "report.yaml"
    assert main(["solve", "-i", basic_instance, "--out",
                 str(report_path)]) == 0
    assert main(["verify", "-i", basic_instance, "-s",
                 str(report_path)]) == 0
    # Tampering with a potential entry must fail verification.
    report = yaml.safe_load(report_path.read_text())
    report["witness"]["p1"][0] = "1/7"
    report_path.write_text(yaml.dump(report, sort_keys=False))
    assert main(["verify", "-i", basic_instance, "-s",
                 str(report_path)]) == 1


def test_check_exchange(basic_instance, capsys):
    assert main(["check", "-i", basic_instance, "--valuation", "v1"]) == 0
    out = capsys.readouterr().out
    assert "pass" in out


def test_hyphenated_kind_spellings_accepted(tmp_path, capsys):
    text = BASIC.replace("kind: modular_on_matroid",
                         "kind: modular-on-matroid")
    path = tmp_path / "hyphen.yaml"
    path.write_text(text)
    assert main(["solve", "-i", str(path)]) == 0
    report = yaml.safe_load(capsys.readouterr().out)
    assert report["value"] == "9"


def test_generate_then_solve_all_types(tmp_path):
    types = ["v_geq_k", "v_eq_k", "v_leq_k", "v_in", "v_n_w", "m_geq_k_w",
             "w_eq_k_lpt", "v_c", "copic", "recoverable_robust", "congestion"]
    for seed, ptype in enumerate(types):
        path = tmp_path / f"{ptype}.yaml"
        assert main(["generate", "--problem", ptype, "--seed", str(seed),
                     "--out", str(path)]) == 0
        code = main(["solve", "-i", str(path)])
        assert code in (0, 2), (ptype, code)


def test_stock_instances(capsys):
    import pathlib

    root = pathlib.Path(__file__).resolve().parent.parent / "instances"
    assert main(["solve", "-i", str(root / "sample.yaml"), "--k", "2",
                 "--brute"]) == 0
    report = yaml.safe_load(capsys.readouterr().out)
    assert report["value"] == "9"
    assert main(["solve", "-i", str(root / "pigeonhole.yaml"),
                 "--k", "0"]) == 2


def test_console_entry_point_runs():
    result = subprocess.run(
        [sys.executable, "-m", "vmint.cli", "--help"],
        capture_output=True, text=True)
    assert result.returncode == 0
    assert "solve" in result.stdout


def test_eq_dual_witness_verifies_via_cli(tmp_path):
    text = """\
ground: {size: 3, labels: [a, b, c]}
matroids:
  M1: {kind: uniform, rank: 2}
valuations:
  v1: {kind: modular_on_matroid, matroid: M1, weights: ["1", "2", "4"]}
  v2: {kind: modular_on_matroid, matroid: M1, weights: ["1", "2", "4"]}
problem: {type: v_eq_k, oracles: [v1, v2], k: 1}
"""
    inst = tmp_path / "eq.yaml"
    inst.write_text(text)
    report = tmp_path / "report.yaml"
    assert main(["solve", "-i", str(inst), "--verify", "--out",
                 str(report)]) == 0
    assert main(["verify", "-i", str(inst), "-s", str(report)]) == 0
