import json
import subprocess
import sys
from pathlib import Path

import pytest

from ancillary.bexp import parse_bexp
from ancillary.circuit import parse_circuit, serialize
from ancillary.cli import run, self_test
from ancillary.compiler import compile_bexp, compile_circuit
from ancillary.linalg import Tolerance
from ancillary.symmetry import Ancilla, Conjugate, Identity, TargetGateLeft, dumps, invert, loads
from ancillary.circuit import Unitary
from ancillary.validity import is_valid

GOLDEN = Path(__file__).parent / "golden"


def golden(name):
    return (GOLDEN / name).read_text()


def run_cli(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


# -- golden files -------------------------------------------------------------------


def test_compile_golden(capsys):
    code, out, _ = run_cli(capsys, "compile", "--expr", "x & y", "--vars", "x,y")
    assert code == 0
    assert out == golden("compile_x_and_y.json")
    # thin wrapper: same bytes as the library
    assert out.strip() == serialize(compile_circuit(parse_bexp("x & y"), ["x", "y"]))


def test_compile_to_file(tmp_path, capsys):
    target = tmp_path / "c.json"
    deriv = tmp_path / "d.json"
    code, out, _ = run_cli(capsys, "compile", "--expr", "x & y", "--vars", "x,y", "-o", str(target), "--derivation", str(deriv))
    assert code == 0
    assert target.read_text() == golden("compile_x_and_y.json")
    assert "9 gates" in out
    c, d = compile_bexp(parse_bexp("x & y"), ["x", "y"])
    assert loads(deriv.read_text()) == d


def test_simulate_golden(capsys):
    path = str(GOLDEN / "compile_x_and_y.json")
    code, out, _ = run_cli(capsys, "simulate", path, "--bits", "011", "--mode", "safe")
    assert (code, out) == (0, golden("simulate_011_safe.txt"))
    code, out, _ = run_cli(capsys, "simulate", path, "--bits", "011", "--mode", "unsafe", "--json")
    assert (code, out) == (0, golden("simulate_011_unsafe.json"))


def test_check_validity_golden(capsys):
    code, out, _ = run_cli(capsys, "check-validity", str(GOLDEN / "bad_circuit.json"))
    assert code == 1
    assert out == golden("check_validity_bad.json")
    assert json.loads(out) == is_valid(parse_circuit(golden("bad_circuit.json"))).to_json()
    code, out, _ = run_cli(capsys, "check-validity", str(GOLDEN / "compile_x_and_y.json"), "--json")
    assert (code, out) == (0, golden("check_validity_and.json"))


def test_adder_golden(capsys):
    code, out, _ = run_cli(capsys, "adder", "--n", "4", "--x", "9", "--y", "8", "--cin", "1", "--json")
    assert (code, out) == (0, golden("adder_4.json"))


# -- other commands -------------------------------------------------------------------


def test_simulate_projected_and_mixed(tmp_path, capsys):
    bad = str(GOLDEN / "bad_circuit.json")
    code, out, _ = run_cli(capsys, "simulate", bad, "--bits", "", "--mode", "unsafe", "--json")
    assert code == 0 and json.loads(out)["output"] is None and json.loads(out)["trace"] == 0.0
    h = tmp_path / "h.json"
    h.write_text('{"in": {"qubits": 1, "bits": 0}, "out": {"qubits": 1, "bits": 0}, "gates": [{"g": "H", "ws": [0]}]}')
    code, out, _ = run_cli(capsys, "simulate", str(h), "--bits", "0", "--json")
    payload = json.loads(out)
    assert payload["output"] is None
    assert payload["density"][0][1] == pytest.approx([0.5, 0.0])


def test_check_symmetry_and_invert(tmp_path, capsys):
    _, d = compile_bexp(parse_bexp("x ^ ~y"), ["x", "y"])
    path = tmp_path / "d.json"
    path.write_text(dumps(d))
    code, out, _ = run_cli(capsys, "check-symmetry", str(path), "--json")
    assert code == 0
    report = json.loads(out)
    assert report["valid"] and report["inverse_ok"] and report["witnesses_ok"]
    assert report["source_noop_failures"] == []

    inv = tmp_path / "inv.json"
    code, _, _ = run_cli(capsys, "invert", str(path), "-o", str(inv), "--check")
    assert code == 0
    assert loads(inv.read_text()) == invert(d)


def test_check_symmetry_reports_counterexample(tmp_path, capsys):
    d = Ancilla(False, 1, Conjugate(Unitary("CNOT", (0, 1)), TargetGateLeft(Unitary("X", (0,)), Identity("ts"))))
    path = tmp_path / "d.json"
    path.write_text(dumps(d))
    code, out, err = run_cli(capsys, "check-symmetry", str(path))
    assert code == 1
    report = json.loads(out)
    assert not report["valid"] and report["worst_trace_defect"] == 1.0
    assert not report["source_controlled"]


def test_self_test_is_deterministic(capsys):
    a = self_test(6, 3, Tolerance())
    b = self_test(6, 3, Tolerance())
    assert a == b
    assert all(v["failed"] == 0 for k, v in a.items() if k != "findings")
    code, out, _ = run_cli(capsys, "self-test", "--corpus-size", "4", "--json")
    assert code == 0 and "findings" in json.loads(out)


# -- errors and exit codes ---------------------------------------------------------------


@pytest.mark.parametrize(
    "argv",
    [
        ["compile", "--expr", "x &", "--vars", "x"],
        ["compile", "--expr", "x & y", "--vars", "x"],
        ["simulate", "missing.json", "--bits", "0"],
        ["simulate", str(GOLDEN / "compile_x_and_y.json"), "--bits", "01"],
        ["check-validity", str(GOLDEN / "simulate_011_safe.txt")],
        ["adder", "--n", "2", "--x", "4", "--y", "0"],
        ["self-test", "--corpus-size", "-1"],
        ["frobnicate"],
        [],
    ],
)
def test_usage_errors_exit_2(argv, capsys):
    code, out, err = run_cli(capsys, *argv)
    assert code == 2
    assert out == ""
    assert err


def test_bad_tolerance_env(monkeypatch, capsys):
    monkeypatch.setenv("ANCILLARY_TOL", "tiny")
    code, _, err = run_cli(capsys, "check-validity", str(GOLDEN / "bad_circuit.json"))
    assert code == 2 and "ANCILLARY_TOL" in err


def test_tolerance_env_changes_verdict(monkeypatch, capsys):
    monkeypatch.setenv("ANCILLARY_TOL", "2")
    code, out, _ = run_cli(capsys, "check-validity", str(GOLDEN / "bad_circuit.json"))
    assert code == 0 and out.startswith("valid")


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "ancillary", "compile", "--expr", "x & y", "--vars", "x,y"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert proc.stdout == golden("compile_x_and_y.json")
