"""Command-line front end.

Exit status: 0 on success, 1 when a verification fails, 2 on usage or input
errors. Machine-readable output goes to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

import numpy as np

from . import adder as adder_mod
from .bexp import BexpSyntaxError, UnboundVariable, parse_bexp, pretty
from .circuit import CircuitError, id_circ, in_seq, parse_circuit, serialize
from .compiler import compile_bexp, compile_correct_defect
from .corpus import random_bexp, random_classical_circuit, random_derivation, random_uncomputed_circuit
from .linalg import Tolerance
from .semantics import Mode, bits_to_index, density_to_json, denote_basis_states, index_to_bits
from .symmetry import (
    DerivationError,
    dumps,
    invert,
    loads,
    realize,
    source_controlled,
    source_noop_failures,
    verify_witnesses,
)
from .validity import circuits_equivalent, equivalence_defect, is_self_inverse, is_valid, semantics_agree

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _emit(args, payload: dict, text: str) -> None:
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        print(text)


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None


def _write(path: str, text: str) -> None:
    try:
        Path(path).write_text(text + "\n")
    except OSError as e:
        raise UsageError(f"cannot write {path}: {e.strerror}") from None


def _parse_bits(text: str, n: int) -> list[bool]:
    if len(text) != n or set(text) - {"0", "1"}:
        raise UsageError(f"--bits must be {n} characters of 0/1, got {text!r}")
    return [ch == "1" for ch in text]


def _bits_str(bits) -> str:
    return "".join("1" if b else "0" for b in bits)


# -- commands -----------------------------------------------------------------


def cmd_compile(args, tol: Tolerance) -> int:
    b = parse_bexp(args.expr)
    ctx = [v.strip() for v in args.vars.split(",") if v.strip()] if args.vars else []
    circuit, d = compile_bexp(b, ctx)
    text = serialize(circuit)
    if args.out:
        _write(args.out, text)
    if args.derivation:
        _write(args.derivation, dumps(d))
    if not args.out:
        print(text)
        return EXIT_OK
    _emit(
        args,
        {"expr": pretty(b), "vars": ctx, "wires": circuit.n_in, "gates": len(circuit), "out": args.out},
        f"compiled {pretty(b)} over [{', '.join(ctx)}]: {circuit.n_in} wires, {len(circuit)} gates -> {args.out}",
    )
    return EXIT_OK


def cmd_simulate(args, tol: Tolerance) -> int:
    c = parse_circuit(_read(args.circuit))
    bits = _parse_bits(args.bits, c.n_in)
    rho = denote_basis_states(c, [bits_to_index(bits)], Mode(args.mode))[0]
    trace = float(np.real(np.trace(rho)))
    diag = np.real(np.diag(rho))
    off = rho - np.diag(np.diag(rho))
    payload: dict = {"mode": args.mode, "input": args.bits, "trace": trace}
    hot = np.flatnonzero(np.abs(diag) > tol.eps)
    if len(hot) == 1 and abs(diag[hot[0]] - trace) <= tol.eps and np.max(np.abs(off), initial=0) <= tol.eps:
        payload["output"] = _bits_str(index_to_bits(int(hot[0]), c.n_out))
        text = f"{payload['output']}  (trace {trace:g})"
    elif len(hot) == 0:
        payload["output"] = None
        text = f"no output: the state was projected away (trace {trace:g})"
    else:
        payload["output"] = None
        payload["density"] = density_to_json(rho)
        text = f"mixed or superposed output (trace {trace:g}):\n{json.dumps(payload['density'])}"
    _emit(args, payload, text)
    return EXIT_OK


def cmd_check_validity(args, tol: Tolerance) -> int:
    c = parse_circuit(_read(args.circuit))
    report = is_valid(c, tol)
    if report.valid and not args.json:
        print(f"valid (worst trace defect {report.worst_trace_defect:g})")
    else:
        print(json.dumps(report.to_json(), sort_keys=True))
    return EXIT_OK if report.valid else EXIT_FAIL


def cmd_check_symmetry(args, tol: Tolerance) -> int:
    d = loads(_read(args.derivation))
    c = realize(d)
    witnesses = verify_witnesses(d, tol)
    validity = is_valid(c, tol)
    inverse = circuits_equivalent(in_seq(realize(invert(d)), c), id_circ(c.in_type), tol)
    noop_failures = source_noop_failures(d, tol)
    payload = {
        "roles": d.roles,
        "witnesses_ok": witnesses,
        "valid": validity.valid,
        "worst_trace_defect": validity.worst_trace_defect,
        "witness": list(validity.witness) if validity.witness else None,
        "inverse_ok": inverse,
        "source_controlled": source_controlled(d),
        "source_noop_failures": noop_failures,
    }
    ok = witnesses and validity.valid and inverse
    if args.json or not ok:
        print(json.dumps(payload, sort_keys=True))
    else:
        print(f"ok: {len(c)} gates on roles {d.roles}")
    if noop_failures:
        print(f"finding: not a no-op on source wires {noop_failures}", file=sys.stderr)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_invert(args, tol: Tolerance) -> int:
    d = loads(_read(args.derivation))
    inv = invert(d)
    if args.out:
        _write(args.out, dumps(inv))
    else:
        print(dumps(inv))
    if args.check:
        c = realize(d)
        defect = equivalence_defect(in_seq(realize(inv), c), id_circ(c.in_type))
        if defect > tol.eps:
            print(json.dumps({"inverse_ok": False, "defect": defect}, sort_keys=True))
            return EXIT_FAIL
    return EXIT_OK


def cmd_adder(args, tol: Tolerance) -> int:
    n = args.n
    if n < 0:
        raise UsageError("--n must be non-negative")
    if not (0 <= args.x < 2**n and 0 <= args.y < 2**n):
        raise UsageError(f"--x and --y must lie in [0, {2**n})")
    if args.cin not in (0, 1):
        raise UsageError("--cin must be 0 or 1")
    if args.export:
        _write(args.export, serialize(adder_mod.adder_circ(n)))
    total, cout, ok = adder_mod.add(n, args.x, args.y, bool(args.cin))
    payload = {"n": n, "x": args.x, "y": args.y, "cin": args.cin, "sum": total, "cout": cout, "asserts_ok": ok}
    _emit(args, payload, f"{args.x} + {args.y} + {args.cin} = sum {total}, cout {cout}; assertions {'pass' if ok else 'FAIL'}")
    return EXIT_OK if ok else EXIT_FAIL


def self_test(corpus_size: int, seed: int, tol: Tolerance) -> dict:
    """Run the sampled suites; returns {suite: {"passed": k, "failed": m}}
    plus findings that do not count as failures."""
    rng = random.Random(seed)
    ctx = ["x", "y", "z"]
    suites: dict[str, list[bool]] = {
        "compile_correct": [],
        "compile_valid": [],
        "compile_self_inverse": [],
        "derivation_inverse": [],
        "derivation_valid": [],
        "semantics_agree": [],
    }
    noop_findings = 0
    for _ in range(corpus_size):
        b = random_bexp(rng, 7)
        c, d = compile_bexp(b, ctx)
        suites["compile_correct"].append(compile_correct_defect(b, ctx, c) <= tol.eps)
        suites["compile_valid"].append(is_valid(c, tol).valid)
        suites["compile_self_inverse"].append(is_self_inverse(c, tol))
        noop_findings += bool(source_noop_failures(d, tol))
    for _ in range(corpus_size):
        d = random_derivation(rng)
        c = realize(d)
        suites["derivation_inverse"].append(circuits_equivalent(in_seq(realize(invert(d)), c), id_circ(c.in_type), tol))
        suites["derivation_valid"].append(is_valid(c, tol).valid)
        noop_findings += bool(source_noop_failures(d, tol))
    for k in range(corpus_size):
        n_in = rng.randint(1, 3)
        make = random_uncomputed_circuit if k % 2 else random_classical_circuit
        c = make(rng, n_in, rng.randint(1, 10))
        suites["semantics_agree"].append(semantics_agree(c, tol) == is_valid(c, tol).valid)
    report = {name: {"passed": sum(r), "failed": len(r) - sum(r)} for name, r in suites.items()}
    report["findings"] = {"source_noop_counterexamples": noop_findings}
    return report


def cmd_self_test(args, tol: Tolerance) -> int:
    if args.corpus_size < 0:
        raise UsageError("--corpus-size must be non-negative")
    report = self_test(args.corpus_size, args.seed, tol)
    failed = sum(v["failed"] for k, v in report.items() if k != "findings")
    if args.json:
        print(json.dumps(report, sort_keys=True))
    else:
        for name in sorted(k for k in report if k != "findings"):
            r = report[name]
            print(f"{name:24} {r['passed']:6} passed {r['failed']:6} failed")
        print(f"{'findings':24} {report['findings']['source_noop_counterexamples']:6} source no-op counterexamples")
    return EXIT_FAIL if failed else EXIT_OK


# -- argument parsing -----------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print JSON on stdout")

    p = argparse.ArgumentParser(prog="ancillary", description="Compile, simulate and verify reversible circuits.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("compile", parents=[common], help="compile a boolean expression to an oracle circuit")
    s.add_argument("--expr", required=True)
    s.add_argument("--vars", default="", help="comma-separated variable order")
    s.add_argument("-o", "--out", help="circuit JSON output file (default: stdout)")
    s.add_argument("--derivation", help="also write the derivation JSON here")
    s.set_defaults(fn=cmd_compile)

    s = sub.add_parser("simulate", parents=[common], help="run a circuit on a basis input")
    s.add_argument("circuit")
    s.add_argument("--bits", required=True)
    s.add_argument("--mode", choices=["safe", "unsafe"], default="safe")
    s.set_defaults(fn=cmd_simulate)

    s = sub.add_parser("check-validity", parents=[common], help="check every assertion of a circuit")
    s.add_argument("circuit")
    s.set_defaults(fn=cmd_check_validity)

    s = sub.add_parser("check-symmetry", parents=[common], help="check a source-symmetry derivation")
    s.add_argument("derivation")
    s.set_defaults(fn=cmd_check_symmetry)

    s = sub.add_parser("invert", parents=[common], help="invert a derivation")
    s.add_argument("derivation")
    s.add_argument("-o", "--out")
    s.add_argument("--check", action="store_true", help="verify the inverse undoes the circuit")
    s.set_defaults(fn=cmd_invert)

    s = sub.add_parser("adder", parents=[common], help="run the n-bit adder on integers")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--x", type=int, required=True)
    s.add_argument("--y", type=int, required=True)
    s.add_argument("--cin", type=int, default=0)
    s.add_argument("--export", help="write the adder circuit JSON here")
    s.set_defaults(fn=cmd_adder)

    s = sub.add_parser("self-test", parents=[common], help="run the sampled verification suites")
    s.add_argument("--corpus-size", type=int, default=50)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(fn=cmd_self_test)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        tol = Tolerance.from_env()
    except ValueError as e:
        print(f"error: bad ANCILLARY_TOL: {e}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.fn(args, tol)
    except (UsageError, BexpSyntaxError, CircuitError, DerivationError, json.JSONDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except UnboundVariable as e:
        print(f"error: unbound variable {e.args[0]}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())
