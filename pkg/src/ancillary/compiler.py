"""Compile boolean expressions to oracle circuits.

``compile_bexp(b, ctx)`` yields a circuit on ``1 + len(ctx)`` qubits: wire 0
is the target and wire ``1 + ctx.index(v)`` holds variable v. On basis inputs
it maps ``|z, x>`` to ``|z xor b(x), x>``. Subexpressions are computed onto
fresh ancillae inserted right after the current target, used, recomputed to
clear the ancilla and asserted away.

Alongside the circuit the compiler builds a source-symmetry derivation with
the target as the only target wire. The rules only allow nesting (``g ;; c ;;
g``), while the circuit sequences whole subcircuits (``C ;; M ;; C``).
Because each ancilla of C is asserted and then re-initialised to the same
value between the two copies, the assert/init pair in the middle can be
dropped. That turns ``C ;; M ;; C`` into a nested chain of rules. The
rule-built chain is equivalent to the gate-for-gate circuit rather than
identical to it, so the circuit is attached as an ``EquivWitness`` whenever
the two differ.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product
from typing import Sequence

import numpy as np

from .bexp import And, Bexp, Const, Not, UnboundVariable, Var, Xor, interp, variables
from .circuit import (
    Circuit,
    CNOT_at,
    Init,
    Toffoli_at,
    Unitary,
    X_at,
    assert_at,
    id_circ,
    init_at,
    pad_front,
    qubits,
    seq,
)
from .linalg import as_tol
from .semantics import Mode, basis_state, bits_to_index, bool_to_matrix, denote_basis_states
from .symmetry import (
    SOURCE,
    TARGET,
    Ancilla,
    Conjugate,
    Derivation,
    EquivWitness,
    Identity,
    TargetGateLeft,
    insert_source,
    realize,
)


def _check_ctx(b: Bexp, ctx: Sequence[str]) -> list[str]:
    ctx = list(ctx)
    if len(set(ctx)) != len(ctx):
        raise ValueError(f"context has duplicate variables: {ctx}")
    missing = variables(b) - set(ctx)
    if missing:
        raise UnboundVariable(", ".join(sorted(missing)))
    return ctx


def compile_circuit(b: Bexp, ctx: Sequence[str]) -> Circuit:
    """The oracle circuit for ``b`` over ``ctx``, gate for gate."""
    ctx = _check_ctx(b, ctx)
    return _compile(b, tuple(ctx))


# Sweeps compile many expressions sharing subterms, hence the cache.
@lru_cache(maxsize=65536)
def _compile(b: Bexp, ctx: tuple[str, ...]) -> Circuit:
    n = 1 + len(ctx)
    if isinstance(b, Const):
        return X_at(n, 0) if b.value else id_circ(qubits(n))
    if isinstance(b, Var):
        return CNOT_at(n, 1 + ctx.index(b.name), 0)
    if isinstance(b, Not):
        inner = pad_front(1, _compile(b.arg, ctx))
        return seq(init_at(True, n, 1), inner, CNOT_at(n + 1, 1, 0), inner, assert_at(True, n + 1, 1))
    if isinstance(b, And):
        c1 = pad_front(1, _compile(b.left, ctx))
        c2 = pad_front(2, _compile(b.right, ctx))
        return seq(
            init_at(False, n, 1),
            c1,
            init_at(False, n + 1, 2),
            c2,
            Toffoli_at(n + 2, 1, 2, 0),
            c2,
            assert_at(False, n + 2, 2),
            c1,
            assert_at(False, n + 1, 1),
        )
    if isinstance(b, Xor):
        c1 = pad_front(1, _compile(b.left, ctx))
        c2 = pad_front(1, _compile(b.right, ctx))
        cnot = CNOT_at(n + 1, 1, 0)
        return seq(init_at(False, n, 1), c1, cnot, c1, c2, cnot, c2, assert_at(False, n + 1, 1))
    raise TypeError(f"not a boolean expression: {b!r}")


# -- derivations --------------------------------------------------------------


def _sandwich(b: Bexp, ctx: list[str], k: int, m: Derivation) -> Derivation:
    """A chain equivalent to ``C ;; m ;; C``, where C computes b onto wire k
    with the variables starting at wire k + 1."""
    if isinstance(b, Const):
        return Conjugate(Unitary("X", (k,)), m) if b.value else m
    if isinstance(b, Var):
        return Conjugate(Unitary("CNOT", (k + 1 + ctx.index(b.name), k)), m)
    a = k + 1
    shifted = insert_source(m, a)
    if isinstance(b, Not):
        core = Conjugate(Unitary("CNOT", (a, k)), _sandwich(b.arg, ctx, a, shifted))
        return Ancilla(True, a, _sandwich(b.arg, ctx, a, core))
    if isinstance(b, And):
        a2 = k + 2
        mid = insert_source(_sandwich(b.left, ctx, a, shifted), a2)
        core = Conjugate(Unitary("Toffoli", (a, a2, k)), _sandwich(b.right, ctx, a2, mid))
        inner = Ancilla(False, a2, _sandwich(b.right, ctx, a2, core))
        return Ancilla(False, a, _sandwich(b.left, ctx, a, inner))
    if isinstance(b, Xor):
        core = Conjugate(Unitary("CNOT", (a, k)), _sandwich(b.right, ctx, a, _sandwich(b.left, ctx, a, shifted)))
        return Ancilla(False, a, _sandwich(b.left, ctx, a, _sandwich(b.right, ctx, a, core)))
    raise TypeError(f"not a boolean expression: {b!r}")


def _rule_derivation(b: Bexp, ctx: list[str]) -> Derivation:
    roles = TARGET + SOURCE * len(ctx)
    if isinstance(b, Const):
        base = Identity(roles)
        return TargetGateLeft(Unitary("X", (0,)), base) if b.value else base
    if isinstance(b, Var):
        return TargetGateLeft(Unitary("CNOT", (1 + ctx.index(b.name), 0)), Identity(roles))
    if isinstance(b, Not):
        base = Identity(roles[:1] + SOURCE + roles[1:])
        return Ancilla(True, 1, _sandwich(b.arg, ctx, 1, TargetGateLeft(Unitary("CNOT", (1, 0)), base)))
    if isinstance(b, And):
        base = Identity(roles[:1] + SOURCE * 2 + roles[1:])
        core = TargetGateLeft(Unitary("Toffoli", (1, 2, 0)), base)
        inner = Ancilla(False, 2, _sandwich(b.right, ctx, 2, core))
        return Ancilla(False, 1, _sandwich(b.left, ctx, 1, inner))
    if isinstance(b, Xor):
        base = Identity(roles[:1] + SOURCE + roles[1:])
        core = TargetGateLeft(Unitary("CNOT", (1, 0)), base)
        return Ancilla(False, 1, _sandwich(b.left, ctx, 1, _sandwich(b.right, ctx, 1, core)))
    raise TypeError(f"not a boolean expression: {b!r}")


def compile_bexp(b: Bexp, ctx: Sequence[str]) -> tuple[Circuit, Derivation]:
    """Compile ``b`` over ``ctx``; returns the circuit and its derivation.

    ``realize`` of the derivation is always the returned circuit.
    """
    ctx = _check_ctx(b, ctx)
    circuit = _compile(b, tuple(ctx))
    d = _rule_derivation(b, ctx)
    if realize(d) != circuit:
        d = EquivWitness(circuit, d)
    return circuit, d


def ancilla_count(c: Circuit) -> int:
    return sum(isinstance(g, Init) for g in c.gates)


# -- correctness --------------------------------------------------------------


def oracle_inputs(ctx: Sequence[str]):
    """Every (z, f) pair over ``ctx``, with f as a dict."""
    for z, *vals in product((False, True), repeat=1 + len(ctx)):
        yield z, dict(zip(ctx, vals))


def compile_correct_defect(b: Bexp, ctx: Sequence[str], circuit: Circuit | None = None) -> float:
    """Largest entrywise deviation, over all (z, f) and both semantics, of the
    circuit's output from ``|z xor b(f)> (x) |f>`` as density matrices."""
    ctx = _check_ctx(b, ctx)
    if circuit is None:
        circuit = _compile(b, tuple(ctx))
    cases = list(oracle_inputs(ctx))
    in_idx = [bits_to_index([z] + [f[v] for v in ctx]) for z, f in cases]
    d = 2 ** circuit.n_out
    expected = np.zeros((len(cases), d, d), dtype=np.complex128)
    for k, (z, f) in enumerate(cases):
        j = bits_to_index([z != interp(b, f)] + [f[v] for v in ctx])
        expected[k, j, j] = 1
    worst = 0.0
    for mode in (Mode.SAFE, Mode.UNSAFE):
        out = denote_basis_states(circuit, in_idx, mode)
        worst = max(worst, float(np.max(np.abs(out - expected))))
    return worst


def check_compile_correct(b: Bexp, ctx: Sequence[str], tol=None) -> bool:
    return compile_correct_defect(b, ctx) <= as_tol(tol).eps


def expected_output(b: Bexp, ctx: Sequence[str], z: bool, f) -> np.ndarray:
    """``bool_to_matrix(z xor b(f)) (x) basis_state(ctx, f)``."""
    return np.kron(bool_to_matrix(z != interp(b, f)), basis_state(ctx, f))
