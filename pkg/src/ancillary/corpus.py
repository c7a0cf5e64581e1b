"""Generators for the test and self-test corpora.

Everything random takes a ``random.Random`` so runs are reproducible from a
seed.
"""

from __future__ import annotations

import random
from itertools import combinations, permutations
from typing import Iterator, Sequence

from .bexp import FALSE, TRUE, And, Bexp, Not, Var, Xor
from .circuit import (
    QUBIT,
    Assert,
    Circuit,
    Discard,
    Gate,
    Init,
    Meas,
    Unitary,
    assert_at,
    from_kinds,
    init_at,
    qubits,
    seq,
    step,
)
from .symmetry import (
    SOURCE,
    TARGET,
    Ancilla,
    Conjugate,
    Derivation,
    EquivWitness,
    Identity,
    TargetGateLeft,
    TargetGateRight,
    realize,
)

CLASSICAL_ARITY = {"X": 1, "CNOT": 2, "Toffoli": 3}


# -- boolean expressions ------------------------------------------------------


def enumerate_bexps(max_nodes: int, names: Sequence[str] = ("x", "y", "z")) -> Iterator[Bexp]:
    """Every expression with at most ``max_nodes`` AST nodes, smallest first.

    Leaves are the variables in ``names`` and the two constants.
    """
    by_size: list[list[Bexp]] = [[]]
    for size in range(1, max_nodes + 1):
        level: list[Bexp] = []
        if size == 1:
            level = [Var(v) for v in names] + [TRUE, FALSE]
        else:
            level.extend(Not(b) for b in by_size[size - 1])
            for left_size in range(1, size - 1):
                right_size = size - 1 - left_size
                for left in by_size[left_size]:
                    for right in by_size[right_size]:
                        level.append(And(left, right))
                        level.append(Xor(left, right))
        by_size.append(level)
        yield from level


def random_bexp(rng: random.Random, max_nodes: int, names: Sequence[str] = ("x", "y", "z")) -> Bexp:
    """A random expression with at most ``max_nodes`` nodes."""
    if max_nodes < 1:
        raise ValueError("max_nodes must be at least 1")
    size = rng.randint(1, max_nodes)
    return _bexp_of_size(rng, size, list(names))


def _bexp_of_size(rng: random.Random, size: int, names: list[str]) -> Bexp:
    if size == 1:
        leaf = rng.randrange(len(names) + 2)
        if leaf < len(names):
            return Var(names[leaf])
        return TRUE if leaf == len(names) else FALSE
    if size == 2 or rng.random() < 0.25:
        return Not(_bexp_of_size(rng, size - 1, names))
    left = rng.randint(1, size - 2)
    op = And if rng.random() < 0.5 else Xor
    return op(_bexp_of_size(rng, left, names), _bexp_of_size(rng, size - 1 - left, names))


# -- classical gates and circuits ---------------------------------------------


def all_classical_gates(n: int) -> list[Unitary]:
    """Every X, CNOT and Toffoli placement on n wires.

    Toffoli controls are unordered, so each control pair appears once.
    """
    gates = [Unitary("X", (i,)) for i in range(n)]
    gates += [Unitary("CNOT", p) for p in permutations(range(n), 2)]
    for t in range(n):
        for a, b in combinations([w for w in range(n) if w != t], 2):
            gates.append(Unitary("Toffoli", (a, b, t)))
    return gates


def random_classical_gate(rng: random.Random, n: int, avoid: int | None = None) -> Unitary | None:
    """A random classical unitary on n wires whose target is not ``avoid``.

    ``avoid`` may still serve as a control. Returns None if nothing fits.
    """
    targets = [w for w in range(n) if w != avoid]
    if not targets:
        return None
    t = rng.choice(targets)
    kinds = [k for k, a in CLASSICAL_ARITY.items() if a <= n]
    kind = rng.choice(kinds)
    controls = rng.sample([w for w in range(n) if w != t], CLASSICAL_ARITY[kind] - 1)
    return Unitary(kind, tuple(controls) + (t,))


def random_gates(rng: random.Random, n: int, count: int, avoid: int | None = None) -> list[Gate]:
    out = []
    for _ in range(count):
        g = random_classical_gate(rng, n, avoid)
        if g is not None:
            out.append(g)
    return out


def random_classical_circuit(rng: random.Random, n_in: int, length: int, max_wires: int = 5) -> Circuit:
    """Random gates, inits and asserts with random values.

    Assertions are placed blindly, so many of these circuits are invalid.
    The output width is whatever the trajectory ends at.
    """
    gates: list[Gate] = []
    n = n_in
    for _ in range(length):
        r = rng.random()
        if r < 0.2 and n < max_wires:
            gates.append(Init(rng.random() < 0.5, rng.randint(0, n)))
            n += 1
        elif r < 0.35 and n > 0:
            gates.append(Assert(rng.random() < 0.5, rng.randrange(n)))
            n -= 1
        elif n > 0:
            gates.append(random_classical_gate(rng, n))
    return Circuit(qubits(n_in), qubits(n), gates)


def random_uncomputed_circuit(rng: random.Random, n_in: int, length: int, max_wires: int = 5) -> Circuit:
    """A valid classical circuit: ancillae are computed on, uncomputed by the
    reversed gate sequence and then asserted back to their initial value."""
    gates: list[Gate] = []
    n = n_in
    budget = length
    while budget > 0:
        if n < max_wires and rng.random() < 0.5:
            b = rng.random() < 0.5
            i = rng.randint(0, n)
            body = random_gates(rng, n + 1, rng.randint(1, 3))
            gates += [Init(b, i)] + body + body[::-1] + [Assert(b, i)]
            budget -= 2 + 2 * len(body)
        elif n > 0:
            gates.append(random_classical_gate(rng, n))
            budget -= 1
        else:
            break
    return Circuit(qubits(n_in), qubits(n_in), gates)


def random_circuit(rng: random.Random, n_in: int, length: int, max_wires: int = 4, quantum: bool = True) -> Circuit:
    """Random circuit over the full gate set, including meas and discard.

    Used for serialisation tests, so it also produces classical wires.
    """
    kinds = list(n_in * QUBIT)
    gates: list[Gate] = []
    one_qubit = ["X", "H", "Z"] if quantum else ["X"]
    for _ in range(length):
        n = len(kinds)
        qs = [w for w in range(n) if kinds[w] == QUBIT]
        bs = [w for w in range(n) if kinds[w] != QUBIT]
        choice = rng.random()
        g: Gate | None = None
        if choice < 0.15 and n < max_wires:
            g = Init(rng.random() < 0.5, rng.randint(0, n))
        elif choice < 0.25 and qs:
            g = Assert(rng.random() < 0.5, rng.choice(qs))
        elif choice < 0.32 and qs:
            g = Meas(rng.choice(qs))
        elif choice < 0.38 and bs:
            g = Discard(rng.choice(bs))
        elif qs:
            kind = rng.choice(one_qubit + ["CNOT", "Toffoli"])
            arity = {"CNOT": 2, "Toffoli": 3}.get(kind, 1)
            if n >= arity:
                t = rng.choice(qs)
                controls = rng.sample([w for w in range(n) if w != t], arity - 1)
                g = Unitary(kind, tuple(controls) + (t,))
        if g is not None:
            step(kinds, g)
            gates.append(g)
    return Circuit(qubits(n_in), from_kinds(kinds), gates)


# -- no-op and cancellation patterns -------------------------------------------


def random_noop_circuit(rng: random.Random, n: int, i: int, length: int) -> Circuit:
    """Classical gates on n wires, none of which acts on wire i."""
    return Circuit(qubits(n), qubits(n), random_gates(rng, n, length, avoid=i))


def assert_init_pattern(rng: random.Random, n: int, valid: bool, length: int = 4) -> Circuit:
    """``prefix ;; assert_at b i ;; init_at b i`` on n wires.

    The prefix initialises wire i to b and then applies gates that leave it
    alone (it may act as a control), so the assertion holds. With
    ``valid=False`` an odd number of X gates on wire i is mixed in, so the
    assertion fails on every input.
    """
    b = rng.random() < 0.5
    i = rng.randrange(n)
    before = random_gates(rng, n - 1, rng.randint(0, length)) if n > 1 else []
    after = random_gates(rng, n, rng.randint(0, length), avoid=i)
    if not valid:
        for _ in range(rng.choice((1, 3))):
            after.insert(rng.randint(0, len(after)), Unitary("X", (i,)))
    gates = before + [Init(b, i)] + after + [Assert(b, i), Init(b, i)]
    return Circuit(qubits(n - 1), qubits(n), gates)


# -- derivations --------------------------------------------------------------


def random_roles(rng: random.Random, n: int) -> str:
    roles = "".join(rng.choice((SOURCE, TARGET)) for _ in range(n))
    return roles


def _gate_on(rng: random.Random, roles: str, target_only: bool, source_controlled: bool) -> Unitary | None:
    n = len(roles)
    targets = [w for w in range(n) if roles[w] == TARGET] if target_only else list(range(n))
    if not targets:
        return None
    t = rng.choice(targets)
    kind = rng.choice([k for k, a in CLASSICAL_ARITY.items() if a <= n])
    pool = [w for w in range(n) if w != t]
    if source_controlled and not target_only and roles[t] == SOURCE:
        pool = [w for w in pool if roles[w] == SOURCE]
    if len(pool) < CLASSICAL_ARITY[kind] - 1:
        kind = "X"
    controls = rng.sample(pool, CLASSICAL_ARITY[kind] - 1)
    return Unitary(kind, tuple(controls) + (t,))


def _padding_pair(rng: random.Random, c: Circuit, max_wires: int) -> Circuit:
    """``c`` with a cancelling pair spliced in somewhere: ``g ;; g`` or
    ``init_at b i ;; assert_at b i``, the latter only below ``max_wires``."""
    counts = c.wire_counts()
    pos = rng.randint(0, len(c.gates))
    n = counts[pos]
    if n == 0 or (n < max_wires and rng.random() < 0.4):
        b, i = rng.random() < 0.5, rng.randint(0, n)
        pair: list[Gate] = [Init(b, i), Assert(b, i)]
    else:
        g = random_classical_gate(rng, n)
        pair = [g, g]
    gates = list(c.gates[:pos]) + pair + list(c.gates[pos:])
    return Circuit(c.in_type, c.out_type, gates)


def random_derivation(
    rng: random.Random,
    max_depth: int = 5,
    max_wires: int = 5,
    source_controlled: bool = False,
    witness_rate: float = 0.15,
) -> Derivation:
    """A random derivation built outside in.

    Every circuit met while realising it has at most ``max_wires`` wires. With
    ``source_controlled`` the conjugating gates that change a source wire only
    take source controls.
    """
    depth = rng.randint(0, max_depth)
    width = rng.randint(1, max_wires)
    roles = random_roles(rng, width)
    heads = []
    for _ in range(depth):
        options = ["conjugate", "left", "right", "witness"]
        if len(roles) < max_wires:
            options.append("ancilla")
        rule = rng.choice(options)
        if rule == "witness" and rng.random() > witness_rate * len(options):
            rule = "conjugate"
        if rule == "ancilla":
            i = rng.randint(0, len(roles))
            b = rng.random() < 0.5
            heads.append(("ancilla", b, i))
            roles = roles[:i] + SOURCE + roles[i:]
            continue
        if rule == "witness":
            heads.append(("witness",))
            continue
        g = _gate_on(rng, roles, target_only=rule != "conjugate", source_controlled=source_controlled)
        if g is None:
            g = _gate_on(rng, roles, target_only=False, source_controlled=source_controlled)
            rule = "conjugate"
        heads.append((rule, g))
    d: Derivation = Identity(roles)
    for h in reversed(heads):
        if h[0] == "ancilla":
            d = Ancilla(h[1], h[2], d)
        elif h[0] == "witness":
            d = EquivWitness(_padding_pair(rng, realize(d), max_wires), d)
        elif h[0] == "conjugate":
            d = Conjugate(h[1], d)
        elif h[0] == "left":
            d = TargetGateLeft(h[1], d)
        else:
            d = TargetGateRight(d, h[1])
    return d


def sandwich(b: bool, n: int, i: int, c: Circuit) -> Circuit:
    """``init_at b i ;; c ;; assert_at b i`` for a square c on n + 1 wires."""
    return seq(init_at(b, n, i), c, assert_at(b, n + 1, i))
