"""Source-symmetry derivations.

A derivation is a tree (in practice a chain: every rule has one premise)
witnessing that a square all-qubit circuit is source symmetric. Each wire
carries a role, ``"s"`` (source) or ``"t"`` (target); ``roles`` is the
string of roles of the realised circuit's wires, in wire order.

Rules:

* ``Identity(roles)`` -- the empty circuit.
* ``Conjugate(g, d)`` -- ``g ;; d ;; g`` for a classical gate g.
* ``TargetGateLeft(g, d)`` / ``TargetGateRight(d, g)`` -- ``g ;; d`` and
  ``d ;; g`` for a classical gate acting on a target wire.
* ``Ancilla(b, i, d)`` -- ``init_at b i ;; d ;; assert_at b i`` where wire i
  of d is a source wire. The realised circuit has one wire fewer than d.
* ``EquivWitness(c, d)`` -- the circuit c, claimed equivalent to d's
  realisation. The claim is checked by ``verify_witnesses``.

Walks over derivations are iterative; compiler-produced chains can be a few
hundred rules deep.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Union

from .circuit import (
    QUBIT,
    Assert,
    Circuit,
    CircuitError,
    Gate,
    Init,
    Unitary,
    assert_at,
    circuit_from_json,
    circuit_to_json,
    from_kinds,
    gate_from_json,
    gate_to_json,
    in_seq,
    init_at,
    insert_wire,
    qubits,
    reverse,
    step,
)
from .linalg import as_tol
from .validity import circuits_equivalent, is_valid

SOURCE = "s"
TARGET = "t"


class DerivationError(ValueError):
    pass


def acts_on(g: Gate) -> int:
    """The wire a classical gate changes: the last wire it names."""
    if not (isinstance(g, Unitary) and g.classical):
        raise DerivationError(f"{g!r} is not a classical unitary gate")
    return g.wires[-1]


def _check_roles(roles: str) -> str:
    if any(r not in (SOURCE, TARGET) for r in roles):
        raise DerivationError(f"roles must be made of 's' and 't', got {roles!r}")
    return roles


def _check_gate(g, roles: str, on_target: bool) -> None:
    acted = acts_on(g)
    if max(g.wires) >= len(roles):
        raise DerivationError(f"{g!r} out of range for {len(roles)} wires")
    if on_target and roles[acted] != TARGET:
        raise DerivationError(f"{g!r} acts on wire {acted}, which is not a target wire")


class _Node:
    __slots__ = ()

    def __eq__(self, other):
        if not isinstance(other, _Node):
            return NotImplemented
        return _key(self) == _key(other)

    def __hash__(self):
        return hash(_key(self))


@dataclass(frozen=True, eq=False)
class Identity(_Node):
    roles: str

    def __post_init__(self):
        _check_roles(self.roles)

    @classmethod
    def of(cls, n_source: int, n_target: int) -> "Identity":
        return cls(SOURCE * n_source + TARGET * n_target)


@dataclass(frozen=True, eq=False)
class Conjugate(_Node):
    gate: Unitary
    inner: "Derivation"

    def __post_init__(self):
        _check_gate(self.gate, self.inner.roles, on_target=False)

    @property
    def roles(self) -> str:
        return self.inner.roles


@dataclass(frozen=True, eq=False)
class TargetGateLeft(_Node):
    gate: Unitary
    inner: "Derivation"

    def __post_init__(self):
        _check_gate(self.gate, self.inner.roles, on_target=True)

    @property
    def roles(self) -> str:
        return self.inner.roles


@dataclass(frozen=True, eq=False)
class TargetGateRight(_Node):
    inner: "Derivation"
    gate: Unitary

    def __post_init__(self):
        _check_gate(self.gate, self.inner.roles, on_target=True)

    @property
    def roles(self) -> str:
        return self.inner.roles


@dataclass(frozen=True, eq=False)
class Ancilla(_Node):
    value: bool
    index: int
    inner: "Derivation"

    def __post_init__(self):
        inner_roles = self.inner.roles
        if not 0 <= self.index < len(inner_roles):
            raise DerivationError(f"ancilla index {self.index} out of range for {len(inner_roles)} wires")
        if inner_roles[self.index] != SOURCE:
            raise DerivationError(f"ancilla index {self.index} is not a source wire")
        object.__setattr__(self, "_roles", inner_roles[: self.index] + inner_roles[self.index + 1 :])

    @property
    def roles(self) -> str:
        return self._roles


@dataclass(frozen=True, eq=False)
class EquivWitness(_Node):
    circuit: Circuit
    inner: "Derivation"

    def __post_init__(self):
        n = len(self.inner.roles)
        want = (QUBIT,) * n
        if self.circuit.in_kinds != want or self.circuit.out_kinds != want:
            raise DerivationError(f"witness circuit {self.circuit!r} is not square on {n} qubits")

    @property
    def roles(self) -> str:
        return self.inner.roles


Derivation = Union[Identity, Conjugate, TargetGateLeft, TargetGateRight, Ancilla, EquivWitness]


def unwind(d: Derivation) -> tuple[list, Identity]:
    """The chain of rules from the outside in, and the Identity at the bottom."""
    chain = []
    while not isinstance(d, Identity):
        chain.append(d)
        d = d.inner
    return chain, d


def _head(node) -> tuple:
    if isinstance(node, Ancilla):
        return ("ancilla", node.value, node.index)
    if isinstance(node, EquivWitness):
        return ("equiv", node.circuit)
    return (type(node).__name__, node.gate)


def _key(d: Derivation) -> tuple:
    chain, base = unwind(d)
    return tuple(_head(x) for x in chain) + (("identity", base.roles),)


def _rebuild(heads: list, base: Identity) -> Derivation:
    d: Derivation = base
    for h in reversed(heads):
        d = h(d)
    return d


def depth(d: Derivation) -> int:
    return len(unwind(d)[0])


# -- realisation, inversion, shifting ----------------------------------------


def realize(d: Derivation) -> Circuit:
    """The circuit a derivation denotes."""
    n = len(d.roles)
    prefix: list[Gate] = []
    suffix: list[Gate] = []  # collected innermost-last; emitted reversed
    node = d
    middle: tuple[Gate, ...] = ()
    while True:
        if isinstance(node, Identity):
            break
        if isinstance(node, EquivWitness):
            middle = node.circuit.gates
            break
        if isinstance(node, Conjugate):
            prefix.append(node.gate)
            suffix.append(node.gate)
        elif isinstance(node, TargetGateLeft):
            prefix.append(node.gate)
        elif isinstance(node, TargetGateRight):
            suffix.append(node.gate)
        elif isinstance(node, Ancilla):
            prefix.append(Init(node.value, node.index))
            suffix.append(Assert(node.value, node.index))
        else:
            raise DerivationError(f"not a derivation: {node!r}")
        node = node.inner
    return Circuit(qubits(n), qubits(n), prefix + list(middle) + suffix[::-1])


def invert(d: Derivation) -> Derivation:
    """Derivation of the inverse circuit; an involution on derivations."""
    chain, base = unwind(d)
    heads = []
    for node in chain:
        if isinstance(node, Conjugate):
            heads.append(lambda x, g=node.gate: Conjugate(g, x))
        elif isinstance(node, TargetGateLeft):
            heads.append(lambda x, g=node.gate: TargetGateRight(x, g))
        elif isinstance(node, TargetGateRight):
            heads.append(lambda x, g=node.gate: TargetGateLeft(g, x))
        elif isinstance(node, Ancilla):
            heads.append(lambda x, b=node.value, i=node.index: Ancilla(b, i, x))
        else:
            heads.append(lambda x, c=reverse(node.circuit): EquivWitness(c, x))
    return _rebuild(heads, base)


def _shift_unitary(g: Unitary, cur: int) -> Unitary:
    return Unitary(g.kind, tuple(w + 1 if w >= cur else w for w in g.wires))


def insert_source(d: Derivation, p: int) -> Derivation:
    """Thread an extra untouched source wire through ``d`` at position p.

    Agrees with ``circuit.insert_wire`` on the realised circuit.
    """
    if not 0 <= p <= len(d.roles):
        raise DerivationError(f"insert position {p} out of range for {len(d.roles)} wires")
    chain, base = unwind(d)
    heads = []
    cur = p
    for node in chain:
        if isinstance(node, Conjugate):
            heads.append(lambda x, g=_shift_unitary(node.gate, cur): Conjugate(g, x))
        elif isinstance(node, TargetGateLeft):
            heads.append(lambda x, g=_shift_unitary(node.gate, cur): TargetGateLeft(g, x))
        elif isinstance(node, TargetGateRight):
            heads.append(lambda x, g=_shift_unitary(node.gate, cur): TargetGateRight(x, g))
        elif isinstance(node, Ancilla):
            i = node.index if node.index < cur else node.index + 1
            heads.append(lambda x, b=node.value, i=i: Ancilla(b, i, x))
            if i < cur:
                cur += 1
        else:
            c = insert_wire(node.circuit, cur)
            heads.append(lambda x, c=c: EquivWitness(c, x))
    return _rebuild(heads, Identity(base.roles[:cur] + SOURCE + base.roles[cur:]))


# -- checks -------------------------------------------------------------------


def verify_witnesses(d: Derivation, tol=None) -> bool:
    """Check every EquivWitness claim by superoperator comparison."""
    chain, _ = unwind(d)
    return all(
        circuits_equivalent(node.circuit, realize(node.inner), tol) for node in chain if isinstance(node, EquivWitness)
    )


def source_controlled(d: Derivation) -> bool:
    """True if every conjugating gate that changes a source wire is controlled
    only by source wires.

    Derivations outside this fragment can change a source wire: with
    ``CNOT(t, s) ;; X(t) ;; CNOT(t, s)`` the source wire s ends up negated.
    """
    chain, _ = unwind(d)
    for node in chain:
        if isinstance(node, EquivWitness):
            return source_controlled(node.inner)
        if isinstance(node, Conjugate):
            roles = node.roles
            if roles[acts_on(node.gate)] == SOURCE and any(roles[w] != SOURCE for w in node.gate.wires[:-1]):
                return False
    return True


def noop_on(c: Circuit, i: int, tol=None) -> bool:
    """Whether ``init_at b i ;; c ;; assert_at b i`` is valid for both b."""
    n = c.n_in
    if c.in_kinds != (QUBIT,) * n or c.out_kinds != (QUBIT,) * n:
        raise CircuitError(f"noop_on needs a square all-qubit circuit, got {c!r}")
    if not 0 <= i < n:
        raise CircuitError(f"wire {i} out of range for {n} wires")
    return all(
        is_valid(in_seq(in_seq(init_at(b, n - 1, i), c), assert_at(b, n, i)), tol).valid for b in (False, True)
    )


def source_noop_failures(d: Derivation, tol=None) -> list[int]:
    """Source wires of ``d`` on which the realised circuit is not a no-op."""
    c = realize(d)
    return [i for i, r in enumerate(d.roles) if r == SOURCE and not noop_on(c, i, tol)]


def noop_on_source(d: Derivation, tol=None) -> bool:
    return not source_noop_failures(d, tol)


def cancel_assert_init(c: Circuit, tol=None, strict: bool = True) -> Circuit:
    """Drop a trailing ``assert_at b i ;; init_at b i`` pair.

    The assertion must be valid on the prefix; the result is re-checked for
    equivalence with the input. Without the pattern, raises if ``strict``,
    otherwise returns ``c`` unchanged.
    """
    tol = as_tol(tol)
    gates = c.gates
    has_pattern = (
        len(gates) >= 2
        and isinstance(gates[-2], Assert)
        and isinstance(gates[-1], Init)
        and gates[-2].value == gates[-1].value
        and gates[-2].wire == gates[-1].wire
    )
    if not has_pattern:
        if strict:
            raise DerivationError("circuit does not end with assert_at b i ;; init_at b i")
        return c
    a = gates[-2]
    prefix_assert = Circuit(c.in_type, _kinds_type(c, len(gates) - 1), gates[:-1])
    report = is_valid(prefix_assert, tol)
    if not report.valid:
        raise DerivationError(
            f"assert_at {a.value} {a.wire} is not valid on the prefix (trace defect {report.worst_trace_defect:g})"
        )
    out = Circuit(c.in_type, c.out_type, gates[:-2])
    if not circuits_equivalent(out, c, tol):
        raise DerivationError("cancellation changed the circuit's meaning")
    return out


def _kinds_type(c: Circuit, upto: int):
    kinds = list(c.in_kinds)
    for g in c.gates[:upto]:
        step(kinds, g)
    return from_kinds(kinds)


# -- JSON ---------------------------------------------------------------------


def derivation_to_json(d: Derivation) -> dict:
    chain, base = unwind(d)
    obj: dict = {"rule": "identity", "roles": base.roles}
    for node in reversed(chain):
        if isinstance(node, Conjugate):
            obj = {"rule": "conjugate", "gate": gate_to_json(node.gate), "inner": obj}
        elif isinstance(node, TargetGateLeft):
            obj = {"rule": "target_left", "gate": gate_to_json(node.gate), "inner": obj}
        elif isinstance(node, TargetGateRight):
            obj = {"rule": "target_right", "gate": gate_to_json(node.gate), "inner": obj}
        elif isinstance(node, Ancilla):
            obj = {"rule": "ancilla", "val": node.value, "w": node.index, "inner": obj}
        else:
            obj = {"rule": "equiv", "circuit": circuit_to_json(node.circuit), "inner": obj}
    return obj


def derivation_from_json(obj) -> Derivation:
    heads = []
    where = "$"
    try:
        while obj.get("rule") != "identity":
            rule = obj.get("rule")
            if rule in ("conjugate", "target_left", "target_right"):
                g = gate_from_json(obj["gate"], where + ".gate")
                if not isinstance(g, Unitary):
                    raise DerivationError(f"{rule} needs a unitary gate (at {where})")
                cls = {"conjugate": Conjugate, "target_left": TargetGateLeft}.get(rule)
                heads.append((lambda x, g=g, cls=cls: cls(g, x)) if cls else (lambda x, g=g: TargetGateRight(x, g)))
            elif rule == "ancilla":
                if not isinstance(obj["val"], bool) or not isinstance(obj["w"], int):
                    raise DerivationError(f"ancilla needs boolean val and integer w (at {where})")
                heads.append(lambda x, b=obj["val"], i=obj["w"]: Ancilla(b, i, x))
            elif rule == "equiv":
                c = circuit_from_json(obj["circuit"])
                heads.append(lambda x, c=c: EquivWitness(c, x))
            else:
                raise DerivationError(f"unknown rule {rule!r} (at {where})")
            obj = obj["inner"]
            where += ".inner"
        base = Identity(obj["roles"])
    except (KeyError, TypeError, AttributeError) as e:
        raise DerivationError(f"malformed derivation at {where}: {e}") from None
    return _rebuild(heads, base)


def dumps(d: Derivation) -> str:
    return json.dumps(derivation_to_json(d))


def loads(text: str) -> Derivation:
    return derivation_from_json(json.loads(text))
