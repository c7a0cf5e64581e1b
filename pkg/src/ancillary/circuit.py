"""Index-based circuit IR.

A circuit is a typed box: an input wire type, an output wire type and a flat
list of gate applications. Wires are addressed by their position in the
current wire list; ``Init`` inserts a fresh qubit at a position and
``Assert``/``Discard`` remove one, so the wire count changes along the
circuit. Wire 0 is the leftmost tensor factor (most significant bit of a
basis index).

Nested tensor types are flattened left to right.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

QUBIT = "q"
BIT = "b"

UNITARY_ARITY = {"X": 1, "H": 1, "Z": 1, "CNOT": 2, "Toffoli": 3}
CLASSICAL_UNITARIES = frozenset({"X", "CNOT", "Toffoli"})


class CircuitError(ValueError):
    pass


class CircuitParseError(CircuitError):
    def __init__(self, message: str, position):
        super().__init__(f"{message} (at {position})")
        self.position = position


# -- wire types ---------------------------------------------------------------


@dataclass(frozen=True)
class One:
    pass


@dataclass(frozen=True)
class Bit:
    pass


@dataclass(frozen=True)
class Qubit:
    pass


@dataclass(frozen=True)
class Tensor:
    left: "WireType"
    right: "WireType"


WireType = Union[One, Bit, Qubit, Tensor]


def flatten(w: WireType) -> tuple[str, ...]:
    """Wire kinds of ``w`` in canonical left-to-right order."""
    out: list[str] = []
    stack = [w]
    while stack:
        t = stack.pop()
        if isinstance(t, Tensor):
            stack.append(t.right)
            stack.append(t.left)
        elif isinstance(t, Qubit):
            out.append(QUBIT)
        elif isinstance(t, Bit):
            out.append(BIT)
        elif not isinstance(t, One):
            raise TypeError(f"not a wire type: {t!r}")
    return tuple(out)


def size(w: WireType) -> int:
    return len(flatten(w))


def from_kinds(kinds: Sequence[str]) -> WireType:
    """Right-nested tensor of the given kinds; ``One`` when empty."""
    leaves = [Qubit() if k == QUBIT else Bit() for k in kinds]
    if not leaves:
        return One()
    t: WireType = leaves[-1]
    for leaf in reversed(leaves[:-1]):
        t = Tensor(leaf, t)
    return t


def qubits(n: int) -> WireType:
    return from_kinds([QUBIT] * n)


# -- gates --------------------------------------------------------------------


@dataclass(frozen=True)
class Unitary:
    kind: str
    wires: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "wires", tuple(int(w) for w in self.wires))
        if self.kind not in UNITARY_ARITY:
            raise CircuitError(f"unknown unitary {self.kind!r}")
        if len(self.wires) != UNITARY_ARITY[self.kind]:
            raise CircuitError(f"{self.kind} takes {UNITARY_ARITY[self.kind]} wires, got {self.wires}")
        if len(set(self.wires)) != len(self.wires):
            raise CircuitError(f"{self.kind} wires must be distinct, got {self.wires}")
        if min(self.wires) < 0:
            raise CircuitError(f"negative wire index in {self.wires}")

    @property
    def classical(self) -> bool:
        return self.kind in CLASSICAL_UNITARIES


@dataclass(frozen=True)
class Init:
    value: bool
    wire: int


@dataclass(frozen=True)
class Meas:
    wire: int


@dataclass(frozen=True)
class Discard:
    wire: int


@dataclass(frozen=True)
class Assert:
    value: bool
    wire: int


Gate = Union[Unitary, Init, Meas, Discard, Assert]


def is_classical(g: Gate) -> bool:
    """True for the gates a classical reversible circuit is made of."""
    if isinstance(g, Unitary):
        return g.classical
    return isinstance(g, (Init, Assert))


def step(kinds: list[str], g: Gate, where="") -> None:
    """Advance a wire-kind list across one gate, raising on ill-typed use."""
    n = len(kinds)
    if isinstance(g, Unitary):
        for w in g.wires:
            if w >= n:
                raise CircuitError(f"{where}{g.kind} wire {w} out of range for {n} wires")
        if kinds[g.wires[-1]] != QUBIT:
            raise CircuitError(f"{where}{g.kind} target wire {g.wires[-1]} is classical")
        if len(g.wires) == 1 or g.kind not in ("CNOT", "Toffoli"):
            for w in g.wires:
                if kinds[w] != QUBIT:
                    raise CircuitError(f"{where}{g.kind} on classical wire {w}")
    elif isinstance(g, Init):
        if not 0 <= g.wire <= n:
            raise CircuitError(f"{where}init position {g.wire} out of range for {n} wires")
        kinds.insert(g.wire, QUBIT)
    elif isinstance(g, (Meas, Discard, Assert)):
        if not 0 <= g.wire < n:
            raise CircuitError(f"{where}{type(g).__name__.lower()} wire {g.wire} out of range for {n} wires")
        kind = kinds[g.wire]
        if isinstance(g, Meas):
            if kind != QUBIT:
                raise CircuitError(f"{where}meas on classical wire {g.wire}")
            kinds[g.wire] = BIT
        elif isinstance(g, Discard):
            if kind != BIT:
                raise CircuitError(f"{where}discard of quantum wire {g.wire}")
            del kinds[g.wire]
        else:
            if kind != QUBIT:
                raise CircuitError(f"{where}assert on classical wire {g.wire}")
            del kinds[g.wire]
    else:
        raise TypeError(f"not a gate: {g!r}")


# -- circuits -----------------------------------------------------------------


class Circuit:
    """An immutable typed gate list.

    Equality compares the flattened wire types and the gate list, so two
    circuits whose types differ only in tensor nesting compare equal.
    """

    __slots__ = ("in_type", "out_type", "gates", "_in", "_out")

    def __init__(self, in_type: WireType, out_type: WireType, gates: Iterable[Gate] = ()):
        self.in_type = in_type
        self.out_type = out_type
        self.gates = tuple(gates)
        self._in = flatten(in_type)
        self._out = flatten(out_type)
        kinds = list(self._in)
        for pos, g in enumerate(self.gates):
            step(kinds, g, where=f"gate {pos}: ")
        if tuple(kinds) != self._out:
            raise CircuitError(f"gates produce wires {''.join(kinds) or '-'}, declared output is {''.join(self._out) or '-'}")

    @property
    def in_kinds(self) -> tuple[str, ...]:
        return self._in

    @property
    def out_kinds(self) -> tuple[str, ...]:
        return self._out

    @property
    def n_in(self) -> int:
        return len(self._in)

    @property
    def n_out(self) -> int:
        return len(self._out)

    def wire_counts(self) -> list[int]:
        """Wire count before the first gate and after each gate."""
        counts = [self.n_in]
        n = self.n_in
        for g in self.gates:
            if isinstance(g, Init):
                n += 1
            elif isinstance(g, (Assert, Discard)):
                n -= 1
            counts.append(n)
        return counts

    def max_wires(self) -> int:
        return max(self.wire_counts())

    def is_classical(self) -> bool:
        return all(is_classical(g) for g in self.gates)

    def __eq__(self, other):
        if not isinstance(other, Circuit):
            return NotImplemented
        return self._in == other._in and self._out == other._out and self.gates == other.gates

    def __hash__(self):
        return hash((self._in, self._out, self.gates))

    def __len__(self):
        return len(self.gates)

    def __repr__(self):
        return f"Circuit({''.join(self._in) or '-'} -> {''.join(self._out) or '-'}, {len(self.gates)} gates)"


def id_circ(w: WireType) -> Circuit:
    return Circuit(w, w, ())


def in_seq(c1: Circuit, c2: Circuit) -> Circuit:
    """Sequential composition ``c1 ;; c2``."""
    if c1.out_kinds != c2.in_kinds:
        raise CircuitError(
            f"cannot sequence: output {''.join(c1.out_kinds) or '-'} does not match input {''.join(c2.in_kinds) or '-'}"
        )
    return Circuit(c1.in_type, c2.out_type, c1.gates + c2.gates)


def seq(*circuits: Circuit) -> Circuit:
    out = circuits[0]
    for c in circuits[1:]:
        out = in_seq(out, c)
    return out


def shift_gate(g: Gate, k: int) -> Gate:
    if isinstance(g, Unitary):
        return Unitary(g.kind, tuple(w + k for w in g.wires))
    if isinstance(g, Init):
        return Init(g.value, g.wire + k)
    if isinstance(g, Assert):
        return Assert(g.value, g.wire + k)
    if isinstance(g, Meas):
        return Meas(g.wire + k)
    return Discard(g.wire + k)


def in_par(c1: Circuit, c2: Circuit) -> Circuit:
    """Parallel composition ``c1 || c2``: c1 on the leading block, c2 after it.

    c1 runs first; c2's gates are then offset by c1's output width, which
    keeps c2's wires contiguous after c1's block.
    """
    k = c1.n_out
    gates = c1.gates + tuple(shift_gate(g, k) for g in c2.gates)
    return Circuit(Tensor(c1.in_type, c2.in_type), Tensor(c1.out_type, c2.out_type), gates)


def pad_front(k: int, c: Circuit) -> Circuit:
    """``id_circ || ... || c`` with k leading identity qubits."""
    if k == 0:
        return c
    return in_par(id_circ(qubits(k)), c)


def pad_back(c: Circuit, k: int) -> Circuit:
    if k == 0:
        return c
    return in_par(c, id_circ(qubits(k)))


def _single(n_in: int, n_out: int, g: Gate) -> Circuit:
    return Circuit(qubits(n_in), qubits(n_out), (g,))


def _check_indices(n: int, *idx: int) -> None:
    for i in idx:
        if not 0 <= i < n:
            raise CircuitError(f"index {i} out of range for {n} wires")
    if len(set(idx)) != len(idx):
        raise CircuitError(f"indices must be distinct, got {idx}")


def X_at(n: int, i: int) -> Circuit:
    _check_indices(n, i)
    return _single(n, n, Unitary("X", (i,)))


def H_at(n: int, i: int) -> Circuit:
    _check_indices(n, i)
    return _single(n, n, Unitary("H", (i,)))


def Z_at(n: int, i: int) -> Circuit:
    _check_indices(n, i)
    return _single(n, n, Unitary("Z", (i,)))


def CNOT_at(n: int, i: int, j: int) -> Circuit:
    """CNOT with control i and target j."""
    _check_indices(n, i, j)
    return _single(n, n, Unitary("CNOT", (i, j)))


def Toffoli_at(n: int, i: int, j: int, k: int) -> Circuit:
    """Toffoli with controls i, j and target k."""
    _check_indices(n, i, j, k)
    return _single(n, n, Unitary("Toffoli", (i, j, k)))


def init_at(b: bool, n: int, i: int) -> Circuit:
    """Insert a fresh qubit in state |b> at position i of n wires."""
    if not 0 <= i <= n:
        raise CircuitError(f"init position {i} out of range for {n} wires")
    return _single(n, n + 1, Init(bool(b), i))


def assert_at(b: bool, n: int, i: int) -> Circuit:
    """Assert wire i of n is |b> and remove it."""
    _check_indices(n, i)
    return _single(n, n - 1, Assert(bool(b), i))


def reverse(c: Circuit) -> Circuit:
    """Gate-reversed circuit with each init swapped for the matching assert.

    Every supported unitary is its own inverse, so unitaries are kept as is.
    """
    out: list[Gate] = []
    for g in reversed(c.gates):
        if isinstance(g, Unitary):
            out.append(g)
        elif isinstance(g, Init):
            out.append(Assert(g.value, g.wire))
        elif isinstance(g, Assert):
            out.append(Init(g.value, g.wire))
        else:
            raise CircuitError(f"{type(g).__name__.lower()} has no reverse")
    return Circuit(c.out_type, c.in_type, out)


def insert_wire(c: Circuit, p: int) -> Circuit:
    """Thread one extra untouched qubit through ``c`` at input position p.

    The extra wire's position is tracked across inits and asserts; an init at
    exactly the extra wire's position is placed after it.
    """
    if not 0 <= p <= c.n_in:
        raise CircuitError(f"insert position {p} out of range for {c.n_in} wires")
    cur = p
    out: list[Gate] = []
    for g in c.gates:
        if isinstance(g, Unitary):
            out.append(Unitary(g.kind, tuple(w + 1 if w >= cur else w for w in g.wires)))
        elif isinstance(g, Init):
            w = g.wire if g.wire < cur else g.wire + 1
            out.append(Init(g.value, w))
            if w < cur:
                cur += 1
        else:
            w = g.wire if g.wire < cur else g.wire + 1
            out.append(Assert(g.value, w) if isinstance(g, Assert) else type(g)(w))
            if not isinstance(g, Meas) and w < cur:
                cur -= 1
    in_k = list(c.in_kinds)
    in_k.insert(p, QUBIT)
    out_k = list(c.out_kinds)
    out_k.insert(cur, QUBIT)
    return Circuit(from_kinds(in_k), from_kinds(out_k), out)


# -- JSON ---------------------------------------------------------------------


def gate_to_json(g: Gate) -> dict:
    if isinstance(g, Unitary):
        return {"g": g.kind, "ws": list(g.wires)}
    if isinstance(g, Init):
        return {"g": "init", "val": g.value, "w": g.wire}
    if isinstance(g, Assert):
        return {"g": "assert", "val": g.value, "w": g.wire}
    if isinstance(g, Meas):
        return {"g": "meas", "w": g.wire}
    if not isinstance(g, Discard):
        raise TypeError(f"not a gate: {g!r}")
    return {"g": "discard", "w": g.wire}


def _type_to_json(kinds: tuple[str, ...]):
    nq = kinds.count(QUBIT)
    if kinds == (QUBIT,) * nq + (BIT,) * (len(kinds) - nq):
        return {"qubits": nq, "bits": len(kinds) - nq}
    # non-canonical orderings (e.g. after measuring a leading wire)
    return ["qubit" if k == QUBIT else "bit" for k in kinds]


def circuit_to_json(c: Circuit) -> dict:
    return {
        "in": _type_to_json(c.in_kinds),
        "out": _type_to_json(c.out_kinds),
        "gates": [gate_to_json(g) for g in c.gates],
    }


def serialize(c: Circuit) -> str:
    return json.dumps(circuit_to_json(c))


def _want(cond: bool, msg: str, where: str) -> None:
    if not cond:
        raise CircuitParseError(msg, where)


def _is_nat(v) -> bool:
    return isinstance(v, int) and not isinstance(v, bool) and v >= 0


def _type_from_json(obj, where: str) -> WireType:
    if isinstance(obj, dict):
        _want(set(obj) == {"qubits", "bits"}, "wire type needs exactly 'qubits' and 'bits'", where)
        _want(_is_nat(obj["qubits"]) and _is_nat(obj["bits"]), "wire counts must be non-negative integers", where)
        return from_kinds([QUBIT] * obj["qubits"] + [BIT] * obj["bits"])
    if isinstance(obj, list):
        _want(all(k in ("qubit", "bit") for k in obj), "wire list entries must be 'qubit' or 'bit'", where)
        return from_kinds([QUBIT if k == "qubit" else BIT for k in obj])
    raise CircuitParseError("wire type must be an object or a list", where)


def gate_from_json(obj, where: str = "gate") -> Gate:
    _want(isinstance(obj, dict), "gate must be an object", where)
    name = obj.get("g")
    if name in UNITARY_ARITY:
        _want(set(obj) == {"g", "ws"}, f"{name} takes fields g, ws", where)
        ws = obj["ws"]
        _want(isinstance(ws, list) and all(_is_nat(w) for w in ws), "ws must be a list of wire indices", where)
        try:
            return Unitary(name, tuple(ws))
        except CircuitError as e:
            raise CircuitParseError(str(e), where) from None
    if name in ("init", "assert"):
        _want(set(obj) == {"g", "val", "w"}, f"{name} takes fields g, val, w", where)
        _want(isinstance(obj["val"], bool), "val must be a boolean", where)
        _want(_is_nat(obj["w"]), "w must be a wire index", where)
        return (Init if name == "init" else Assert)(obj["val"], obj["w"])
    if name in ("meas", "discard"):
        _want(set(obj) == {"g", "w"}, f"{name} takes fields g, w", where)
        _want(_is_nat(obj["w"]), "w must be a wire index", where)
        return (Meas if name == "meas" else Discard)(obj["w"])
    raise CircuitParseError(f"unknown gate {name!r}", where)


def circuit_from_json(obj) -> Circuit:
    _want(isinstance(obj, dict), "circuit must be a JSON object", "$")
    _want(set(obj) == {"in", "out", "gates"}, "circuit needs exactly 'in', 'out', 'gates'", "$")
    _want(isinstance(obj["gates"], list), "gates must be a list", "$.gates")
    in_type = _type_from_json(obj["in"], "$.in")
    out_type = _type_from_json(obj["out"], "$.out")
    gates = [gate_from_json(g, f"$.gates[{i}]") for i, g in enumerate(obj["gates"])]
    try:
        return Circuit(in_type, out_type, gates)
    except CircuitError as e:
        raise CircuitParseError(str(e), "$.gates") from None


def parse_circuit(text: str) -> Circuit:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise CircuitParseError(e.msg, e.pos) from None
    return circuit_from_json(obj)
