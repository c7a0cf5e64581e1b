import json

import numpy as np
import pytest
from hypothesis import given

from ancillary.circuit import (
    BIT,
    QUBIT,
    Assert,
    Bit,
    Circuit,
    CircuitError,
    CircuitParseError,
    CNOT_at,
    Discard,
    Init,
    Meas,
    One,
    Qubit,
    Tensor,
    Toffoli_at,
    Unitary,
    X_at,
    assert_at,
    circuit_from_json,
    id_circ,
    in_par,
    in_seq,
    init_at,
    insert_wire,
    pad_back,
    pad_front,
    parse_circuit,
    qubits,
    reverse,
    serialize,
    size,
)
from ancillary.compiler import compile_circuit
from ancillary.bexp import parse_bexp
from ancillary.semantics import denote_basis, superoperator_of
from ancillary.validity import circuits_equivalent
from oracles import gate_matrix, ref_basis, ref_superoperator
from strategies import circuits, square_classical


def test_wire_type_sizes():
    assert size(One()) == 0
    assert size(Bit()) == size(Qubit()) == 1
    assert size(Tensor(Qubit(), Tensor(Bit(), One()))) == 2


def test_unitary_validation():
    with pytest.raises(CircuitError):
        Unitary("CNOT", (0,))
    with pytest.raises(CircuitError):
        Unitary("CNOT", (1, 1))
    with pytest.raises(CircuitError):
        Unitary("SWAP", (0, 1))


def test_trajectory_checks():
    with pytest.raises(CircuitError):
        Circuit(qubits(1), qubits(2), [Unitary("X", (0,))])
    with pytest.raises(CircuitError):
        Circuit(qubits(1), qubits(1), [Unitary("X", (1,))])
    # discard needs a classical wire, assert a quantum one
    with pytest.raises(CircuitError):
        Circuit(qubits(1), One(), [Discard(0)])
    with pytest.raises(CircuitError):
        Circuit(qubits(1), One(), [Meas(0), Assert(False, 0)])
    # bits may control but not be targeted
    c = Circuit(qubits(2), Tensor(Bit(), Qubit()), [Meas(0), Unitary("CNOT", (0, 1))])
    assert c.out_kinds == (BIT, QUBIT)
    with pytest.raises(CircuitError):
        Circuit(qubits(2), Tensor(Bit(), Qubit()), [Meas(0), Unitary("CNOT", (1, 0))])


def test_id_circ():
    assert len(id_circ(Qubit())) == 0
    assert np.allclose(superoperator_of(id_circ(qubits(2))).mat, np.eye(16))
    c = X_at(2, 1)
    assert in_seq(id_circ(qubits(2)), c) == c
    assert in_seq(c, id_circ(qubits(2))) == c


def test_in_seq_counts_and_types():
    c = in_seq(X_at(1, 0), X_at(1, 0))
    assert len(c) == 2
    assert circuits_equivalent(c, id_circ(Qubit()))
    with pytest.raises(CircuitError):
        in_seq(X_at(1, 0), X_at(2, 0))


def test_in_par_examples():
    c = X_at(1, 0)
    assert in_par(id_circ(One()), c) == c
    both = in_par(X_at(1, 0), X_at(1, 0))
    for a in (False, True):
        for b in (False, True):
            assert denote_basis(both, [a, b]) == ([not a, not b], True)


def superop_kron(s1, d1, s2, d2):
    """Superoperator of a product channel, with row-major vectorisation."""
    t1 = s1.reshape(d1, d1, d1, d1)
    t2 = s2.reshape(d2, d2, d2, d2)
    t = np.einsum("abij,cdkl->acbdikjl", t1, t2)
    d = d1 * d2
    return t.reshape(d * d, d * d)


def unitary_only(width):
    # no room for inits, and asserts are dropped, so the width never changes
    return circuits(max_wires=width, max_len=4, min_in=width, max_in=width, meas=False).map(
        lambda c: Circuit(c.in_type, c.in_type, [g for g in c.gates if isinstance(g, Unitary)])
    )


@given(unitary_only(1), unitary_only(2))
def test_in_par_is_kron_of_blocks(c1, c2):
    par = in_par(c1, c2)
    expected = superop_kron(superoperator_of(c1).mat, 2**c1.n_in, superoperator_of(c2).mat, 2**c2.n_in)
    assert np.max(np.abs(superoperator_of(par).mat - expected)) < 1e-9


def test_in_par_x_h_against_full_unitary():
    x, h = X_at(1, 0), Circuit(qubits(1), qubits(1), [Unitary("H", (0,))])
    u = np.kron(gate_matrix("X", (0,), 1), gate_matrix("H", (0,), 1))
    expected = np.kron(u, u.conj())
    assert np.max(np.abs(superoperator_of(in_par(x, h)).mat - expected)) < 1e-12


def test_in_par_keeps_second_block_contiguous():
    # c1 grows by one wire; c2's gates must land after c1's output block
    c1 = init_at(False, 1, 1)
    c2 = X_at(1, 0)
    par = in_par(c1, c2)
    assert par.gates[-1] == Unitary("X", (2,))
    assert denote_basis(par, [True, False]) == ([True, False, True], True)


def test_single_gate_builders():
    assert denote_basis(CNOT_at(2, 0, 1), [True, False])[0] == [True, True]
    assert denote_basis(Toffoli_at(3, 0, 1, 2), [True, True, False])[0] == [True, True, True]
    assert denote_basis(Toffoli_at(3, 0, 1, 2), [True, False, False])[0] == [True, False, False]
    assert denote_basis(init_at(True, 2, 1), [True, False])[0] == [True, True, False]
    for bad in (lambda: CNOT_at(2, 0, 2), lambda: CNOT_at(2, 1, 1), lambda: init_at(False, 1, 3), lambda: assert_at(False, 1, 1)):
        with pytest.raises(CircuitError):
            bad()


def test_cnot_at_permutation_matches_enumeration():
    c = CNOT_at(3, 2, 0)
    perm = np.zeros((8, 8))
    for i in range(8):
        bits = [bool(i >> (2 - k) & 1) for k in range(3)]
        out, _ = ref_basis(c, bits)
        j = sum(int(b) << (2 - k) for k, b in enumerate(out))
        perm[j, i] = 1
    assert np.array_equal(perm, gate_matrix("CNOT", (2, 0), 3).real)


def test_init_then_assert_is_identity_on_nothing():
    c = in_seq(init_at(False, 0, 0), assert_at(False, 1, 0))
    assert c.n_in == c.n_out == 0
    assert np.allclose(superoperator_of(c, "safe").mat, [[1]])
    assert np.allclose(superoperator_of(c, "unsafe").mat, [[1]])


def test_pad_helpers():
    c = X_at(1, 0)
    assert pad_front(2, c).gates == (Unitary("X", (2,)),)
    assert pad_back(c, 2).gates == (Unitary("X", (0,)),)
    assert pad_back(c, 2).n_in == 3


def test_reverse_swaps_init_and_assert():
    c = Circuit(qubits(1), qubits(1), [Init(True, 0), Unitary("CNOT", (0, 1)), Assert(True, 0)])
    r = reverse(c)
    assert r.gates == (Init(True, 0), Unitary("CNOT", (0, 1)), Assert(True, 0))
    with pytest.raises(CircuitError):
        reverse(Circuit(qubits(1), Bit(), [Meas(0)]))


@given(square_classical())
def test_insert_wire_threads_an_untouched_wire(c):
    for p in range(c.n_in + 1):
        wide = insert_wire(c, p)
        assert wide.n_in == c.n_in + 1
        for k in range(2 ** c.n_in):
            bits = [bool(k >> j & 1) for j in range(c.n_in)]
            out, ok = denote_basis(c, bits)
            for extra in (False, True):
                wout, wok = denote_basis(wide, bits[:p] + [extra] + bits[p:])
                assert wok == ok
                assert extra in wout and sorted(wout) == sorted(out + [extra])


# -- JSON -------------------------------------------------------------------


def test_round_trip_compiled_and_empty():
    c = compile_circuit(parse_bexp("x & y"), ["x", "y"])
    assert parse_circuit(serialize(c)) == c
    empty = id_circ(qubits(0))
    assert parse_circuit(serialize(empty)) == empty


def test_json_shape():
    c = Circuit(qubits(2), Tensor(qubits(1), Bit()), [Unitary("CNOT", (0, 1)), Meas(1)])
    obj = json.loads(serialize(c))
    assert obj == {
        "in": {"qubits": 2, "bits": 0},
        "out": {"qubits": 1, "bits": 1},
        "gates": [{"g": "CNOT", "ws": [0, 1]}, {"g": "meas", "w": 1}],
    }


def test_json_non_canonical_order():
    c = Circuit(qubits(2), Tensor(Bit(), Qubit()), [Meas(0)])
    obj = json.loads(serialize(c))
    assert obj["out"] == ["bit", "qubit"]
    assert parse_circuit(serialize(c)) == c


@pytest.mark.parametrize(
    "text, where",
    [
        ('{"in": {"qubits": 1, "bits": 0}, "out": {"qubits": 1, "bits": 0}, "gates": [{"g": "SWAP", "ws": [0]}]}', "$.gates[0]"),
        ('{"in": {"qubits": 1, "bits": 0}, "out": {"qubits": 1, "bits": 0}, "gates": [{"g": "init", "val": 1, "w": 0}]}', "$.gates[0]"),
        ('{"in": {"qubits": -1, "bits": 0}, "out": {"qubits": 1, "bits": 0}, "gates": []}', "$.in"),
        ('{"in": {"qubits": 1, "bits": 0}, "gates": []}', "$"),
        ('{"in": {"qubits": 1, "bits": 0}, "out": {"qubits": 2, "bits": 0}, "gates": []}', "$.gates"),
    ],
)
def test_parse_errors_name_position(text, where):
    with pytest.raises(CircuitParseError) as e:
        parse_circuit(text)
    assert e.value.position == where


def test_parse_syntax_error_has_offset():
    with pytest.raises(CircuitParseError) as e:
        parse_circuit('{"in": ')
    assert e.value.position == 7


@given(circuits(max_len=12))
def test_json_round_trip_property(c):
    text = serialize(c)
    back = parse_circuit(text)
    assert back == c
    assert serialize(back) == text
    assert circuit_from_json(json.loads(text)) == c


@given(circuits(max_wires=3, max_len=6))
def test_engine_against_kron_oracle(c):
    # ties the index arithmetic to explicit Kronecker padding
    for mode in ("safe", "unsafe"):
        assert np.max(np.abs(superoperator_of(c, mode).mat - ref_superoperator(c, mode)), initial=0) < 1e-9
