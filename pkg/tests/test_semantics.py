import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ancillary.bexp import parse_bexp
from ancillary.circuit import (
    Bit,
    Circuit,
    CircuitError,
    H_at,
    Meas,
    Unitary,
    X_at,
    assert_at,
    id_circ,
    in_seq,
    init_at,
    Qubit,
)
from ancillary.compiler import compile_circuit
from ancillary.corpus import random_circuit, random_classical_circuit
from ancillary.semantics import (
    Mode,
    all_bit_vectors,
    basis_state,
    bits_to_index,
    bool_to_matrix,
    bools_to_matrix,
    channel_factor,
    ctx_to_matrix,
    denote,
    denote_basis,
    denote_basis_batch,
    denote_basis_states,
    density_to_json,
    index_to_bits,
    superoperator_dense,
    superoperator_of,
)
from oracles import basis_density, ref_basis, ref_denote, random_density
from strategies import circuits

KET0 = np.diag([1, 0]).astype(complex)
KET1 = np.diag([0, 1]).astype(complex)
PLUS = np.full((2, 2), 0.5, dtype=complex)


def test_x_flips_zero():
    assert np.allclose(denote(X_at(1, 0), KET0, Mode.SAFE), KET1)


def test_meas_decoheres_plus():
    c = Circuit(Qubit(), Bit(), [Meas(0)])
    assert np.allclose(denote(c, PLUS, "safe"), np.diag([0.5, 0.5]))


def test_assert_false_on_one():
    c = assert_at(False, 1, 0)
    assert np.allclose(denote(c, KET1, Mode.UNSAFE), [[0]])
    assert np.allclose(denote(c, KET1, Mode.SAFE), [[1]])


def test_denote_dimension_mismatch():
    with pytest.raises(ValueError):
        denote(X_at(1, 0), np.eye(4))


def test_superoperator_examples():
    assert np.allclose(superoperator_of(id_circ(Qubit()), Mode.SAFE).mat, np.eye(4))
    perm = np.zeros((4, 4))
    # vec index 2i+j carries rho[i, j]; X sends it to rho[1-i, 1-j]
    for i in range(2):
        for j in range(2):
            perm[2 * (1 - i) + (1 - j), 2 * i + j] = 1
    assert np.allclose(superoperator_of(X_at(1, 0)).mat, perm)


def test_superoperator_apply_matches_denote():
    rng = np.random.default_rng(3)
    c = compile_circuit(parse_bexp("x ^ y"), ["x", "y"])
    rho = random_density(rng, 3)
    s = superoperator_of(c)
    assert np.allclose(s.apply(rho), denote(c, rho))


def test_denote_basis_examples():
    assert denote_basis(X_at(1, 0), [False]) == ([True], True)
    c = in_seq(init_at(True, 0, 0), assert_at(False, 1, 0))
    assert denote_basis(c, []) == ([], False)
    with pytest.raises(CircuitError):
        denote_basis(H_at(1, 0), [False])
    with pytest.raises(ValueError):
        denote_basis(X_at(1, 0), [False, True])


def test_denote_basis_matches_denote_on_and_oracle():
    c = compile_circuit(parse_bexp("x & y"), ["x", "y"])
    for k in range(8):
        bits = index_to_bits(k, 3)
        out, ok = denote_basis(c, bits)
        assert ok
        assert np.allclose(denote(c, bools_to_matrix(bits)), bools_to_matrix(out))


def test_state_builders():
    assert np.allclose(bool_to_matrix(False), np.diag([1, 0]))
    assert np.allclose(bools_to_matrix([True, False]), np.diag([0, 0, 1, 0]))
    assert np.allclose(ctx_to_matrix([], {}), [[1]])
    assert np.allclose(basis_state(["y", "x"], {"x": True, "y": False}), np.diag([0, 1, 0, 0]))
    assert bits_to_index([True, False, True]) == 5
    assert index_to_bits(5, 3) == [True, False, True]
    assert density_to_json(np.array([[1j]])) == [[[0.0, 1.0]]]


def test_all_bit_vectors_order():
    v = all_bit_vectors(3)
    assert [bits_to_index(row) for row in v] == list(range(8))


def test_init_assert_is_identity_both_modes():
    for b in (False, True):
        for n in range(3):
            for i in range(n + 1):
                c = in_seq(init_at(b, n, i), assert_at(b, n + 1, i))
                for mode in Mode:
                    assert np.allclose(superoperator_of(c, mode).mat, np.eye(4**n))


# -- properties -----------------------------------------------------------------


@settings(max_examples=60)
@given(circuits(max_wires=4, max_len=8), st.integers(0, 2**32 - 1))
def test_safe_preserves_and_unsafe_shrinks_trace(c, seed):
    rho = random_density(np.random.default_rng(seed), c.n_in)
    assert abs(np.trace(denote(c, rho, Mode.SAFE)) - 1) < 1e-9
    assert np.trace(denote(c, rho, Mode.UNSAFE)).real <= 1 + 1e-9


@settings(max_examples=60)
@given(circuits(max_wires=3, max_len=6), st.integers(0, 2**32 - 1))
def test_denote_matches_kron_oracle(c, seed):
    rho = random_density(np.random.default_rng(seed), c.n_in)
    for mode in Mode:
        assert np.allclose(denote(c, rho, mode), ref_denote(c, rho, mode.value), atol=1e-12)


@given(circuits(max_wires=4, max_len=8))
def test_engines_agree(c):
    for mode in Mode:
        fast = superoperator_of(c, mode).mat
        assert np.max(np.abs(fast - superoperator_dense(c, mode).mat), initial=0) < 1e-12
        # chunked per-unit path, forced by a zero term budget
        assert np.max(np.abs(fast - superoperator_of(c, mode, chunk=7, max_terms=0).mat), initial=0) < 1e-12


@given(circuits(max_wires=4, max_len=8))
def test_basis_states_match_dense(c):
    idx = list(range(2**c.n_in))
    units = np.stack([basis_density(index_to_bits(i, c.n_in)) for i in idx]) if idx else None
    for mode in Mode:
        assert np.allclose(denote_basis_states(c, idx, mode), denote(c, units, mode))


@given(circuits(max_wires=4, max_len=8))
def test_channel_factor_reproduces_superoperator(c):
    k = channel_factor(c, Mode.UNSAFE)
    d = 2**c.n_in
    s = superoperator_of(c, Mode.UNSAFE)
    for i in range(d):
        for j in range(d):
            image = k[i] @ k[j].conj().T
            assert np.allclose(image.reshape(-1), s.mat[:, i * d + j])


@given(circuits(max_wires=4, max_len=8, min_in=4, max_in=4, meas=False))
def test_unitary_only_modes_agree_and_keep_psd(c):
    # dropping everything but unitaries keeps wire indices in range at full width
    c = Circuit(c.in_type, c.in_type, [g for g in c.gates if isinstance(g, Unitary)])
    assert np.allclose(superoperator_of(c, Mode.SAFE).mat, superoperator_of(c, Mode.UNSAFE).mat)
    rho = random_density(np.random.default_rng(0), c.n_in)
    assert np.linalg.eigvalsh(denote(c, rho)).min() > -1e-9


def test_denote_basis_exhaustive_up_to_six_wires():
    rng = random.Random(11)
    for n in range(7):
        for _ in range(15):
            c = random_classical_circuit(rng, n, rng.randint(0, 14), max_wires=6)
            inputs = all_bit_vectors(n)
            out, ok = denote_basis_batch(c, inputs)
            for k, bits in enumerate(inputs):
                expected = ref_basis(c, list(bits))
                assert denote_basis(c, list(bits)) == expected
                assert (list(out[k]), bool(ok[k])) == expected
            # the density path on the same inputs, kept to small widths
            if c.n_in <= 4 and c.n_out <= 4:
                states = denote_basis_states(c, range(2**n), Mode.UNSAFE)
                for k, bits in enumerate(inputs):
                    exp_bits, exp_ok = ref_basis(c, list(bits))
                    want = bools_to_matrix(exp_bits) if exp_ok else np.zeros_like(states[k])
                    assert np.allclose(states[k], want)


def test_random_quantum_circuits_trace_preserving():
    rng = random.Random(5)
    nrng = np.random.default_rng(5)
    for _ in range(40):
        c = random_circuit(rng, rng.randint(0, 3), 10)
        rho = random_density(nrng, c.n_in)
        assert abs(np.trace(denote(c, rho)) - 1) < 1e-9
