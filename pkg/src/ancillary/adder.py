"""Ripple-carry adder assembled from compiled one-bit oracles.

External wire order for width n (2 + 3n wires)::

    [cout, sum_n, y_n, x_n, ..., sum_1, y_1, x_1, cin]

Bit 1 is the least significant. Inside ``adder_circ`` each intermediate carry
lives on an ancilla placed just above the bit block that produced it, so the
internal order is ``[cout, sum_n, y_n, x_n, c_{n-1}, sum_{n-1}, ...]``.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Sequence

import numpy as np

from .bexp import And, Var, Xor
from .circuit import Circuit, assert_at, id_circ, init_at, pad_back, pad_front, qubits, seq
from .compiler import compile_circuit
from .linalg import as_tol
from .semantics import (
    Mode,
    all_bit_vectors,
    bits_to_index,
    denote_basis,
    denote_basis_batch,
    denote_basis_states,
    index_to_bits,
)

CARRY_EXPR = Xor(And(Var("cin"), Xor(Var("x"), Var("y"))), And(Var("x"), Var("y")))
SUM_EXPR = Xor(Xor(Var("x"), Var("y")), Var("cin"))


@lru_cache(maxsize=None)
def carry_circ() -> Circuit:
    """5 wires [cout, sum, y, x, cin]: cout ^= majority(x, y, cin)."""
    return compile_circuit(CARRY_EXPR, ["sum", "y", "x", "cin"])


@lru_cache(maxsize=None)
def sum_circ() -> Circuit:
    """4 wires [sum, y, x, cin]: sum ^= x ^ y ^ cin."""
    return compile_circuit(SUM_EXPR, ["y", "x", "cin"])


@lru_cache(maxsize=None)
def adder_1() -> Circuit:
    return seq(carry_circ(), pad_front(1, sum_circ()))


def n_wires(n: int) -> int:
    return 2 + 3 * n


def _check_n(n: int) -> None:
    if n < 0:
        raise ValueError(f"adder width must be non-negative, got {n}")


@lru_cache(maxsize=None)
def adder_left(n: int) -> Circuit:
    """1 + 3n wires in, 1 + 4n out; computes every carry and sum bit."""
    _check_n(n)
    if n == 0:
        return id_circ(qubits(1))
    return seq(pad_front(3, adder_left(n - 1)), init_at(False, 4 * n, 0), pad_back(adder_1(), 4 * (n - 1)))


@lru_cache(maxsize=None)
def adder_right(n: int) -> Circuit:
    """1 + 4n wires in, 1 + 3n out; uncomputes the carries and drops them."""
    _check_n(n)
    if n == 0:
        return id_circ(qubits(1))
    return seq(pad_back(carry_circ(), 4 * (n - 1)), assert_at(False, 4 * n + 1, 0), pad_front(3, adder_right(n - 1)))


@lru_cache(maxsize=None)
def adder_circ(n: int) -> Circuit:
    _check_n(n)
    if n == 0:
        return id_circ(qubits(2))
    return seq(
        pad_front(4, adder_left(n - 1)),
        pad_back(adder_1(), 4 * (n - 1)),
        pad_front(4, adder_right(n - 1)),
    )


# -- classical reference ------------------------------------------------------


def compute_adder_n(n: int, bits: Sequence[bool]) -> list[bool]:
    """Classical ripple carry on the external layout.

    The sum bits and the final carry are xor-ed onto the sum and cout wires;
    x, y and cin pass through. Width 0 has no carry-out stage, so nothing
    changes, matching ``adder_circ(0)``.
    """
    bits = np.asarray([bool(b) for b in bits], dtype=bool)
    if bits.shape != (n_wires(n),):
        raise ValueError(f"adder of width {n} takes {n_wires(n)} bits, got {bits.size}")
    return compute_adder_batch(n, bits[None])[0].tolist()


def compute_adder_batch(n: int, bits: np.ndarray) -> np.ndarray:
    """``compute_adder_n`` on each row of a boolean array."""
    _check_n(n)
    bits = np.asarray(bits, dtype=bool)
    out = bits.copy()
    carry = bits[:, -1]
    for k in range(1, n + 1):
        s, y, x = _bit_block(n, k)
        xv, yv = bits[:, x], bits[:, y]
        out[:, s] = bits[:, s] ^ xv ^ yv ^ carry
        carry = (carry & (xv ^ yv)) ^ (xv & yv)
    if n:
        out[:, 0] = bits[:, 0] ^ carry
    return out


def _bit_block(n: int, k: int) -> tuple[int, int, int]:
    """Wire indices of (sum_k, y_k, x_k); k = 1 is the least significant bit."""
    base = 1 + 3 * (n - k)
    return base, base + 1, base + 2


def encode(n: int, x: int, y: int, cin: bool = False, total: int = 0, cout: bool = False) -> list[bool]:
    """Bit vector in the external layout for the given integers."""
    for name, v in (("x", x), ("y", y), ("sum", total)):
        if not 0 <= v < 2**n:
            raise ValueError(f"{name}={v} does not fit in {n} bits")
    bits = [False] * n_wires(n)
    bits[0] = bool(cout)
    bits[-1] = bool(cin)
    for k in range(1, n + 1):
        s, yw, xw = _bit_block(n, k)
        bits[s] = bool(total >> (k - 1) & 1)
        bits[yw] = bool(y >> (k - 1) & 1)
        bits[xw] = bool(x >> (k - 1) & 1)
    return bits


def decode(n: int, bits: Sequence[bool]) -> dict:
    """Integers held by an external-layout bit vector."""
    fields = {"x": 0, "y": 0, "sum": 0}
    for k in range(1, n + 1):
        s, yw, xw = _bit_block(n, k)
        fields["sum"] |= int(bits[s]) << (k - 1)
        fields["y"] |= int(bits[yw]) << (k - 1)
        fields["x"] |= int(bits[xw]) << (k - 1)
    fields["cin"] = int(bits[-1])
    fields["cout"] = int(bits[0])
    return fields


def add(n: int, x: int, y: int, cin: bool = False) -> tuple[int, int, bool]:
    """Run ``adder_circ(n)`` on integers; returns (sum, cout, asserts_ok)."""
    out, ok = denote_basis(adder_circ(n), encode(n, x, y, cin))
    fields = decode(n, out)
    return fields["sum"], fields["cout"], ok


# -- checks -------------------------------------------------------------------


def adder_1_expected(bits: Sequence[bool]) -> list[bool]:
    cout, s, y, x, cin = (bool(b) for b in bits)
    carry = (cin and (x != y)) != (x and y)
    return [cout != carry, s != ((x != y) != cin), y, x, cin]


def density_defect(c: Circuit, expected_bits, chunk: int = 16) -> float:
    """Largest entrywise gap, over every basis input and both semantics,
    between the output density matrix and the expected basis state."""
    n = c.n_in
    worst = 0.0
    d = 2**c.n_out
    for start in range(0, 2**n, chunk):
        idx = list(range(start, min(start + chunk, 2**n)))
        expected = np.zeros((len(idx), d, d), dtype=np.complex128)
        for row, i in enumerate(idx):
            j = bits_to_index(expected_bits(index_to_bits(i, n)))
            expected[row, j, j] = 1
        for mode in (Mode.SAFE, Mode.UNSAFE):
            out = denote_basis_states(c, idx, mode)
            worst = max(worst, float(np.max(np.abs(out - expected))))
    return worst


def basis_failures(n: int) -> np.ndarray:
    """Inputs (one per row) on which ``adder_circ(n)`` disagrees with
    ``compute_adder_n`` or trips an assertion."""
    inputs = all_bit_vectors(n_wires(n))
    out, valid = denote_basis_batch(adder_circ(n), inputs)
    bad = ~valid | np.any(out != compute_adder_batch(n, inputs), axis=1)
    return inputs[bad]


def check_adder_spec(n: int, tol=None, path: str = "auto") -> bool:
    """``adder_circ(n)`` against ``compute_adder_n`` on every basis input.

    The density path compares full output density matrices under both
    semantics; the basis path compares bit vectors and assertion outcomes.
    ``auto`` uses the density path up to n = 2.
    """
    if path == "auto":
        path = "density" if n <= 2 else "basis"
    if path == "density":
        return density_defect(adder_circ(n), lambda b: compute_adder_n(n, b)) <= as_tol(tol).eps
    if path == "basis":
        return len(basis_failures(n)) == 0
    raise ValueError(f"unknown path {path!r}")
