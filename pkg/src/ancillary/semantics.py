"""Safe and unsafe density-matrix semantics.

Two engines implement the same gate formulas:

* ``denote`` works on dense density matrices (optionally batched along a
  leading axis) and is the reference implementation.
* ``denote_factored`` carries a matrix as a pair of factors ``rho = A @ B^H``.
  Unitaries, inits and unsafe asserts act on each factor; safe asserts,
  discards and measurements split each factor into its two branches. The
  representation is exact and keeps basis-state and matrix-unit inputs cheap
  on circuits whose internal width would make dense matrices impractical.

Gates act on the wires they name; every other wire is left untouched, which is
the same as padding the gate with identities (checked against explicit
Kronecker products in the tests).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping, Sequence

import numpy as np

from .circuit import Assert, Circuit, CircuitError, Discard, Gate, Init, Meas, Unitary

SQRT_HALF = 1 / np.sqrt(2)

GATE_MATRICES = {
    "X": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "H": SQRT_HALF * np.array([[1, 1], [1, -1]], dtype=np.complex128),
    "Z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
    "CNOT": np.array(
        [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=np.complex128
    ),
}
_toffoli = np.eye(8, dtype=np.complex128)
_toffoli[6:, 6:] = GATE_MATRICES["X"]
GATE_MATRICES["Toffoli"] = _toffoli
del _toffoli


class Mode(enum.Enum):
    SAFE = "safe"
    UNSAFE = "unsafe"


def as_mode(mode) -> Mode:
    return mode if isinstance(mode, Mode) else Mode(str(mode).lower())


@dataclass(frozen=True)
class Superoperator:
    """Matrix acting on row-major vectorised density matrices."""

    in_wires: int
    out_wires: int
    mat: np.ndarray

    def apply(self, rho: np.ndarray) -> np.ndarray:
        d = 2**self.out_wires
        return (self.mat @ rho.reshape(-1)).reshape(d, d)


# -- row kernels --------------------------------------------------------------
# All kernels act on the middle axis of an array shaped (batch, 2**n, k).


@lru_cache(maxsize=None)
def _permutation(kind: str, wires: tuple[int, ...], n: int) -> np.ndarray:
    idx = np.arange(2**n)
    bit = lambda w: (idx >> (n - 1 - w)) & 1  # noqa: E731
    flip = 1 << (n - 1 - wires[-1])
    if kind == "X":
        cond = np.ones_like(idx, dtype=bool)
    elif kind == "CNOT":
        cond = bit(wires[0]) == 1
    else:
        cond = (bit(wires[0]) & bit(wires[1])) == 1
    return np.where(cond, idx ^ flip, idx)


def _rows_unitary(m: np.ndarray, n: int, g: Unitary, adjoint: bool = False) -> np.ndarray:
    if g.classical:
        return m[:, _permutation(g.kind, g.wires, n), :]
    u = GATE_MATRICES[g.kind]
    if adjoint:
        u = u.conj().T
    k = len(g.wires)
    batch, cols = m.shape[0], m.shape[-1]
    t = m.reshape((batch,) + (2,) * n + (cols,))
    axes = [1 + w for w in g.wires]
    t = np.moveaxis(t, axes, list(range(1, k + 1)))
    shape = t.shape
    t = (u @ t.reshape(batch, 2**k, -1)).reshape(shape)
    t = np.moveaxis(t, list(range(1, k + 1)), axes)
    return t.reshape(m.shape)


def _rows_insert(m: np.ndarray, n: int, i: int, b: bool) -> np.ndarray:
    batch, cols = m.shape[0], m.shape[-1]
    out = np.zeros((batch, 2**i, 2, 2 ** (n - i), cols), dtype=m.dtype)
    out[:, :, int(b)] = m.reshape(batch, 2**i, 2 ** (n - i), cols)
    return out.reshape(batch, 2 ** (n + 1), cols)


def _rows_project(m: np.ndarray, n: int, i: int, b: bool) -> np.ndarray:
    """<b|_i applied to the rows: removes wire i."""
    batch, cols = m.shape[0], m.shape[-1]
    t = m.reshape(batch, 2**i, 2, 2 ** (n - i - 1), cols)[:, :, int(b)]
    return t.reshape(batch, 2 ** (n - 1), cols)


def _rows_keep(m: np.ndarray, n: int, i: int, b: bool) -> np.ndarray:
    """|b><b|_i applied to the rows: wire i is kept."""
    batch, cols = m.shape[0], m.shape[-1]
    out = m.reshape(batch, 2**i, 2, 2 ** (n - i - 1), cols).copy()
    out[:, :, 1 - int(b)] = 0
    return out.reshape(m.shape)


def _cols(fn, m: np.ndarray, *args) -> np.ndarray:
    """Apply a real row kernel to the columns instead."""
    return fn(m.swapaxes(1, 2), *args).swapaxes(1, 2)


# -- dense engine -------------------------------------------------------------


def _dense_gate(rho: np.ndarray, n: int, g: Gate, mode: Mode) -> np.ndarray:
    if isinstance(g, Unitary):
        if g.classical:
            p = _permutation(g.kind, g.wires, n)
            return rho[:, p][:, :, p]
        left = _rows_unitary(rho, n, g)
        return _rows_unitary(left.conj().swapaxes(1, 2), n, g).conj().swapaxes(1, 2)
    if isinstance(g, Init):
        return _cols(_rows_insert, _rows_insert(rho, n, g.wire, g.value), n, g.wire, g.value)
    if isinstance(g, Assert) and mode is Mode.UNSAFE:
        return _cols(_rows_project, _rows_project(rho, n, g.wire, g.value), n, g.wire, g.value)
    if isinstance(g, (Assert, Discard)):
        return sum(
            _cols(_rows_project, _rows_project(rho, n, g.wire, b), n, g.wire, b) for b in (False, True)
        )
    if isinstance(g, Meas):
        return sum(_cols(_rows_keep, _rows_keep(rho, n, g.wire, b), n, g.wire, b) for b in (False, True))
    raise TypeError(f"not a gate: {g!r}")


def _wire_steps(c: Circuit):
    n = c.n_in
    for g in c.gates:
        yield n, g
        if isinstance(g, Init):
            n += 1
        elif isinstance(g, (Assert, Discard)):
            n -= 1


def denote(c: Circuit, rho: np.ndarray, mode=Mode.SAFE) -> np.ndarray:
    """Apply ``c`` to a density matrix (or a stack of them) under ``mode``.

    Inputs need not be positive or normalised; the gate formulas are applied
    linearly, which is what superoperator extraction relies on.
    """
    mode = as_mode(mode)
    rho = np.asarray(rho, dtype=np.complex128)
    single = rho.ndim == 2
    if single:
        rho = rho[None]
    d = 2**c.n_in
    if rho.shape[1:] != (d, d):
        raise ValueError(f"circuit expects {d}x{d} density matrices, got {rho.shape[1:]}")
    for n, g in _wire_steps(c):
        rho = _dense_gate(rho, n, g, mode)
    return rho[0] if single else rho


# -- factored engine ----------------------------------------------------------


def _prune(a: np.ndarray, b: np.ndarray, n: int):
    """Drop exactly-zero terms and cap the number of terms at the dimension."""
    live = np.any(a != 0, axis=(0, 1)) & np.any(b != 0, axis=(0, 1))
    if not live.all():
        a, b = a[:, :, live], b[:, :, live]
    d = 2**n
    if a.shape[-1] > d:
        a = a @ b.conj().swapaxes(1, 2)
        b = np.broadcast_to(np.eye(d, dtype=np.complex128), a.shape).copy()
    return a, b


def _factored_gate(a, b, n: int, g: Gate, mode: Mode):
    if isinstance(g, Unitary):
        return _rows_unitary(a, n, g), _rows_unitary(b, n, g)
    if isinstance(g, Init):
        return _rows_insert(a, n, g.wire, g.value), _rows_insert(b, n, g.wire, g.value)
    if isinstance(g, Assert) and mode is Mode.UNSAFE:
        return _rows_project(a, n, g.wire, g.value), _rows_project(b, n, g.wire, g.value)
    if isinstance(g, (Assert, Discard)):
        kernel, n_after = _rows_project, n - 1
    elif isinstance(g, Meas):
        kernel, n_after = _rows_keep, n
    else:
        raise TypeError(f"not a gate: {g!r}")
    a = np.concatenate([kernel(a, n, g.wire, v) for v in (False, True)], axis=2)
    b = np.concatenate([kernel(b, n, g.wire, v) for v in (False, True)], axis=2)
    return _prune(a, b, n_after)


def denote_factored(c: Circuit, a: np.ndarray, b: np.ndarray | None = None, mode=Mode.SAFE):
    """Apply ``c`` to ``a @ b^H`` given as factors shaped (batch, 2**n, r).

    ``b`` defaults to ``a`` (a positive input). Returns the output factors.
    """
    mode = as_mode(mode)
    a = np.asarray(a, dtype=np.complex128)
    b = a if b is None else np.asarray(b, dtype=np.complex128)
    if a.shape != b.shape or a.ndim != 3 or a.shape[1] != 2**c.n_in:
        raise ValueError(f"factors must both be (batch, {2**c.n_in}, r), got {a.shape} and {b.shape}")
    for n, g in _wire_steps(c):
        a, b = _factored_gate(a, b, n, g, mode)
    return a, b


def from_factors(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b.conj().swapaxes(1, 2)


def _basis_vectors(indices: Sequence[int], n: int) -> np.ndarray:
    v = np.zeros((len(indices), 2**n, 1), dtype=np.complex128)
    v[np.arange(len(indices)), list(indices), 0] = 1
    return v


def denote_basis_states(c: Circuit, indices: Sequence[int], mode=Mode.SAFE) -> np.ndarray:
    """Dense outputs of ``c`` on the basis density matrices |i><i|."""
    st = _col_forward(c, _col_basis(indices), as_mode(mode))
    k = _col_dense(st, len(indices), c.n_out)
    return from_factors(k, k)


def _kraus_columns(c: Circuit, mode: Mode, max_terms: int):
    """Evolve every basis vector at once with shared term columns.

    Each gate acts on the two factors of ``|i><j|`` by the same linear map, so
    the image of ``|i><j|`` is ``sum_k K[i, :, k] K[j, :, k]^H`` where K holds
    the evolved basis vectors. Returns None once the term count passes
    ``max_terms``; the caller then falls back to per-unit evaluation.
    """
    d_in = 2**c.n_in
    st = _col_forward(c, _col_basis(range(d_in)), mode, max_cols=max_terms)
    if st is None:
        return None
    return _col_dense(st, d_in, c.n_out)


def channel_factor(c: Circuit, mode=Mode.SAFE, max_terms: int = 256) -> np.ndarray | None:
    """K shaped (2**n_in, 2**n_out, r) with S(|i><j|) = K[i] @ K[j]^H, or None
    when the term count passes ``max_terms``."""
    return _kraus_columns(c, as_mode(mode), max_terms)


def superoperator_of(c: Circuit, mode=Mode.SAFE, chunk: int = 1024, max_terms: int = 256) -> Superoperator:
    """Column j is the vectorised image of the j-th matrix unit."""
    mode = as_mode(mode)
    d_in, d_out = 2**c.n_in, 2**c.n_out
    k = _kraus_columns(c, mode, max_terms)
    if k is not None:
        mat = np.einsum("iak,jbk->abij", k, k.conj()).reshape(d_out * d_out, d_in * d_in)
        return Superoperator(c.n_in, c.n_out, mat)
    mat = np.empty((d_out * d_out, d_in * d_in), dtype=np.complex128)
    for start in range(0, d_in * d_in, chunk):
        js = np.arange(start, min(start + chunk, d_in * d_in))
        a = _basis_vectors(js // d_in, c.n_in)
        b = _basis_vectors(js % d_in, c.n_in)
        out = from_factors(*denote_factored(c, a, b, mode))
        mat[:, js] = out.reshape(len(js), -1).T
    return Superoperator(c.n_in, c.n_out, mat)


def superoperator_dense(c: Circuit, mode=Mode.SAFE) -> Superoperator:
    """Same as ``superoperator_of`` but through the dense engine."""
    d_in, d_out = 2**c.n_in, 2**c.n_out
    units = np.eye(d_in * d_in, dtype=np.complex128).reshape(d_in * d_in, d_in, d_in)
    out = denote(c, units, mode)
    return Superoperator(c.n_in, c.n_out, out.reshape(d_in * d_in, d_out * d_out).T)


# -- dual (Heisenberg picture) ------------------------------------------------


def dual_factored(c: Circuit, a: np.ndarray, b: np.ndarray, mode=Mode.UNSAFE):
    """Pull an output observable ``a @ b^H`` back through ``c``.

    The result satisfies tr(X^H S(rho)) = tr(Y^H rho) for every rho, where S is
    the circuit's channel and Y the returned observable.
    """
    mode = as_mode(mode)
    counts = c.wire_counts()
    for pos in range(len(c.gates) - 1, -1, -1):
        g, n_before, n = c.gates[pos], counts[pos], counts[pos + 1]
        if isinstance(g, Unitary):
            a, b = _rows_unitary(a, n, g, adjoint=True), _rows_unitary(b, n, g, adjoint=True)
        elif isinstance(g, Init):
            a, b = _rows_project(a, n, g.wire, g.value), _rows_project(b, n, g.wire, g.value)
        elif isinstance(g, Assert) and mode is Mode.UNSAFE:
            a, b = _rows_insert(a, n, g.wire, g.value), _rows_insert(b, n, g.wire, g.value)
        elif isinstance(g, (Assert, Discard)):
            a = np.concatenate([_rows_insert(a, n, g.wire, v) for v in (False, True)], axis=2)
            b = np.concatenate([_rows_insert(b, n, g.wire, v) for v in (False, True)], axis=2)
            a, b = _prune(a, b, n_before)
        elif isinstance(g, Meas):
            a = np.concatenate([_rows_keep(a, n, g.wire, v) for v in (False, True)], axis=2)
            b = np.concatenate([_rows_keep(b, n, g.wire, v) for v in (False, True)], axis=2)
            a, b = _prune(a, b, n_before)
        else:
            raise TypeError(f"not a gate: {g!r}")
    return a, b


def dual_of_identity(c: Circuit, mode=Mode.UNSAFE) -> np.ndarray:
    """The observable whose (i, j) entry is conj(tr S(|i><j|))."""
    d = 2**c.n_out
    eye = _Cols(np.zeros(d, dtype=np.int64), np.arange(d, dtype=np.int64), np.arange(d, dtype=np.int64), np.ones(d, dtype=np.complex128))
    k = _col_dense(_col_backward(c, eye, as_mode(mode)), 1, c.n_in)
    return from_factors(k, k)[0]


# -- sparse column engine -----------------------------------------------------
# A batch of matrices, each a sum of outer products of column vectors, stored
# as (item, row, col, amp) entries. Every gate formula acts on the column
# vectors by one linear map, so a matrix a @ b^H with a and b evolving
# together never needs b; callers pair columns afterwards. Column labels
# record branch history and are shared across items, which keeps columns
# with the same history aligned.


@dataclass
class _Cols:
    item: np.ndarray
    row: np.ndarray
    col: np.ndarray
    amp: np.ndarray

    def filter(self, keep: np.ndarray) -> "_Cols":
        return _Cols(self.item[keep], self.row[keep], self.col[keep], self.amp[keep])

    def n_cols(self) -> int:
        return int(self.col.max()) + 1 if self.col.size else 0


def _bit(row: np.ndarray, n: int, w: int) -> np.ndarray:
    return (row >> (n - 1 - w)) & 1


def _drop_bit(row: np.ndarray, n: int, w: int) -> np.ndarray:
    p = n - 1 - w
    return ((row >> (p + 1)) << p) | (row & ((1 << p) - 1))


def _add_bit(row: np.ndarray, n: int, w: int, v: int) -> np.ndarray:
    """Insert bit v at position w of an n-wire index."""
    p = n - w
    return ((row >> p) << (p + 1)) | (v << p) | (row & ((1 << p) - 1))


def _merge(st: _Cols) -> _Cols:
    keys = np.stack([st.item, st.row, st.col], axis=1)
    uniq, inv = np.unique(keys, axis=0, return_inverse=True)
    inv = inv.reshape(-1)
    amp = np.bincount(inv, st.amp.real, len(uniq)) + 1j * np.bincount(inv, st.amp.imag, len(uniq))
    out = _Cols(uniq[:, 0], uniq[:, 1], uniq[:, 2], amp)
    return out.filter(out.amp != 0)


def _relabel(st: _Cols) -> _Cols:
    _, col = np.unique(st.col, return_inverse=True)
    return _Cols(st.item, st.row, col.reshape(-1), st.amp)


def _col_unitary(st: _Cols, n: int, g: Unitary, adjoint: bool = False) -> _Cols:
    if g.classical:
        flip = 1 << (n - 1 - g.wires[-1])
        if len(g.wires) == 1:
            return _Cols(st.item, st.row ^ flip, st.col, st.amp)
        cond = st.row >> (n - 1 - g.wires[0])
        if len(g.wires) == 3:
            cond = cond & (st.row >> (n - 1 - g.wires[1]))
        return _Cols(st.item, st.row ^ ((cond & 1) * flip), st.col, st.amp)
    u = GATE_MATRICES[g.kind]
    if adjoint:
        u = u.conj().T
    k = len(g.wires)
    sub = np.zeros_like(st.row)
    base = st.row.copy()
    for j, w in enumerate(g.wires):
        sub |= _bit(st.row, n, w) << (k - 1 - j)
        base &= ~(1 << (n - 1 - w))
    parts = []
    for s2 in range(2**k):
        row = base.copy()
        for j, w in enumerate(g.wires):
            row |= ((s2 >> (k - 1 - j)) & 1) << (n - 1 - w)
        parts.append(_Cols(st.item, row, st.col, u[s2, sub] * st.amp))
    return _merge(_concat(parts))


def _concat(parts: list[_Cols]) -> _Cols:
    return _Cols(*(np.concatenate([getattr(p, f) for p in parts]) for f in ("item", "row", "col", "amp")))


def _col_insert(st: _Cols, n: int, w: int, v: bool) -> _Cols:
    return _Cols(st.item, _add_bit(st.row, n, w, int(v)), st.col, st.amp)


def _col_project(st: _Cols, n: int, w: int, v: bool) -> _Cols:
    st = st.filter(_bit(st.row, n, w) == int(v))
    return _Cols(st.item, _drop_bit(st.row, n, w), st.col, st.amp)


def _col_branch(st: _Cols, n: int, w: int, remove: bool) -> _Cols:
    """Split every column by the value of wire w (sum over both projections)."""
    bit = _bit(st.row, n, w)
    row = _drop_bit(st.row, n, w) if remove else st.row
    return _relabel(_Cols(st.item, row, st.col * 2 + bit, st.amp))


def _col_branch_insert(st: _Cols, n: int, w: int) -> _Cols:
    """Adjoint of a discarding branch: one copy of each column per value."""
    parts = [_Cols(st.item, _add_bit(st.row, n, w, v), st.col * 2 + v, st.amp) for v in (0, 1)]
    return _relabel(_concat(parts))


def _col_forward(c: Circuit, st: _Cols, mode: Mode, max_cols: int | None = None) -> _Cols | None:
    for n, g in _wire_steps(c):
        if isinstance(g, Unitary):
            st = _col_unitary(st, n, g)
        elif isinstance(g, Init):
            st = _col_insert(st, n, g.wire, g.value)
        elif isinstance(g, Assert) and mode is Mode.UNSAFE:
            st = _col_project(st, n, g.wire, g.value)
        elif isinstance(g, (Assert, Discard)):
            st = _col_branch(st, n, g.wire, remove=True)
        elif isinstance(g, Meas):
            st = _col_branch(st, n, g.wire, remove=False)
        else:
            raise TypeError(f"not a gate: {g!r}")
        if max_cols is not None and st.n_cols() > max_cols:
            return None
    return st


def _col_backward(c: Circuit, st: _Cols, mode: Mode) -> _Cols:
    counts = c.wire_counts()
    for pos in range(len(c.gates) - 1, -1, -1):
        g, n = c.gates[pos], counts[pos + 1]
        if isinstance(g, Unitary):
            st = _col_unitary(st, n, g, adjoint=True)
        elif isinstance(g, Init):
            st = _col_project(st, n, g.wire, g.value)
        elif isinstance(g, Assert) and mode is Mode.UNSAFE:
            st = _col_insert(st, n, g.wire, g.value)
        elif isinstance(g, (Assert, Discard)):
            st = _col_branch_insert(st, n, g.wire)
        elif isinstance(g, Meas):
            st = _col_branch(st, n, g.wire, remove=False)
        else:
            raise TypeError(f"not a gate: {g!r}")
    return st


def _col_basis(indices: Sequence[int]) -> _Cols:
    k = len(indices)
    return _Cols(
        np.arange(k, dtype=np.int64),
        np.asarray(indices, dtype=np.int64).reshape(k),
        np.zeros(k, dtype=np.int64),
        np.ones(k, dtype=np.complex128),
    )


def _col_dense(st: _Cols, items: int, n: int) -> np.ndarray:
    """Dense factor shaped (items, 2**n, n_cols)."""
    out = np.zeros((items, 2**n, max(st.n_cols(), 1)), dtype=np.complex128)
    np.add.at(out, (st.item, st.row, st.col), st.amp)
    return out


# -- basis-state fast path ----------------------------------------------------


def denote_basis(c: Circuit, bits: Sequence[bool]) -> tuple[list[bool], bool]:
    """Run a classical circuit on a bit vector.

    Returns the output bits and whether every assertion saw its expected value.
    """
    state = [bool(x) for x in bits]
    if len(state) != c.n_in:
        raise ValueError(f"circuit takes {c.n_in} bits, got {len(state)}")
    valid = True
    for g in c.gates:
        if isinstance(g, Unitary):
            if not g.classical:
                raise CircuitError(f"{g.kind} is not a classical gate")
            if all(state[w] for w in g.wires[:-1]):
                state[g.wires[-1]] = not state[g.wires[-1]]
        elif isinstance(g, Init):
            state.insert(g.wire, bool(g.value))
        elif isinstance(g, Assert):
            if state.pop(g.wire) != bool(g.value):
                valid = False
        else:
            raise CircuitError(f"{type(g).__name__.lower()} is not a classical gate")
    return state, valid


def denote_basis_batch(c: Circuit, bits: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """``denote_basis`` on many inputs at once.

    ``bits`` is a boolean array shaped (inputs, n_in). Returns the output bits
    shaped (inputs, n_out) and a per-input validity flag.
    """
    bits = np.asarray(bits, dtype=bool)
    if bits.ndim != 2 or bits.shape[1] != c.n_in:
        raise ValueError(f"expected inputs shaped (k, {c.n_in}), got {bits.shape}")
    wires = [bits[:, w].copy() for w in range(c.n_in)]
    valid = np.ones(bits.shape[0], dtype=bool)
    for g in c.gates:
        if isinstance(g, Unitary):
            if not g.classical:
                raise CircuitError(f"{g.kind} is not a classical gate")
            flip = np.ones_like(valid)
            for w in g.wires[:-1]:
                flip &= wires[w]
            wires[g.wires[-1]] = wires[g.wires[-1]] ^ flip
        elif isinstance(g, Init):
            wires.insert(g.wire, np.full(bits.shape[0], bool(g.value)))
        elif isinstance(g, Assert):
            valid &= wires.pop(g.wire) == bool(g.value)
        else:
            raise CircuitError(f"{type(g).__name__.lower()} is not a classical gate")
    out = np.stack(wires, axis=1) if wires else np.zeros((bits.shape[0], 0), dtype=bool)
    return out, valid


def all_bit_vectors(n: int) -> np.ndarray:
    """Every n-bit input in index order, shaped (2**n, n)."""
    idx = np.arange(2**n)
    return ((idx[:, None] >> (n - 1 - np.arange(n))) & 1).astype(bool)


# -- state builders -----------------------------------------------------------


def bits_to_index(bits: Sequence[bool]) -> int:
    i = 0
    for x in bits:
        i = (i << 1) | int(bool(x))
    return i


def index_to_bits(i: int, n: int) -> list[bool]:
    return [bool((i >> (n - 1 - k)) & 1) for k in range(n)]


def bool_to_matrix(b: bool) -> np.ndarray:
    m = np.zeros((2, 2), dtype=np.complex128)
    m[int(bool(b)), int(bool(b))] = 1
    return m


def bools_to_matrix(bs: Sequence[bool]) -> np.ndarray:
    out = np.ones((1, 1), dtype=np.complex128)
    for b in bs:
        out = np.kron(out, bool_to_matrix(b))
    return out


def basis_state(ctx: Sequence[str], f: Mapping[str, bool]) -> np.ndarray:
    """Density matrix of the wires named by ``ctx`` under assignment ``f``."""
    return bools_to_matrix([f[v] for v in ctx])


def ctx_to_matrix(ctx: Sequence[str], f: Mapping[str, bool]) -> np.ndarray:
    return basis_state(ctx, f)


def density_to_json(rho: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in rho]
