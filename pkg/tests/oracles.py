"""Reference implementations that share no code with the package engines.

Every gate becomes an explicit full-size operator built from Kronecker
products with identities, and the semantics are the textbook formulas:
U rho U^H, K rho K^H for an init K = I (x) |b> (x) I, and so on.
"""

from __future__ import annotations

from itertools import product

import numpy as np

from ancillary.circuit import Assert, Discard, Init, Meas, Unitary

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
P0 = np.array([[1, 0], [0, 0]], dtype=complex)
P1 = np.array([[0, 0], [0, 1]], dtype=complex)
KET = {False: np.array([[1], [0]], dtype=complex), True: np.array([[0], [1]], dtype=complex)}


def kron_all(ops):
    out = np.eye(1, dtype=complex)
    for op in ops:
        out = np.kron(out, op)
    return out


def embed(op, n, wire):
    """op on ``wire`` of n wires, identities elsewhere."""
    return kron_all([op if w == wire else I2 for w in range(n)])


def controlled_x(n, controls, target):
    """Sum over control projector patterns: X on the target only when every
    control is |1>."""
    total = np.zeros((2**n, 2**n), dtype=complex)
    for pattern in product((0, 1), repeat=len(controls)):
        ops = [I2] * n
        for c, v in zip(controls, pattern):
            ops[c] = P1 if v else P0
        if all(pattern):
            ops[target] = X
        total += kron_all(ops)
    return total


def gate_matrix(kind, wires, n):
    if kind == "X":
        return embed(X, n, wires[0])
    if kind == "H":
        return embed(H, n, wires[0])
    if kind == "Z":
        return embed(Z, n, wires[0])
    return controlled_x(n, list(wires[:-1]), wires[-1])


def insert_op(n, wire, value):
    """2^(n+1) x 2^n isometry putting |value> at position ``wire``."""
    return kron_all([np.eye(2**wire), KET[value], np.eye(2 ** (n - wire))])


def remove_op(n, wire, value):
    """2^(n-1) x 2^n map <value| on ``wire``."""
    return kron_all([np.eye(2**wire), KET[value].T, np.eye(2 ** (n - wire - 1))])


def keep_op(n, wire, value):
    return kron_all([np.eye(2**wire), P1 if value else P0, np.eye(2 ** (n - wire - 1))])


def ref_denote(c, rho, mode="safe"):
    """Textbook semantics of a ``Circuit`` on one density matrix."""
    n = c.n_in
    rho = np.asarray(rho, dtype=complex)
    for g in c.gates:
        if isinstance(g, Unitary):
            u = gate_matrix(g.kind, g.wires, n)
            rho = u @ rho @ u.conj().T
        elif isinstance(g, Init):
            k = insert_op(n, g.wire, g.value)
            rho = k @ rho @ k.conj().T
            n += 1
        elif isinstance(g, Assert) and mode == "unsafe":
            k = remove_op(n, g.wire, g.value)
            rho = k @ rho @ k.conj().T
            n -= 1
        elif isinstance(g, (Assert, Discard)):
            rho = sum(remove_op(n, g.wire, v) @ rho @ remove_op(n, g.wire, v).conj().T for v in (False, True))
            n -= 1
        elif isinstance(g, Meas):
            rho = sum(keep_op(n, g.wire, v) @ rho @ keep_op(n, g.wire, v) for v in (False, True))
    return rho


def ref_superoperator(c, mode="safe"):
    """Columns are images of the matrix units, row-major vectorised."""
    d = 2**c.n_in
    cols = []
    for i in range(d):
        for j in range(d):
            e = np.zeros((d, d), dtype=complex)
            e[i, j] = 1
            cols.append(ref_denote(c, e, mode).reshape(-1))
    return np.array(cols).T


def ref_valid(c, tol=1e-9):
    """Unsafe trace equals delta_ij on every matrix unit."""
    d = 2**c.n_in
    for i in range(d):
        for j in range(d):
            e = np.zeros((d, d), dtype=complex)
            e[i, j] = 1
            if abs(np.trace(ref_denote(c, e, "unsafe")) - (i == j)) > tol:
                return False
    return True


def ref_basis(c, bits):
    """Bit-list simulation written independently of ``denote_basis``."""
    state = list(bits)
    ok = True
    for g in c.gates:
        if isinstance(g, Unitary):
            *ctrl, t = g.wires
            if all(state[w] for w in ctrl):
                state[t] = not state[t]
        elif isinstance(g, Init):
            state = state[: g.wire] + [g.value] + state[g.wire :]
        elif isinstance(g, Assert):
            ok = ok and state[g.wire] == g.value
            state = state[: g.wire] + state[g.wire + 1 :]
    return state, ok


def basis_density(bits):
    return kron_all([P1 if b else P0 for b in bits])


def random_density(rng, n):
    """A random full-rank mixed state on n qubits."""
    d = 2**n
    a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    rho = a @ a.conj().T
    return rho / np.trace(rho)


def full_adder(cin, x, y):
    total = int(cin) + int(x) + int(y)
    return bool(total & 1), bool(total >> 1)
