"""Ancilla validity, circuit equivalence, reversibility and self-inverse checks."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circuit import Circuit, CircuitError, id_circ, in_seq
from .linalg import as_tol, max_abs_diff
from .semantics import Mode, channel_factor, dual_of_identity, superoperator_of


@dataclass(frozen=True)
class ValidityReport:
    valid: bool
    worst_trace_defect: float
    # (i, j) of the matrix unit |i><j| whose unsafe trace is furthest from
    # delta_ij; for i == j this is the offending basis input
    witness: tuple[int, int] | None = None

    def __bool__(self):
        return self.valid

    def to_json(self) -> dict:
        return {
            "valid": self.valid,
            "worst_trace_defect": self.worst_trace_defect,
            "witness": list(self.witness) if self.witness is not None else None,
        }


def trace_defects(c: Circuit) -> np.ndarray:
    """|tr S_unsafe(|i><j|) - delta_ij| for every matrix unit, as a matrix."""
    x = dual_of_identity(c, Mode.UNSAFE)
    return np.abs(x - np.eye(x.shape[0]))


def is_valid(c: Circuit, tol=None) -> ValidityReport:
    """Decide whether every assertion in ``c`` holds on every input.

    The unsafe channel preserves the trace of all mixed states exactly when
    tr S(|i><j|) = delta_ij for all matrix units. The traces are read off the
    dual channel applied to the identity, in one backward pass.
    """
    eps = as_tol(tol).eps
    defects = trace_defects(c)
    worst = float(defects.max()) if defects.size else 0.0
    if worst <= eps:
        return ValidityReport(True, worst, None)
    i, j = np.unravel_index(int(np.argmax(defects)), defects.shape)
    return ValidityReport(False, worst, (int(i), int(j)))


def _factor_defect(k1: np.ndarray, k2: np.ndarray, chunk: int = 2048) -> float:
    """Max entry of S1 - S2 for channels given by their factors.

    An entry of S1 - S2 is <R1_p, R1_q> - <R2_p, R2_q> for rows p, q of the
    flattened factors, which is one Gram matrix over the stacked rows. Rows
    that vanish in both factors contribute nothing, so only the live rows
    are paired.
    """
    r1 = k1.reshape(-1, k1.shape[-1])
    r2 = k2.reshape(-1, k2.shape[-1])
    live = np.any(r1 != 0, axis=1) | np.any(r2 != 0, axis=1)
    left = np.hstack([r1[live], r2[live]])
    right = np.hstack([r1[live], -r2[live]]).conj().T
    worst = 0.0
    for start in range(0, left.shape[0], chunk):
        block = left[start : start + chunk] @ right
        if block.size:
            worst = max(worst, float(np.max(np.abs(block))))
    return worst


def _mode_defect(c1: Circuit, m1: Mode, c2: Circuit, m2: Mode) -> float:
    k1, k2 = channel_factor(c1, m1), channel_factor(c2, m2)
    if k1 is None or k2 is None:
        return max_abs_diff(superoperator_of(c1, m1).mat, superoperator_of(c2, m2).mat)
    return _factor_defect(k1, k2)


def semantics_agree(c: Circuit, tol=None) -> bool:
    """True iff the safe and unsafe superoperators coincide."""
    return _mode_defect(c, Mode.SAFE, c, Mode.UNSAFE) <= as_tol(tol).eps


def _check_types(c1: Circuit, c2: Circuit) -> None:
    if c1.in_kinds != c2.in_kinds or c1.out_kinds != c2.out_kinds:
        raise CircuitError(f"cannot compare {c1!r} with {c2!r}: types differ")


def equivalence_defect(c1: Circuit, c2: Circuit) -> float:
    """Largest superoperator entry difference over both semantics."""
    _check_types(c1, c2)
    return max(_mode_defect(c1, m, c2, m) for m in (Mode.SAFE, Mode.UNSAFE))


def circuits_equivalent(c1: Circuit, c2: Circuit, tol=None) -> bool:
    """``c1 ≡ c2``: equal superoperators under both semantics."""
    return equivalence_defect(c1, c2) <= as_tol(tol).eps


def is_identity(c: Circuit, tol=None) -> bool:
    if c.in_kinds != c.out_kinds:
        raise CircuitError(f"{c!r} is not square")
    return circuits_equivalent(c, id_circ(c.in_type), tol)


def is_self_inverse(c: Circuit, tol=None) -> bool:
    if c.in_kinds != c.out_kinds:
        raise CircuitError(f"{c!r} is not square")
    return is_identity(in_seq(c, c), tol)


def check_reversible_implies_valid(c: Circuit, c_inv: Circuit, tol=None) -> bool:
    """Confirm c_inv is a two-sided inverse of c, then that c is valid."""
    try:
        left = is_identity(in_seq(c_inv, c), tol)
        right = is_identity(in_seq(c, c_inv), tol)
    except CircuitError:
        return False
    return left and right and is_valid(c, tol).valid
