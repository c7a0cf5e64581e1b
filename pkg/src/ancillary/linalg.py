"""Dense complex matrix helpers.

Matrices are plain 2-D ``numpy`` arrays of dtype ``complex128``; the functions
here add the dimension checks the rest of the package relies on.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

DEFAULT_EPS = 1e-9
TOL_ENV_VAR = "ANCILLARY_TOL"


class DimensionError(ValueError):
    pass


@dataclass(frozen=True)
class Tolerance:
    eps: float = DEFAULT_EPS

    def __post_init__(self):
        if not self.eps >= 0:
            raise ValueError(f"tolerance must be non-negative, got {self.eps!r}")

    @classmethod
    def from_env(cls) -> "Tolerance":
        raw = os.environ.get(TOL_ENV_VAR)
        if raw is None or raw.strip() == "":
            return cls()
        return cls(float(raw))


def as_tol(tol) -> Tolerance:
    if tol is None:
        return Tolerance()
    if isinstance(tol, Tolerance):
        return tol
    return Tolerance(float(tol))


def cmatrix(entries, rows: int | None = None, cols: int | None = None) -> np.ndarray:
    """Build a complex matrix from nested lists, or from a flat row-major list."""
    a = np.asarray(entries, dtype=np.complex128)
    if rows is not None or cols is not None:
        if rows is None or cols is None:
            raise DimensionError("rows and cols must be given together")
        if a.size != rows * cols:
            raise DimensionError(f"{a.size} entries cannot fill a {rows}x{cols} matrix")
        a = a.reshape(rows, cols)
    if a.ndim != 2 or a.shape[0] == 0 or a.shape[1] == 0:
        raise DimensionError(f"expected a non-empty 2-D matrix, got shape {a.shape}")
    return a


def _check(a: np.ndarray, name: str = "matrix") -> np.ndarray:
    if a.ndim != 2 or 0 in a.shape:
        raise DimensionError(f"{name} must be a non-empty 2-D matrix, got shape {a.shape}")
    return a


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.complex128)


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    _check(a, "left operand")
    _check(b, "right operand")
    if a.shape[1] != b.shape[0]:
        raise DimensionError(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    _check(a, "left operand")
    _check(b, "right operand")
    return np.kron(a, b)


def adjoint(a: np.ndarray) -> np.ndarray:
    return _check(a).conj().T


def trace(a: np.ndarray) -> complex:
    _check(a)
    if a.shape[0] != a.shape[1]:
        raise DimensionError(f"trace of non-square matrix {a.shape}")
    return complex(np.trace(a))


def add(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if _check(a).shape != _check(b).shape:
        raise DimensionError(f"cannot add {a.shape} and {b.shape}")
    return a + b


def scale(s: complex, a: np.ndarray) -> np.ndarray:
    return complex(s) * _check(a)


def max_abs_diff(a: np.ndarray, b: np.ndarray) -> float:
    if a.shape != b.shape:
        raise DimensionError(f"cannot compare {a.shape} with {b.shape}")
    if a.size == 0:
        return 0.0
    return float(np.max(np.abs(a - b)))


def approx_eq(a: np.ndarray, b: np.ndarray, tol=None) -> bool:
    """Entrywise max-norm comparison."""
    return max_abs_diff(_check(a), _check(b)) <= as_tol(tol).eps


def is_hermitian(a: np.ndarray, eps: float = 1e-7) -> bool:
    return a.shape[0] == a.shape[1] and max_abs_diff(a, a.conj().T) <= eps


def is_psd(a: np.ndarray, eps: float = 1e-7) -> bool:
    if not is_hermitian(a, eps):
        return False
    return bool(np.linalg.eigvalsh((a + a.conj().T) / 2).min() >= -eps)
