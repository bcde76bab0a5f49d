"""Small helpers that let the same code run on float64 or exact Fraction arrays."""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational

import numpy as np

INF = float("inf")


def to_fraction(value):
    """Convert a number or a ``"p/q"`` string to a Fraction (infinities pass through)."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        text = value.strip().lower()
        if text in ("inf", "+inf", "infinity"):
            return INF
        if text in ("-inf", "-infinity"):
            return -INF
        return Fraction(text)
    if isinstance(value, (int, np.integer, Rational)):
        return Fraction(int(value)) if isinstance(value, (int, np.integer)) else Fraction(value)
    value = float(value)
    if np.isinf(value):
        return value
    return Fraction(value)


def to_float(value) -> float:
    if isinstance(value, str):
        return float(to_fraction(value))
    return float(value)


def as_array(values, exact: bool = False, ndim: int | None = None) -> np.ndarray:
    """Return `values` as a float64 array, or an object array of Fractions if `exact`."""
    if exact:
        arr = np.asarray(values, dtype=object)
        out = np.empty(arr.shape, dtype=object)
        for idx, v in np.ndenumerate(arr):
            out[idx] = to_fraction(v)
    else:
        arr = np.asarray(values, dtype=object)
        out = np.empty(arr.shape, dtype=float)
        for idx, v in np.ndenumerate(arr):
            out[idx] = to_float(v)
    if ndim is not None and out.ndim != ndim:
        raise ValueError(f"expected a {ndim}-d array, got shape {out.shape}")
    return out


def is_exact(arr: np.ndarray) -> bool:
    return arr.dtype == object


def zeros(shape, exact: bool) -> np.ndarray:
    if exact:
        out = np.empty(shape, dtype=object)
        out.fill(Fraction(0))
        return out
    return np.zeros(shape)


def identity(n: int, exact: bool) -> np.ndarray:
    out = zeros((n, n), exact)
    for i in range(n):
        out[i, i] = Fraction(1) if exact else 1.0
    return out


def inverse(M: np.ndarray, pivot_tol: float = 0.0) -> np.ndarray:
    """Invert a square matrix.

    Float input goes through LAPACK; object (Fraction) input is inverted exactly by
    Gauss-Jordan elimination. Raises ``np.linalg.LinAlgError`` if singular.
    """
    n = M.shape[0]
    if not is_exact(M):
        if n == 0:
            return np.zeros((0, 0))
        return np.linalg.inv(M)
    work = np.concatenate([M.copy(), identity(n, True)], axis=1)
    for col in range(n):
        piv = next((r for r in range(col, n) if work[r, col] != 0), None)
        if piv is None:
            raise np.linalg.LinAlgError("singular matrix")
        if piv != col:
            work[[col, piv]] = work[[piv, col]]
        work[col] = work[col] / work[col, col]
        for r in range(n):
            if r != col and work[r, col] != 0:
                work[r] = work[r] - work[r, col] * work[col]
    return work[:, n:]
