"""Problem representation for multilevel LPs and the single-level LPs built from them.

Indices exposed to users (levels, within-level positions, flat variable numbers)
are 1-based. Arrays are 0-based internally.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._arith import INF, as_array, is_exact

DEFAULT_CAP = 1e9


@dataclass(frozen=True, eq=False)
class MultilevelProblem:
    """A P-level LP with one objective per level.

    Every level maximizes its own row of `C` over the shared set
    ``S = {x : A x <= b, x >= 0}``. Level ``p`` controls the block of `n_sizes[p-1]`
    consecutive variables.

    Parameters
    ----------
    n_sizes : sequence of int
        Number of variables controlled by each level.
    C : array_like, shape (P, n)
        Objective coefficients, one row per level.
    A : array_like, shape (m, n)
    b : array_like, shape (m,)
    exact : bool
        Store data as Fractions instead of float64.
    """

    n_sizes: tuple
    C: np.ndarray
    A: np.ndarray
    b: np.ndarray
    exact: bool = False

    def __post_init__(self):
        sizes = tuple(int(s) for s in self.n_sizes)
        object.__setattr__(self, "n_sizes", sizes)
        C = as_array(self.C, self.exact, ndim=2)
        A = as_array(self.A, self.exact)
        b = as_array(self.b, self.exact, ndim=1)
        if A.ndim == 1 and A.size == 0:
            A = A.reshape(0, sum(sizes))
        if A.ndim != 2:
            raise ValueError(f"A must be 2-d, got shape {A.shape}")
        if len(sizes) < 2:
            raise ValueError("a multilevel problem needs at least 2 levels")
        if any(s < 1 for s in sizes):
            raise ValueError(f"every level must control at least one variable: {sizes}")
        n = sum(sizes)
        if C.shape != (len(sizes), n):
            raise ValueError(f"C must have shape {(len(sizes), n)}, got {C.shape}")
        if A.shape[1] != n:
            raise ValueError(f"A must have {n} columns, got {A.shape[1]}")
        if A.shape[0] != b.shape[0]:
            raise ValueError(f"A has {A.shape[0]} rows but b has length {b.shape[0]}")
        for arr in (C, A, b):
            arr.setflags(write=False)
        object.__setattr__(self, "C", C)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)

    @property
    def P(self) -> int:
        return len(self.n_sizes)

    @property
    def n(self) -> int:
        return sum(self.n_sizes)

    @property
    def m(self) -> int:
        return self.A.shape[0]

    def level_of(self, k: int) -> tuple[int, int]:
        """Return the 1-based (level, position) of the 0-based flat column `k`."""
        return level_index(self.n_sizes, k + 1)

    def with_exact(self, exact: bool = True) -> "MultilevelProblem":
        return MultilevelProblem(self.n_sizes, self.C, self.A, self.b, exact=exact)

    def is_feasible(self, x, tol: float = 1e-9) -> bool:
        x = np.asarray(x)
        if x.shape != (self.n,):
            return False
        return bool(np.all(self.A @ x <= self.b + tol) and np.all(x >= -tol))


@dataclass(frozen=True, eq=False)
class BoundedLP:
    """``max c^T x  s.t.  A x <= b,  l <= x <= u``. Entries of `u` may be ``inf``."""

    c: np.ndarray
    A: np.ndarray
    b: np.ndarray
    l: np.ndarray
    u: np.ndarray

    def __post_init__(self):
        n = self.c.shape[0]
        if self.A.shape != (self.b.shape[0], n):
            raise ValueError(f"A has shape {self.A.shape}, expected {(self.b.shape[0], n)}")
        if self.l.shape != (n,) or self.u.shape != (n,):
            raise ValueError("bounds must have the same length as c")
        if np.any(self.l > self.u):
            raise ValueError("lower bound exceeds upper bound")

    @property
    def n(self) -> int:
        return self.c.shape[0]

    @property
    def m(self) -> int:
        return self.b.shape[0]

    @property
    def exact(self) -> bool:
        return is_exact(self.c)

    @classmethod
    def from_data(cls, c, A, b, l, u, exact: bool = False) -> "BoundedLP":
        c = as_array(c, exact, ndim=1)
        A = as_array(A, exact)
        if A.size == 0:
            A = A.reshape(0, c.shape[0])
        return cls(c, A, as_array(b, exact, ndim=1), as_array(l, exact, ndim=1),
                   as_array(u, exact, ndim=1))


@dataclass(frozen=True, eq=False)
class StandardLP:
    """``max c^T x  s.t.  A x = b,  l <= x <= u`` with finite bounds.

    The first `n_structural` columns are the original variables, the rest are
    slacks. `capped` flags entries of `u` that stand in for ``+inf``.
    """

    c: np.ndarray
    A: np.ndarray
    b: np.ndarray
    l: np.ndarray
    u: np.ndarray
    n_structural: int
    capped: np.ndarray = field(default=None)

    def __post_init__(self):
        if self.capped is None:
            object.__setattr__(self, "capped", np.zeros(self.c.shape[0], dtype=bool))
        if self.A.shape != (self.b.shape[0], self.c.shape[0]):
            raise ValueError(f"A has shape {self.A.shape}, inconsistent with b and c")

    @property
    def N(self) -> int:
        return self.c.shape[0]

    @property
    def m(self) -> int:
        return self.b.shape[0]

    @property
    def exact(self) -> bool:
        return is_exact(self.c)

    def structural(self, x: np.ndarray) -> np.ndarray:
        """Project a standard-form point back onto the original variables."""
        return np.asarray(x)[: self.n_structural]

    def lift(self, x_struct) -> np.ndarray:
        """Append slacks ``b - A x`` to a structural point."""
        x_struct = np.asarray(x_struct)
        n = self.n_structural
        slack = self.b - self.A[:, :n] @ x_struct
        return np.concatenate([x_struct, slack])


def flat_index(n_sizes, i: int, j: int) -> int:
    """Map the 1-based (level `i`, position `j`) pair to its 1-based flat variable number."""
    if not 1 <= i <= len(n_sizes):
        raise IndexError(f"level {i} out of range 1..{len(n_sizes)}")
    if not 1 <= j <= n_sizes[i - 1]:
        raise IndexError(f"position {j} out of range 1..{n_sizes[i - 1]} for level {i}")
    return sum(n_sizes[: i - 1]) + j


def level_index(n_sizes, k: int) -> tuple[int, int]:
    """Inverse of :func:`flat_index`."""
    if not 1 <= k <= sum(n_sizes):
        raise IndexError(f"variable {k} out of range 1..{sum(n_sizes)}")
    offset = 0
    for i, size in enumerate(n_sizes, start=1):
        if k <= offset + size:
            return i, k - offset
        offset += size
    raise AssertionError("unreachable")


def level_of_columns(n_sizes) -> np.ndarray:
    """1-based level number of every flat column."""
    return np.repeat(np.arange(1, len(n_sizes) + 1), n_sizes)


def build_level_lp(mlp: MultilevelProblem, p: int, lower=None, upper=None) -> BoundedLP:
    """The LP of level `p`: maximize ``C[p-1] @ x`` over ``S``.

    Without explicit bounds, ``x >= 0`` and upper bounds are infinite.
    """
    if not 1 <= p <= mlp.P:
        raise IndexError(f"level {p} out of range 1..{mlp.P}")
    n = mlp.n
    zero = as_array(np.zeros(n), mlp.exact)
    l = zero if lower is None else np.maximum(as_array(lower, mlp.exact), zero)
    if upper is None:
        u = np.full(n, INF, dtype=object if mlp.exact else float)
    else:
        u = as_array(upper, mlp.exact)
    return BoundedLP(mlp.C[p - 1].copy(), mlp.A.copy(), mlp.b.copy(), l, u)


def to_standard_form(lp: BoundedLP, cap: float = DEFAULT_CAP) -> StandardLP:
    """Append one slack per row and replace infinite upper bounds by `cap`.

    A slack's upper bound is the largest value ``b_i - A_i x`` can take over the
    variable box when that is finite and nonnegative, otherwise `cap`.
    """
    exact = lp.exact
    m, n = lp.A.shape
    one = as_array([1], exact)[0]
    eye = np.zeros((m, m), dtype=object if exact else float)
    for i in range(m):
        eye[i, i] = one
    A_eq = np.concatenate([lp.A, eye], axis=1) if m else lp.A.reshape(0, n)
    c = np.concatenate([lp.c, as_array(np.zeros(m), exact)])

    cap_value = as_array([cap], exact)[0]
    u_struct = lp.u.copy()
    capped_struct = np.array([v == INF for v in lp.u], dtype=bool)
    u_struct[capped_struct] = cap_value
    if np.any(lp.l == -INF):
        raise ValueError("free variables are not supported; give every variable a finite lower bound")

    slack_u, capped_slack = [], []
    for i in range(m):
        low_activity = 0
        for j in range(n):
            a = lp.A[i, j]
            if a == 0:
                continue
            low_activity = low_activity + (a * lp.l[j] if a > 0 else a * lp.u[j])
        room = lp.b[i] - low_activity
        finite = room != INF and room >= 0
        slack_u.append(room if finite else cap_value)
        capped_slack.append(not finite)
    capped_slack = np.array(capped_slack, dtype=bool)
    u = np.concatenate([u_struct, np.array(slack_u, dtype=object if exact else float)])
    l = np.concatenate([lp.l, as_array(np.zeros(m), exact)])
    return StandardLP(c, A_eq, lp.b.copy(), l, u, n, np.concatenate([capped_struct, capped_slack]))


def evaluate_objectives(mlp: MultilevelProblem, x) -> np.ndarray:
    """Values of all P objectives at `x`."""
    x = np.asarray(x)
    if x.shape != (mlp.n,):
        raise ValueError(f"x must have length {mlp.n}, got shape {x.shape}")
    return mlp.C @ x
