"""Brute-force LP optimum by enumerating basic solutions.

Only meant for small instances: the work grows like ``C(N, m) * 2^(N - m)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import comb

import numpy as np

from ._arith import inverse, is_exact
from .adaptive import Status
from .lp_model import StandardLP

DEFAULT_ENUMERATION_CAP = 10**6


class EnumerationLimitError(ValueError):
    pass


@dataclass
class OracleResult:
    value: object
    vertices: list = field(default_factory=list)
    status: Status = Status.OPTIMAL

    @property
    def vertex(self):
        return self.vertices[0] if self.vertices else None


def _bound_choices(lp, j):
    lo, hi = lp.l[j], lp.u[j]
    if lo == hi or hi == float("inf"):
        return (lo,)
    return (lo, hi)


def enumerate_basic_solutions(lp: StandardLP, exact: bool | None = None, tol: float = 1e-9,
                              cap: int = DEFAULT_ENUMERATION_CAP):
    """Yield every feasible basic solution of `lp` (duplicates removed).

    For every nonsingular ``m``-column subset, each nonbasic column is put at its
    lower or upper bound and the basic values are solved for.
    """
    if exact is None:
        exact = is_exact(lp.c)
    m, N = lp.A.shape
    if comb(N, m) > cap:
        raise EnumerationLimitError(f"C({N}, {m}) = {comb(N, m)} basis candidates exceeds cap {cap}")
    A, b = lp.A, lp.b
    A_float = A.astype(float)
    scale = max(1.0, float(np.max(np.abs(b.astype(float)), initial=0.0)))
    seen = set()
    for subset in itertools.combinations(range(N), m):
        cols = list(subset)
        rest = [j for j in range(N) if j not in subset]
        if m:
            B = A_float[:, cols]
            if abs(np.linalg.det(B)) < 1e-12 * max(1.0, np.abs(B).max()) ** m:
                continue
            if np.linalg.matrix_rank(B) < m:
                continue
        choices = [_bound_choices(lp, j) for j in rest]
        grid = list(itertools.product(*choices))
        XN = np.array(grid, dtype=float).T.reshape(len(rest), len(grid))
        lo_all, hi_all = lp.l.astype(float), lp.u.astype(float)
        if m:
            Binv = np.linalg.inv(A_float[:, cols])
            XB = Binv @ (b.astype(float)[:, None] - A_float[:, rest] @ XN)
            lo, hi = lo_all[cols][:, None], hi_all[cols][:, None]
            # exact mode re-checks survivors, so its float filter is loose
            ftol = 1e-6 if exact else tol
            slack = ftol * np.maximum(1.0, np.maximum(np.abs(lo), np.abs(hi)))
            ok = np.all((XB >= lo - slack) & (XB <= hi + slack), axis=0)
        else:
            XB = np.zeros((0, len(grid)))
            ok = np.ones(len(grid), dtype=bool)
        if not ok.any():
            continue
        if exact:
            Binv_q = inverse(A[:, cols]) if m else None
            for g in np.flatnonzero(ok):
                x = np.empty(N, dtype=object)
                x[rest] = grid[g]
                if m:
                    xb = Binv_q @ (b - A[:, rest] @ x[rest]) if rest else Binv_q @ b
                    if any(v < lp.l[j] or v > lp.u[j] for v, j in zip(xb, cols)):
                        continue
                    x[cols] = xb
                key = tuple(x)
                if key not in seen:
                    seen.add(key)
                    yield x
            continue
        for g in np.flatnonzero(ok):
            x = np.empty(N)
            x[rest] = XN[:, g]
            x[cols] = np.clip(XB[:, g], lo_all[cols], hi_all[cols])
            # residual check guards against near-singular subsets
            if m and np.max(np.abs(A_float @ x - b.astype(float))) > 1e-9 * N * max(scale, np.abs(x).max()):
                continue
            key = tuple(np.round(x, 9))
            if key not in seen:
                seen.add(key)
                yield x


def oracle_solve(lp: StandardLP, exact: bool | None = None, tol: float = 1e-9,
                 cap: int = DEFAULT_ENUMERATION_CAP) -> OracleResult:
    """Maximize ``lp.c`` over all enumerated basic solutions."""
    if exact is None:
        exact = is_exact(lp.c)
    best, vertices = None, []
    c = lp.c if exact else lp.c.astype(float)
    for x in enumerate_basic_solutions(lp, exact, tol, cap):
        value = c @ x
        if best is None or value > best + (0 if exact else tol * max(1.0, abs(best))):
            best, vertices = value, [x]
        elif exact and value == best or not exact and abs(value - best) <= tol * max(1.0, abs(best)):
            vertices.append(x)
    if best is None:
        return OracleResult(float("nan"), [], Status.INFEASIBLE)
    status = Status.OPTIMAL
    if np.any(lp.capped):
        capped = np.flatnonzero(lp.capped)
        if any(x[j] >= lp.u[j] * (1 - 1e-12) for x in vertices for j in capped):
            status = Status.UNBOUNDED
    return OracleResult(best, vertices, status)
