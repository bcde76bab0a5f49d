"""Adaptive (support) method for ``max c^T x, A x = b, l <= x <= u``.

The iterate is a supporting feasible solution ``{x, J_B}``: a feasible point plus
a set of ``m`` columns whose submatrix ``A_B`` is nonsingular. Unlike a simplex
basis, nonbasic components of ``x`` may sit strictly inside their box.

For a support with potentials ``y = c_B A_B^{-1}`` the estimates are
``E_j = y a_j - c_j``. The suboptimality estimate

    beta = sum_{E_j > 0} E_j (x_j - l_j) + sum_{E_j < 0} E_j (x_j - u_j)

(summed over nonbasic j) bounds the optimality gap of ``x`` from above, and
``beta = 0`` certifies optimality. Each iteration makes a primal step towards the
pseudoplan of the current support, then, if the step was blocked, exchanges the
blocking column for a nonbasic one along a dual ray that lowers the bound
``c^T x + beta``.

The same code runs on float64 arrays or on Fraction object arrays; in exact mode
all tolerances are zero.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace

import numpy as np

from ._arith import as_array, inverse, is_exact, zeros
from .lp_model import StandardLP


class Status(str, enum.Enum):
    OPTIMAL = "Optimal"
    EPSILON_OPTIMAL = "EpsilonOptimal"
    INFEASIBLE = "Infeasible"
    UNBOUNDED = "Unbounded"
    ITERATION_LIMIT = "IterationLimit"


class InfeasibleError(Exception):
    """The feasible set of the LP is empty."""


class NumericalError(RuntimeError):
    """An internal invariant of the method failed (singular support, lost feasibility)."""


@dataclass(frozen=True)
class Tolerances:
    feas: float = 1e-9
    opt: float = 1e-9
    pivot: float = 1e-10
    refactor_every: int = 50

    @classmethod
    def exact(cls) -> "Tolerances":
        return cls(feas=0.0, opt=0.0, pivot=0.0)


DEFAULT_TOLERANCES = Tolerances()


def _tolerances(lp, tol):
    if tol is None:
        return Tolerances.exact() if lp.exact else DEFAULT_TOLERANCES
    return tol


@dataclass(frozen=True, eq=False)
class SupportingFeasibleSolution:
    """A feasible point `x` together with a support `basis` (column indices).

    `binv` holds ``A_B^{-1}`` with rows ordered like `basis`. `updates` counts
    product-form updates since the last full factorization.
    """

    lp: StandardLP
    x: np.ndarray
    basis: tuple
    binv: np.ndarray
    updates: int = 0

    @property
    def nonbasic(self) -> np.ndarray:
        mask = np.ones(self.lp.N, dtype=bool)
        mask[list(self.basis)] = False
        return np.flatnonzero(mask)

    def objective(self, c=None) -> object:
        c = self.lp.c if c is None else c
        return c @ self.x

    def refactorized(self) -> "SupportingFeasibleSolution":
        binv = inverse(self.lp.A[:, list(self.basis)])
        return replace(self, binv=binv, updates=0)

    def check(self, tol: Tolerances | None = None) -> None:
        """Raise NumericalError if the SFS invariants do not hold."""
        tol = _tolerances(self.lp, tol)
        lp = self.lp
        scale = 1.0 if lp.exact else max(1.0, float(np.max(np.abs(lp.b), initial=0.0)))
        resid = lp.A @ self.x - lp.b
        if lp.m and np.max(np.abs(resid)) > tol.feas * scale * 10:
            raise NumericalError(f"equality residual {np.max(np.abs(resid))} exceeds tolerance")
        if np.any(self.x < lp.l - tol.feas) or np.any(self.x > lp.u + tol.feas):
            raise NumericalError("point violates its bounds")
        if len(self.basis) != lp.m or len(set(self.basis)) != lp.m:
            raise NumericalError("support must hold m distinct columns")


@dataclass
class Iterate:
    """One row of the solve history: the SFS objective and its beta."""

    objective: object
    beta: object
    basis: tuple
    theta: object = None
    sigma: object = None


@dataclass
class SolveResult:
    x: np.ndarray
    objective: object
    beta: object
    status: Status
    iterations: int
    sfs: SupportingFeasibleSolution | None = None
    history: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.status in (Status.OPTIMAL, Status.EPSILON_OPTIMAL)


def _fixed_mask(lp: StandardLP) -> np.ndarray:
    return np.array([lo == hi for lo, hi in zip(lp.l, lp.u)], dtype=bool)


def reduced_estimates(sfs: SupportingFeasibleSolution, c=None, tol: Tolerances | None = None) -> np.ndarray:
    """Estimates ``E_j = c_B A_B^{-1} a_j - c_j``; zero on the support.

    In float mode estimates smaller than the pivot tolerance are flushed to zero.
    """
    tol = _tolerances(sfs.lp, tol)
    lp = sfs.lp
    c = lp.c if c is None else c
    basis = list(sfs.basis)
    y = c[basis] @ sfs.binv if basis else zeros(0, lp.exact)
    E = (y @ lp.A - c) if basis else -c.copy()
    E = np.array(E, dtype=E.dtype)
    E[basis] = 0
    if not lp.exact:
        scale = 1.0 + np.abs(c)
        E[np.abs(E) <= tol.pivot * scale] = 0.0
    return E


def suboptimality(sfs: SupportingFeasibleSolution, c=None, E=None, tol: Tolerances | None = None):
    """The suboptimality estimate beta of `sfs` for objective `c`."""
    lp = sfs.lp
    if E is None:
        E = reduced_estimates(sfs, c, tol)
    pos = E > 0
    neg = E < 0
    beta = (E[pos] * (sfs.x[pos] - lp.l[pos])).sum() + (E[neg] * (sfs.x[neg] - lp.u[neg])).sum()
    if lp.exact:
        return beta
    return max(float(beta), 0.0)


def _pseudoplan(sfs, E, fixed):
    """Nonbasic components of the pseudoplan: the bound selected by the sign of E."""
    lp = sfs.lp
    kappa = sfs.x.copy()
    for j in sfs.nonbasic:
        if fixed[j]:
            continue
        if E[j] > 0:
            kappa[j] = lp.l[j]
        elif E[j] < 0:
            kappa[j] = lp.u[j]
    return kappa


def _eta_update(binv, k, alpha):
    """Inverse of the support after replacing position `k` by a column with ``A_B^{-1} a = alpha``."""
    piv = alpha[k]
    new = binv.copy()
    new[k] = binv[k] / piv
    for i in range(binv.shape[0]):
        if i != k and alpha[i] != 0:
            new[i] = binv[i] - alpha[i] * new[k]
    return new


def _replace_column(sfs, k, entering, tol):
    lp = sfs.lp
    alpha = sfs.binv @ lp.A[:, entering]
    basis = list(sfs.basis)
    basis[k] = int(entering)
    out = SupportingFeasibleSolution(lp, sfs.x, tuple(basis), _eta_update(sfs.binv, k, alpha),
                                     sfs.updates + 1)
    if lp.exact:
        return out
    if out.updates >= tol.refactor_every:
        return out.refactorized()
    # refactorize when the product-form inverse has drifted
    err = np.max(np.abs(out.binv @ lp.A[:, basis] - np.eye(lp.m)), initial=0.0)
    if err > 1e-8:
        return out.refactorized()
    return out


def _primal_step(sfs, E, fixed, tol):
    """Move towards the pseudoplan. Returns (x_new, theta, blocking position or None, kappa)."""
    lp = sfs.lp
    basis = list(sfs.basis)
    nb = sfs.nonbasic
    kappa = _pseudoplan(sfs, E, fixed)
    d = zeros(lp.N, lp.exact)
    d[nb] = kappa[nb] - sfs.x[nb]
    if lp.m:
        d[basis] = -(sfs.binv @ (lp.A[:, nb] @ d[nb]))
    one = 1 if lp.exact else 1.0
    theta, block = one, None
    for k, j in enumerate(basis):
        dj = d[j]
        if dj > tol.pivot:
            t = (lp.u[j] - sfs.x[j]) / dj
        elif dj < -tol.pivot:
            t = (lp.l[j] - sfs.x[j]) / dj
        else:
            continue
        if t < theta or (t == theta and block is not None and j < basis[block]):
            theta, block = t, k
    if not lp.exact and theta < 0:
        theta = 0.0
    x_new = sfs.x + theta * d
    if block is None:
        x_new[nb] = kappa[nb]
    else:
        j = basis[block]
        x_new[j] = lp.u[j] if d[j] > 0 else lp.l[j]
    if not lp.exact:
        np.clip(x_new, lp.l, lp.u, out=x_new)
    return x_new, theta, block, d


def _dual_step(sfs, E, fixed, block, d, tol):
    """Pick the column entering the support in place of position `block`.

    Returns (entering column, sigma).
    """
    lp = sfs.lp
    j0 = sfs.basis[block]
    s = -1 if d[j0] > 0 else 1
    row = sfs.binv[block] @ lp.A
    best, best_sigma = None, None
    for j in sfs.nonbasic:
        if fixed[j]:
            continue
        delta = s * row[j]
        if abs(delta) <= tol.pivot:
            continue
        if E[j] * delta < 0:
            sigma = -E[j] / delta
        elif E[j] == 0 and ((delta > 0 and sfs.x[j] > lp.l[j] + tol.feas)
                            or (delta < 0 and sfs.x[j] < lp.u[j] - tol.feas)):
            sigma = 0 * E[j]
        else:
            continue
        if best_sigma is None or sigma < best_sigma - (0 if lp.exact else tol.pivot):
            best, best_sigma = j, sigma
    if best is None:
        raise NumericalError("no column can enter the support although x is feasible")
    return best, best_sigma


def iterate(sfs: SupportingFeasibleSolution, c=None, eps=0, tol: Tolerances | None = None):
    """One adaptive iteration.

    Returns ``(new_sfs, record, done)``; `done` is true when the primal step alone
    brought beta down to `eps` (the support is then left unchanged).
    """
    tol = _tolerances(sfs.lp, tol)
    lp = sfs.lp
    c = lp.c if c is None else c
    fixed = _fixed_mask(lp)
    E = reduced_estimates(sfs, c, tol)
    beta = suboptimality(sfs, c, E, tol)
    x_new, theta, block, d = _primal_step(sfs, E, fixed, tol)
    moved = replace(sfs, x=x_new)
    beta_after = (1 - theta) * beta
    if block is None or beta_after <= eps:
        return moved, Iterate(c @ x_new, suboptimality(moved, c, None, tol), moved.basis, theta), True
    entering, sigma = _dual_step(moved, E, fixed, block, d, tol)
    new = _replace_column(moved, block, entering, tol)
    return new, Iterate(c @ x_new, suboptimality(new, c, None, tol), new.basis, theta, sigma), False


def _unit_column(A, i, fixed, used):
    """A column whose only nonzero sits in row `i` (a slack-like column).

    Scans from the right so appended slacks win over structural columns.
    """
    for j in reversed(range(A.shape[1])):
        if j in used or fixed[j] or A[i, j] == 0:
            continue
        col = A[:, j]
        if sum(1 for v in col if v != 0) == 1:
            return j
    return None


def initial_sfs(lp: StandardLP, tol: Tolerances | None = None, max_iter: int | None = None):
    """Build a supporting feasible solution, running a phase-1 solve if needed.

    Nonbasic variables start at the point of their box closest to zero. Each row
    is covered by a slack-like column when that column can absorb the row's
    residual within its bounds, otherwise by an artificial variable. The phase-1
    problem maximizes minus the sum of artificials. Raises InfeasibleError.
    """
    tol = _tolerances(lp, tol)
    exact = lp.exact
    m, N = lp.A.shape
    fixed = _fixed_mask(lp)
    zero = zeros(1, exact)[0]
    x = np.array([min(max(zero, lo), hi) for lo, hi in zip(lp.l, lp.u)], dtype=lp.c.dtype)

    basis = [None] * m
    used = set()
    resid = lp.b - lp.A @ x
    for i in range(m):
        j = _unit_column(lp.A, i, fixed, used)
        if j is None:
            continue
        value = x[j] + resid[i] / lp.A[i, j]
        if lp.l[j] - tol.feas <= value <= lp.u[j] + tol.feas:
            x[j] = min(max(value, lp.l[j]), lp.u[j])
            basis[i] = j
            used.add(j)
    missing = [i for i in range(m) if basis[i] is None]
    if not missing:
        binv = inverse(lp.A[:, basis])
        return SupportingFeasibleSolution(lp, x, tuple(basis), binv)

    # phase 1 with artificial columns on the uncovered rows
    resid = lp.b - lp.A @ x
    k = len(missing)
    art = zeros((m, k), exact)
    art_u = zeros(k, exact)
    one = 1 if exact else 1.0
    for col, i in enumerate(missing):
        sgn = one if resid[i] >= 0 else -one
        art[i, col] = sgn
        art_u[col] = abs(resid[i])
    A1 = np.concatenate([lp.A, art], axis=1)
    art_c = zeros(k, exact)
    art_c[:] = -one
    c1 = np.concatenate([zeros(N, exact), art_c])
    l1 = np.concatenate([lp.l, zeros(k, exact)])
    u1 = np.concatenate([lp.u, art_u])
    aux = StandardLP(c1, A1, lp.b, l1, u1, lp.n_structural)
    x1 = np.concatenate([x, art_u])
    basis1 = [basis[i] if basis[i] is not None else N + missing.index(i) for i in range(m)]
    start = SupportingFeasibleSolution(aux, x1, tuple(basis1), inverse(A1[:, basis1]))
    res = _run(start, 0, tol, max_iter or 10 * (aux.N + m) + 50)
    if res.status == Status.ITERATION_LIMIT:
        raise NumericalError("phase 1 hit the iteration limit")
    art_total = res.sfs.x[N:].sum()
    scale = 1.0 if exact else max(1.0, float(np.max(np.abs(lp.b), initial=0.0)))
    if art_total > tol.feas * scale:
        raise InfeasibleError(f"phase 1 optimum leaves infeasibility {art_total}")

    sfs = res.sfs
    # drive artificial columns out of the support
    for k_pos, j in enumerate(list(sfs.basis)):
        if j < N:
            continue
        row = sfs.binv[k_pos] @ A1[:, :N]
        best, best_val = None, None
        # fixed columns only as a last resort (a row that holds nothing else)
        for allow_fixed in (False, True):
            for cand in range(N):
                if cand in sfs.basis or (fixed[cand] and not allow_fixed):
                    continue
                v = abs(row[cand])
                if v > tol.pivot and (best_val is None or v > best_val):
                    best, best_val = cand, v
            if best is not None:
                break
        if best is None:
            raise NumericalError("constraint matrix is rank deficient")
        sfs = _replace_column(sfs, k_pos, best, tol)
    basis = list(sfs.basis)
    x = sfs.x[:N].copy()
    binv = inverse(lp.A[:, basis])
    if not exact:
        nb = np.setdiff1d(np.arange(N), basis)
        x[basis] = binv @ (lp.b - lp.A[:, nb] @ x[nb])
        np.clip(x, lp.l, lp.u, out=x)
    return SupportingFeasibleSolution(lp, x, tuple(basis), binv)


def _run(sfs, eps, tol, max_iter, c=None, check=False):
    lp = sfs.lp
    c = lp.c if c is None else c
    history = []
    it = 0
    status = Status.ITERATION_LIMIT
    beta = suboptimality(sfs, c, None, tol)
    history.append(Iterate(c @ sfs.x, beta, sfs.basis))
    while True:
        if beta <= tol.opt:
            status = Status.OPTIMAL
            break
        if beta <= eps:
            status = Status.EPSILON_OPTIMAL
            break
        if it >= max_iter:
            break
        sfs, rec, done = iterate(sfs, c, eps, tol)
        if check:
            sfs.check(tol)
        it += 1
        history.append(rec)
        beta = rec.beta
    return SolveResult(sfs.x, c @ sfs.x, beta, status, it, sfs, history)


def solve(lp: StandardLP, eps=0, tol: Tolerances | None = None, max_iter: int | None = None,
          check: bool = False) -> SolveResult:
    """Solve `lp` to within `eps` of optimality.

    Parameters
    ----------
    lp : StandardLP
    eps : float
        Accepted suboptimality; 0 asks for an optimal solution.
    tol : Tolerances, optional
        Defaults to `DEFAULT_TOLERANCES`, or all-zero tolerances for exact data.
    max_iter : int, optional
        Iteration cap, default ``10 * (N + m)``.
    check : bool
        Validate SFS invariants after every iteration (slow; for tests).
    """
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    tol = _tolerances(lp, tol)
    if max_iter is None:
        max_iter = 10 * (lp.N + lp.m)
    try:
        sfs = initial_sfs(lp, tol)
    except InfeasibleError:
        nan = float("nan")
        return SolveResult(np.full(lp.N, nan), nan, nan, Status.INFEASIBLE, 0)
    if check:
        sfs.check(tol)
    res = _run(sfs, eps, tol, max_iter, check=check)
    if res.ok and np.any(lp.capped):
        at_cap = [j for j in np.flatnonzero(lp.capped) if res.x[j] >= lp.u[j] * (1 - 1e-12)]
        if at_cap:
            res.status = Status.UNBOUNDED
    return res


def standard_solution(lp: StandardLP, x_struct) -> np.ndarray:
    """Helper for tests: lift a structural point into `lp`'s column space."""
    return lp.lift(as_array(x_struct, is_exact(lp.c)))
