"""Range-reduction maps applied to the variable bounds between level solves.

Before level ``p`` is solved, the ranges ``[l, u]`` of the variables controlled by
level ``p - 1`` are shrunk according to where level ``p - 1``'s own optimum sits:

* strictly inside the range: keep the part on the side favoured by level
  ``p - 1``'s objective coefficient (``[l, t]`` for a negative coefficient,
  ``[t, u]`` for a positive one, with ``t`` the optimum), unless either the
  level ``p - 1`` or the level ``p`` coefficient is zero;
* at the upper end: shrink to ``[l, u - alpha]``;
* at the lower end: shrink to ``[l + alpha, u]``.

Each reduction is an increasing affine map of ``[l, u]`` onto the new range;
applying it to both bounds gives the new bounds. Components of other levels
are left alone.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .lp_model import MultilevelProblem, flat_index

TOL_SIGN = 1e-12
DEFAULT_ALPHA_FRACTION = 0.25


class AlphaConstraintError(ValueError):
    """An alpha offset is negative or not smaller than the width of its range."""

    def __init__(self, level, position, alpha, width):
        self.level, self.position, self.alpha, self.width = level, position, alpha, width
        super().__init__(
            f"alpha for x[{level},{position}] must satisfy 0 <= alpha < u - l = {width}, got {alpha}")


def sign(t, tol=TOL_SIGN) -> int:
    if t < -tol:
        return -1
    if t > tol:
        return 1
    return 0


def _check_interval(a1, a2, t):
    if not a2 > a1:
        raise ValueError(f"degenerate interval [{a1}, {a2}]")
    if not a1 < t < a2:
        raise ValueError(f"t = {t} must lie strictly inside ({a1}, {a2})")


def lower_map(a1, a2, t, x):
    """Affine map of ``[a1, a2]`` onto ``[a1, t]``."""
    _check_interval(a1, a2, t)
    return ((t - a1) * x + a1 * (a2 - t)) / (a2 - a1)


def upper_map(a1, a2, t, x):
    """Affine map of ``[a1, a2]`` onto ``[t, a2]``."""
    _check_interval(a1, a2, t)
    return ((a2 - t) * x + a2 * (t - a1)) / (a2 - a1)


def _check_alpha(l, u, alpha):
    if not u > l:
        raise ValueError(f"degenerate interval [{l}, {u}]")
    if alpha < 0 or not alpha < u - l:
        raise ValueError(f"alpha = {alpha} must satisfy 0 <= alpha < {u - l}")


def lower_alpha_map(l, u, alpha, x):
    """Affine map of ``[l, u]`` onto ``[l, u - alpha]``."""
    _check_alpha(l, u, alpha)
    return ((u - (l + alpha)) * x + alpha * l) / (u - l)


def upper_alpha_map(l, u, alpha, x):
    """Affine map of ``[l, u]`` onto ``[l + alpha, u]``."""
    _check_alpha(l, u, alpha)
    return ((u - (l + alpha)) * x + alpha * u) / (u - l)


@dataclass(frozen=True, eq=False)
class RangeReductionContext:
    """Everything the reduction before the level-`p` solve depends on.

    Parameters
    ----------
    mlp : MultilevelProblem
    level_optima : array_like, shape (P, n)
        Row ``q - 1`` is the independent optimum of level ``q``.
    lower, upper : array_like, shape (n,)
        Current bounds (those in force at iteration ``p - 1``).
    p : int
        Level about to be solved, ``2 <= p <= P``.
    alpha : dict
        Offsets keyed by 1-based ``(level, position)``. Missing boundary
        components get ``alpha_fraction * (u - l)``.
    """

    mlp: MultilevelProblem
    level_optima: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    p: int
    alpha: dict = field(default_factory=dict)
    alpha_fraction: float = DEFAULT_ALPHA_FRACTION
    tol_sign: float = TOL_SIGN

    def __post_init__(self):
        mlp = self.mlp
        if not 1 <= self.p <= mlp.P:
            raise IndexError(f"level {self.p} out of range 1..{mlp.P}")
        optima = np.asarray(self.level_optima)
        if optima.shape != (mlp.P, mlp.n):
            raise ValueError(f"level_optima must have shape {(mlp.P, mlp.n)}")
        if np.any(np.asarray(self.lower) > np.asarray(self.upper)):
            raise ValueError("lower bound exceeds upper bound")
        object.__setattr__(self, "level_optima", optima)
        object.__setattr__(self, "lower", np.asarray(self.lower))
        object.__setattr__(self, "upper", np.asarray(self.upper))
        # validate the offsets this context will actually use
        if self.p >= 2:
            for j in range(1, mlp.n_sizes[self.p - 2] + 1):
                if self.case(j) in (2, 3):
                    self.alpha_for(j)

    @property
    def level(self) -> int:
        """The level whose variables get reduced."""
        return self.p - 1

    def _k(self, j):
        return flat_index(self.mlp.n_sizes, self.level, j) - 1

    def bounds(self, j):
        k = self._k(j)
        return self.lower[k], self.upper[k]

    def target(self, j):
        """Level ``p - 1``'s own optimal value of the component."""
        return self.level_optima[self.level - 1, self._k(j)]

    def coefficients(self, j):
        """Objective coefficients of the component in levels ``p - 1`` and ``p``."""
        k = self._k(j)
        return self.mlp.C[self.level - 1, k], self.mlp.C[self.p - 1, k]

    def selectors(self, j):
        """Sign selectors ``(A, B) = (sign(u - t), sign(t - l))``."""
        lo, hi = self.bounds(j)
        t = self.target(j)
        return sign(hi - t, self.tol_sign), sign(t - lo, self.tol_sign)

    def case(self, j) -> int:
        """0 for a zero-width range, 1 interior, 2 optimum at the upper bound, 3 at the lower."""
        lo, hi = self.bounds(j)
        if sign(hi - lo, self.tol_sign) == 0:
            return 0
        A, B = self.selectors(j)
        if A == 0:
            return 2
        if B == 0:
            return 3
        return 1

    def alpha_for(self, j):
        lo, hi = self.bounds(j)
        width = hi - lo
        if sign(width, self.tol_sign) == 0:
            return 0 * width
        key = (self.level, j)
        if key in self.alpha:
            a = self.alpha[key]
        else:
            a = self.alpha_fraction * width
        if a < 0 or not a < width:
            raise AlphaConstraintError(self.level, j, a, width)
        return a


def case_weights(A: int, B: int) -> tuple[int, int]:
    """Weights ``(H1, H2)`` of the boundary map and the interior map.

    ``H1 = (1 + A)(1 - A) + (1 + B)(1 - B)`` and ``H2 = A * B`` give (0, 1) for an
    interior optimum and (1, 0) for an optimum at either bound.
    """
    return (1 + A) * (1 - A) + (1 + B) * (1 - B), A * B


def gate(ctx: RangeReductionContext, j) -> int:
    """1 when both the level ``p - 1`` and level ``p`` coefficients are nonzero, else 0."""
    own, nxt = ctx.coefficients(j)
    return (sign(nxt, ctx.tol_sign) * sign(own, ctx.tol_sign)) ** 2


def psi(ctx: RangeReductionContext, j, x):
    """Interior reduction selected by the sign of the own coefficient.

    Negative coefficient gives the lower map, positive the upper map, zero the
    average of both.
    """
    lo, hi = ctx.bounds(j)
    t = ctx.target(j)
    s = sign(ctx.coefficients(j)[0], ctx.tol_sign)
    t_minus, t_plus = 1 - s, 1 + s
    out = 0
    if t_minus:
        out = out + t_minus * lower_map(lo, hi, t, x)
    if t_plus:
        out = out + t_plus * upper_map(lo, hi, t, x)
    return out / 2


def nu(ctx: RangeReductionContext, j, x):
    """`psi` when both coefficients are nonzero, identity otherwise."""
    return psi(ctx, j, x) if gate(ctx, j) else x


def psi_hat(ctx: RangeReductionContext, j, x):
    """Boundary reduction: shrink away from the bound that holds the optimum."""
    lo, hi = ctx.bounds(j)
    A, B = ctx.selectors(j)
    if sign(hi - lo, ctx.tol_sign) == 0:
        return x
    alpha = ctx.alpha_for(j)
    out = 0
    if B:
        out = out + B * lower_alpha_map(lo, hi, alpha, x)
    if A:
        out = out + A * upper_alpha_map(lo, hi, alpha, x)
    return out


def nu_hat(ctx: RangeReductionContext, j, x):
    """`psi_hat` when both coefficients are nonzero, identity otherwise."""
    return psi_hat(ctx, j, x) if gate(ctx, j) else x


def xi(ctx: RangeReductionContext, i, j, x):
    """Reduce component ``(i, j)`` at value `x`; identity unless ``i == p - 1``."""
    if ctx.p < 2 or i != ctx.level:
        return x
    case = ctx.case(j)
    if case == 0:
        return x
    h1, h2 = case_weights(*ctx.selectors(j))
    if h1:
        return h1 * psi_hat(ctx, j, x)
    return h2 * nu(ctx, j, x)


def xi_vector(ctx: RangeReductionContext, values) -> np.ndarray:
    """Apply `xi` to every component of an n-vector."""
    values = np.asarray(values)
    out = values.copy()
    sizes = ctx.mlp.n_sizes
    for j in range(1, sizes[ctx.level - 1] + 1) if ctx.p >= 2 else ():
        k = ctx._k(j)
        out[k] = xi(ctx, ctx.level, j, values[k])
    return out


def reduce_bounds(ctx: RangeReductionContext):
    """New bounds ``(xi(l), xi(u))`` for the level-`p` solve."""
    lower = xi_vector(ctx, ctx.lower)
    upper = xi_vector(ctx, ctx.upper)
    if np.any(lower > upper):
        raise ValueError("range reduction produced an empty box")
    return lower, upper
