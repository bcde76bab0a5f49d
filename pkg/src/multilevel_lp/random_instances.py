"""Random small LPs and multilevel problems for cross-checking against the oracle."""

from __future__ import annotations

import numpy as np

from .lp_model import BoundedLP, MultilevelProblem


def random_bounded_lp(rng: np.random.Generator, max_n: int = 6, max_m: int = 6,
                      low: int = -9, high: int = 9) -> BoundedLP:
    """Integer data in ``[low, high]`` with a random finite integer box per variable.

    Boxes are ``[l, u]`` with ``-3 <= l <= 0 <= u <= 3``, so the origin is always
    inside and rows with ``b_i >= 0`` never cut it off.
    """
    n = int(rng.integers(1, max_n + 1))
    m = int(rng.integers(1, max_m + 1))
    A = rng.integers(low, high + 1, size=(m, n))
    b = rng.integers(low, high + 1, size=m)
    c = rng.integers(low, high + 1, size=n)
    lower = rng.integers(-3, 1, size=n)
    upper = rng.integers(0, 4, size=n)
    return BoundedLP.from_data(c, A, b, lower, upper)


def random_multilevel(rng: np.random.Generator, P: int | None = None, max_block: int = 2,
                      max_m: int = 4) -> MultilevelProblem:
    """A bounded, feasible P-level problem (the origin is feasible, a box row caps every variable)."""
    if P is None:
        P = int(rng.integers(2, 4))
    sizes = tuple(int(s) for s in rng.integers(1, max_block + 1, size=P))
    n = sum(sizes)
    m = int(rng.integers(1, max_m + 1))
    A = rng.integers(-5, 6, size=(m, n))
    b = rng.integers(0, 10, size=m)
    A = np.vstack([A, np.ones((1, n), dtype=int)])
    b = np.append(b, int(rng.integers(1, 10)))
    C = rng.integers(-5, 6, size=(P, n))
    return MultilevelProblem(sizes, C, A, b)
