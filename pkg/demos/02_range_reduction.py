"""Shrinking the variable ranges between level solves.

Before level p is solved, the ranges of the variables owned by level p - 1 are
reduced according to where that level's own optimum sits in its range:

* interior optimum: keep the side its objective coefficient prefers;
* optimum at a bound: move that bound inward by an offset alpha.

The reduced bounds are the images of the old bounds under an increasing
affine map, so the new box always sits inside the old one.
"""

from fractions import Fraction
from pathlib import Path

import numpy as np

from multilevel_lp import RangeReductionContext, parse_problem, reduce_bounds
from multilevel_lp.multilevel import compute_initial_bounds
from multilevel_lp.range_reduction import lower_alpha_map, lower_map, upper_alpha_map, upper_map

# %% The four one-dimensional maps on [0, 4].
xs = np.linspace(0, 4, 5)
print("x          ", xs)
print("onto [0, 1]", np.array([lower_map(0, 4, 1, x) for x in xs]))
print("onto [1, 4]", np.array([upper_map(0, 4, 1, x) for x in xs]))
print("onto [0, 3]", np.array([lower_alpha_map(0, 4, 1, x) for x in xs]))
print("onto [1, 4]", np.array([upper_alpha_map(0, 4, 1, x) for x in xs]))

# %% The three-level example in rational arithmetic, seeded with the vertices
# listed in the document (level 3 uses its optimum (1, 0, 3, 0)).
mlp, config = parse_problem(Path(__file__).with_name("three_level.json"))
mlp = mlp.with_exact()
optima = np.array([[Fraction(v) for v in row] for row in config.level_optima], dtype=object)
lower, upper = compute_initial_bounds(optima)
show = lambda v: "(" + ", ".join(str(x) for x in v) + ")"
print("l(1) =", show(lower), " u(1) =", show(upper))

alpha = {key: Fraction(str(v)) for key, v in config.alpha.items()}
for p in (2, 3):
    ctx = RangeReductionContext(mlp, optima, lower, upper, p, alpha)
    cases = [ctx.case(j) for j in range(1, mlp.n_sizes[p - 2] + 1)]
    lower, upper = reduce_bounds(ctx)
    print(f"level {p - 1} components in cases {cases}")
    print(f"l({p}) = {show(lower)}  u({p}) = {show(upper)}")
