"""Each level of a three-level problem, solved on its own.

Three decision makers share the polytope {x >= 0 : A x <= b}. Level 1 controls
x1 and x2, level 2 controls x3, level 3 controls x4; each maximizes its own
linear objective. The first step of the compromise search ignores the
hierarchy and solves every level's LP independently.
"""

from pathlib import Path

import numpy as np

from multilevel_lp import build_level_lp, parse_problem, solve, to_standard_form
from multilevel_lp.oracle import oracle_solve

mlp, config = parse_problem(Path(__file__).with_name("three_level.json"))
print(f"{mlp.P} levels, sizes {mlp.n_sizes}, {mlp.m} constraints")

# %% The origin is not feasible (row 3 asks for -2 x1 - 5 x2 - 2 x3 <= -2),
# so every solve starts with a phase-1 pass before improving the objective.
for p in range(1, mlp.P + 1):
    std = to_standard_form(build_level_lp(mlp, p))
    res = solve(std)
    x = std.structural(res.x)
    print(f"level {p}: f{p} = {res.objective:.6f} at {np.round(x, 6)} "
          f"after {res.iterations} iterations, beta = {res.beta:g}")

# %% The suboptimality estimate beta shrinks every iteration and hits 0 at the optimum.
# Columns with no finite upper bound are capped at 1e9, so the early values are huge:
# beta measures the distance to those caps until the support settles.
std = to_standard_form(build_level_lp(mlp, 2))
for k, h in enumerate(solve(std).history):
    print(f"  iteration {k}: objective {h.objective:9.4f}  beta {h.beta:9.4f}")

# %% Enumerating every basic solution confirms the values and shows that level 3
# has two optimal vertices; which one seeds the bounds changes the boxes later on.
exact = mlp.with_exact()
for p in range(1, mlp.P + 1):
    std = to_standard_form(build_level_lp(exact, p))
    ref = oracle_solve(std)
    verts = [tuple(str(v) for v in std.structural(x)) for x in ref.vertices]
    print(f"oracle level {p}: {ref.value} at {verts}")
