from fractions import Fraction

import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from multilevel_lp.adaptive import Status
from multilevel_lp.lp_model import MultilevelProblem, build_level_lp, to_standard_form
from multilevel_lp.multilevel import (RunConfig, check_compromise, compute_initial_bounds, run,
                                      solve_all_levels)
from multilevel_lp.oracle import oracle_solve
from multilevel_lp.random_instances import random_multilevel
from multilevel_lp.range_reduction import AlphaConstraintError

QUARTER = Fraction(1, 4)


@pytest.fixture
def documented_run(three_level_exact, documented_optima):
    config = RunConfig(alpha={(1, 1): QUARTER, (2, 1): QUARTER}, level_optima=documented_optima,
                       reference={"compromise": [0.25, 0, 2.7671, 0], "objectives": [4.2841, -6.8012, 5.5341]})
    return run(three_level_exact, config)


def test_solve_all_levels(three_level_exact):
    levels = solve_all_levels(three_level_exact)
    assert [lv.value for lv in levels] == [6, 12, 6]
    assert list(levels[1].x) == [2, 0, 0, 0]


def test_initial_bounds_examples():
    l, u = compute_initial_bounds(np.array([[1, 0], [0, 1]]))
    assert_array_equal(l, [0, 0])
    assert_array_equal(u, [1, 1])
    l, u = compute_initial_bounds(np.array([[3, 2], [3, 2]]))
    assert_array_equal(l, u)


def test_documented_iterations(documented_run):
    rep = documented_run
    assert rep.ok and rep.status is Status.OPTIMAL
    assert list(rep.initial_lower) == [0, 0, 0, 0]
    assert list(rep.initial_upper) == [2, 0, 3, Fraction(2, 3)]
    first, second = rep.iterations
    assert list(first.lower) == [QUARTER, 0, 0, 0]
    assert list(first.x) == [2, 0, 0, 0]
    assert first.objectives[1] == 12
    assert list(second.lower) == [QUARTER, 0, QUARTER, 0]
    assert list(second.upper) == [2, 0, 3, Fraction(2, 3)]
    assert first.alpha == {(1, 1): QUARTER}


def test_final_solve_matches_oracle(documented_run, three_level_exact):
    last = documented_run.iterations[-1]
    std = to_standard_form(build_level_lp(three_level_exact, 3, last.lower, last.upper))
    assert oracle_solve(std).value == 6
    assert documented_run.compromise_objectives[2] == 6
    assert three_level_exact.is_feasible(documented_run.compromise)


def test_notes_flag_reference_discrepancies(documented_run):
    notes = "\n".join(documented_run.notes)
    assert "level 3 has alternate optima" in notes
    assert "row 4 exceeds its bound by 0.5171" in notes
    assert "differ from the reference" in notes
    assert "5.5341" in notes


def test_beta_xi_at_final_iteration(documented_run):
    assert documented_run.iterations[-1].beta_xi == 0
    assert check_compromise(documented_run)


def test_check_compromise_rejects_perturbed_point(documented_run):
    documented_run.compromise = np.array([2, 0, 3, 1], dtype=object)
    assert not check_compromise(documented_run)


def test_without_supplied_optima(three_level):
    rep = run(three_level, RunConfig(alpha={(1, 1): 0.25, (2, 1): 0.25}))
    assert rep.ok
    assert_allclose(rep.initial_upper, [2, 0, 2, 2 / 3])
    last = rep.iterations[-1]
    ref = oracle_solve(to_standard_form(build_level_lp(three_level, 3, last.lower, last.upper)))
    assert_allclose(rep.compromise_objectives[2], ref.value, atol=1e-9)
    assert_allclose(rep.compromise_objectives[2], 5.75, atol=1e-9)


def test_same_objective_keeps_level_one_value():
    mlp = MultilevelProblem((1, 1), [[1, 2], [1, 2]], [[1, 1], [1, -1]], [4, 1])
    rep = run(mlp, RunConfig(alpha={(1, 1): 0}))
    f1 = solve_all_levels(mlp)[0].value
    assert_allclose(rep.compromise_objectives[0], f1, atol=1e-9)


def test_single_point_feasible_set():
    mlp = MultilevelProblem((1, 1), [[1, -1], [-1, 1]], [[1, 0], [0, 1]], [0, 0])
    rep = run(mlp)
    assert_allclose(rep.compromise, [0, 0])
    assert all(lv.x.tolist() == [0, 0] for lv in rep.levels)


def test_infeasible_problem_reports_failure():
    mlp = MultilevelProblem((1, 1), [[1, 1], [1, 0]], [[1, 1]], [-1])
    rep = run(mlp)
    assert not rep.ok
    assert rep.failure == {"stage": "level", "level": 1, "status": "Infeasible"}
    assert rep.compromise is None


def test_unbounded_problem_reports_failure():
    mlp = MultilevelProblem((1, 1), [[1, 0], [0, 1]], [[1, -1]], [1])
    rep = run(mlp)
    assert rep.failure["status"] == "Unbounded"


def test_bad_alpha_raises(three_level):
    with pytest.raises(AlphaConstraintError):
        run(three_level, RunConfig(alpha={(1, 1): 5}))


def test_exact_flag_converts(three_level):
    rep = run(three_level, RunConfig(exact=True, alpha={(1, 1): 0.25, (2, 1): 0.25}))
    assert rep.problem.exact
    assert all(isinstance(v, Fraction) for v in rep.iterations[-1].lower)


@pytest.mark.parametrize("seed", range(20))
def test_random_problems_final_level_is_optimal(seed):
    mlp = random_multilevel(np.random.default_rng(seed))
    rep = run(mlp)
    assert rep.ok
    last = rep.iterations[-1]
    ref = oracle_solve(to_standard_form(build_level_lp(mlp, mlp.P, last.lower, last.upper)))
    assert_allclose(rep.compromise_objectives[-1], ref.value, atol=1e-6)
    for prev, cur in zip(rep.iterations, rep.iterations[1:]):
        assert np.all(cur.lower >= prev.lower - 1e-12) and np.all(cur.upper <= prev.upper + 1e-12)
