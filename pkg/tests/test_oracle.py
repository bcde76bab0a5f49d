from fractions import Fraction
from itertools import product

import numpy as np
import pytest
from numpy.testing import assert_allclose

from multilevel_lp.adaptive import Status
from multilevel_lp.lp_model import BoundedLP, build_level_lp, to_standard_form
from multilevel_lp.oracle import EnumerationLimitError, enumerate_basic_solutions, oracle_solve


def test_square_vertices():
    # x + y <= 1 over the unit box: vertices (0,0), (1,0), (0,1)
    std = to_standard_form(BoundedLP.from_data([1, 1], [[1, 1]], [1], [0, 0], [1, 1], exact=True))
    points = {tuple(std.structural(x)) for x in enumerate_basic_solutions(std)}
    assert points == {(0, 0), (1, 0), (0, 1)}


def test_matches_grid_search_on_a_box():
    # with a nonbinding row the optimum is the best box corner
    c = [3, -2, 1]
    std = to_standard_form(BoundedLP.from_data(c, [[1, 1, 1]], [100], [-1, 0, -2], [2, 4, 1]))
    best = max(np.dot(c, corner) for corner in product([-1, 2], [0, 4], [-2, 1]))
    assert_allclose(oracle_solve(std).value, best)


@pytest.mark.parametrize("p, value", [(1, 6), (2, 12), (3, 6)])
def test_level_optima(three_level_exact, p, value):
    res = oracle_solve(to_standard_form(build_level_lp(three_level_exact, p)))
    assert res.value == value


def test_level_three_has_two_optimal_vertices(three_level_exact):
    std = to_standard_form(build_level_lp(three_level_exact, 3))
    verts = {tuple(std.structural(x)) for x in oracle_solve(std).vertices}
    assert verts == {(1, 0, 3, 0), (0, 0, 2, Fraction(2, 3))}


def test_float_and_exact_agree(three_level, three_level_exact):
    for p in (1, 2, 3):
        a = oracle_solve(to_standard_form(build_level_lp(three_level, p)))
        b = oracle_solve(to_standard_form(build_level_lp(three_level_exact, p)))
        assert_allclose(a.value, float(b.value), atol=1e-9)


def test_infeasible():
    std = to_standard_form(BoundedLP.from_data([1], [[1]], [-1], [0], [5]))
    res = oracle_solve(std)
    assert res.status is Status.INFEASIBLE
    assert res.vertex is None


def test_unbounded_reaches_cap():
    std = to_standard_form(BoundedLP.from_data([1, 0], [[1, -1]], [1], [0, 0], [np.inf, np.inf]))
    assert oracle_solve(std).status is Status.UNBOUNDED


def test_enumeration_cap():
    std = to_standard_form(BoundedLP.from_data(np.ones(20), np.ones((10, 20)), np.ones(10),
                                               np.zeros(20), np.ones(20)))
    with pytest.raises(EnumerationLimitError):
        oracle_solve(std, cap=1000)


def test_vertices_are_feasible(three_level):
    std = to_standard_form(build_level_lp(three_level, 1))
    for x in enumerate_basic_solutions(std):
        assert_allclose(std.A @ x, std.b, atol=1e-9)
        assert np.all(x >= std.l - 1e-9) and np.all(x <= std.u + 1e-9)
