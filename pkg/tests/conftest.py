from fractions import Fraction

import numpy as np
import pytest

from multilevel_lp import MultilevelProblem, example_path, parse_problem

THREE_LEVEL = dict(
    n_sizes=(2, 1, 1),
    C=[[-5, 1, 2, 3], [6, 2, -3, 1], [0, -1, 2, 3]],
    A=[[3, 2, 1, 2], [1, 3, -2, -1], [-2, -5, -2, 0], [-1, 4, 1, 0],
       [1, -1, 1, 2], [1, 0, 1, 3], [0, 0, 0, 1]],
    b=[6, 3, -2, 2, 5, 4, 2],
)

# independent optima used to seed the bounds; level 3 has a second optimal vertex (0, 0, 2, 2/3)
DOCUMENTED_OPTIMA = [[0, 0, 2, Fraction(2, 3)], [2, 0, 0, 0], [1, 0, 3, 0]]


@pytest.fixture
def three_level():
    return MultilevelProblem(**THREE_LEVEL)


@pytest.fixture
def three_level_exact():
    return MultilevelProblem(**THREE_LEVEL, exact=True)


@pytest.fixture
def documented_optima():
    return np.array(DOCUMENTED_OPTIMA, dtype=object)


@pytest.fixture
def three_level_document():
    return parse_problem(example_path())
