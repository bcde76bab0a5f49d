"""Compromise solutions of multilevel linear programs.

Each level maximizes its own linear objective over a shared polytope
``{x >= 0 : A x <= b}``. Levels are solved independently, then top-down with
the ranges of the previous level's variables shrunk before every solve. The
LPs are handled by a bounded-variable primal method driven by a
suboptimality estimate; a vertex-enumeration oracle cross-checks it.
"""

from .adaptive import SolveResult, Status, SupportingFeasibleSolution, Tolerances, solve
from .lp_model import BoundedLP, MultilevelProblem, StandardLP, build_level_lp, to_standard_form
from .multilevel import CompromiseReport, RunConfig, check_compromise, run, solve_all_levels
from .oracle import oracle_solve
from .problem_io import ProblemFormatError, dump_problem, emit_report, parse_problem, report_from_json
from .range_reduction import AlphaConstraintError, RangeReductionContext, reduce_bounds

__all__ = [
    "AlphaConstraintError", "BoundedLP", "CompromiseReport", "MultilevelProblem", "ProblemFormatError",
    "RangeReductionContext", "RunConfig", "SolveResult", "StandardLP", "Status",
    "SupportingFeasibleSolution", "Tolerances", "build_level_lp", "check_compromise", "dump_problem",
    "emit_report", "oracle_solve", "parse_problem", "reduce_bounds", "report_from_json", "run",
    "solve", "solve_all_levels", "to_standard_form",
]


def example_path():
    """Path of the bundled three-level example document."""
    from importlib.resources import files
    return files(__name__) / "data" / "three_level.json"
