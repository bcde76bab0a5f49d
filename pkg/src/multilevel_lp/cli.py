"""Command-line entry point.

Exit codes: 0 success, 1 infeasible or unbounded, 2 input error,
3 internal invariant violation (including a solver/oracle mismatch).
"""

from __future__ import annotations

import argparse
import json
import sys
import time

import numpy as np

from .adaptive import Status, solve
from .lp_model import build_level_lp, to_standard_form
from .multilevel import check_compromise, compute_initial_bounds, run
from .oracle import EnumerationLimitError, oracle_solve
from .problem_io import (FORMATS, ProblemFormatError, _check_alpha_widths, _num_out, _number, _parse_alpha,
                         _vec_out, emit_report, parse_problem)
from .random_instances import random_bounded_lp
from .range_reduction import AlphaConstraintError

EXIT_OK, EXIT_INFEASIBLE, EXIT_INPUT, EXIT_INVARIANT = 0, 1, 2, 3
MATCH_TOL = 1e-6


def _alpha_arg(text):
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("expected level,position,value")
    try:
        return int(parts[0]), int(parts[1]), parts[2].strip()
    except ValueError:
        raise argparse.ArgumentTypeError("level and position must be integers") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="multilevel-lp", description="Compromise solutions of multilevel LPs.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--epsilon", help="suboptimality tolerance (overrides the document)")
    common.add_argument("--alpha", action="append", type=_alpha_arg, default=[], metavar="L,J,VALUE",
                        help="offset for component x[L,J]; repeatable")
    common.add_argument("--format", choices=FORMATS, help="report format")
    common.add_argument("--exact", action="store_true", help="rational arithmetic")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", parents=[common], help="full compromise pipeline")
    p.add_argument("file")
    p = sub.add_parser("solve-level", parents=[common], help="one level's LP over the feasible set")
    p.add_argument("file")
    p.add_argument("--p", type=int, required=True, help="level (1-based)")
    p = sub.add_parser("oracle", parents=[common], help="vertex-enumeration optimum of level LPs")
    p.add_argument("file")
    p.add_argument("--p", type=int, help="level (default: all)")
    p = sub.add_parser("verify", parents=[common], help="cross-check the solver against the oracle")
    p.add_argument("file", nargs="?")
    p.add_argument("--random", type=int, metavar="N", help="check N random bounded LPs instead of a file")
    p.add_argument("--seed", type=int, default=0)
    return parser


def _load(args):
    mlp, config = parse_problem(args.file)
    if args.epsilon is not None:
        eps = _number(args.epsilon, "--epsilon")
        if eps < 0:
            raise ProblemFormatError("E106", "epsilon must be nonnegative", "--epsilon")
        config.epsilon = eps
    if args.alpha:
        extra = _parse_alpha([{"level": i, "position": j, "value": v} for i, j, v in args.alpha],
                             list(mlp.n_sizes))
        config.alpha = {**config.alpha, **extra}
        if config.level_optima is not None:
            lower, upper = compute_initial_bounds(np.array(config.level_optima, dtype=object))
            _check_alpha_widths(config.alpha, mlp.n_sizes, lower, upper)
    if args.format:
        config.report_format = args.format
    if args.exact:
        config.exact = True
        mlp = mlp.with_exact()
    return mlp, config


def _emit(payload: dict, fmt: str, lines: list):
    if fmt == "json":
        print(json.dumps(payload, indent=2))
    else:
        print("\n".join(lines))


def cmd_solve(args):
    mlp, config = _load(args)
    report = run(mlp, config)
    sys.stdout.write(emit_report(report, config.report_format))
    if report.failure:
        return EXIT_INFEASIBLE
    if not check_compromise(report, config.eps_for(mlp.P), tol=1e-7):
        print("invariant violated: final suboptimality estimate or feasibility check failed", file=sys.stderr)
        return EXIT_INVARIANT
    return EXIT_OK


def _level_std(mlp, p, config):
    if not 1 <= p <= mlp.P:
        raise ProblemFormatError("E106", f"--p must lie in 1..{mlp.P}", "--p")
    return to_standard_form(build_level_lp(mlp, p), config.cap)


def cmd_solve_level(args):
    mlp, config = _load(args)
    std = _level_std(mlp, args.p, config)
    res = solve(std, config.eps_for(args.p), config.tolerances)
    x = None if res.status is Status.INFEASIBLE else std.structural(res.x)
    payload = {"level": args.p, "status": res.status.value, "iterations": res.iterations,
               "x": _vec_out(x), "value": None if x is None else _num_out(mlp.C[args.p - 1] @ x),
               "beta": None if x is None else _num_out(res.beta)}
    lines = [f"level {args.p}: {res.status.value} after {res.iterations} iterations"]
    if x is not None and res.ok:
        lines += [f"  x = ({', '.join(f'{float(v):.6f}' for v in x)})",
                  f"  f{args.p} = {float(mlp.C[args.p - 1] @ x):.6f}", f"  beta = {float(res.beta):.6f}"]
    _emit(payload, config.report_format, lines)
    return EXIT_OK if res.ok else EXIT_INFEASIBLE


def cmd_oracle(args):
    mlp, config = _load(args)
    levels = [args.p] if args.p is not None else range(1, mlp.P + 1)
    payload, lines, code = [], [], EXIT_OK
    for p in levels:
        std = _level_std(mlp, p, config)
        res = oracle_solve(std)
        verts = [std.structural(v) for v in res.vertices]
        payload.append({"level": p, "status": res.status.value,
                        "value": None if not verts else _num_out(res.value),
                        "vertices": [_vec_out(v) for v in verts]})
        lines.append(f"level {p}: {res.status.value}" + (f", f{p} = {float(res.value):.6f}" if verts else ""))
        lines += [f"  vertex ({', '.join(f'{float(v):.6f}' for v in x)})" for x in verts]
        if res.status is not Status.OPTIMAL:
            code = EXIT_INFEASIBLE
    _emit({"levels": payload}, config.report_format, lines)
    return code


def _compare(std, eps, tol):
    """Solver vs oracle on one standard-form LP; return (ok, message)."""
    ref = oracle_solve(std)
    res = solve(std, eps, tol)
    if ref.status is not Status.OPTIMAL or not res.ok:
        same = ref.status == res.status
        return same, f"solver {res.status.value}, oracle {ref.status.value}"
    gap = float(ref.value) - float(res.objective)
    ok = -MATCH_TOL <= gap <= float(eps) + MATCH_TOL
    return ok, f"solver {float(res.objective):.9g}, oracle {float(ref.value):.9g}, gap {gap:.3g}"


def cmd_verify(args):
    if args.random is not None:
        if args.random < 0:
            raise ProblemFormatError("E106", "--random needs a nonnegative count", "--random")
        eps = 0 if args.epsilon is None else float(args.epsilon)
        rng = np.random.default_rng(args.seed)
        bad, start = 0, time.perf_counter()
        for k in range(args.random):
            std = to_standard_form(random_bounded_lp(rng))
            ok, msg = _compare(std, eps, None)
            if not ok:
                bad += 1
                print(f"instance {k}: MISMATCH {msg}")
        print(f"{args.random - bad}/{args.random} random LPs agree with the oracle "
              f"(seed {args.seed}, epsilon {eps}, {time.perf_counter() - start:.2f} s)")
        return EXIT_INVARIANT if bad else EXIT_OK
    if args.file is None:
        raise ProblemFormatError("E101", "verify needs a FILE or --random N")
    mlp, config = _load(args)
    bad = 0
    for p in range(1, mlp.P + 1):
        std = to_standard_form(build_level_lp(mlp, p), config.cap)
        ok, msg = _compare(std, config.eps_for(p), config.tolerances)
        bad += not ok
        print(f"level {p} over the feasible set: {'ok' if ok else 'MISMATCH'} ({msg})")
    report = run(mlp, config)
    for it in report.iterations:
        std = to_standard_form(build_level_lp(mlp, it.p, it.lower, it.upper), config.cap)
        ok, msg = _compare(std, config.eps_for(it.p), config.tolerances)
        bad += not ok
        print(f"level {it.p} over the reduced box: {'ok' if ok else 'MISMATCH'} ({msg})")
    if report.failure:
        print(f"pipeline stopped: {report.failure['status']} at level {report.failure['level']}")
        return EXIT_INVARIANT if bad else EXIT_INFEASIBLE
    return EXIT_INVARIANT if bad else EXIT_OK


COMMANDS = {"solve": cmd_solve, "solve-level": cmd_solve_level, "oracle": cmd_oracle, "verify": cmd_verify}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except ProblemFormatError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INPUT
    except AlphaConstraintError as err:
        print(f"error: E104: {err}", file=sys.stderr)
        return EXIT_INPUT
    except EnumerationLimitError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INPUT
    except (ValueError, IndexError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
