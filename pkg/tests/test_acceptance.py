"""Acceptance checks, one test per criterion; each prints a PASS/FAIL line.

Run standalone with ``python3 tests/test_acceptance.py``.
"""

import time
from fractions import Fraction

import numpy as np
import pytest

from multilevel_lp.adaptive import Status, solve
from multilevel_lp.lp_model import build_level_lp, to_standard_form
from multilevel_lp.multilevel import RunConfig, compute_initial_bounds, run
from multilevel_lp.oracle import oracle_solve
from multilevel_lp.random_instances import random_bounded_lp, random_multilevel
from multilevel_lp.range_reduction import (RangeReductionContext, case_weights, lower_alpha_map, lower_map,
                                           reduce_bounds, upper_alpha_map, upper_map, xi)

QUARTER = Fraction(1, 4)
REFERENCE = {"compromise": [0.25, 0, 2.7671, 0], "objectives": [4.2841, -6.8012, 5.5341]}


@pytest.fixture
def verdict(capsys):
    def emit(number, title, ok, detail=""):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {number}: {title}" + (f" ({detail})" if detail else ""))
        assert ok, detail
    return emit


def show(values):
    return "(" + ", ".join(str(v) if isinstance(v, (int, Fraction)) else f"{float(v):.9g}" for v in values) + ")"


def level_std(mlp, p, lower=None, upper=None):
    return to_standard_form(build_level_lp(mlp, p, lower, upper))


def test_level_optima(verdict, three_level, three_level_exact):
    start = time.perf_counter()
    values, feasible = [], True
    for p in (1, 2, 3):
        std = level_std(three_level, p)
        res = solve(std)
        values.append(res.objective)
        feasible &= three_level.is_feasible(std.structural(res.x))
    elapsed = time.perf_counter() - start
    std = level_std(three_level_exact, 2)
    x2 = list(std.structural(solve(std).x))
    ok = (np.allclose(values, [6, 12, 6], rtol=0, atol=1e-9) and feasible and x2 == [2, 0, 0, 0]
          and elapsed < 1)
    verdict(1, "level optima 6, 12, 6", ok, f"values {show(values)}, level-2 point {show(x2)}, {elapsed:.3f} s")


def test_initial_bounds(verdict, three_level_exact, documented_optima):
    rep = run(three_level_exact, RunConfig(level_optima=documented_optima, alpha={(1, 1): QUARTER, (2, 1): QUARTER}))
    l1, u1 = list(rep.initial_lower), list(rep.initial_upper)
    caveat = any("alternate optima" in n for n in rep.notes)
    ok = l1 == [0, 0, 0, 0] and u1 == [2, 0, 3, Fraction(2, 3)] and caveat
    verdict(2, "initial bounds from the level optima", ok, f"l = {show(l1)}, u = {show(u1)}, alternate-optima note {caveat}")


def test_first_reduction(verdict, three_level_exact, documented_optima):
    l1, u1 = compute_initial_bounds(documented_optima)
    ctx = RangeReductionContext(three_level_exact, documented_optima, l1, u1, 2, {(1, 1): QUARTER})
    l2, u2 = reduce_bounds(ctx)
    res = solve(level_std(three_level_exact, 2, l2, u2))
    x = list(res.sfs.lp.structural(res.x))
    ok = (list(l2) == [QUARTER, 0, 0, 0] and list(u2) == [2, 0, 3, Fraction(2, 3)]
          and res.objective == 12 and x == [2, 0, 0, 0])
    verdict(3, "first reduction and level-2 solve", ok, f"l2 = {show(l2)}, u2 = {show(u2)}, f2 = {res.objective} at {show(x)}")


def test_second_reduction(verdict, three_level_exact, documented_optima):
    l1, u1 = compute_initial_bounds(documented_optima)
    l2, u2 = reduce_bounds(RangeReductionContext(three_level_exact, documented_optima, l1, u1, 2, {(1, 1): QUARTER}))
    l3, u3 = reduce_bounds(RangeReductionContext(three_level_exact, documented_optima, l2, u2, 3, {(2, 1): QUARTER}))
    ok = list(l3) == [QUARTER, 0, QUARTER, 0] and list(u3) == [2, 0, 3, Fraction(2, 3)]
    verdict(4, "second reduction", ok, f"l3 = {show(l3)}, u3 = {show(u3)}")


def test_final_compromise(verdict, three_level, documented_optima):
    config = RunConfig(level_optima=documented_optima, alpha={(1, 1): 0.25, (2, 1): 0.25}, reference=REFERENCE)
    rep = run(three_level, config)
    last = rep.iterations[-1]
    ref = oracle_solve(level_std(three_level, 3, last.lower, last.upper))
    f3 = rep.compromise_objectives[2]
    noted = any("differ from the reference" in n and "5.5341" in n for n in rep.notes)
    ok = (rep.ok and three_level.is_feasible(rep.compromise) and abs(f3 - ref.value) <= 1e-6
          and abs(ref.value - 6) <= 1e-6 and noted)
    verdict(5, "final compromise matches the enumeration optimum", ok,
            f"f3 = {f3:.9g}, oracle {ref.value:.9g}, discrepancy note {noted}")


@pytest.fixture(scope="module")
def random_runs():
    rng = np.random.default_rng(2024)
    start = time.perf_counter()
    runs = []
    for _ in range(200):
        std = to_standard_form(random_bounded_lp(rng))
        ref = oracle_solve(std)
        runs.append((ref, {eps: solve(std, eps=eps) for eps in (0, 0.1, 1.0)}))
    return runs, time.perf_counter() - start


def test_random_solver_vs_oracle(verdict, random_runs):
    runs, elapsed = random_runs
    bad = 0
    for ref, results in runs:
        for eps, res in results.items():
            if ref.status is not Status.OPTIMAL:
                bad += res.status is not ref.status
                continue
            gap = ref.value - res.objective
            limit = 1e-6 if eps == 0 else eps + 1e-9
            bad += not (-1e-6 <= gap <= limit)
    ok = bad == 0 and elapsed < 30
    verdict(6, "200 random LPs agree with the oracle", ok, f"{bad} mismatches, {elapsed:.1f} s")


def test_random_beta_properties(verdict, random_runs):
    runs, _ = random_runs
    bound_bad = monotone_bad = 0
    for ref, results in runs:
        if ref.status is not Status.OPTIMAL:
            continue
        for res in results.values():
            betas = [h.beta for h in res.history]
            bound_bad += sum(h.beta < ref.value - h.objective - 1e-9 for h in res.history)
            monotone_bad += sum(b2 > b1 + 1e-9 for b1, b2 in zip(betas, betas[1:]))
    verdict(7, "beta bounds the gap and never increases", bound_bad == 0 and monotone_bad == 0,
            f"{bound_bad} bound violations, {monotone_bad} increases")


def _close(a, b):
    return abs(a - b) <= 1e-12


def test_map_properties(verdict):
    rng = np.random.default_rng(7)
    failures, checks = [], 0
    proof_values = {(1, 1): (0, 1), (0, 1): (1, 0), (1, 0): (1, 0)}
    for k in range(1000):
        l = float(rng.uniform(-5, 5))
        u = l + float(rng.uniform(0.5, 5))
        t = float(rng.uniform(l + 0.01, u - 0.01))
        alpha = float(rng.uniform(0, 0.99)) * (u - l)
        x1, x2 = sorted(rng.uniform(l, u, size=2))
        ok = (_close(lower_map(l, u, t, l), l) and _close(lower_map(l, u, t, u), t)
              and _close(upper_map(l, u, t, l), t) and _close(upper_map(l, u, t, u), u)
              and _close(lower_alpha_map(l, u, alpha, u), u - alpha) and _close(lower_alpha_map(l, u, alpha, l), l)
              and _close(upper_alpha_map(l, u, alpha, l), l + alpha) and _close(upper_alpha_map(l, u, alpha, u), u))
        for f, arg in ((lower_map, t), (upper_map, t), (lower_alpha_map, alpha), (upper_alpha_map, alpha)):
            ok &= f(l, u, arg, x1) <= f(l, u, arg, x2) + 1e-12
            ok &= _close(f(l, u, arg, (x1 + x2) / 2), (f(l, u, arg, x1) + f(l, u, arg, x2)) / 2)

        # selectors and locality on a random 3-level problem
        mlp = random_multilevel(rng, P=3)
        optima = rng.uniform(0, 3, size=(3, mlp.n))
        pick = rng.integers(0, 3, size=mlp.n)
        lower = np.where(pick == 1, optima.min(axis=0), optima.min(axis=0) - rng.uniform(0.1, 1, size=mlp.n))
        upper = np.where(pick == 2, optima.max(axis=0), optima.max(axis=0) + rng.uniform(0.1, 1, size=mlp.n))
        p = int(rng.integers(2, 4))
        ctx = RangeReductionContext(mlp, optima, lower, upper, p, alpha_fraction=float(rng.uniform(0, 0.9)))
        for j in range(1, mlp.n_sizes[p - 2] + 1):
            A, B = ctx.selectors(j)
            ok &= case_weights(A, B) == proof_values[(A, B)]
        new_l, new_u = reduce_bounds(ctx)
        ok &= bool(np.all(new_l >= lower - 1e-12) and np.all(new_u <= upper + 1e-12) and np.all(new_l <= new_u + 1e-12))
        for q in range(mlp.n):
            i, j = mlp.level_of(q)
            if i != p - 1:
                ok &= new_l[q] == lower[q] and new_u[q] == upper[q]
                ok &= xi(ctx, i, j, optima[0, q]) == optima[0, q]
        checks += 1
        if not ok:
            failures.append(k)
    verdict(8, "reduction map properties", not failures and checks == 1000,
            f"{checks} randomized checks, failing draws {failures[:5]}")


def _all_boundary(mlp, optima, lower, upper):
    for p in range(2, mlp.P + 1):
        ctx = RangeReductionContext(mlp, optima, lower, upper, p, alpha_fraction=0)
        if any(ctx.case(j) == 1 for j in range(1, mlp.n_sizes[p - 2] + 1)):
            return False
        lower, upper = reduce_bounds(ctx)
    return True


def test_zero_alpha_is_identity(verdict, three_level, documented_optima):
    cases = [(three_level, documented_optima.astype(float))]
    rng = np.random.default_rng(11)
    while len(cases) < 31:
        mlp = random_multilevel(rng, P=2)
        rep = run(mlp, RunConfig(alpha_fraction=0))
        if rep.ok and _all_boundary(mlp, rep.level_optima, rep.initial_lower, rep.initial_upper):
            cases.append((mlp, None))
    worst = 0.0
    for mlp, optima in cases:
        rep = run(mlp, RunConfig(alpha_fraction=0, level_optima=optima))
        plain = solve(level_std(mlp, mlp.P, rep.initial_lower, rep.initial_upper))
        worst = max(worst, abs(rep.compromise_objectives[-1] - plain.objective))
    verdict(9, "zero offsets reduce to the plain last-level solve", worst <= 1e-9,
            f"{len(cases)} problems, worst objective difference {worst:.2e}")


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main([__file__, "-q"]))
