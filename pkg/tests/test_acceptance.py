"""Exit criteria. Each test prints one PASS/FAIL line (also collected in the
terminal summary) with the worst observed error against its tolerance."""

import math
from collections import defaultdict

import numpy as np

from chaindiff.differentials import (
    gateaux_md,
    relative_discrepancy,
    total_differential_check,
)
from chaindiff.faadibruno import (
    CompositeProblem,
    faa_di_bruno_eval,
    induction_step_check,
)
from chaindiff.functions import eval_function, parse_function
from chaindiff.partitions import bell_number, enumerate_partitions, extend_partitions
from chaindiff.random_problems import problem_suite, random_function, random_problem
from cli_cases import CASES, run_cli
from conftest import ACCEPTANCE_LINES
from oracles import stirling_table

SUITE_SEED = 20240601


def record(number, title, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title} ({detail})"
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert ok, line


_SUITE = None


def main_suite():
    global _SUITE
    if _SUITE is None:
        problems = problem_suite(SUITE_SEED, 200, orders=range(1, 6))
        _SUITE = [(p, faa_di_bruno_eval(p)) for p in problems]
    return _SUITE


def test_criterion_1_partition_sum_equals_nested():
    suite = main_suite()
    errors = [relative_discrepancy(r.value_faa, r.value_nested) for _, r in suite]
    failures = sum(e > 1e-10 for e in errors)
    dims = {(p.g.input_dim, p.f.input_dim, p.f.output_dim) for p, _ in suite}
    record(1, "partition sum vs nested, 200 problems, n=1..5",
           failures == 0 and len(suite) == 200,
           f"worst {max(errors):.2e} <= 1e-10, failures {failures}, {len(dims)} (m,p,q) shapes")


def test_criterion_2_fd_cross_oracle():
    subset = [(p, r) for p, r in main_suite() if p.order <= 3]
    errors = [relative_discrepancy(r.value_faa, r.value_fd) for _, r in subset]
    failures = sum(e > 1e-4 for e in errors)
    record(2, f"partition sum vs finite differences, {len(subset)} problems with n<=3",
           failures == 0, f"worst {max(errors):.2e} <= 1e-4, failures {failures}")


def test_criterion_3_first_order_chain_rule():
    rng = np.random.default_rng(SUITE_SEED + 3)
    worst = 0.0
    for _ in range(50):
        problem = random_problem(rng, 1)
        report = faa_di_bruno_eval(problem, include_fd=False)
        assert len(report.terms) == 1
        y0 = eval_function(problem.g, list(problem.x))
        inner = gateaux_md(problem.g, problem.x, problem.dirs)
        direct = gateaux_md(problem.f, y0, [inner])
        worst = max(worst, relative_discrepancy(report.value_faa, direct))
    record(3, "n=1 single term equals df(g(x); dg(x; h)), 50 problems",
           worst <= 1e-12, f"worst {worst:.2e} <= 1e-12")


def test_criterion_4_total_differential():
    rng = np.random.default_rng(SUITE_SEED + 4)
    worst = 0.0
    for i in range(50):
        n_slots = 2 + i % 2
        slot_dims = [int(d) for d in rng.integers(1, 3, size=n_slots)]
        fun = random_function(rng, sum(slot_dims), int(rng.integers(1, 4)), depth=3)
        x = rng.uniform(-1, 1, size=sum(slot_dims))
        etas = [rng.uniform(-1, 1, size=d) for d in slot_dims]
        r = total_differential_check(fun, x, slot_dims, etas)
        worst = max(worst, relative_discrepancy(r.rhs, r.lhs))
    record(4, "total differential equals sum of partials, 50 functions with 2-3 slots",
           worst <= 1e-12, f"worst {worst:.2e} <= 1e-12")


def test_criterion_5_combinatorics():
    expected = (1, 1, 2, 5, 15, 52, 203, 877, 4140)
    table = stirling_table(8)
    oracle = tuple(sum(table[n][: n + 1]) for n in range(9))
    bells = tuple(bell_number(n) for n in range(9))
    lengths = tuple(len(enumerate_partitions(n)) for n in range(9))
    extend_ok = all(
        set(extend_partitions(enumerate_partitions(n))) == set(enumerate_partitions(n + 1))
        and len(extend_partitions(enumerate_partitions(n))) == bell_number(n + 1)
        for n in range(8)
    )
    ok = bells == expected == oracle == lengths and extend_ok
    record(5, "Bell numbers, enumeration lengths and extension for n<=8", ok,
           f"bell {bells}, extension {'ok' if extend_ok else 'mismatch'}")


def test_criterion_6_classical_reduction():
    # (exp(x^2))'''' = (16x^4 + 48x^2 + 12) exp(x^2), i.e. 76e at x = 1
    analytic = 76 * math.e
    problem = CompositeProblem(parse_function("exp(y1)", "y"), parse_function("x1^2", "x"),
                               [1.0], [[1.0]] * 4)
    report = faa_di_bruno_eval(problem)
    err_faa = abs(report.value_faa[0] - analytic) / abs(analytic)
    err_nested = abs(report.value_nested[0] - analytic) / abs(analytic)
    groups = defaultdict(list)
    for p, v in report.terms.items():
        groups[p.signature()].append(v[0])
    sizes = {sig: len(vals) for sig, vals in groups.items()}
    spread = max(
        max(abs(v - vals[0]) / (1 + abs(vals[0])) for v in vals) for vals in groups.values()
    )
    ok = (
        err_faa <= 1e-10
        and err_nested <= 1e-10
        and sizes == {(1, 1, 1, 1): 1, (2, 1, 1): 6, (2, 2): 3, (3, 1): 4, (4,): 1}
        and spread <= 1e-12
    )
    record(6, "exp(x^2) 4th derivative at 1 and 1/6/3/4/1 classes", ok,
           f"rel err {err_faa:.2e} <= 1e-10, class spread {spread:.1e}")


def test_criterion_7_induction_regrouping():
    rng = np.random.default_rng(SUITE_SEED + 7)
    worst = {}
    for n in (1, 2, 3):
        worst[n] = 0.0
        for _ in range(20):
            problem = random_problem(rng, n)
            nxt = rng.uniform(-1, 1, size=problem.g.input_dim)
            worst[n] = max(worst[n], induction_step_check(problem, nxt).relative)
    ok = all(w <= 1e-12 for w in worst.values())
    detail = ", ".join(f"{n}->{n + 1}: {w:.1e}" for n, w in worst.items())
    record(7, "induction regrouping, 20 problems per step", ok, f"{detail} <= 1e-12")


def test_criterion_8_symmetry_and_multilinearity():
    rng = np.random.default_rng(SUITE_SEED + 8)
    worst_sym = worst_lin = 0.0
    for _ in range(100):
        m = int(rng.integers(1, 4))
        fun = random_function(rng, m, int(rng.integers(1, 4)), depth=3)
        n = int(rng.integers(2, 5))
        x = rng.uniform(-1, 1, size=m)
        dirs = rng.uniform(-1, 1, size=(n, m))
        base = gateaux_md(fun, x, dirs)
        worst_sym = max(worst_sym, relative_discrepancy(gateaux_md(fun, x, dirs[rng.permutation(n)]), base))

        slot = int(rng.integers(0, n))
        alpha = float(rng.uniform(-3, 3))
        other = rng.uniform(-1, 1, size=m)
        scaled, summed, replaced = dirs.copy(), dirs.copy(), dirs.copy()
        scaled[slot] *= alpha
        summed[slot] += other
        replaced[slot] = other
        worst_lin = max(
            worst_lin,
            relative_discrepancy(gateaux_md(fun, x, scaled), alpha * base),
            relative_discrepancy(gateaux_md(fun, x, summed), base + gateaux_md(fun, x, replaced)),
        )
    record(8, "permutation invariance and multilinearity, 100 checks each",
           worst_sym <= 1e-12 and worst_lin <= 1e-12,
           f"symmetry {worst_sym:.1e}, linearity {worst_lin:.1e} <= 1e-12")


def test_criterion_9_cli_determinism():
    first = [run_cli(argv) for _, argv, _ in CASES]
    second = [run_cli(argv) for _, argv, _ in CASES]
    identical = all(a == b for a, b in zip(first, second))
    statuses = all(r[0] == expected for r, (_, _, expected) in zip(first, CASES))
    record(9, f"CLI golden suite run twice ({len(CASES)} invocations)",
           identical and statuses, "byte-identical" if identical else "outputs differ")
