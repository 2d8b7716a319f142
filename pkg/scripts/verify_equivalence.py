"""Randomized sweep: partition sum vs nested multi-dual vs finite differences.

Prints one row per order with the worst relative discrepancy seen.

    python3 scripts/verify_equivalence.py --seed 1 --count 500
"""

import argparse
import time
from collections import defaultdict

from chaindiff.differentials import relative_discrepancy
from chaindiff.faadibruno import faa_di_bruno_eval
from chaindiff.random_problems import ProblemConfig, problem_suite


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--count", type=int, default=300)
    ap.add_argument("--max-order", type=int, default=6)
    ap.add_argument("--max-dim", type=int, default=3)
    args = ap.parse_args()

    config = ProblemConfig(max_order=args.max_order, max_dim=args.max_dim)
    problems = problem_suite(args.seed, args.count, range(1, args.max_order + 1), config)
    nested = defaultdict(float)
    fd = defaultdict(float)
    seconds = defaultdict(float)
    counts = defaultdict(int)
    for p in problems:
        t0 = time.perf_counter()
        r = faa_di_bruno_eval(p)
        seconds[p.order] += time.perf_counter() - t0
        counts[p.order] += 1
        nested[p.order] = max(nested[p.order], relative_discrepancy(r.value_faa, r.value_nested))
        if r.value_fd is not None:
            fd[p.order] = max(fd[p.order], relative_discrepancy(r.value_faa, r.value_fd))

    print(f"{'n':>2} {'problems':>8} {'faa-nested':>12} {'faa-fd':>12} {'ms/problem':>11}")
    for n in sorted(counts):
        fd_col = f"{fd[n]:12.2e}" if n in fd else f"{'-':>12}"
        print(f"{n:>2} {counts[n]:>8} {nested[n]:12.2e} {fd_col} {1e3 * seconds[n] / counts[n]:11.2f}")


if __name__ == "__main__":
    main()
