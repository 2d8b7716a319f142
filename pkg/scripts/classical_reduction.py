"""Group the order-n partition terms of a scalar composite by block-size signature.

For scalar f and g with all directions equal to 1, partitions sharing a
signature give identical terms; the class sizes are the classical
coefficients of the one-variable formula.

    python3 scripts/classical_reduction.py --f "exp(y1)" --g "x1^2" --x 1 --order 4
"""

import argparse
from collections import defaultdict

from chaindiff.faadibruno import CompositeProblem, faa_di_bruno_eval
from chaindiff.functions import parse_function


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--f", default="exp(y1)")
    ap.add_argument("--g", default="x1^2")
    ap.add_argument("--x", type=float, default=1.0)
    ap.add_argument("--order", type=int, default=4)
    args = ap.parse_args()

    problem = CompositeProblem(parse_function(args.f, "y"), parse_function(args.g, "x"),
                               [args.x], [[1.0]] * args.order)
    report = faa_di_bruno_eval(problem, include_fd=False)
    groups = defaultdict(list)
    for p, v in report.terms.items():
        groups[p.signature()].append(float(v[0]))

    print(f"{'signature':<16} {'count':>5} {'term':>16} {'count*term':>16}")
    for sig in sorted(groups, key=lambda s: (len(s), s)):
        vals = groups[sig]
        print(f"{str(sig):<16} {len(vals):>5} {vals[0]:16.10g} {len(vals) * vals[0]:16.10g}")
    print(f"total {report.value_faa[0]:.15g}  nested {report.value_nested[0]:.15g}")


if __name__ == "__main__":
    main()
