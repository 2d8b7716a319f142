"""Command-line interface: ``chaindiff diff | expand | partitions``.

Exit status is 0 on success (and agreement between the requested methods),
1 on usage, parse or domain errors and 2 when two methods disagree beyond
tolerance.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .differentials import FD_MAX_ORDER, DirectionSet, gateaux_fd, relative_discrepancy
from .errors import ChainDiffError, ContractError
from .faadibruno import (
    FD_REPORT_MAX_ORDER,
    CompositeProblem,
    nested_differential,
    partition_terms,
    sum_terms,
    symbolic_expansion,
)
from .functions import parse_function
from .partitions import iter_partitions

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_DISAGREE = 2

DEFAULT_TOLERANCE = 1e-10
DEFAULT_FD_TOLERANCE = 1e-4


@dataclass
class CliConfig:
    subcommand: str
    f_source: str = ""
    g_source: str = ""
    point: list[float] = field(default_factory=list)
    dirs: list[list[float]] = field(default_factory=list)
    order: Optional[int] = None
    method: str = "all"
    format: str = "text"
    tolerance: float = DEFAULT_TOLERANCE
    fd_tolerance: float = DEFAULT_FD_TOLERANCE
    n: int = 0
    output: Optional[str] = None
    workers: Optional[int] = None

    def directions(self) -> list[list[float]]:
        """Explicit directions, a single one replicated up to ``order`` times."""
        dirs = self.dirs
        if not dirs:
            raise ContractError("at least one --dir is required")
        order = self.order if self.order is not None else len(dirs)
        if order < 1:
            raise ContractError(f"--order must be positive, got {order}")
        if len(dirs) == 1 and order > 1:
            return dirs * order
        if len(dirs) != order:
            raise ContractError(f"--order {order} does not match the {len(dirs)} directions given")
        return dirs


def _vector(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated reals, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chaindiff",
        description="Higher-order differentials of f(g(x)) by partition sums.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    diff = sub.add_parser("diff", help="evaluate d^n (f o g)(x; dirs)")
    diff.add_argument("--f", dest="f_source", required=True, help="outer function in y1..yp")
    diff.add_argument("--g", dest="g_source", required=True, help="inner function in x1..xm")
    diff.add_argument("--point", type=_vector, required=True, help="x as comma-separated reals")
    diff.add_argument("--dir", dest="dirs", type=_vector, action="append", default=[],
                      help="a direction (repeatable); one --dir with --order k is replicated")
    diff.add_argument("--order", type=int)
    diff.add_argument("--method", choices=["faa", "nested", "fd", "all"], default="all")
    diff.add_argument("--format", choices=["text", "json"], default="text")
    diff.add_argument("--tol", dest="tolerance", type=float, default=DEFAULT_TOLERANCE,
                      help="relative tolerance between faa and nested")
    diff.add_argument("--fd-tol", dest="fd_tolerance", type=float, default=DEFAULT_FD_TOLERANCE,
                      help="relative tolerance between faa and fd")
    diff.add_argument("--output", help="also write the JSON report to this path")
    diff.add_argument("--workers", type=int, help="threads for per-partition terms")

    expand = sub.add_parser("expand", help="print the partition-sum terms of order n")
    expand.add_argument("--order", type=int, required=True)
    expand.add_argument("--format", choices=["text", "json"], default="text")

    parts = sub.add_parser("partitions", help="list the set partitions of {1..n}")
    parts.add_argument("--n", type=int, required=True)
    parts.add_argument("--format", choices=["text", "block", "rgs", "json"], default="text")
    return parser


def _fmt(v: float) -> str:
    return f"{v:.9g}"


def _fmt_vec(v) -> str:
    v = np.asarray(v, dtype=float)
    if v.shape == (1,):
        return _fmt(v[0])
    return "[" + ", ".join(_fmt(t) for t in v) + "]"


def _floats(v) -> Optional[list[float]]:
    return None if v is None else [float(t) for t in v]


def build_diff_report(config: CliConfig) -> tuple[dict, int]:
    """Run the requested methods; return the structured report and exit status."""
    f = parse_function(config.f_source, "y")
    g = parse_function(config.g_source, "x")
    if g.output_dim != f.input_dim:
        raise ContractError(
            f"g output arity {g.output_dim} does not match f input arity {f.input_dim}"
        )
    dirs = DirectionSet(np.array(config.directions(), dtype=float))
    problem = CompositeProblem(f, g, config.point, dirs)
    order = problem.order
    method = config.method

    values = {"faa": None, "nested": None, "fd": None}
    terms = []
    if method in ("faa", "all"):
        term_values = partition_terms(problem, config.workers)
        values["faa"] = sum_terms(term_values.values())
        terms = [
            {"partition": p.block_string(), "value": _floats(v)} for p, v in term_values.items()
        ]
    if method in ("nested", "all"):
        values["nested"] = nested_differential(problem)
    if method == "fd" or (method == "all" and order <= FD_REPORT_MAX_ORDER):
        if order > FD_MAX_ORDER:
            raise ContractError(f"finite differences support order <= {FD_MAX_ORDER}, got {order}")
        values["fd"] = gateaux_fd(problem.composite, problem.x, problem.dirs)

    discrepancy = {}
    tolerance = {}
    status = EXIT_OK
    for name, other, tol in (("faa_nested", "nested", config.tolerance),
                             ("faa_fd", "fd", config.fd_tolerance)):
        if values["faa"] is None or values[other] is None:
            continue
        d = relative_discrepancy(values["faa"], values[other])
        discrepancy[name] = d
        tolerance[name] = tol
        if not d <= tol:
            status = EXIT_DISAGREE

    report = {
        "order": order,
        "point": _floats(problem.x),
        "directions": [_floats(d) for d in problem.dirs.dirs],
        "methods": {k: _floats(v) for k, v in values.items()},
        "terms": terms,
        "discrepancy": discrepancy,
        "tolerance": tolerance,
    }
    return report, status


def render_diff_text(report: dict, status: int) -> str:
    lines = [
        f"order: {report['order']}",
        f"point: {_fmt_vec(report['point'])}",
        "directions: " + "; ".join(_fmt_vec(d) for d in report["directions"]),
    ]
    for name in ("faa", "nested", "fd"):
        value = report["methods"][name]
        lines.append(f"{name}: {'-' if value is None else _fmt_vec(value)}")
    if report["terms"]:
        lines.append("terms:")
        width = max(len(t["partition"]) for t in report["terms"])
        for t in report["terms"]:
            lines.append(f"  {t['partition']:<{width}}  {_fmt_vec(t['value'])}")
    for name, d in report["discrepancy"].items():
        lines.append(
            f"discrepancy {name.replace('_', '-')}: {d:.3g} (tolerance {report['tolerance'][name]:g})"
        )
    lines.append("status: " + ("disagree" if status == EXIT_DISAGREE else "ok"))
    return "\n".join(lines)


def run_diff(config: CliConfig, out=None) -> int:
    out = out or sys.stdout
    report, status = build_diff_report(config)
    if config.format == "json":
        out.write(json.dumps(report, indent=2) + "\n")
    else:
        out.write(render_diff_text(report, status) + "\n")
    if config.output:
        with open(config.output, "w") as fh:
            fh.write(json.dumps(report, indent=2) + "\n")
    return status


def run_expand(config: CliConfig, out=None) -> int:
    out = out or sys.stdout
    terms = symbolic_expansion(config.order)
    if config.format == "json":
        out.write(json.dumps([t.as_record() for t in terms], indent=2) + "\n")
    else:
        for t in terms:
            out.write(t.render() + "\n")
    return EXIT_OK


def run_partitions(config: CliConfig, out=None) -> int:
    out = out or sys.stdout
    if config.format == "json":
        records = [{"blocks": [list(b) for b in p.blocks], "rgs": p.rgs_string()}
                   for p in iter_partitions(config.n)]
        out.write(json.dumps({"n": config.n, "count": len(records), "partitions": records},
                             indent=2) + "\n")
        return EXIT_OK
    count = 0
    for p in iter_partitions(config.n):
        count += 1
        if config.n == 0:
            continue  # the empty partition has no printable blocks
        out.write((p.rgs_string() if config.format == "rgs" else p.block_string()) + "\n")
    out.write(f"count={count}\n")
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_ERROR
    config = CliConfig(**vars(args))
    runner = {"diff": run_diff, "expand": run_expand, "partitions": run_partitions}[config.subcommand]
    try:
        return runner(config)
    except ChainDiffError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
