"""Higher-order chain rule over set partitions of the directions.

For ``h = f o g`` and directions ``h1..hn``::

    d^n h(x; h1..hn) = sum over partitions P of {1..n} of
        d^|P| f(g(x); xi_{P1}(x), ..., xi_{P|P|}(x))

where ``xi_B(x) = d^|B| g(x; {hi : i in B})``. The evaluator below computes
this sum term by term and sets it against the composite differentiated
directly in one shared multi-dual algebra.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .algebra import mask_tags
from .differentials import (
    DirectionSet,
    as_point,
    gateaux_fd,
    gateaux_md,
    relative_discrepancy,
    seed_inputs,
)
from .errors import ContractError
from .functions import Composition, ExprFunction, eval_function
from .partitions import Partition, check_cap, enumerate_partitions

#: Orders at or below which the finite-difference oracle is included.
FD_REPORT_MAX_ORDER = 3


@dataclass(frozen=True, eq=False)
class CompositeProblem:
    f: ExprFunction
    g: ExprFunction
    x: np.ndarray
    dirs: DirectionSet

    def __post_init__(self):
        if self.g.output_dim != self.f.input_dim:
            raise ContractError(
                f"g output arity {self.g.output_dim} does not match f input arity {self.f.input_dim}"
            )
        object.__setattr__(self, "x", as_point(self.x, self.g.input_dim))
        dirs = DirectionSet.coerce(self.dirs)
        if dirs.dim != self.g.input_dim:
            raise ContractError(
                f"directions have dimension {dirs.dim}, g expects {self.g.input_dim}"
            )
        if dirs.n < 1:
            raise ContractError("at least one direction is required")
        object.__setattr__(self, "dirs", dirs)

    @property
    def order(self) -> int:
        return self.dirs.n

    @property
    def composite(self) -> Composition:
        return Composition(self.f, self.g)

    def with_dirs(self, dirs) -> "CompositeProblem":
        return CompositeProblem(self.f, self.g, self.x, DirectionSet.coerce(dirs))


def inner_differentials(problem: CompositeProblem) -> dict[tuple[int, ...], np.ndarray]:
    """``xi_B`` for every non-empty ``B`` of ``{1..n}`` from one evaluation of g."""
    check_cap("order", problem.order)
    outputs = eval_function(problem.g, seed_inputs(problem.x, problem.dirs))
    out = {}
    for mask in range(1, 1 << problem.order):
        out[mask_tags(mask)] = np.array([v.coefficient(mask)[0] for v in outputs])
    return out


def outer_differential(f: ExprFunction, y0, xis) -> np.ndarray:
    """``d^k f(y0; xis)`` in a fresh width-k algebra."""
    return gateaux_md(f, y0, DirectionSet(np.asarray(xis, dtype=float).reshape(len(xis), -1)))


@dataclass(frozen=True)
class SymbolicTerm:
    partition: Partition

    @property
    def outer_order(self) -> int:
        return len(self.partition)

    @property
    def inner(self) -> list[tuple[int, tuple[int, ...]]]:
        return [(len(b), b) for b in self.partition.blocks]

    def render(self) -> str:
        args = ", ".join(
            f"d{k}g(x;{','.join(f'e{i}' for i in block)})" for k, block in self.inner
        )
        return f"d{self.outer_order}f(g(x); {args})"

    def as_record(self) -> dict:
        return {
            "partition": self.partition.block_string(),
            "rgs": self.partition.rgs_string(),
            "outer_order": self.outer_order,
            "inner": [{"order": k, "directions": list(b)} for k, b in self.inner],
            "text": self.render(),
        }

    def __str__(self) -> str:
        return self.render()


def symbolic_expansion(n: int) -> list[SymbolicTerm]:
    if n < 1:
        raise ContractError(f"order must be positive, got {n}")
    return [SymbolicTerm(p) for p in enumerate_partitions(n)]


@dataclass
class DifferentialReport:
    order: int
    value_faa: np.ndarray
    value_nested: np.ndarray
    value_fd: Optional[np.ndarray] = None
    terms: dict[Partition, np.ndarray] = field(default_factory=dict)
    discrepancies: dict[str, float] = field(default_factory=dict)


def sum_terms(values) -> np.ndarray:
    """Left-to-right sum; the report's total is defined by this order."""
    values = list(values)
    total = np.zeros_like(values[0])
    for v in values:
        total = total + v
    return total


def partition_terms(problem: CompositeProblem, max_workers: int | None = None) -> dict[Partition, np.ndarray]:
    """Per-partition terms of the sum, keyed in canonical partition order."""
    partitions = enumerate_partitions(problem.order)
    xi = inner_differentials(problem)
    y0 = np.array(eval_function(problem.g, list(problem.x)))

    def term(p: Partition) -> np.ndarray:
        return outer_differential(problem.f, y0, [xi[b] for b in p.blocks])

    if max_workers and max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            values = list(pool.map(term, partitions))
    else:
        values = [term(p) for p in partitions]
    return dict(zip(partitions, values))


def nested_differential(problem: CompositeProblem) -> np.ndarray:
    """The composite differentiated directly: f evaluated on g's multi-dual outputs."""
    return gateaux_md(problem.composite, problem.x, problem.dirs)


def faa_di_bruno_eval(
    problem: CompositeProblem,
    include_fd: bool | None = None,
    max_workers: int | None = None,
) -> DifferentialReport:
    """Evaluate ``d^n (f o g)`` by the partition sum and by nested differentiation.

    The finite-difference value is added for orders up to 3 unless
    ``include_fd`` says otherwise.
    """
    terms = partition_terms(problem, max_workers)
    value_faa = sum_terms(terms.values())
    value_nested = nested_differential(problem)
    report = DifferentialReport(problem.order, value_faa, value_nested, terms=terms)
    report.discrepancies["faa_nested"] = float(np.max(np.abs(value_faa - value_nested)))
    if include_fd is None:
        include_fd = problem.order <= FD_REPORT_MAX_ORDER
    if include_fd:
        report.value_fd = gateaux_fd(problem.composite, problem.x, problem.dirs)
        report.discrepancies["faa_fd"] = float(np.max(np.abs(value_faa - report.value_fd)))
    return report


@dataclass
class InductionStepReport:
    order: int  # n; the check is for n -> n + 1
    value_direct: np.ndarray
    value_regrouped: np.ndarray
    new_block_terms: list[np.ndarray]
    append_terms: list[list[np.ndarray]]
    discrepancy: float
    relative: float


def induction_step_check(problem: CompositeProblem, next_direction=None) -> InductionStepReport:
    """Check the n -> n+1 regrouping used in the induction proof.

    For each partition ``P`` of ``{1..n}``, differentiating its term along
    ``h_{n+1}`` gives one term with ``d g(x; h_{n+1})`` as an extra outer
    direction and, for every block ``B`` of ``P``, one term where ``xi_B`` is
    replaced by its differential ``xi_{B + {n+1}}``. The sum of all of these
    must equal the order-(n+1) partition sum computed directly.

    ``next_direction`` defaults to the last direction of ``problem`` when
    omitted, in which case ``problem`` is read as the order-(n+1) problem.
    """
    if next_direction is None:
        if problem.order < 2:
            raise ContractError("need at least two directions when next_direction is omitted")
        full = problem
        base = problem.with_dirs(problem.dirs.dirs[:-1])
    else:
        base = problem
        nxt = np.atleast_1d(np.asarray(next_direction, dtype=float))
        full = problem.with_dirs(np.vstack([problem.dirs.dirs, nxt]))
    n = base.order
    check_cap("order", n + 1)

    direct = faa_di_bruno_eval(full, include_fd=False).value_faa
    # the regrouped side differentiates g block by block in narrow algebras,
    # independently of the single width-(n+1) evaluation behind `direct`
    eta = full.dirs.dirs[n]
    y0 = np.array(eval_function(full.g, list(full.x)))
    dg_new = gateaux_md(full.g, full.x, [eta])

    def xi(block, extra=False):
        dirs = full.dirs.select(block).dirs
        if extra:
            dirs = np.vstack([dirs, eta])
        return gateaux_md(full.g, full.x, dirs)

    new_block_terms = []
    append_terms = []
    flat = []
    for p in enumerate_partitions(n):
        dirs = [xi(b) for b in p.blocks]
        t_new = outer_differential(full.f, y0, dirs + [dg_new])
        row = []
        for i, b in enumerate(p.blocks):
            swapped = list(dirs)
            swapped[i] = xi(b, extra=True)
            row.append(outer_differential(full.f, y0, swapped))
        new_block_terms.append(t_new)
        append_terms.append(row)
        flat.extend(row)
        flat.append(t_new)
    regrouped = sum_terms(flat)
    return InductionStepReport(
        order=n,
        value_direct=direct,
        value_regrouped=regrouped,
        new_block_terms=new_block_terms,
        append_terms=append_terms,
        discrepancy=float(np.max(np.abs(direct - regrouped))),
        relative=relative_discrepancy(regrouped, direct),
    )
