"""Seeded random functions and composite problems.

Expressions are built from ``+``, ``-``, ``*``, small integer powers and the
everywhere-defined primitives ``exp``, ``sin``, ``cos``. Division, ``ln`` and
``sqrt`` are left out so that every generated function is smooth on all of
R^m. Powers and primitives apply to a single (scaled) variable or constant,
so nesting happens through the sums and products around them and through
the composition ``f o g`` itself. This bounds the magnitudes and oscillation
frequencies that the finite-difference oracle has to resolve at order three.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .faadibruno import CompositeProblem
from .functions import BinOp, Call, Const, Expr, ExprFunction, Pow, Var


@dataclass(frozen=True)
class ProblemConfig:
    max_order: int = 5
    max_dim: int = 3
    depth: int = 2
    low: float = -1.0
    high: float = 1.0


def random_expr(rng: np.random.Generator, n_vars: int, depth: int) -> Expr:
    if depth <= 0 or rng.random() < 0.25:
        if rng.random() < 0.3:
            return Const(float(rng.integers(1, 8)) / 4.0)
        return Var(int(rng.integers(1, n_vars + 1)))
    kind = rng.choice(["add", "sub", "mul", "pow", "call"], p=[0.25, 0.15, 0.25, 0.15, 0.2])
    if kind in ("add", "sub", "mul"):
        op = {"add": "+", "sub": "-", "mul": "*"}[kind]
        return BinOp(op, random_expr(rng, n_vars, depth - 1), random_expr(rng, n_vars, depth - 1))
    if kind == "pow":
        return Pow(random_expr(rng, n_vars, 0), int(rng.integers(0, 4)))
    name = str(rng.choice(["exp", "sin", "cos"]))
    scale = Const(float(rng.integers(1, 5)) / 4.0)
    return Call(name, BinOp("*", scale, random_expr(rng, n_vars, 0)))

def random_function(
    rng: np.random.Generator, input_dim: int, output_dim: int, depth: int = 3, prefix: str = "x"
) -> ExprFunction:
    """A function that references every input at least once."""
    comps = [random_expr(rng, input_dim, depth) for _ in range(output_dim)]
    # fold in every variable so that all inputs actually influence the output
    for j in range(1, input_dim + 1):
        k = int(rng.integers(0, output_dim))
        coef = Const(float(rng.integers(1, 5)) / 4.0)
        comps[k] = BinOp("+", comps[k], BinOp("*", coef, Var(j)))
    return ExprFunction(tuple(comps), input_dim, prefix)


def random_problem(rng: np.random.Generator, order: int, config: ProblemConfig = ProblemConfig(),
                   dims: tuple[int, int, int] | None = None) -> CompositeProblem:
    """A composite ``f o g`` with ``m, p, q`` inputs/intermediates/outputs."""
    if dims is None:
        dims = tuple(int(d) for d in rng.integers(1, config.max_dim + 1, size=3))
    m, p, q = dims
    g = random_function(rng, m, p, config.depth, "x")
    f = random_function(rng, p, q, config.depth, "y")
    x = rng.uniform(config.low, config.high, size=m)
    dirs = rng.uniform(config.low, config.high, size=(order, m))
    return CompositeProblem(f, g, x, dirs)


def problem_suite(seed: int, count: int, orders=range(1, 6), config: ProblemConfig = ProblemConfig()):
    """``count`` problems with orders cycling through ``orders``."""
    rng = np.random.default_rng(seed)
    orders = list(orders)
    return [random_problem(rng, orders[i % len(orders)], config) for i in range(count)]
