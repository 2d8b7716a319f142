"""Reference computations that share no code path with the package.

* set partitions by brute-force labelling and deduplication
* Bell numbers by the Bell triangle, Stirling numbers by a table
* truncated multi-dual products via sympy polynomial expansion
* directional differentials via sympy symbolic differentiation
"""

import itertools
import math

import sympy as sp

from chaindiff.functions import BinOp, Call, Const, Pow, Var


def brute_force_partitions(n):
    """Set of partitions of {1..n} as frozensets of frozensets."""
    out = set()
    for labels in itertools.product(range(max(n, 1)), repeat=n):
        blocks = {}
        for i, lab in enumerate(labels, start=1):
            blocks.setdefault(lab, set()).add(i)
        out.add(frozenset(frozenset(b) for b in blocks.values()))
    return out


def as_setpartition(p):
    return frozenset(frozenset(b) for b in p.blocks)


def bell_triangle(n):
    """B(0..n) from the Bell (Aitken) triangle."""
    row = [1]
    bells = [1]
    for _ in range(n):
        new = [row[-1]]
        for v in row:
            new.append(new[-1] + v)
        row = new
        bells.append(row[0])
    return bells


def stirling_table(n_max):
    table = [[0] * (n_max + 2) for _ in range(n_max + 2)]
    table[0][0] = 1
    for n in range(n_max + 1):
        for k in range(1, n + 2):
            table[n + 1][k] = k * table[n][k] + table[n][k - 1]
    return table


def truncated_product(a, b, width):
    """Product of coefficient lists (index = tag bitmask) with ei^2 = 0, via sympy."""
    eps = sp.symbols(f"e1:{width + 1}")

    def poly(coeffs):
        expr = 0
        for mask, c in enumerate(coeffs):
            term = sp.Rational(c)
            for i in range(width):
                if mask >> i & 1:
                    term *= eps[i]
            expr += term
        return expr

    prod = sp.Poly(sp.expand(poly(a) * poly(b)), *eps) if width else None
    out = [0] * (1 << width)
    if width == 0:
        return [sp.Rational(a[0]) * sp.Rational(b[0])]
    for monom, c in prod.terms():
        if any(e > 1 for e in monom):
            continue
        mask = sum(1 << i for i, e in enumerate(monom) if e)
        out[mask] += c
    return out


_SYMPY_PRIM = {"exp": sp.exp, "ln": sp.log, "sin": sp.sin, "cos": sp.cos, "sqrt": sp.sqrt,
               "neg": lambda a: -a}


def to_sympy(node, symbols):
    if isinstance(node, Const):
        return sp.nsimplify(node.value, rational=True)
    if isinstance(node, Var):
        return symbols[node.index - 1]
    if isinstance(node, BinOp):
        left, right = to_sympy(node.left, symbols), to_sympy(node.right, symbols)
        if node.op == "+":
            return left + right
        if node.op == "-":
            return left - right
        if node.op == "*":
            return left * right
        return left / right
    if isinstance(node, Pow):
        return to_sympy(node.base, symbols) ** node.exponent
    return _SYMPY_PRIM[node.name](to_sympy(node.arg, symbols))


def sympy_function(fun, symbols):
    return [to_sympy(c, symbols) for c in fun.components]


def sympy_directional(exprs, symbols, x, dirs):
    """d^n of each expression at x along dirs, by differentiating in t1..tn."""
    ts = sp.symbols(f"t1:{len(dirs) + 1}")
    shift = {
        s: sp.nsimplify(float(x[j]), rational=True)
        + sum(ts[i] * sp.nsimplify(float(dirs[i][j]), rational=True) for i in range(len(dirs)))
        for j, s in enumerate(symbols)
    }
    out = []
    for e in exprs:
        e = e.subs(shift, simultaneous=True)
        for t in ts:
            e = sp.diff(e, t)
        out.append(float(e.subs({t: 0 for t in ts})))
    return out


def sympy_composite_directional(f, g, x, dirs):
    xs = sp.symbols(f"x1:{g.input_dim + 1}")
    ys = sp.symbols(f"y1:{f.input_dim + 1}")
    inner = sympy_function(g, xs)
    outer = [e.subs(dict(zip(ys, inner)), simultaneous=True) for e in sympy_function(f, ys)]
    return sympy_directional(outer, xs, x, dirs)


def close(a, b, rel):
    """|a - b| <= rel * (1 + |b|), componentwise."""
    return all(abs(u - v) <= rel * (1 + abs(v)) for u, v in zip(a, b))


E = math.e
