"""Vector-valued expressions: parsing, printing and evaluation.

Grammar (components separated by ``;``)::

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)*
    unary  := "-" unary | factor
    factor := atom ("^" integer)?
    atom   := number | variable | primitive "(" expr ")" | "(" expr ")"

Variables are ``x1, x2, ...`` or ``y1, y2, ...`` depending on the role of
the function; primitives are ``exp, ln, sin, cos, sqrt``. A leading minus
is stored as a call to the ``neg`` primitive.

Evaluation works over plain floats and over :class:`MultiDual` elements
with the same code path.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .algebra import MultiDual, md_apply_univariate
from .errors import ContractError, DomainError, ParseError

SOURCE_PRIMITIVES = ("exp", "ln", "sin", "cos", "sqrt")


@dataclass(frozen=True)
class Const:
    value: float


@dataclass(frozen=True)
class Var:
    index: int  # 1-based


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * /
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exponent: int


@dataclass(frozen=True)
class Call:
    name: str  # a source primitive or "neg"
    arg: "Expr"


Expr = Union[Const, Var, BinOp, Pow, Call]


def max_variable(node: Expr) -> int:
    if isinstance(node, Var):
        return node.index
    if isinstance(node, Const):
        return 0
    if isinstance(node, BinOp):
        return max(max_variable(node.left), max_variable(node.right))
    if isinstance(node, Pow):
        return max_variable(node.base)
    return max_variable(node.arg)


@dataclass(frozen=True)
class ExprFunction:
    """A map from R^input_dim to R^output_dim given by component expressions."""

    components: tuple[Expr, ...]
    input_dim: int
    prefix: str = "x"

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        if not self.components:
            raise ContractError("a function needs at least one component")
        if self.input_dim < 1:
            raise ContractError(f"input_dim must be positive, got {self.input_dim}")
        used = max(max_variable(c) for c in self.components)
        if used > self.input_dim:
            raise ContractError(
                f"component references {self.prefix}{used} but input_dim is {self.input_dim}"
            )

    @property
    def output_dim(self) -> int:
        return len(self.components)

    def __call__(self, inputs):
        return eval_function(self, inputs)

    def source(self) -> str:
        return "; ".join(to_source(c, self.prefix) for c in self.components)

    def __str__(self) -> str:
        return self.source()


# parsing ----------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^();]))"
)


def _tokenize(source: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(source):
        if source[pos:].strip() == "":
            break
        m = _TOKEN.match(source, pos)
        if m is None:
            bad = pos + len(source[pos:]) - len(source[pos:].lstrip())
            raise ParseError(f"unexpected character {source[bad]!r}", bad)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("end", "", len(source)))
    return tokens


class _Parser:
    def __init__(self, tokens, prefix):
        self.tokens = tokens
        self.i = 0
        self.prefix = prefix

    @property
    def tok(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, text):
        kind, value, pos = self.tok
        if value != text or kind == "end":
            found = "end of input" if kind == "end" else repr(value)
            raise ParseError(f"expected {text!r}, found {found}", pos)
        return self.advance()

    def expr(self):
        node = self.term()
        while self.tok[1] in ("+", "-") and self.tok[0] == "op":
            op = self.advance()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.tok[1] in ("*", "/") and self.tok[0] == "op":
            op = self.advance()[1]
            node = BinOp(op, node, self.unary())
        return node

    def unary(self):
        if self.tok == ("op", "-", self.tok[2]):
            self.advance()
            return Call("neg", self.unary())
        return self.factor()

    def factor(self):
        node = self.atom()
        if self.tok[0] == "op" and self.tok[1] == "^":
            self.advance()
            kind, value, pos = self.tok
            if kind != "num" or not value.isdigit():
                raise ParseError("exponent must be a non-negative integer literal", pos)
            self.advance()
            node = Pow(node, int(value))
        return node

    def atom(self):
        kind, value, pos = self.advance()
        if kind == "num":
            return Const(float(value))
        if kind == "ident":
            if value in SOURCE_PRIMITIVES:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Call(value, arg)
            m = re.fullmatch(r"([a-z])([1-9]\d*)", value)
            if m is None:
                raise ParseError(f"unknown identifier {value!r}", pos)
            if m.group(1) != self.prefix:
                raise ParseError(
                    f"variable {value!r} does not use the prefix {self.prefix!r}", pos
                )
            return Var(int(m.group(2)))
        if kind == "op" and value == "(":
            node = self.expr()
            self.expect(")")
            return node
        found = "end of input" if kind == "end" else repr(value)
        raise ParseError(f"unexpected {found}", pos)


def parse_expression(source: str, prefix: str = "x") -> Expr:
    """Parse a single component; ``;`` is rejected."""
    tokens = _tokenize(source)
    parser = _Parser(tokens, prefix)
    if parser.tok[0] == "end":
        raise ParseError("empty expression", parser.tok[2])
    node = parser.expr()
    kind, value, pos = parser.tok
    if kind != "end":
        raise ParseError(f"unexpected {value!r}", pos)
    return node


def parse_function(source: str, expected_prefix: str = "x", input_dim: int | None = None) -> ExprFunction:
    """Parse ``;``-separated components into an :class:`ExprFunction`.

    ``input_dim`` defaults to the highest variable index referenced; a larger
    value may be declared for functions that ignore trailing inputs.
    """
    tokens = _tokenize(source)
    components = []
    start = 0
    for j, tok in enumerate(tokens):
        if tok[0] == "end" or (tok[0] == "op" and tok[1] == ";"):
            chunk = tokens[start:j] + [("end", "", tok[2])]
            if len(chunk) == 1:
                raise ParseError("empty component", tok[2])
            parser = _Parser(chunk, expected_prefix)
            node = parser.expr()
            if parser.tok[0] != "end":
                raise ParseError(f"unexpected {parser.tok[1]!r}", parser.tok[2])
            components.append(node)
            start = j + 1
    used = max(max_variable(c) for c in components)
    if input_dim is None:
        input_dim = max(used, 1)
    return ExprFunction(tuple(components), input_dim, expected_prefix)


# printing ---------------------------------------------------------------

def _format_const(value: float) -> str:
    text = repr(float(value))
    if not re.fullmatch(r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?", text):
        raise ContractError(f"constant {value!r} has no source form")
    return text


def to_source(node: Expr, prefix: str = "x") -> str:
    """Render an AST so that :func:`parse_expression` rebuilds it exactly."""
    if isinstance(node, Const):
        return _format_const(node.value)
    if isinstance(node, Var):
        return f"{prefix}{node.index}"
    if isinstance(node, BinOp):
        return f"({to_source(node.left, prefix)} {node.op} {to_source(node.right, prefix)})"
    if isinstance(node, Pow):
        base = to_source(node.base, prefix)
        # binary ops and negation already carry their own parentheses
        if isinstance(node.base, Pow):
            base = f"({base})"
        return f"{base}^{node.exponent}"
    if node.name == "neg":
        return f"(-{to_source(node.arg, prefix)})"
    return f"{node.name}({to_source(node.arg, prefix)})"


# evaluation -------------------------------------------------------------

def _real_primitive(name: str, x: float) -> float:
    if name == "exp":
        try:
            return math.exp(x)
        except OverflowError:
            raise DomainError("exp", x, "too large") from None
    if name == "ln":
        if x <= 0.0:
            raise DomainError("ln", x, "not positive")
        return math.log(x)
    if name == "sin":
        return math.sin(x)
    if name == "cos":
        return math.cos(x)
    if name == "sqrt":
        if x < 0.0:
            raise DomainError("sqrt", x, "negative")
        return math.sqrt(x)
    if name == "neg":
        return -x
    raise ContractError(f"unknown primitive {name!r}")


def _apply(name: str, value):
    if isinstance(value, MultiDual):
        return md_apply_univariate(name, value)
    return _real_primitive(name, value)


def _evaluate(node: Expr, inputs):
    if isinstance(node, Const):
        return node.value
    if isinstance(node, Var):
        return inputs[node.index - 1]
    if isinstance(node, BinOp):
        left = _evaluate(node.left, inputs)
        right = _evaluate(node.right, inputs)
        if node.op == "+":
            return left + right
        if node.op == "-":
            return left - right
        if node.op == "*":
            return left * right
        if not isinstance(right, MultiDual) and right == 0.0:
            raise DomainError("div", 0.0, "a zero divisor")
        return left / right
    if isinstance(node, Pow):
        base = _evaluate(node.base, inputs)
        if isinstance(base, MultiDual):
            return md_apply_univariate("pow", base, node.exponent)
        return base**node.exponent
    return _apply(node.name, _evaluate(node.arg, inputs))


def eval_function(fun: ExprFunction, inputs: Sequence) -> list:
    """Evaluate every component on ``inputs`` (floats or one-width MultiDuals).

    Constant sub-expressions stay plain floats; a component that never
    touches a MultiDual input is promoted to a constant of the input width.
    """
    inputs = list(inputs)
    if len(inputs) != fun.input_dim:
        raise ContractError(f"expected {fun.input_dim} inputs, got {len(inputs)}")
    duals = [v for v in inputs if isinstance(v, MultiDual)]
    if duals:
        widths = {v.width for v in duals}
        if len(widths) > 1 or len(duals) != len(inputs):
            raise ContractError("inputs must all come from the same algebra")
        width = duals[0].width
    else:
        inputs = [float(v) for v in inputs]
    out = []
    for comp in fun.components:
        value = _evaluate(comp, inputs)
        if duals and not isinstance(value, MultiDual):
            value = MultiDual.constant(value, width)
        elif not duals:
            value = float(value)
            if not math.isfinite(value):
                raise DomainError("eval", value, "not finite")
        out.append(value)
    return out


def evaluate_real(fun, x) -> np.ndarray:
    """Evaluate any callable function object at a real point as an array."""
    return np.array([float(v) for v in fun([float(t) for t in x])])


@dataclass(frozen=True)
class Composition:
    """``f o g`` evaluated by feeding g's outputs into f in the same algebra."""

    f: ExprFunction
    g: ExprFunction

    def __post_init__(self):
        if self.g.output_dim != self.f.input_dim:
            raise ContractError(
                f"g output arity {self.g.output_dim} does not match f input arity {self.f.input_dim}"
            )

    @property
    def input_dim(self) -> int:
        return self.g.input_dim

    @property
    def output_dim(self) -> int:
        return self.f.output_dim

    def __call__(self, inputs):
        return eval_function(self.f, eval_function(self.g, inputs))
