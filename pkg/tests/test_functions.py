import numpy as np
import pytest
from hypothesis import given, strategies as st

from chaindiff.algebra import MultiDual
from chaindiff.errors import ContractError, DomainError, ParseError
from chaindiff.functions import (
    BinOp,
    Call,
    Composition,
    Const,
    ExprFunction,
    Pow,
    Var,
    eval_function,
    parse_expression,
    parse_function,
    to_source,
)


def test_parse_single_call():
    f = parse_function("exp(y1)", "y")
    assert f.components == (Call("exp", Var(1)),)
    assert f.input_dim == 1 and f.output_dim == 1


def test_parse_two_components():
    f = parse_function("x1*x2 + sin(x1); x2^3", "x")
    assert f.output_dim == 2 and f.input_dim == 2
    assert f.components[0] == BinOp("+", BinOp("*", Var(1), Var(2)), Call("sin", Var(1)))
    assert f.components[1] == Pow(Var(2), 3)


def test_left_associativity_and_precedence():
    assert parse_expression("x1 - x2 - x3") == BinOp("-", BinOp("-", Var(1), Var(2)), Var(3))
    assert parse_expression("x1 / x2 * x3") == BinOp("*", BinOp("/", Var(1), Var(2)), Var(3))
    assert parse_expression("2*x1^2") == BinOp("*", Const(2.0), Pow(Var(1), 2))
    assert parse_expression("-x1^2") == Call("neg", Pow(Var(1), 2))
    assert parse_expression("1.5e-3 + .5") == BinOp("+", Const(1.5e-3), Const(0.5))


@pytest.mark.parametrize(
    "source, prefix, offset",
    [
        ("x1 +", "x", 4),
        ("", "x", 0),
        ("x1;;x2", "x", 3),
        ("x1;", "x", 3),
        ("foo(x1)", "x", 0),
        ("y1 + x1", "x", 0),
        ("x1 + y2", "x", 5),
        ("x0", "x", 0),
        ("(x1", "x", 3),
        ("x1 x2", "x", 3),
        ("x1^2.5", "x", 3),
        ("x1 # 2", "x", 3),
        ("exp x1", "x", 4),
    ],
)
def test_parse_errors_report_offset(source, prefix, offset):
    with pytest.raises(ParseError) as info:
        parse_function(source, prefix)
    assert info.value.position == offset


def test_declared_input_dim():
    f = parse_function("x1", "x", input_dim=3)
    assert f.input_dim == 3
    with pytest.raises(ContractError):
        parse_function("x3", "x", input_dim=2)


def test_eval_reals():
    assert eval_function(parse_function("x1^2"), [3.0]) == [9.0]
    assert eval_function(parse_function("x1*x2"), [2.0, 3.0]) == [6.0]
    assert eval_function(parse_function("x1/x2 - 1"), [1.0, 4.0]) == [-0.75]


def test_eval_multidual():
    out = eval_function(parse_function("x1^2"), [MultiDual.variable(1.0, [1.0])])
    assert out == [MultiDual(1, [1.0, 2.0])]


def test_constant_component_promoted():
    out = eval_function(parse_function("2; x1"), [MultiDual.variable(1.0, [1.0, 0.0])])
    assert out[0] == MultiDual.constant(2.0, 2)


def test_eval_errors():
    with pytest.raises(DomainError, match="ln"):
        eval_function(parse_function("ln(x1)"), [0.0])
    with pytest.raises(DomainError):
        eval_function(parse_function("1/x1"), [0.0])
    with pytest.raises(DomainError):
        eval_function(parse_function("1/x1"), [MultiDual.variable(0.0, [1.0])])
    with pytest.raises(ContractError):
        eval_function(parse_function("x1*x2"), [1.0])
    with pytest.raises(ContractError):
        eval_function(parse_function("x1*x2"), [MultiDual.variable(1.0, [1.0]), 2.0])


def test_composition_arity():
    with pytest.raises(ContractError, match="arity 2 .* arity 1"):
        Composition(parse_function("y1", "y"), parse_function("x1; x2"))


# generated expressions ---------------------------------------------------

leaves = st.one_of(
    st.builds(Var, st.integers(1, 3)),
    st.builds(Const, st.floats(0, 100, allow_nan=False, allow_infinity=False)),
)


def extend(children):
    return st.one_of(
        st.builds(BinOp, st.sampled_from("+-*/"), children, children),
        st.builds(Pow, children, st.integers(0, 5)),
        st.builds(Call, st.sampled_from(["exp", "ln", "sin", "cos", "sqrt", "neg"]), children),
    )


exprs = st.recursive(leaves, extend, max_leaves=12)


@given(exprs)
def test_print_parse_round_trip(node):
    assert parse_expression(to_source(node, "x"), "x") == node
    assert parse_expression(to_source(node, "y"), "y") == node


# smooth vocabulary only: no division, ln or sqrt
smooth = st.recursive(
    st.one_of(st.builds(Var, st.integers(1, 3)), st.builds(Const, st.floats(-2, 2))),
    lambda ch: st.one_of(
        st.builds(BinOp, st.sampled_from("+-*"), ch, ch),
        st.builds(Pow, ch, st.integers(0, 3)),
        st.builds(Call, st.sampled_from(["sin", "cos", "neg"]), ch),
    ),
    max_leaves=8,
)


@given(smooth, st.lists(st.floats(-2, 2), min_size=3, max_size=3), st.integers(0, 3))
def test_zero_tangent_multidual_matches_reals_exactly(node, x, width):
    fun = ExprFunction((node,), 3)
    real = eval_function(fun, x)
    duals = eval_function(fun, [MultiDual.constant(v, width) for v in x])
    assert duals[0].coeffs[0, 0] == real[0]
    assert not np.any(duals[0].coeffs[1:])


@given(smooth, st.lists(st.floats(-2, 2), min_size=3, max_size=3))
def test_evaluation_is_deterministic(node, x):
    fun = ExprFunction((node,), 3)
    seeds = [MultiDual.variable(v, [1.0, -0.5]) for v in x]
    a = eval_function(fun, seeds)[0].coeffs
    b = eval_function(fun, seeds)[0].coeffs
    assert a.tobytes() == b.tobytes()
