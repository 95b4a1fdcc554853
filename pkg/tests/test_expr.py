from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from llesym.expr import BinOp, ExprSyntaxError, Num, Pow, Sym, UnknownSymbolError, evaluate, parse
from llesym.scalars import Scalar


def test_precedence():
    tree = parse("1 + 2*x^3")
    assert isinstance(tree, BinOp) and tree.op == "+"
    assert isinstance(tree.right.right, Pow) and tree.right.right.exponent == 3
    assert evaluate(parse("2 - 3 - 4"), {}.__getitem__) == -5
    assert evaluate(parse("-2^2"), {}.__getitem__) == -4


def test_whitespace_insensitive():
    env = {"x1": 2, "x2": 3, "d1": 5}.__getitem__
    assert evaluate(parse(" ( x1 +x2 ) * d1 "), env) == evaluate(parse("(x1+x2)*d1"), env) == 25


def test_rational_literal():
    assert evaluate(parse("(1/2)"), {}.__getitem__) == Scalar(1) / 2


@pytest.mark.parametrize(
    "text, offset",
    [("2*", 2), ("(x", 2), ("x ^ y", 4), ("x $ y", 2), ("", 0), ("x)", 1)],
)
def test_syntax_error_offsets(text, offset):
    with pytest.raises(ExprSyntaxError) as info:
        parse(text)
    assert info.value.offset == offset


def test_byte_offsets_are_utf8():
    with pytest.raises(ExprSyntaxError) as info:
        parse("é")
    assert info.value.offset == 0
    with pytest.raises(UnknownSymbolError) as info:
        evaluate(parse("x + y"), {"x": 1}.__getitem__)
    assert info.value.name == "y" and info.value.offset == 4


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(-20, 20), min_size=1, max_size=6))
def test_integer_sums(values):
    text = " + ".join(f"({v})" for v in values)
    assert evaluate(parse(text), {}.__getitem__) == sum(values)


def test_leaves():
    assert parse("x1") == Sym("x1", 0)
    assert parse("7") == Num(7)
