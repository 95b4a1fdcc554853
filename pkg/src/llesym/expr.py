"""Tokenizer and recursive-descent parser for the operator expression grammar.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := '-' factor | primary ['^' ['-'] INT]
    primary:= INT | NAME | '(' expr ')'

The parser only builds an AST; evaluation is delegated to a ``lookup``
callback so the same grammar serves both scalar text and operator text.
Division and negative exponents are only meaningful for scalar-valued
operands; the evaluator of the value type enforces that.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Any, Callable, Union


class ExprSyntaxError(ValueError):
    """Malformed expression text; ``offset`` is a byte offset into the UTF-8 input."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at byte {offset}")
        self.offset = offset


class UnknownSymbolError(KeyError):
    def __init__(self, name: str, offset: int):
        super().__init__(f"unknown symbol {name!r} at byte {offset}")
        self.name = name
        self.offset = offset

    def __str__(self) -> str:
        return self.args[0]


@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class Sym:
    name: str
    offset: int


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Neg:
    operand: "Node"


@dataclass(frozen=True)
class Pow:
    base: "Node"
    exponent: int


Node = Union[Num, Sym, BinOp, Neg, Pow]

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\S))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        mo = _TOKEN.match(text, pos)
        if mo is None:
            break  # only trailing whitespace left
        if mo.group(1) is not None:
            kind, start = "int", mo.start(1)
        elif mo.group(2) is not None:
            kind, start = "name", mo.start(2)
        else:
            kind, start = "op", mo.start(3)
            if mo.group(3) not in "+-*/^()":
                raise ExprSyntaxError(f"unexpected character {mo.group(3)!r}", _byte_offset(text, start))
        tokens.append((kind, mo.group(mo.lastindex), _byte_offset(text, start)))
        pos = mo.end()
    tokens.append(("end", "", len(text.encode("utf-8"))))
    return tokens


def _byte_offset(text: str, index: int) -> int:
    return len(text[:index].encode("utf-8"))


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def take(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, value: str):
        kind, val, off = self.take()
        if val != value or kind != "op":
            raise ExprSyntaxError(f"expected {value!r}, found {val or 'end of input'!r}", off)

    def parse(self) -> Node:
        node = self.expr()
        kind, val, off = self.peek()
        if kind != "end":
            raise ExprSyntaxError(f"unexpected token {val!r}", off)
        return node

    def expr(self) -> Node:
        node = self.term()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                node = BinOp(val, node, self.term())
            else:
                return node

    def term(self) -> Node:
        node = self.factor()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "*/":
                self.take()
                node = BinOp(val, node, self.factor())
            else:
                return node

    def factor(self) -> Node:
        kind, val, _ = self.peek()
        if kind == "op" and val == "-":
            self.take()
            return Neg(self.factor())
        node = self.primary()
        kind, val, _ = self.peek()
        if kind == "op" and val == "^":
            self.take()
            sign = 1
            kind, val, off = self.peek()
            if kind == "op" and val == "-":
                self.take()
                sign = -1
            kind, val, off = self.take()
            if kind != "int":
                raise ExprSyntaxError("exponent must be an integer literal", off)
            node = Pow(node, sign * int(val))
        return node

    def primary(self) -> Node:
        kind, val, off = self.take()
        if kind == "int":
            return Num(int(val))
        if kind == "name":
            return Sym(val, off)
        if kind == "op" and val == "(":
            node = self.expr()
            self.expect(")")
            return node
        raise ExprSyntaxError(f"unexpected token {val or 'end of input'!r}", off)


def parse(text: str) -> Node:
    """Parse ``text`` into an AST, raising :class:`ExprSyntaxError` on bad input."""
    return _Parser(text).parse()


def evaluate(node: Node, lookup: Callable[[str], Any]) -> Any:
    """Evaluate an AST, resolving names through ``lookup``.

    ``lookup`` raises ``KeyError`` for unknown names; it is re-raised as
    :class:`UnknownSymbolError` carrying the symbol's offset. Integer
    literals are passed to the arithmetic as Python ints.
    """
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Sym):
        try:
            return lookup(node.name)
        except KeyError:
            raise UnknownSymbolError(node.name, node.offset) from None
    if isinstance(node, Neg):
        return -evaluate(node.operand, lookup)
    if isinstance(node, Pow):
        return _power(evaluate(node.base, lookup), node.exponent)
    left = evaluate(node.left, lookup)
    right = evaluate(node.right, lookup)
    if node.op == "+":
        return left + right
    if node.op == "-":
        return left - right
    if node.op == "*":
        return left * right
    return _divide(left, right)


def _power(base, exponent: int):
    if isinstance(base, int):
        if exponent < 0:
            from .scalars import Scalar

            return Scalar(base) ** exponent
        return base**exponent
    return base**exponent


def _divide(left, right):
    if isinstance(left, int) and isinstance(right, int):
        from .scalars import Scalar

        return Scalar(left) / right
    return left / right
