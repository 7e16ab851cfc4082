"""Tiny expression evaluator shared by the canonical text formats.

Expressions are sums of products built from integers, ``/`` between pure
numbers, ``^`` with integer exponents, parentheses and named symbols. The
evaluation is carried out in whatever ring the symbol table lives in, so
the same grammar parses Gaussian rationals, Laurent polynomials, theta
series and (noncommutative) operators. Products are evaluated left to
right, which matters for operator words.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Any, Callable, Mapping

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.))")


class ParseError(ValueError):
    pass


def _tokenize(text: str) -> list[tuple[str, str]]:
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:  # pragma: no cover - the pattern always matches
            raise ParseError(f"cannot tokenize at {pos}: {text[pos:]!r}")
        pos = m.end()
        if m.group(1) is not None:
            tokens.append(("num", m.group(1)))
        elif m.group(2) is not None:
            tokens.append(("name", m.group(2)))
        elif m.group(3) is not None and not m.group(3).isspace():
            if m.group(3) not in "+-*/^()":
                raise ParseError(f"unexpected character {m.group(3)!r}")
            tokens.append(("op", m.group(3)))
    return tokens


class _Parser:
    def __init__(self, text: str, symbols: Mapping[str, Any], lift: Callable[[Fraction], Any]):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.symbols = symbols
        self.lift = lift

    def peek(self) -> tuple[str, str] | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self) -> tuple[str, str]:
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of input")
        self.pos += 1
        return tok

    def expect(self, op: str) -> None:
        tok = self.take()
        if tok != ("op", op):
            raise ParseError(f"expected {op!r}, got {tok[1]!r}")

    # pure numbers stay Fractions until they meet a ring element
    def _combine(self, a, b, fn):
        a_num = isinstance(a, Fraction)
        b_num = isinstance(b, Fraction)
        if a_num and not b_num:
            a = self.lift(a)
        elif b_num and not a_num:
            b = self.lift(b)
        return fn(a, b)

    def expr(self):
        value = self.term()
        while (tok := self.peek()) in (("op", "+"), ("op", "-")):
            self.take()
            rhs = self.term()
            if tok[1] == "+":
                value = self._combine(value, rhs, lambda u, v: u + v)
            else:
                value = self._combine(value, rhs, lambda u, v: u - v)
        return value

    def term(self):
        value = self.unary()
        while (tok := self.peek()) in (("op", "*"), ("op", "/")):
            self.take()
            rhs = self.unary()
            if tok[1] == "*":
                value = self._combine(value, rhs, lambda u, v: u * v)
            else:
                if not isinstance(rhs, Fraction):
                    raise ParseError("division is only defined by plain numbers")
                if rhs == 0:
                    raise ParseError("division by zero")
                if isinstance(value, Fraction):
                    value = value / rhs
                else:
                    value = value * self.lift(1 / rhs)
        return value

    def unary(self):
        if self.peek() == ("op", "-"):
            self.take()
            return -self.unary()
        if self.peek() == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            sign = 1
            if self.peek() == ("op", "-"):
                self.take()
                sign = -1
            kind, text = self.take()
            if kind != "num":
                raise ParseError("exponent must be an integer")
            base = base ** (sign * int(text))
        return base

    def atom(self):
        kind, text = self.take()
        if kind == "num":
            return Fraction(int(text))
        if kind == "name":
            if text not in self.symbols:
                raise ParseError(f"unknown symbol {text!r}")
            return self.symbols[text]
        if text == "(":
            value = self.expr()
            self.expect(")")
            return value
        raise ParseError(f"unexpected token {text!r}")


def evaluate(text: str, symbols: Mapping[str, Any], lift: Callable[[Fraction], Any]):
    """Evaluate ``text`` with ``symbols``; bare numbers are mapped through ``lift``."""
    parser = _Parser(text, symbols, lift)
    if parser.peek() is None:
        raise ParseError("empty expression")
    value = parser.expr()
    if parser.peek() is not None:
        raise ParseError(f"trailing input at token {parser.peek()[1]!r}")
    if isinstance(value, Fraction):
        value = lift(value)
    return value
