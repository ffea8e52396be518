"""Parser and evaluator for catalog surd expressions.

Grammar (whitespace is insignificant)::

    expr     := term (("+" | "-") term)*
    term     := unary (("*" | "/") unary)*
    unary    := ("+" | "-") unary | power
    power    := atom ["^" exponent]
    exponent := INT | "-" INT | "(" ["-"] INT ["/" INT] ")"
    atom     := NUMBER | FUNC "(" expr ")" | NAME | "(" expr ")"
    FUNC     := "sqrt" | "cbrt"
    NUMBER   := DIGITS ["." DIGITS]
    NAME     := [A-Za-z_][A-Za-z0-9_]*

A NAME refers to another constant of the same catalog.  Fractional
exponents and ``sqrt`` require a nonnegative base; ``cbrt`` is the real
cube root.  Expressions are exact: they are re-evaluated from scratch at
whatever precision is requested.
"""

from __future__ import annotations

import re
from collections.abc import Mapping
from dataclasses import dataclass
from fractions import Fraction

from .bigreal import BigReal, to_mpf, working
from .errors import DomainError, SurdSyntaxError
from .surdform import LinearSurd

EVAL_GUARD_BITS = 64

_TOKEN = re.compile(r"\s*(?:(\d+(?:\.\d+)?)|([A-Za-z_][A-Za-z0-9_]*)|(\S))")


# ----------------------------------------------------------------------
# expression tree


@dataclass(frozen=True)
class Num:
    value: Fraction

    def eval(self, ctx, env):
        return to_mpf(self.value, ctx)

    def text(self):
        v = self.value
        return str(v.numerator) if v.denominator == 1 else f"({v.numerator}/{v.denominator})"


@dataclass(frozen=True)
class Ref:
    name: str

    def eval(self, ctx, env):
        return env.value_of(self.name, ctx)

    def text(self):
        return self.name


@dataclass(frozen=True)
class Func:
    name: str
    arg: object

    def eval(self, ctx, env):
        v = self.arg.eval(ctx, env)
        if self.name == "sqrt":
            if v < 0:
                raise DomainError("sqrt of a negative value")
            return ctx.sqrt(v)
        return ctx.cbrt(v)

    def text(self):
        return f"{self.name}({self.arg.text()})"


@dataclass(frozen=True)
class Neg:
    arg: object

    def eval(self, ctx, env):
        return -self.arg.eval(ctx, env)

    def text(self):
        return f"-{self.arg.text()}"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: object
    right: object

    def eval(self, ctx, env):
        a, b = self.left.eval(ctx, env), self.right.eval(ctx, env)
        if self.op == "+":
            return a + b
        if self.op == "-":
            return a - b
        if self.op == "*":
            return a * b
        if b == 0:
            raise DomainError("division by zero")
        return a / b

    def text(self):
        return f"({self.left.text()} {self.op} {self.right.text()})"


@dataclass(frozen=True)
class Pow:
    base: object
    exponent: Fraction

    def eval(self, ctx, env):
        v = self.base.eval(ctx, env)
        e = self.exponent
        if e.denominator == 1:
            return v ** int(e)
        if v < 0:
            raise DomainError("fractional power of a negative value")
        return ctx.root(v, e.denominator) ** e.numerator

    def text(self):
        e = self.exponent
        exp = str(e.numerator) if e.denominator == 1 and e >= 0 else f"({e.numerator}/{e.denominator})" if e.denominator != 1 else f"({e.numerator})"
        return f"{self.base.text()}^{exp}"


# ----------------------------------------------------------------------
# parser


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = []
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if m is None or m.end() == pos:
                break
            kind = "num" if m.group(1) else "name" if m.group(2) else "op"
            self.tokens.append((kind, m.group(m.lastindex), m.start(m.lastindex)))
            pos = m.end()
            if text[pos:].strip() == "":
                break
        self.i = 0

    def error(self, msg):
        where = self.tokens[self.i][2] if self.i < len(self.tokens) else len(self.text)
        raise SurdSyntaxError(f"{msg} at column {where + 1} in {self.text!r}")

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None, None)

    def take(self, value=None):
        tok = self.peek()
        if tok[0] is None or (value is not None and tok[1] != value):
            self.error(f"expected {value!r}" if value else "unexpected end of expression")
        self.i += 1
        return tok

    def parse(self):
        if not self.tokens:
            self.error("empty expression")
        node = self.expr()
        if self.i != len(self.tokens):
            self.error(f"unexpected token {self.peek()[1]!r}")
        return node

    def expr(self):
        node = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.peek()[1] in ("*", "/"):
            op = self.take()[1]
            node = BinOp(op, node, self.unary())
        return node

    def unary(self):
        if self.peek()[1] == "-":
            self.take()
            return Neg(self.unary())
        if self.peek()[1] == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        node = self.atom()
        if self.peek()[1] == "^":
            self.take()
            node = Pow(node, self.exponent())
        return node

    def integer(self):
        kind, value, _ = self.take()
        if kind != "num" or "." in value:
            self.i -= 1
            self.error("expected an integer exponent")
        return int(value)

    def exponent(self):
        if self.peek()[1] == "(":
            self.take()
            sign = -1 if self.peek()[1] == "-" else 1
            if sign < 0:
                self.take()
            num = self.integer()
            den = 1
            if self.peek()[1] == "/":
                self.take()
                den = self.integer()
                if den == 0:
                    self.error("zero denominator in exponent")
            self.take(")")
            return Fraction(sign * num, den)
        if self.peek()[1] == "-":
            self.take()
            return Fraction(-self.integer())
        return Fraction(self.integer())

    def atom(self):
        kind, value, _ = self.peek()
        if kind == "num":
            self.take()
            return Num(Fraction(value))
        if kind == "name":
            self.take()
            if value in ("sqrt", "cbrt"):
                self.take("(")
                arg = self.expr()
                self.take(")")
                return Func(value, arg)
            return Ref(value)
        if value == "(":
            self.take()
            node = self.expr()
            self.take(")")
            return node
        self.error("expected a number, name, function or '('")


# ----------------------------------------------------------------------
# public API


class Environment:
    """Named constants that expressions may reference."""

    def __init__(self, exprs: Mapping[str, SurdExpr] | None = None):
        self.exprs = dict(exprs or {})
        self._active = set()

    def value_of(self, name, ctx):
        if name not in self.exprs:
            raise SurdSyntaxError(f"unknown constant {name!r}")
        if name in self._active:
            raise SurdSyntaxError(f"circular reference through {name!r}")
        self._active.add(name)
        try:
            return self.exprs[name].node.eval(ctx, self)
        finally:
            self._active.discard(name)


_EMPTY = Environment()


@dataclass(frozen=True)
class SurdExpr:
    """An exact real expression, evaluable at any precision."""

    text: str
    node: object

    def evaluate(self, prec: int, env: Environment | None = None) -> BigReal:
        with working(prec + EVAL_GUARD_BITS) as ctx:
            return BigReal(self.node.eval(ctx, env or _EMPTY), prec)

    def names(self) -> set[str]:
        found = set()

        def walk(n):
            if isinstance(n, Ref):
                found.add(n.name)
            for child in ("arg", "left", "right", "base"):
                if hasattr(n, child):
                    walk(getattr(n, child))

        walk(self.node)
        return found

    def linear_surd(self) -> LinearSurd | None:
        """Exact ``sum q sqrt(d)`` form, or None if the expression is not one."""
        try:
            return _to_linear(self.node)
        except (TypeError, ValueError, ZeroDivisionError):
            return None

    def __str__(self):
        return self.text


def _to_linear(n) -> LinearSurd:
    if isinstance(n, Num):
        return LinearSurd.rational(n.value)
    if isinstance(n, Neg):
        return -_to_linear(n.arg)
    if isinstance(n, Func) and n.name == "sqrt":
        inner = _to_linear(n.arg)
        if not inner.is_rational():
            raise ValueError("nested radical")
        return LinearSurd.sqrt_of(inner.rational_part())
    if isinstance(n, BinOp):
        a, b = _to_linear(n.left), _to_linear(n.right)
        if n.op == "+":
            return a + b
        if n.op == "-":
            return a - b
        if n.op == "*":
            return a * b
        if not b.is_rational():
            raise ValueError("division by an irrational")
        return a / b
    if isinstance(n, Pow) and n.exponent.denominator == 1 and n.exponent >= 0:
        return _to_linear(n.base) ** int(n.exponent)
    raise ValueError("not a linear surd")


def surd_parse(text: str) -> SurdExpr:
    """Parse a surd expression; raises :class:`SurdSyntaxError` on bad input."""
    if not isinstance(text, str):
        raise SurdSyntaxError("expression must be a string")
    return SurdExpr(text.strip(), _Parser(text).parse())
