"""Tiny arithmetic language for coefficients: ``t``, numbers, ``+ - * / ^``,
parentheses and ``sin cos exp sqrt``.

The parser is a hand-written recursive descent over a token stream.  Every
node can evaluate itself on a numpy array of times and produce a symbolic
derivative node.  ``-2^2`` parses as ``-(2^2)`` and ``^`` is right-associative.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

import numpy as np

from ..errors import EvaluationError, ExpressionSyntaxError, UnknownIdentifierError

FUNCTIONS = ("sin", "cos", "exp", "sqrt")
CONSTANTS = {"pi": math.pi}


class Node:
    has_division = False

    def eval(self, t):
        raise NotImplementedError

    def diff(self) -> "Node":
        raise NotImplementedError

    def is_const(self) -> bool:
        return False


@dataclass(frozen=True)
class Num(Node):
    value: float

    def eval(self, t):
        return np.full(np.shape(t), self.value, dtype=float)

    def diff(self):
        return ZERO

    def is_const(self):
        return True

    def __str__(self):
        return repr(self.value) if self.value >= 0 else f"({self.value!r})"


@dataclass(frozen=True)
class Var(Node):
    def eval(self, t):
        return np.asarray(t, dtype=float) + 0.0

    def diff(self):
        return ONE

    def __str__(self):
        return "t"


ZERO = Num(0.0)
ONE = Num(1.0)


def _num(node: Node, value: float) -> bool:
    return isinstance(node, Num) and node.value == value


def add(a: Node, b: Node) -> Node:
    if _num(a, 0.0):
        return b
    if _num(b, 0.0):
        return a
    if isinstance(a, Num) and isinstance(b, Num):
        return Num(a.value + b.value)
    return Add(a, b)


def sub(a: Node, b: Node) -> Node:
    if _num(b, 0.0):
        return a
    if _num(a, 0.0):
        return neg(b)
    if isinstance(a, Num) and isinstance(b, Num):
        return Num(a.value - b.value)
    return Sub(a, b)


def mul(a: Node, b: Node) -> Node:
    if _num(a, 0.0) or _num(b, 0.0):
        return ZERO
    if _num(a, 1.0):
        return b
    if _num(b, 1.0):
        return a
    if isinstance(a, Num) and isinstance(b, Num):
        return Num(a.value * b.value)
    return Mul(a, b)


def div(a: Node, b: Node) -> Node:
    if _num(a, 0.0) and not _num(b, 0.0):
        return ZERO
    if _num(b, 1.0):
        return a
    return Div(a, b)


def neg(a: Node) -> Node:
    if isinstance(a, Num):
        return Num(-a.value)
    if isinstance(a, Neg):
        return a.arg
    return Neg(a)


@dataclass(frozen=True)
class Add(Node):
    left: Node
    right: Node

    @property
    def has_division(self):
        return self.left.has_division or self.right.has_division

    def eval(self, t):
        return self.left.eval(t) + self.right.eval(t)

    def diff(self):
        return add(self.left.diff(), self.right.diff())

    def __str__(self):
        return f"({self.left} + {self.right})"


@dataclass(frozen=True)
class Sub(Node):
    left: Node
    right: Node

    @property
    def has_division(self):
        return self.left.has_division or self.right.has_division

    def eval(self, t):
        return self.left.eval(t) - self.right.eval(t)

    def diff(self):
        return sub(self.left.diff(), self.right.diff())

    def __str__(self):
        return f"({self.left} - {self.right})"


@dataclass(frozen=True)
class Mul(Node):
    left: Node
    right: Node

    @property
    def has_division(self):
        return self.left.has_division or self.right.has_division

    def eval(self, t):
        return self.left.eval(t) * self.right.eval(t)

    def diff(self):
        return add(mul(self.left.diff(), self.right), mul(self.left, self.right.diff()))

    def __str__(self):
        return f"({self.left} * {self.right})"


@dataclass(frozen=True)
class Div(Node):
    left: Node
    right: Node
    has_division = True

    def eval(self, t):
        den = self.right.eval(t)
        if np.any(den == 0.0):
            raise EvaluationError(f"division by zero in {self}")
        return self.left.eval(t) / den

    def diff(self):
        # (u/v)' = u'/v - u v'/v^2
        u, v = self.left, self.right
        return sub(div(u.diff(), v), div(mul(u, v.diff()), mul(v, v)))

    def __str__(self):
        return f"({self.left} / {self.right})"


@dataclass(frozen=True)
class Neg(Node):
    arg: Node

    @property
    def has_division(self):
        return self.arg.has_division

    def eval(self, t):
        return -self.arg.eval(t)

    def diff(self):
        return neg(self.arg.diff())

    def __str__(self):
        return f"(-{self.arg})"


@dataclass(frozen=True)
class Pow(Node):
    base: Node
    exponent: Node

    @property
    def has_division(self):
        return self.base.has_division or self.exponent.has_division

    def eval(self, t):
        b = self.base.eval(t)
        p = self.exponent.eval(t)
        with np.errstate(all="ignore"):
            out = np.power(b, p)
        if not np.all(np.isfinite(out)):
            raise EvaluationError(f"non-finite power in {self}")
        return out

    def diff(self):
        u, v = self.base, self.exponent
        if v.is_const():
            # d/dt u^c = c u^(c-1) u'
            return mul(mul(v, Pow(u, sub(v, ONE))), u.diff())
        # d/dt u^v = u^v (v' ln u + v u'/u)
        return mul(self, add(mul(v.diff(), Call("log", u)), div(mul(v, u.diff()), u)))

    def __str__(self):
        return f"({self.base} ^ {self.exponent})"


@dataclass(frozen=True)
class Call(Node):
    name: str
    arg: Node

    @property
    def has_division(self):
        return self.arg.has_division

    def is_const(self):
        return self.arg.is_const()

    def eval(self, t):
        x = self.arg.eval(t)
        if self.name in ("sqrt", "log") and np.any(x < 0):
            raise EvaluationError(f"{self.name} of a negative value in {self}")
        if self.name == "log" and np.any(x == 0):
            raise EvaluationError(f"log of zero in {self}")
        with np.errstate(over="ignore"):
            out = getattr(np, self.name)(x)
        if not np.all(np.isfinite(out)):
            raise EvaluationError(f"overflow in {self}")
        return out

    def diff(self):
        u = self.arg
        du = u.diff()
        if self.name == "sin":
            outer = Call("cos", u)
        elif self.name == "cos":
            outer = neg(Call("sin", u))
        elif self.name == "exp":
            outer = self
        elif self.name == "sqrt":
            outer = div(Num(0.5), self)
        else:  # log, only produced internally by Pow.diff
            outer = div(ONE, u)
        return mul(outer, du)

    def __str__(self):
        return f"{self.name}({self.arg})"


_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<name>[A-Za-z_]\w*)|(?P<op>[-+*/^()]))"
)


def _tokenize(src: str):
    raw = src.encode("utf-8")
    pos = 0
    tokens = []
    while pos < len(src):
        if src[pos:].strip() == "":
            break
        m = _TOKEN.match(src, pos)
        if m is None or m.end() == pos:
            ws = len(src[pos:]) - len(src[pos:].lstrip())
            bad = pos + ws
            offset = len(src[:bad].encode("utf-8"))
            raise ExpressionSyntaxError(f"unexpected character {src[bad]!r}", offset)
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), len(src[:start].encode("utf-8"))))
        pos = m.end()
    tokens.append(("end", "", len(raw)))
    return tokens


class _Parser:
    def __init__(self, src: str):
        self.tokens = _tokenize(src)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        kind, text, off = self.take()
        if text != value:
            found = "end of input" if kind == "end" else repr(text)
            raise ExpressionSyntaxError(f"expected {value!r}, found {found}", off)

    def parse(self) -> Node:
        node = self.expr()
        kind, text, off = self.peek()
        if kind != "end":
            raise ExpressionSyntaxError(f"unexpected {text!r}", off)
        return node

    def expr(self):
        node = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            rhs = self.term()
            node = Add(node, rhs) if op == "+" else Sub(node, rhs)
        return node

    def term(self):
        node = self.unary()
        while self.peek()[1] in ("*", "/"):
            op = self.take()[1]
            rhs = self.unary()
            node = Mul(node, rhs) if op == "*" else Div(node, rhs)
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
        base = self.atom()
        if self.peek()[1] == "^":
            self.take()
            return Pow(base, self.unary())
        return base

    def atom(self):
        kind, text, off = self.take()
        if kind == "num":
            return Num(float(text))
        if kind == "name":
            if text == "t":
                return Var()
            if text in CONSTANTS:
                return Num(CONSTANTS[text])
            if text in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Call(text, arg)
            raise UnknownIdentifierError(f"unknown identifier {text!r}", off)
        if text == "(":
            node = self.expr()
            self.expect(")")
            return node
        found = "end of input" if kind == "end" else repr(text)
        raise ExpressionSyntaxError(f"unexpected {found}", off)


def parse_tree(src: str) -> Node:
    """Parse ``src`` into an expression tree."""
    if not isinstance(src, str):
        raise TypeError("expression source must be a string")
    return _Parser(src).parse()
