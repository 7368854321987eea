"""Tiny expression language over z and conj(z).

Grammar::

    expr   := term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := ('-'|'+') factor | atom ('^' ['-'] integer)?
    atom   := 'z' | 'conj' '(' expr ')' | complex | '(' expr ')'
    complex:= decimal | decimal? 'i' | '(' decimal ',' decimal ')'

Evaluation is vectorised over numpy arrays.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from .errors import DivisionByZero, ExpressionSyntaxError

_DECIMAL = r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_TOKEN = re.compile(rf"\s*(?:(?P<num>{_DECIMAL})|(?P<name>[A-Za-z_]+)|(?P<op>[-+*/^(),]))")


class Node:
    def __call__(self, z):
        return self.eval(np.asarray(z, dtype=complex))


@dataclass(frozen=True)
class Var(Node):
    def eval(self, z):
        return z

    def pretty(self):
        return "z"


@dataclass(frozen=True)
class Const(Node):
    value: complex

    def eval(self, z):
        return np.full(np.shape(z), self.value, dtype=complex)

    def pretty(self):
        v = complex(self.value)
        if v.imag == 0 and v.real >= 0 and not np.signbit(v.real):
            return repr(v.real)
        return f"({v.real!r}, {v.imag!r})"


@dataclass(frozen=True)
class Conj(Node):
    arg: Node

    def eval(self, z):
        return np.conj(self.arg.eval(z))

    def pretty(self):
        return f"conj({self.arg.pretty()})"


@dataclass(frozen=True)
class Neg(Node):
    arg: Node

    def eval(self, z):
        return -self.arg.eval(z)

    def pretty(self):
        return f"-{_wrap(self.arg, 3)}"


@dataclass(frozen=True)
class BinOp(Node):
    op: str
    left: Node
    right: Node

    def eval(self, z):
        a = self.left.eval(z)
        b = self.right.eval(z)
        if self.op == "+":
            return a + b
        if self.op == "-":
            return a - b
        if self.op == "*":
            return a * b
        if np.any(b == 0):
            raise DivisionByZero(f"division by zero in {self.pretty()}")
        return a / b

    def pretty(self):
        p = _PREC[self.op]
        # left-associative: the right operand needs parentheses at equal precedence
        return f"{_wrap(self.left, p)} {self.op} {_wrap(self.right, p + 1)}"


@dataclass(frozen=True)
class Pow(Node):
    base: Node
    exponent: int

    def eval(self, z):
        b = self.base.eval(z)
        if self.exponent < 0:
            if np.any(b == 0):
                raise DivisionByZero(f"zero raised to a negative power in {self.pretty()}")
            # b**k may underflow to 0; the inf that results is caught by validate
            with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
                return 1.0 / b ** (-self.exponent)
        return b ** self.exponent

    def pretty(self):
        return f"{_wrap(self.base, 5)}^{self.exponent}"


_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def _prec(node: Node) -> int:
    if isinstance(node, BinOp):
        return _PREC[node.op]
    if isinstance(node, Neg):
        return 3
    if isinstance(node, Pow):
        return 4
    return 5


def _wrap(node: Node, min_prec: int) -> str:
    s = node.pretty()
    if _prec(node) < min_prec:
        return f"({s})"
    return s


def pretty(node: Node) -> str:
    return node.pretty()


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens: list[tuple[str, str, int]] = []
        pos = 0
        while True:
            while pos < len(text) and text[pos].isspace():
                pos += 1
            if pos >= len(text):
                break
            m = _TOKEN.match(text, pos)
            if m is None or m.end() == pos:
                raise ExpressionSyntaxError(f"unexpected character {text[pos]!r}", _byte_offset(text, pos))
            kind = m.lastgroup
            start = m.start(kind)
            self.tokens.append((kind, m.group(kind), start))
            pos = m.end()
        self.i = 0

    def peek(self):
        if self.i < len(self.tokens):
            return self.tokens[self.i]
        return ("eof", "", len(self.text))

    def fail(self, message: str):
        tok = self.peek()
        raise ExpressionSyntaxError(message, _byte_offset(self.text, tok[2]))

    def take(self, value: str | None = None, kind: str | None = None):
        tok = self.peek()
        if (value is not None and tok[1] != value) or (kind is not None and tok[0] != kind) or tok[0] == "eof":
            want = value or kind or "token"
            self.fail(f"expected {want!r}")
        self.i += 1
        return tok

    def parse(self) -> Node:
        node = self.expr()
        if self.peek()[0] != "eof":
            self.fail("unexpected trailing input")
        return node

    def expr(self) -> Node:
        node = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Node:
        node = self.factor()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.take()[1]
            node = BinOp(op, node, self.factor())
        return node

    def factor(self) -> Node:
        tok = self.peek()
        if tok[0] == "op" and tok[1] in ("-", "+"):
            self.take()
            arg = self.factor()
            return Neg(arg) if tok[1] == "-" else arg
        node = self.atom()
        if self.peek()[1] == "^":
            self.take()
            sign = 1
            if self.peek()[1] == "-":
                self.take()
                sign = -1
            num = self.take(kind="num")
            if not num[1].isdigit():
                raise ExpressionSyntaxError("exponent must be an integer", _byte_offset(self.text, num[2]))
            node = Pow(node, sign * int(num[1]))
        return node

    def atom(self) -> Node:
        kind, value, _ = self.peek()
        if kind == "num":
            self.take()
            nxt = self.peek()
            if nxt[0] == "name" and nxt[1] == "i":
                self.take()
                return Const(complex(0, float(value)))
            return Const(complex(float(value)))
        if kind == "name":
            self.take()
            if value == "z":
                return Var()
            if value == "i":
                return Const(1j)
            if value == "conj":
                self.take("(")
                arg = self.expr()
                self.take(")")
                return Conj(arg)
            self.i -= 1
            self.fail(f"unknown name {value!r}")
        if value == "(":
            pair = self._try_pair()
            if pair is not None:
                return pair
            self.take("(")
            node = self.expr()
            self.take(")")
            return node
        self.fail("expected an operand")

    def _try_pair(self):
        """'(' [-]decimal ',' [-]decimal ')' or None (position restored)."""
        start = self.i
        parts = []
        try:
            self.take("(")
            for k in range(2):
                sign = 1.0
                if self.peek()[1] in ("-", "+") and self.peek()[0] == "op":
                    sign = -1.0 if self.take()[1] == "-" else 1.0
                parts.append(sign * float(self.take(kind="num")[1]))
                self.take("," if k == 0 else ")")
        except ExpressionSyntaxError:
            self.i = start
            return None
        return Const(complex(parts[0], parts[1]))


def _byte_offset(text: str, char_index: int) -> int:
    return len(text[:char_index].encode("utf-8"))


def parse_expression(text: str) -> Node:
    return _Parser(text).parse()
