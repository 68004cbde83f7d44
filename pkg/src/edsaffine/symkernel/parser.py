"""Recursive-descent parser for infix expressions and ODE right-hand sides.

Grammar::

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := '-' unary | '+' unary | power
    power   := atom ('^' unary)?          # right-associative
    atom    := NUMBER | NAME | NAME '(' expr ')' | '(' expr ')'
"""
from __future__ import annotations

import re
from fractions import Fraction

from edsaffine.symkernel.expr import FUNCTIONS, Const, Expr, Var, func, power

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d+)?)|(?P<name>[a-zA-Z][a-zA-Z0-9_]*)|(?P<op>[-+*/^()']))"
)


class ParseError(ValueError):
    def __init__(self, message: str, position: int, text: str = ""):
        self.position = position
        self.text = text
        super().__init__(f"{message} at position {position}")


def _tokenize(text: str):
    pos = 0
    out = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            stripped = len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[pos + stripped]!r}", pos + stripped, text)
        start = m.start(m.lastgroup)
        out.append((m.lastgroup, m.group(m.lastgroup), start))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str, allow_prime: bool = False):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0
        self.allow_prime = allow_prime

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        kind, val, pos = self.take()
        if val != value:
            raise ParseError(f"expected {value!r}, found {val or 'end of input'!r}", pos, self.text)

    def error(self, message):
        raise ParseError(message, self.peek()[2], self.text)

    def parse(self) -> Expr:
        e = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected {val!r}", pos, self.text)
        return e

    def expr(self) -> Expr:
        e = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            rhs = self.term()
            e = e + rhs if op == "+" else e - rhs
        return e

    def term(self) -> Expr:
        e = self.unary()
        while self.peek()[1] in ("*", "/"):
            op = self.take()[1]
            rhs = self.unary()
            e = e * rhs if op == "*" else e / rhs
        return e

    def unary(self) -> Expr:
        if self.peek()[1] == "-":
            self.take()
            return -self.unary()
        if self.peek()[1] == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.peek()[1] == "^":
            self.take()
            return power(base, self.unary())
        return base

    def atom(self) -> Expr:
        kind, val, pos = self.take()
        if kind == "num":
            return Const(Fraction(val))
        if kind == "name":
            if self.peek()[1] == "(":
                if val not in FUNCTIONS:
                    raise ParseError(f"unknown function {val!r}", pos, self.text)
                self.take()
                arg = self.expr()
                self.expect(")")
                return func(val, arg)
            if self.peek()[1] == "'":
                if not self.allow_prime:
                    raise ParseError("derivative marks are only allowed in ODE input", self.peek()[2], self.text)
                self.take()
                return Var(val + "'")
            return Var(val)
        if val == "(":
            e = self.expr()
            self.expect(")")
            return e
        raise ParseError(f"unexpected {val or 'end of input'!r}", pos, self.text)


def parse(text: str) -> Expr:
    """Parse an infix expression into a normalized Expr."""
    return _Parser(text).parse()


def parse_ode(text: str, unknown: str = "y") -> Expr:
    """Parse ``"y' = <expr>"`` (or a bare right-hand side) into the slope f(x, y)."""
    if "=" in text:
        lhs, rhs = text.split("=", 1)
        if lhs.replace(" ", "") != unknown + "'":
            raise ParseError(f"left-hand side must be {unknown}'", 0, text)
        offset = len(lhs) + 1
    else:
        rhs, offset = text, 0
    try:
        e = parse(rhs)
    except ParseError as exc:
        raise ParseError(str(exc).rsplit(" at position", 1)[0], exc.position + offset, text) from None
    return e
