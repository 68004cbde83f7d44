"""Infix printing that the parser reads back to the same normalized tree."""
from __future__ import annotations

from fractions import Fraction

from edsaffine.symkernel.expr import Add, Const, Expr, Func, Mul, Pow, Var

_PREC_ADD, _PREC_MUL, _PREC_UNARY, _PREC_POW, _PREC_ATOM = 1, 2, 3, 4, 5


def _frac(v: Fraction) -> str:
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def _prec(e: Expr) -> int:
    if isinstance(e, Add):
        return _PREC_ADD
    if isinstance(e, Mul):
        return _PREC_MUL
    if isinstance(e, Const):
        if e.value < 0:
            return _PREC_UNARY
        return _PREC_MUL if e.value.denominator != 1 else _PREC_ATOM
    if isinstance(e, Pow):
        if e.exp < 0:
            return _PREC_MUL
        return _PREC_POW
    return _PREC_ATOM


def _wrap(e: Expr, min_prec: int) -> str:
    s = to_string(e)
    return f"({s})" if _prec(e) < min_prec else s


def _exponent(v: Fraction) -> str:
    if v.denominator == 1 and v > 0:
        return str(v.numerator)
    return f"({_frac(v)})"


def _product(factors) -> str:
    """Print a coefficient-free product, negative powers as a quotient."""
    num, den = [], []
    for f in factors:
        if isinstance(f, Pow) and f.exp < 0:
            den.append(f.base if f.exp == -1 else Pow(f.base, -f.exp))
        else:
            num.append(f)
    top = "*".join(_wrap(f, _PREC_POW if isinstance(f, Const) else _PREC_MUL + 1) for f in num) if num else "1"
    if not den:
        return top
    if len(den) == 1:
        bottom = _wrap(den[0], _PREC_POW)
    else:
        bottom = "(" + "*".join(_wrap(f, _PREC_MUL + 1) for f in den) + ")"
    return f"{top}/{bottom}"


def _term(e: Expr) -> tuple[bool, str]:
    """Return (is_negative, text of the magnitude) for one summand."""
    if isinstance(e, Const):
        return e.value < 0, _frac(abs(e.value))
    if isinstance(e, Mul) and isinstance(e.factors[0], Const):
        c = e.factors[0].value
        rest = e.factors[1:]
        body = _product(rest)
        if abs(c) == 1:
            return c < 0, body
        if body.startswith("1/"):
            return c < 0, f"{_frac(abs(c))}{body[1:]}"
        return c < 0, f"{_frac(abs(c))}*{body}"
    if isinstance(e, Mul):
        return False, _product(e.factors)
    return False, to_string(e)


def to_string(e: Expr) -> str:
    if isinstance(e, Const):
        return _frac(e.value)
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Func):
        return f"{e.tag}({to_string(e.arg)})"
    if isinstance(e, Pow):
        if e.exp < 0:
            return _product((e,))
        return f"{_wrap(e.base, _PREC_ATOM)}^{_exponent(e.exp)}"
    if isinstance(e, Mul):
        neg, body = _term(e)
        return f"-{body}" if neg else body
    if isinstance(e, Add):
        parts = []
        terms = list(e.terms)
        if isinstance(terms[0], Const):
            terms = terms[1:] + terms[:1]
        for i, t in enumerate(terms):
            neg, body = _term(t)
            if i == 0:
                parts.append(f"-{body}" if neg else body)
            else:
                parts.append(f" - {body}" if neg else f" + {body}")
        return "".join(parts)
    raise TypeError(type(e))
