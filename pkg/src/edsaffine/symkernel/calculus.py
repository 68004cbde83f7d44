"""Differentiation and simultaneous substitution."""
from __future__ import annotations

from functools import lru_cache

from edsaffine.symkernel.expr import (
    ONE,
    ZERO,
    Add,
    Const,
    Expr,
    Func,
    Mul,
    Pow,
    Var,
    add,
    func,
    mul,
    power,
    rebuild,
    sympify,
)


def differentiate(e, v) -> Expr:
    """Partial derivative of ``e`` with respect to the variable ``v``."""
    name = v.name if isinstance(v, Var) else str(v)
    return _diff(sympify(e), name)


@lru_cache(maxsize=200_000)
def _diff(e: Expr, name: str) -> Expr:
    if name not in e.free_symbols:
        return ZERO
    if isinstance(e, Var):
        return ONE
    if isinstance(e, Add):
        return add(*(_diff(t, name) for t in e.terms))
    if isinstance(e, Mul):
        fs = e.factors
        parts = []
        for i, f in enumerate(fs):
            df = _diff(f, name)
            if df != ZERO:
                parts.append(mul(*fs[:i], df, *fs[i + 1 :]))
        return add(*parts)
    if isinstance(e, Pow):
        return mul(Const(e.exp), power(e.base, e.exp - 1), _diff(e.base, name))
    if isinstance(e, Func):
        u = e.arg
        du = _diff(u, name)
        if e.tag == "exp":
            outer = e
        elif e.tag == "log":
            outer = power(u, -1)
        elif e.tag == "sin":
            outer = func("cos", u)
        elif e.tag == "cos":
            outer = mul(Const(-1), func("sin", u))
        elif e.tag == "tan":
            outer = add(ONE, power(e, 2))
        elif e.tag == "atan":
            outer = power(add(ONE, power(u, 2)), -1)
        else:  # pragma: no cover - sqrt never survives construction
            raise ValueError(e.tag)
        return mul(outer, du)
    raise TypeError(type(e))


def gradient(e, names) -> list:
    return [differentiate(e, n) for n in names]


def substitute(e, bindings: dict) -> Expr:
    """Simultaneous substitution ``{name or Var: Expr}``, renormalized."""
    table = {}
    for k, val in bindings.items():
        table[k.name if isinstance(k, Var) else str(k)] = sympify(val)
    e = sympify(e)
    if not table or not (e.free_symbols & table.keys()):
        return e
    memo: dict = {}
    keys = frozenset(table)

    def go(n: Expr) -> Expr:
        if not (n.free_symbols & keys):
            return n
        r = memo.get(n)
        if r is not None:
            return r
        if isinstance(n, Var):
            r = table[n.name]
        else:
            r = rebuild(n, [go(a) for a in n.args])
        memo[n] = r
        return r

    return go(e)
