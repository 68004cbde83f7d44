"""Canonical rational-function form over a ring of kernels.

A kernel is a variable, a function application, or a power ``b^(1/q)``.  An
expression is rewritten as ``num/den`` with ``num`` and ``den`` integer
polynomials in its kernels, cancelled by their gcd, with the integer contents
coprime and the leading coefficient of ``den`` positive.  For expressions whose
kernels are all variables this form is canonical, which makes the zero test
exact there.  Powers ``k^q`` of a radical kernel ``k = b^(1/q)`` are rewritten
as ``b``.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd

from edsaffine.symkernel import poly as P
from edsaffine.symkernel.expr import (
    ONE,
    Add,
    Const,
    Expr,
    Func,
    Mul,
    Pow,
    Var,
    add,
    mul,
    power,
    sympify,
)


def _coef_of(term: Expr) -> Fraction:
    if isinstance(term, Const):
        return term.value
    if isinstance(term, Mul) and isinstance(term.factors[0], Const):
        return term.factors[0].value
    return Fraction(1)


@lru_cache(maxsize=50_000)
def exp_split(arg: Expr):
    """Write arg = c * B with c rational and B primitive (integer coprime
    coefficients, first term positive), so exp(c1 B) and exp(c2 B) can share
    one kernel."""
    if isinstance(arg, Const):
        return arg.value, ONE
    c = Fraction(1)
    rest = arg
    if isinstance(arg, Mul) and isinstance(arg.factors[0], Const):
        c = arg.factors[0].value
        rest = mul(*arg.factors[1:])
    if isinstance(rest, Add):
        coefs = [_coef_of(t) for t in rest.terms]
        num = 0
        den = 1
        for q in coefs:
            num = gcd(num, q.numerator)
            den = den * q.denominator // gcd(den, q.denominator)
        k = Fraction(num, den)
        if coefs[0] < 0:
            k = -k
        if k != 1:
            rest = add(*[mul(Const(1 / k), t) for t in rest.terms])
            c = c * k
    return c, rest


def _merge_exponentials(kernels):
    """Replace exp(c_i B) by the single kernel exp(g B), g = gcd of the c_i."""
    groups: dict = {}
    out = []
    for k in kernels:
        if isinstance(k, Func) and k.tag == "exp":
            c, b = exp_split(k.arg)
            groups.setdefault(b, []).append(c)
        else:
            out.append(k)
    for b, cs in groups.items():
        num, den = 0, 1
        for q in cs:
            num = gcd(num, q.numerator)
            den = den * q.denominator // gcd(den, q.denominator)
        out.append(Func("exp", mul(Const(Fraction(num, den)), b)))
    return out


class Ring:
    """An ordered tuple of kernels; interned, so equal rings are identical.

    Exponentials whose arguments are rational multiples of one another are
    represented by integer powers of a common exponential kernel.
    """

    _cache: dict = {}

    def __new__(cls, kernels):
        kernels = _merge_exponentials(set(kernels))
        kernels = tuple(sorted(set(kernels), key=lambda k: k.sort_key))
        r = cls._cache.get(kernels)
        if r is None:
            r = super().__new__(cls)
            r.kernels = kernels
            r.nvars = len(kernels)
            r.index = {k: i for i, k in enumerate(kernels)}
            r.radicals = {
                i: k.exp.denominator for i, k in enumerate(kernels) if isinstance(k, Pow)
            }
            r._bases = {}
            r.all_variables = all(isinstance(k, Var) for k in kernels)
            r.exp_bases = {}
            for i, k in enumerate(kernels):
                if isinstance(k, Func) and k.tag == "exp":
                    g, b = exp_split(k.arg)
                    r.exp_bases[b] = (i, g)
            cls._cache[kernels] = r
        return r

    def __repr__(self):
        return f"Ring({', '.join(map(str, self.kernels))})"

    def __reduce__(self):
        return (Ring, (self.kernels,))

    def base(self, i: int) -> "RationalFunction":
        b = self._bases.get(i)
        if b is None:
            b = self._bases[i] = to_rational(self.kernels[i].base, self)
        return b

    def gen(self, i: int) -> "RationalFunction":
        return RationalFunction(self, P.var(i), {0: 1}, True)

    def const(self, c) -> "RationalFunction":
        c = Fraction(c)
        return RationalFunction(self, P.const(c.numerator), {0: c.denominator}, True)

    def zero(self):
        return RationalFunction(self, {}, {0: 1}, True)

    def one(self):
        return RationalFunction(self, {0: 1}, {0: 1}, True)

    def __or__(self, other: "Ring") -> "Ring":
        if self is other:
            return self
        return Ring(self.kernels + other.kernels)


@lru_cache(maxsize=100_000)
def kernels_of(e: Expr) -> frozenset:
    if isinstance(e, Const):
        return frozenset()
    if isinstance(e, (Var, Func)):
        return frozenset((e,))
    if isinstance(e, Pow):
        inner = kernels_of(e.base)
        if e.exp.denominator == 1:
            return inner
        return inner | {Pow(e.base, Fraction(1, e.exp.denominator))}
    out = frozenset()
    for a in e.args:
        out |= kernels_of(a)
    return out


def ring_of(*exprs) -> Ring:
    ks = set()
    for e in exprs:
        ks |= kernels_of(sympify(e))
    return Ring(ks)


def _normalize(ring: Ring, num: dict, den: dict):
    if not den:
        raise ZeroDivisionError("rational function with zero denominator")
    if not num:
        return {}, {0: 1}
    if P.is_constant(den):
        c = den[0]
        g = gcd(P.content(num), c)
        if c < 0:
            g = -g
        if g != 1:
            num = {m: v // g for m, v in num.items()}
            c //= g
        return num, {0: c}
    if P.is_constant(num):
        g = gcd(num[0], P.content(den))
    else:
        _, num, den = P.gcd_cofactors(num, den, ring.nvars)
        g = gcd(P.content(num), P.content(den))
    if P.lc(den) < 0:
        g = -g
    if g != 1:
        num = {m: v // g for m, v in num.items()}
        den = {m: v // g for m, v in den.items()}
    return num, den


def _needs_reduction(ring: Ring, p: dict) -> bool:
    for i, q in ring.radicals.items():
        shift = P.W * i
        for m in p:
            if ((m >> shift) & P.FIELD) >= q:
                return True
    return False


def _reduce(ring: Ring, p: dict) -> "RationalFunction":
    groups: dict = {}
    for m, c in p.items():
        key = []
        for i, q in ring.radicals.items():
            e = P.exponent(m, i)
            if e >= q:
                k = e // q
                key.append((i, k))
                m -= (k * q) << (P.W * i)
        key = tuple(key)
        g = groups.setdefault(key, {})
        g[m] = g.get(m, 0) + c
    total = ring.zero()
    for key, poly in groups.items():
        term = RationalFunction(ring, {m: c for m, c in poly.items() if c}, {0: 1}, True)
        for i, k in key:
            term = term * ring.base(i) ** k
        total = total + term
    return total


class RationalFunction:
    __slots__ = ("ring", "num", "den", "_expr")

    def __init__(self, ring: Ring, num: dict, den: dict, normalized: bool = False):
        self.ring = ring
        self._expr = None
        if not normalized:
            if ring.radicals and (_needs_reduction(ring, num) or _needs_reduction(ring, den)):
                r = _reduce(ring, num) / _reduce(ring, den)
                num, den = r.num, r.den
            else:
                num, den = _normalize(ring, num, den)
        self.num = num
        self.den = den

    # -- arithmetic -------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, RationalFunction):
            if other.ring is not self.ring:
                raise ValueError("rational functions over different rings")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.const(other)
        if isinstance(other, Expr):
            return to_rational(other, self.ring)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if not o.num:
            return self
        if not self.num:
            return o
        if self.den == o.den:
            return RationalFunction(self.ring, P.add(self.num, o.num), self.den)
        num = P.add(P.mul(self.num, o.den), P.mul(o.num, self.den))
        return RationalFunction(self.ring, num, P.mul(self.den, o.den))

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(self.ring, P.neg(self.num), self.den, True)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if not self.num or not o.num:
            return self.ring.zero()
        return RationalFunction(
            self.ring, P.mul(self.num, o.num), P.mul(self.den, o.den)
        )

    __rmul__ = __mul__

    def inverse(self):
        if not self.num:
            raise ZeroDivisionError("inverse of zero rational function")
        return RationalFunction(self.ring, self.den, self.num)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        if n == 0:
            return self.ring.one()
        return RationalFunction(self.ring, P.pow_(self.num, n), P.pow_(self.den, n))

    def __eq__(self, other):
        if isinstance(other, RationalFunction):
            return self.ring is other.ring and self.num == other.num and self.den == other.den
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            return self.num == P.const(c.numerator) and self.den == {0: c.denominator}
        return NotImplemented

    def __hash__(self):
        return hash((id(self.ring), frozenset(self.num.items()), frozenset(self.den.items())))

    # -- queries ----------------------------------------------------------
    @property
    def is_zero_exact(self) -> bool:
        return not self.num

    @property
    def is_constant(self) -> bool:
        return P.is_constant(self.num) and P.is_constant(self.den)

    def constant_value(self) -> Fraction:
        return Fraction(self.num.get(0, 0), self.den[0])

    def size(self) -> int:
        return len(self.num) + len(self.den)

    def to_expr(self) -> Expr:
        if self._expr is None:
            self._expr = from_rational(self)
        return self._expr

    def __repr__(self):
        return f"RationalFunction({self.to_expr()})"


def poly_to_expr(ring: Ring, p: dict) -> Expr:
    terms = []
    for m, c in p.items():
        fs = [Const(c)]
        for i, e in enumerate(P.unpack(m, ring.nvars)):
            if e:
                fs.append(power(ring.kernels[i], e))
        terms.append(mul(*fs))
    return add(*terms)


def from_rational(rf: RationalFunction) -> Expr:
    n = poly_to_expr(rf.ring, rf.num)
    if rf.den == {0: 1}:
        return n
    return mul(n, power(poly_to_expr(rf.ring, rf.den), -1))


def to_rational(e, ring: Ring | None = None) -> RationalFunction:
    e = sympify(e)
    if ring is None:
        ring = ring_of(e)
    return _to_rational(e, ring)


@lru_cache(maxsize=200_000)
def _to_rational(e: Expr, ring: Ring) -> RationalFunction:
    idx = ring.index.get(e)
    if idx is not None:
        return ring.gen(idx)
    if isinstance(e, Const):
        return ring.const(e.value)
    if isinstance(e, Add):
        acc = ring.zero()
        for t in e.terms:
            acc = acc + _to_rational(t, ring)
        return acc
    if isinstance(e, Mul):
        acc = ring.one()
        for f in e.factors:
            acc = acc * _to_rational(f, ring)
        return acc
    if isinstance(e, Pow):
        if e.exp.denominator == 1:
            return _to_rational(e.base, ring) ** int(e.exp)
        q = e.exp.denominator
        k = Pow(e.base, Fraction(1, q))
        i = ring.index.get(k)
        if i is None:
            raise KeyError(f"kernel {k} missing from {ring}")
        whole, r = divmod(e.exp.numerator, q)
        out = ring.gen(i) ** r if r else ring.one()
        if whole:
            out = out * ring.base(i) ** whole
        return out
    if isinstance(e, Func) and e.tag == "exp":
        c, b = exp_split(e.arg)
        hit = ring.exp_bases.get(b)
        if hit is not None:
            n = c / hit[1]
            if n.denominator == 1:
                return ring.gen(hit[0]) ** int(n)
    raise KeyError(f"kernel {e} missing from {ring}")


@lru_cache(maxsize=100_000)
def cancel(e: Expr) -> Expr:
    """Canonical num/den form of e (expanded, gcd-cancelled)."""
    e = sympify(e)
    if isinstance(e, (Const, Var)):
        return e
    return to_rational(e).to_expr()


def together(exprs, ring: Ring | None = None):
    """Convert several expressions into one shared ring."""
    exprs = [sympify(x) for x in exprs]
    if ring is None:
        ring = ring_of(*exprs)
    return ring, [to_rational(x, ring) for x in exprs]


def polynomial_coefficients(rf: RationalFunction, names) -> dict:
    """Numerator coefficients of rf in the kernels named ``names``.

    Returns ``{exponent tuple over names: numerator-part Expr}``; the other
    kernels stay inside the coefficients.  The denominator is dropped, so this
    is only meaningful for identically-zero tests and linear systems.
    """
    ring = rf.ring
    pos = [ring.index.get(Var(n)) for n in names]
    out: dict = {}
    for m, c in rf.num.items():
        exps = tuple(P.exponent(m, i) if i is not None else 0 for i in pos)
        rest = m
        for i, e in zip(pos, exps):
            if i is not None and e:
                rest -= e << (P.W * i)
        d = out.setdefault(exps, {})
        d[rest] = d.get(rest, 0) + c
    return {k: poly_to_expr(ring, v) for k, v in out.items()}


def fraction_parts(e):
    """(numerator, denominator) of the canonical form, as expressions."""
    rf = to_rational(sympify(e))
    return poly_to_expr(rf.ring, rf.num), poly_to_expr(rf.ring, rf.den)
