"""Expression trees over exact rationals.

Every constructor normalizes: sums and products are flattened, like terms and
like factors are collected, constants are folded and operands are sorted by a
fixed total order, so structurally equal expressions compare equal.

Branch convention: fractional powers and logarithms are taken on the positive
branch, so ``(x^2)^(1/2)`` becomes ``x`` and ``log(x^a)`` becomes ``a*log(x)``.
All computations are local at generic points; the samplers only draw points
where radicands and logarithm arguments are positive.
"""
from __future__ import annotations

from fractions import Fraction
from math import isqrt

FUNCTIONS = ("exp", "log", "sqrt", "sin", "cos", "tan", "atan")

_KIND_CONST, _KIND_VAR, _KIND_POW, _KIND_MUL, _KIND_ADD, _KIND_FUNC = range(6)


class Expr:
    """Base class of immutable, hash-consed-by-value expression nodes."""

    __slots__ = ("_hash", "_key", "_free")

    kind = -1

    def __init__(self):
        self._hash = None
        self._key = None
        self._free = None

    # -- identity ---------------------------------------------------------
    def _fields(self):
        raise NotImplementedError

    def __hash__(self):
        h = self._hash
        if h is None:
            h = self._hash = hash((self.kind, self._fields()))
        return h

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Expr):
            if isinstance(other, (int, Fraction)):
                return isinstance(self, Const) and self.value == other
            return NotImplemented
        return (
            self.kind == other.kind
            and hash(self) == hash(other)
            and self._fields() == other._fields()
        )

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    @property
    def sort_key(self):
        k = self._key
        if k is None:
            k = self._key = self._make_key()
        return k

    def _make_key(self):
        raise NotImplementedError

    @property
    def free_symbols(self) -> frozenset:
        fs = self._free
        if fs is None:
            fs = self._free = self._compute_free()
        return fs

    def _compute_free(self):
        out = frozenset()
        for a in self.args:
            out |= a.free_symbols
        return out

    @property
    def args(self) -> tuple:
        return ()

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        o = _coerce(other)
        return NotImplemented if o is None else add(self, o)

    def __radd__(self, other):
        o = _coerce(other)
        return NotImplemented if o is None else add(o, self)

    def __sub__(self, other):
        o = _coerce(other)
        return NotImplemented if o is None else add(self, neg(o))

    def __rsub__(self, other):
        o = _coerce(other)
        return NotImplemented if o is None else add(o, neg(self))

    def __mul__(self, other):
        o = _coerce(other)
        return NotImplemented if o is None else mul(self, o)

    def __rmul__(self, other):
        o = _coerce(other)
        return NotImplemented if o is None else mul(o, self)

    def __truediv__(self, other):
        o = _coerce(other)
        return NotImplemented if o is None else mul(self, power(o, -1))

    def __rtruediv__(self, other):
        o = _coerce(other)
        return NotImplemented if o is None else mul(o, power(self, -1))

    def __neg__(self):
        return neg(self)

    def __pos__(self):
        return self

    def __pow__(self, other):
        return power(self, other)

    def __rpow__(self, other):
        return power(sympify(other), self)

    def __str__(self):
        from edsaffine.symkernel.printer import to_string

        return to_string(self)

    def __repr__(self):
        return f"Expr({str(self)!r})"

    @property
    def is_constant(self) -> bool:
        return not self.free_symbols


class Const(Expr):
    __slots__ = ("value",)
    kind = _KIND_CONST

    def __init__(self, value):
        super().__init__()
        self.value = Fraction(value)

    def _fields(self):
        return self.value

    def _make_key(self):
        return (_KIND_CONST, self.value)

    def _compute_free(self):
        return frozenset()


class Var(Expr):
    __slots__ = ("name",)
    kind = _KIND_VAR

    def __init__(self, name: str):
        super().__init__()
        self.name = name

    def _fields(self):
        return self.name

    def _make_key(self):
        return (_KIND_VAR, self.name)

    def _compute_free(self):
        return frozenset((self.name,))


class Pow(Expr):
    __slots__ = ("base", "exp")
    kind = _KIND_POW

    def __init__(self, base: Expr, exp: Fraction):
        super().__init__()
        self.base = base
        self.exp = Fraction(exp)

    @property
    def args(self):
        return (self.base,)

    def _fields(self):
        return (self.base, self.exp)

    def _make_key(self):
        return (_KIND_POW, self.base.sort_key, self.exp)


class Mul(Expr):
    __slots__ = ("factors",)
    kind = _KIND_MUL

    def __init__(self, factors: tuple):
        super().__init__()
        self.factors = tuple(factors)

    @property
    def args(self):
        return self.factors

    def _fields(self):
        return self.factors

    def _make_key(self):
        return (_KIND_MUL, tuple(f.sort_key for f in self.factors))


class Add(Expr):
    __slots__ = ("terms",)
    kind = _KIND_ADD

    def __init__(self, terms: tuple):
        super().__init__()
        self.terms = tuple(terms)

    @property
    def args(self):
        return self.terms

    def _fields(self):
        return self.terms

    def _make_key(self):
        return (_KIND_ADD, tuple(t.sort_key for t in self.terms))


class Func(Expr):
    __slots__ = ("tag", "arg")
    kind = _KIND_FUNC

    def __init__(self, tag: str, arg: Expr):
        super().__init__()
        self.tag = tag
        self.arg = arg

    @property
    def args(self):
        return (self.arg,)

    def _fields(self):
        return (self.tag, self.arg)

    def _make_key(self):
        return (_KIND_FUNC, self.tag, self.arg.sort_key)


ZERO = Const(0)
ONE = Const(1)
MINUS_ONE = Const(-1)
HALF = Fraction(1, 2)


def sympify(value) -> Expr:
    if isinstance(value, Expr):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not expressions")
    if isinstance(value, (int, Fraction)):
        return Const(value)
    if isinstance(value, str):
        from edsaffine.symkernel.parser import parse

        return parse(value)
    raise TypeError(f"cannot convert {type(value).__name__} to Expr")


def _coerce(value):
    if isinstance(value, Expr):
        return value
    if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
        return Const(value)
    return None


def symbols(names: str):
    out = tuple(Var(n) for n in names.replace(",", " ").split())
    return out[0] if len(out) == 1 else out


def const(value) -> Const:
    return Const(value)


# -- normalizing constructors -------------------------------------------


def _split_coeff(term: Expr):
    """Return (coefficient, body) with ``term == coefficient * body``."""
    if isinstance(term, Const):
        return term.value, ONE
    if isinstance(term, Mul) and isinstance(term.factors[0], Const):
        rest = term.factors[1:]
        body = rest[0] if len(rest) == 1 else Mul(rest)
        return term.factors[0].value, body
    return Fraction(1), term


def _with_coeff(c: Fraction, body: Expr) -> Expr:
    if body is ONE or body == ONE:
        return Const(c)
    if c == 1:
        return body
    if isinstance(body, Mul):
        return Mul((Const(c),) + body.factors)
    return Mul((Const(c), body))


def add(*args) -> Expr:
    const_part = Fraction(0)
    collected: dict = {}
    stack = [sympify(a) for a in args]
    while stack:
        a = stack.pop()
        if isinstance(a, Const):
            const_part += a.value
        elif isinstance(a, Add):
            stack.extend(a.terms)
        else:
            c, body = _split_coeff(a)
            if isinstance(body, Add):
                # distribute so that c*(u + v) - c*u - c*v cancels
                stack.extend(mul(Const(c), t) for t in body.terms)
                continue
            collected[body] = collected.get(body, 0) + c
    terms = []
    for body, c in collected.items():
        if c:
            terms.append(_with_coeff(c, body))
    terms.sort(key=_term_order)
    if const_part:
        terms.insert(0, Const(const_part))
    if not terms:
        return ZERO
    if len(terms) == 1:
        return terms[0]
    return Add(tuple(terms))


def _term_order(t: Expr):
    c, body = _split_coeff(t)
    return (body.sort_key, c)


def neg(e: Expr) -> Expr:
    return mul(MINUS_ONE, e)


def mul(*args) -> Expr:
    coeff = Fraction(1)
    powers: dict = {}
    exp_args = []
    stack = [sympify(a) for a in args]
    while stack:
        a = stack.pop()
        if isinstance(a, Const):
            if not a.value:
                return ZERO
            coeff *= a.value
        elif isinstance(a, Mul):
            stack.extend(a.factors)
        elif isinstance(a, Func) and a.tag == "exp":
            exp_args.append(a.arg)
        elif isinstance(a, Pow):
            b = a.base
            if isinstance(b, Func) and b.tag == "exp":
                exp_args.append(mul(Const(a.exp), b.arg))
            else:
                powers[b] = powers.get(b, 0) + a.exp
        else:
            powers[a] = powers.get(a, 0) + 1
    factors = []
    redo = []
    for b, e in powers.items():
        if not e:
            continue
        p = power(b, e)
        if isinstance(p, Const):
            coeff *= p.value
        elif isinstance(p, Mul) or (isinstance(p, Pow) and p.base != b):
            redo.append(p)
        else:
            factors.append(p)
    if exp_args:
        ex = func("exp", add(*exp_args))
        if isinstance(ex, Const):
            coeff *= ex.value
        else:
            factors.append(ex)
    if redo:
        return mul(Const(coeff), *factors, *redo)
    if not coeff:
        return ZERO
    factors.sort(key=lambda f: f.sort_key)
    if coeff != 1:
        factors.insert(0, Const(coeff))
    if not factors:
        return Const(coeff)
    if len(factors) == 1:
        return factors[0]
    return Mul(tuple(factors))


def _exact_root(q: Fraction, n: int):
    """The positive rational n-th root of q >= 0, or None."""

    def iroot(k):
        r = round(k ** (1.0 / n)) if k < 2**1000 else _int_nth_root(k, n)
        for cand in (r - 1, r, r + 1):
            if cand >= 0 and cand**n == k:
                return cand
        return None

    a = iroot(q.numerator)
    b = iroot(q.denominator)
    if a is None or b is None:
        return None
    return Fraction(a, b)


def _int_nth_root(k: int, n: int) -> int:
    if n == 2:
        return isqrt(k)
    lo, hi = 0, 1 << (k.bit_length() // n + 1)
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if mid**n <= k:
            lo = mid
        else:
            hi = mid - 1
    return lo


def power(base, exponent) -> Expr:
    base = sympify(base)
    if isinstance(exponent, Expr):
        if isinstance(exponent, Const):
            exponent = exponent.value
        else:
            # symbolic exponent: b^e = exp(e*log(b))
            if isinstance(base, Func) and base.tag == "exp":
                return func("exp", mul(exponent, base.arg))
            return func("exp", mul(exponent, func("log", base)))
    e = Fraction(exponent)
    if e == 0:
        return ONE
    if e == 1:
        return base
    if isinstance(base, Const):
        return _const_power(base.value, e)
    if isinstance(base, Pow):
        return power(base.base, base.exp * e)
    if isinstance(base, Mul):
        return mul(*(power(f, e) for f in base.factors))
    if isinstance(base, Func) and base.tag == "exp":
        return func("exp", mul(Const(e), base.arg))
    return Pow(base, e)


def _const_power(v: Fraction, e: Fraction) -> Expr:
    if v == 0:
        if e < 0:
            raise ZeroDivisionError("0 raised to a negative power")
        return ZERO
    if v == 1:
        return ONE
    if e.denominator == 1:
        return Const(v ** int(e))
    if v < 0:
        if e.denominator % 2 == 1:
            return mul(Const(-1), _const_power(-v, e))
        return Pow(Const(v), e)
    whole = e.numerator // e.denominator
    frac = e - whole
    root = _exact_root(v, frac.denominator)
    if root is not None:
        return Const(v**whole * root**frac.numerator)
    if whole:
        return Mul((Const(v**whole), Pow(Const(v), frac)))
    return Pow(Const(v), frac)


def func(tag: str, arg) -> Expr:
    arg = sympify(arg)
    if tag == "sqrt":
        return power(arg, HALF)
    if tag not in FUNCTIONS:
        raise ValueError(f"unknown function {tag!r}")
    if tag == "exp":
        if arg == ZERO:
            return ONE
        if isinstance(arg, Func) and arg.tag == "log":
            return arg.arg
        if isinstance(arg, Mul):
            # exp(c*log(u)) -> u^c for rational c
            logs = [f for f in arg.factors if isinstance(f, Func) and f.tag == "log"]
            rest = [f for f in arg.factors if not (isinstance(f, Func) and f.tag == "log")]
            if len(logs) == 1 and len(rest) == 1 and isinstance(rest[0], Const):
                return power(logs[0].arg, rest[0].value)
    elif tag == "log":
        if arg == ONE:
            return ZERO
        if isinstance(arg, Func) and arg.tag == "exp":
            return arg.arg
        if isinstance(arg, Pow):
            return mul(Const(arg.exp), func("log", arg.base))
    elif tag in ("sin", "tan", "atan"):
        if arg == ZERO:
            return ZERO
    elif tag == "cos":
        if arg == ZERO:
            return ONE
    return Func(tag, arg)


def exp(a):
    return func("exp", a)


def log(a):
    return func("log", a)


def sqrt(a):
    return func("sqrt", a)


def sin(a):
    return func("sin", a)


def cos(a):
    return func("cos", a)


def tan(a):
    return func("tan", a)


def atan(a):
    return func("atan", a)


def rebuild(e: Expr, args) -> Expr:
    """Rebuild a node of the same shape from new operands, renormalizing."""
    if isinstance(e, Add):
        return add(*args)
    if isinstance(e, Mul):
        return mul(*args)
    if isinstance(e, Pow):
        return power(args[0], e.exp)
    if isinstance(e, Func):
        return func(e.tag, args[0])
    return e


def normalize(e: Expr) -> Expr:
    """Rebuild bottom-up through the normalizing constructors."""
    if not e.args:
        return e
    return rebuild(e, [normalize(a) for a in e.args])


def walk(e: Expr):
    """Pre-order traversal of all subexpressions."""
    stack = [e]
    while stack:
        n = stack.pop()
        yield n
        stack.extend(reversed(n.args))


def size(e: Expr) -> int:
    return sum(1 for _ in walk(e))


def has_function(e: Expr) -> bool:
    """True when e contains a function node or a fractional power."""
    for n in walk(e):
        if isinstance(n, Func):
            return True
        if isinstance(n, Pow) and n.exp.denominator != 1:
            return True
    return False
