"""Evaluation, seeded sampling and the zero test.

The zero test is exact on the rational fragment (numerator of the canonical
form is the zero polynomial).  Expressions with function or radical kernels
are tested by evaluating the canonical numerator at seeded sample points,
using the kernel values at each point; the expression is declared zero when
every evaluation is below ``ZERO_TOL`` relative to the sum of absolute term
values.
"""
from __future__ import annotations

import contextlib
import contextvars
import math
import random
from fractions import Fraction

from edsaffine.kernels import poly_eval_batch
from edsaffine.symkernel import poly as P
from edsaffine.symkernel.expr import Add, Const, Expr, Func, Mul, Pow, Var, _exact_root, sympify
from edsaffine.symkernel.rational import RationalFunction, ring_of, to_rational

N_POINTS = 8
ZERO_TOL = 1e-9
SAMPLE_LO, SAMPLE_HI = Fraction(1, 2), Fraction(3)

_seed = contextvars.ContextVar("edsaffine_seed", default=0)
_params = contextvars.ContextVar("edsaffine_params", default=None)


class DomainError(ValueError):
    """Evaluation left the domain of a function node."""

    def __init__(self, message: str, subexpr: Expr | None = None):
        self.subexpr = subexpr
        super().__init__(message if subexpr is None else f"{message}: {subexpr}")


@contextlib.contextmanager
def seeded(seed: int):
    """Use ``seed`` for every sampler created inside the block."""
    tok = _seed.set(int(seed))
    try:
        yield
    finally:
        _seed.reset(tok)


@contextlib.contextmanager
def parameter_values(values: dict):
    """Sample the named symbols only from the given finite sets."""
    cur = dict(_params.get() or {})
    cur.update({k: [Fraction(v) for v in vs] for k, vs in values.items()})
    tok = _params.set(cur)
    try:
        yield
    finally:
        _params.reset(tok)


def parameter_sets() -> dict:
    """The finite value sets bound by ``parameter_values`` (name -> list)."""
    return dict(_params.get() or {})


def current_seed() -> int:
    return _seed.get()


def make_rng(salt: int = 0) -> random.Random:
    return random.Random(_seed.get() * 1_000_003 + salt)


# -- evaluation ------------------------------------------------------------


def evaluate(e, pt: dict, exact: bool = True):
    """Evaluate at a point; exact Fraction when possible, float otherwise."""
    e = sympify(e)
    vals = {}
    for k, v in pt.items():
        name = k.name if isinstance(k, Var) else str(k)
        if isinstance(v, float) or not exact:
            vals[name] = float(v)
        else:
            vals[name] = Fraction(v)
    return _eval(e, vals, {})


def _eval(e: Expr, vals: dict, memo: dict):
    r = memo.get(e)
    if r is not None:
        return r
    if isinstance(e, Const):
        r = e.value
    elif isinstance(e, Var):
        try:
            r = vals[e.name]
        except KeyError:
            raise KeyError(f"no value bound for {e.name}") from None
    elif isinstance(e, Add):
        r = 0
        for t in e.terms:
            r = r + _eval(t, vals, memo)
    elif isinstance(e, Mul):
        r = 1
        for f in e.factors:
            r = r * _eval(f, vals, memo)
    elif isinstance(e, Pow):
        b = _eval(e.base, vals, memo)
        r = _pow(b, e.exp, e)
    elif isinstance(e, Func):
        r = _func(e.tag, _eval(e.arg, vals, memo), e)
    else:
        raise TypeError(type(e))
    if isinstance(r, float) and not math.isfinite(r):
        raise DomainError("non-finite value", e)
    memo[e] = r
    return r


def _pow(b, ex: Fraction, node):
    if b == 0 and ex < 0:
        raise DomainError("division by zero", node.base)
    if ex.denominator == 1:
        try:
            return b ** int(ex)
        except OverflowError:
            raise DomainError("overflow", node) from None
    if b <= 0:
        raise DomainError("fractional power of a non-positive value", node.base)
    if isinstance(b, Fraction):
        root = _exact_root(b, ex.denominator)
        if root is not None:
            return root**ex.numerator
    return float(b) ** float(ex)


def _func(tag: str, v, node):
    fv = float(v)
    if tag == "exp":
        if v == 0:
            return Fraction(1) if isinstance(v, Fraction) else 1.0
        try:
            return math.exp(fv)
        except OverflowError:
            raise DomainError("overflow", node) from None
    if tag == "log":
        if v <= 0:
            raise DomainError("logarithm of a non-positive value", node.arg)
        if v == 1:
            return Fraction(0) if isinstance(v, Fraction) else 0.0
        return math.log(fv)
    if tag in ("sin", "tan", "atan") and v == 0:
        return Fraction(0) if isinstance(v, Fraction) else 0.0
    if tag == "cos" and v == 0:
        return Fraction(1) if isinstance(v, Fraction) else 1.0
    if tag == "sin":
        return math.sin(fv)
    if tag == "cos":
        return math.cos(fv)
    if tag == "tan":
        if abs(math.cos(fv)) < 1e-12:
            raise DomainError("tangent pole", node.arg)
        return math.tan(fv)
    if tag == "atan":
        return math.atan(fv)
    raise ValueError(tag)


def evaluate_float(e, pt: dict) -> float:
    return float(evaluate(e, pt, exact=False))


# -- sampling ----------------------------------------------------------------


def _draw(rng: random.Random, names, wide: bool) -> dict:
    params = _params.get() or {}
    pt = {}
    for n in names:
        if n in params:
            pt[n] = rng.choice(params[n])
        elif wide:
            pt[n] = Fraction(rng.randint(-600, 600), 100)
        else:
            pt[n] = SAMPLE_LO + Fraction(rng.randint(0, 250), 100)
    return pt


def sample_points(names, n: int, check=None, salt: int = 0, max_tries: int = 400, mixed: bool = False):
    """Seeded points with rational coordinates, rejecting those where
    ``check(pt)`` raises a domain error.  Returns fewer than n points when
    the domain could not be hit often enough.

    Points come from a small positive box, widened to [-6, 6] after many
    rejections; ``mixed`` alternates the two boxes from the start.
    """
    rng = make_rng(salt)
    names = sorted(names)
    out = []
    tries = 0
    while len(out) < n and tries < max_tries:
        wide = tries >= max_tries // 4 or (mixed and tries % 2 == 1)
        tries += 1
        pt = _draw(rng, names, wide)
        if check is not None:
            try:
                check(pt)
            except (DomainError, ZeroDivisionError, OverflowError, ValueError):
                continue
        out.append(pt)
    return out


def _kernel_values(ring, pt):
    return [float(_eval(k, pt, {})) for k in ring.kernels]


def _rf_zero_numeric(rf: RationalFunction, n: int, tol: float):
    ring = rf.ring
    names = set()
    for k in ring.kernels:
        names |= k.free_symbols
    rows = []

    def check(pt):
        vals = _kernel_values(ring, {k: float(v) for k, v in pt.items()})
        dv, dmag = _poly_eval(ring, rf.den, [vals])
        if abs(dv[0]) <= 1e-9 * dmag[0]:
            raise DomainError("denominator vanishes at sample point")
        rows.append(vals)

    pts = sample_points(names, n, check)
    if len(pts) < n:
        return None
    values, mags = _poly_eval(ring, rf.num, rows)
    for v, m in zip(values, mags):
        if not math.isfinite(v) or abs(v) > tol * m:
            return False
    return True


def _poly_eval(ring, p: dict, rows):
    if not p:
        return [0.0] * len(rows), [0.0] * len(rows)
    scale = P.max_norm(p)
    exps = [P.unpack(m, ring.nvars) for m in p]
    coeffs = [c / scale for c in p.values()]
    return poly_eval_batch(exps, coeffs, rows)


def zero_test(e, n: int = N_POINTS, tol: float = ZERO_TOL):
    """True / False, or None when the domain could not be sampled."""
    if isinstance(e, RationalFunction):
        rf = e
    else:
        e = sympify(e)
        if isinstance(e, Const):
            return e.value == 0
        rf = to_rational(e, ring_of(e))
    return rf_zero_test(rf, n, tol)


def rf_zero_test(rf: RationalFunction, n: int = N_POINTS, tol: float = ZERO_TOL):
    if not rf.num:
        return True
    if rf.ring.all_variables or P.is_constant(rf.num):
        return False
    return _rf_zero_numeric(rf, n, tol)


def is_zero(e) -> bool:
    """Indeterminate results count as nonzero."""
    return zero_test(e) is True


def numerically_zero(e, n: int = 12, tol: float = 1e-8, check=None) -> bool:
    """Direct floating evaluation of e at n seeded domain points."""
    e = sympify(e)
    names = e.free_symbols
    vals = []

    def probe(pt):
        if check is not None:
            check(pt)
        fpt = {k: float(v) for k, v in pt.items()}
        memo: dict = {}
        v = float(_eval(e, fpt, memo))
        terms = e.terms if isinstance(e, Add) else (e,)
        mag = sum(abs(float(_eval(t, fpt, memo))) for t in terms)
        vals.append((v, mag))

    pts = sample_points(names, n, probe, salt=7)
    if len(pts) < n:
        return False
    return all(abs(v) <= tol * max(1.0, m) for v, m in vals)
