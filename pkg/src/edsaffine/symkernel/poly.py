"""Sparse multivariate polynomials over the integers.

A polynomial is a dict ``{monomial: coefficient}``.  A monomial packs the
exponent of variable ``i`` into bits ``[W*i, W*i + W)``; the top bit of each
field is a guard bit that stays clear in valid monomials, so divisibility of
monomials can be tested with one addition and one mask.  Integer order of the
packed monomials is lexicographic with the highest variable most significant.
"""
from __future__ import annotations

from math import gcd, isqrt

from edsaffine.kernels import poly_mul

W = 20
FIELD = (1 << W) - 1
MAX_EXP = (1 << (W - 1)) - 1


class HeuristicGCDFailed(Exception):
    pass


def guard_mask(nvars: int) -> int:
    return sum(1 << (W * i + W - 1) for i in range(nvars))


def pack(exps) -> int:
    m = 0
    for i, e in enumerate(exps):
        if e < 0 or e > MAX_EXP:
            raise OverflowError(f"exponent {e} out of range")
        m |= e << (W * i)
    return m


def unpack(m: int, nvars: int) -> tuple:
    return tuple((m >> (W * i)) & FIELD for i in range(nvars))


def var(i: int) -> dict:
    return {1 << (W * i): 1}


def const(c: int) -> dict:
    return {0: c} if c else {}


def exponent(m: int, i: int) -> int:
    return (m >> (W * i)) & FIELD


def add(f: dict, g: dict) -> dict:
    if len(f) < len(g):
        f, g = g, f
    out = dict(f)
    for m, c in g.items():
        s = out.get(m, 0) + c
        if s:
            out[m] = s
        else:
            del out[m]
    return out


def neg(f: dict) -> dict:
    return {m: -c for m, c in f.items()}


def sub(f: dict, g: dict) -> dict:
    return add(f, neg(g))


def scale(f: dict, c: int) -> dict:
    if not c:
        return {}
    return {m: c * v for m, v in f.items()}


def mul(f: dict, g: dict) -> dict:
    if not f or not g:
        return {}
    if len(g) == 1 and 0 in g:
        return scale(f, g[0])
    if len(f) == 1 and 0 in f:
        return scale(g, f[0])
    return poly_mul(f, g)


def pow_(f: dict, n: int) -> dict:
    out = {0: 1}
    base = f
    while n:
        if n & 1:
            out = mul(out, base)
        n >>= 1
        if n:
            base = mul(base, base)
    return out


def is_constant(f: dict) -> bool:
    return not f or (len(f) == 1 and 0 in f)


def lead(f: dict) -> int:
    return max(f)


def lc(f: dict) -> int:
    return f[max(f)]


def content(f: dict) -> int:
    g = 0
    for c in f.values():
        g = gcd(g, c)
        if g == 1:
            break
    return g


def primitive(f: dict) -> tuple:
    c = content(f)
    if c in (0, 1):
        return c, f
    return c, {m: v // c for m, v in f.items()}


def max_norm(f: dict) -> int:
    return max((abs(c) for c in f.values()), default=0)


def used_vars(f: dict, nvars: int) -> int:
    """Bit set of variables that occur in f."""
    acc = 0
    for m in f:
        acc |= m
    bits = 0
    for i in range(nvars):
        if (acc >> (W * i)) & FIELD:
            bits |= 1 << i
    return bits


def divexact(f: dict, g: dict, nvars: int):
    """Return q with f == q*g, or None if g does not divide f."""
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    if not f:
        return {}
    if len(g) == 1 and 0 in g:
        c = g[0]
        out = {}
        for m, v in f.items():
            q, r = divmod(v, c)
            if r:
                return None
            out[m] = q
        return out
    gm = guard_mask(nvars)
    lm_g = max(g)
    lc_g = g[lm_g]
    rest_g = [(m, c) for m, c in g.items() if m != lm_g]
    r = dict(f)
    q = {}
    while r:
        lm = max(r)
        t = lm + gm - lm_g
        if t & gm != gm:
            return None
        qc, rem = divmod(r[lm], lc_g)
        if rem:
            return None
        qm = t - gm
        q[qm] = qc
        del r[lm]
        for m, c in rest_g:
            k = m + qm
            s = r.get(k, 0) - qc * c
            if s:
                r[k] = s
            else:
                r.pop(k, None)
    return q


def eval_var(f: dict, i: int, x: int) -> dict:
    """Substitute the integer x for variable i."""
    shift = W * i
    out: dict = {}
    for m, c in f.items():
        e = (m >> shift) & FIELD
        if e:
            m = m - (e << shift)
            c = c * x**e
        s = out.get(m, 0) + c
        if s:
            out[m] = s
        else:
            out.pop(m, None)
    return out


def degree(f: dict, i: int) -> int:
    shift = W * i
    return max(((m >> shift) & FIELD for m in f), default=0)


def derivative(f: dict, i: int) -> dict:
    shift = W * i
    one = 1 << shift
    out = {}
    for m, c in f.items():
        e = (m >> shift) & FIELD
        if e:
            out[m - one] = c * e
    return out


def _symmod(c: int, x: int) -> int:
    r = c % x
    return r - x if r > x // 2 else r


def _interpolate(h: dict, x: int, i: int) -> dict:
    out = {}
    k = 0
    shift = W * i
    while h:
        g = {}
        for m, c in h.items():
            r = _symmod(c, x)
            if r:
                g[m] = r
        for m, c in g.items():
            out[m + (k << shift)] = c
        nh = {}
        for m, c in h.items():
            v = (c - g.get(m, 0)) // x
            if v:
                nh[m] = v
        h = nh
        k += 1
    if out and lc(out) < 0:
        out = neg(out)
    return out


def heugcd(f: dict, g: dict, nvars: int) -> tuple:
    """Heuristic gcd: returns (h, f/h, g/h).  Raises HeuristicGCDFailed."""
    if not f or not g:
        if not f and not g:
            return {}, {}, {}
        if not f:
            s = 1 if lc(g) > 0 else -1
            return scale(g, s), {}, {0: s}
        s = 1 if lc(f) > 0 else -1
        return scale(f, s), {0: s}, {}
    fv, gv = used_vars(f, nvars), used_vars(g, nvars)
    if not (fv & gv):
        c = gcd(content(f), content(g))
        return {0: c}, divexact(f, {0: c}, nvars), divexact(g, {0: c}, nvars)
    i = (fv | gv).bit_length() - 1
    gc = gcd(content(f), content(g))
    f = {m: c // gc for m, c in f.items()}
    g = {m: c // gc for m, c in g.items()}
    fn, gn = max_norm(f), max_norm(g)
    b = 2 * min(fn, gn) + 29
    x = max(min(b, 99 * isqrt(b)), 2 * min(fn // abs(lc(f)), gn // abs(lc(g))) + 2)
    for _ in range(6):
        ff = eval_var(f, i, x)
        gg = eval_var(g, i, x)
        if ff and gg:
            hh, cff, cfg = heugcd(ff, gg, nvars)
            h = _interpolate(hh, x, i)
            h = primitive(h)[1]
            q1 = divexact(f, h, nvars)
            if q1 is not None:
                q2 = divexact(g, h, nvars)
                if q2 is not None:
                    return scale(h, gc), q1, q2
            cf = _interpolate(cff, x, i)
            h = divexact(f, cf, nvars)
            if h is not None:
                q2 = divexact(g, h, nvars)
                if q2 is not None:
                    return scale(h, gc), cf, q2
            cg = _interpolate(cfg, x, i)
            h = divexact(g, cg, nvars)
            if h is not None:
                q1 = divexact(f, h, nvars)
                if q1 is not None:
                    return scale(h, gc), q1, cg
        x = 73794 * x * isqrt(isqrt(x)) // 27011
    raise HeuristicGCDFailed


def gcd_cofactors(f: dict, g: dict, nvars: int) -> tuple:
    """gcd with cofactors; falls back to the integer content gcd."""
    try:
        h, a, b = heugcd(f, g, nvars)
    except HeuristicGCDFailed:
        c = gcd(content(f), content(g)) or 1
        h = {0: c}
        a = divexact(f, h, nvars)
        b = divexact(g, h, nvars)
    if h and lc(h) < 0:
        h, a, b = neg(h), neg(a), neg(b)
    return h, a, b
