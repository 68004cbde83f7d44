"""Linear algebra over the expression field and over the rationals.

Matrices over the expression field are lists of rows of
``RationalFunction`` values in one shared ring.  Elimination divides by
pivots that the zero test declares nonzero; the smallest such entry is
chosen (fewest polynomial terms), and nonconstant pivots are recorded in the
assumption ledger.
"""
from __future__ import annotations

from fractions import Fraction

from edsaffine import assumptions
from edsaffine.symkernel.expr import sympify
from edsaffine.symkernel.numeric import rf_zero_test
from edsaffine.symkernel.rational import RationalFunction, Ring, ring_of, to_rational


class SingularError(ArithmeticError):
    pass


def to_matrix(rows, ring: Ring | None = None):
    """Convert a matrix of Expr-like entries to rational functions."""
    rows = [[sympify(v) for v in r] for r in rows]
    if ring is None:
        ring = ring_of(*(v for r in rows for v in r))
    return ring, [[to_rational(v, ring) for v in r] for r in rows]


def _nonzero(v: RationalFunction) -> bool:
    if not v.num:
        return False
    if v.ring.all_variables or v.is_constant:
        return True
    return rf_zero_test(v) is not True


def row_reduce(rows, ncols: int | None = None):
    """Reduced row echelon form.  Returns (rows, pivot columns)."""
    m = [list(r) for r in rows]
    if not m:
        return m, []
    ncols = len(m[0]) if ncols is None else ncols
    pivots = []
    r = 0
    for c in range(ncols):
        if r >= len(m):
            break
        best = None
        for i in range(r, len(m)):
            v = m[i][c]
            if not v.num:
                continue
            if not _nonzero(v):
                m[i][c] = v.ring.zero()
                continue
            key = (v.size(), i)
            if best is None or key < best[0]:
                best = (key, i)
        if best is None:
            continue
        i = best[1]
        m[r], m[i] = m[i], m[r]
        piv = m[r][c]
        if not piv.is_constant:
            assumptions.record(piv.to_expr())
        inv = piv.inverse()
        m[r] = [v * inv if v.num else v for v in m[r]]
        for k in range(len(m)):
            if k != r and m[k][c].num:
                fac = m[k][c]
                m[k] = [a - fac * b if b.num else a for a, b in zip(m[k], m[r])]
                m[k][c] = fac.ring.zero()
        pivots.append(c)
        r += 1
    return m, pivots


def rank(rows) -> int:
    return len(row_reduce(rows)[1])


def nullspace(rows, ncols: int):
    """Basis of {v : rows * v = 0}, one vector per free column."""
    red, pivots = row_reduce(rows, ncols)
    ring = rows[0][0].ring if rows and rows[0] else None
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [ring.zero() for _ in range(ncols)]
        v[f] = ring.one()
        for r, p in enumerate(pivots):
            v[p] = -red[r][f]
        basis.append(v)
    return basis


def solve(a, b):
    """Solve a x = b (b a list); raises SingularError if inconsistent."""
    n = len(a[0])
    aug = [list(row) + [bi] for row, bi in zip(a, b)]
    red, pivots = row_reduce(aug, n + 1)
    if n in pivots:
        raise SingularError("inconsistent linear system")
    ring = b[0].ring
    x = [ring.zero() for _ in range(n)]
    for r, p in enumerate(pivots):
        x[p] = red[r][n]
    return x


def inverse(a):
    n = len(a)
    ring = a[0][0].ring
    aug = [list(row) + [ring.one() if i == j else ring.zero() for j in range(n)] for i, row in enumerate(a)]
    red, pivots = row_reduce(aug, n)
    if pivots != list(range(n)):
        raise SingularError("matrix is singular at the generic point")
    return [row[n:] for row in red]


def det(a):
    """Determinant by elimination (product of pivots with sign)."""
    m = [list(r) for r in a]
    n = len(m)
    ring = m[0][0].ring
    d = ring.one()
    for c in range(n):
        piv = None
        for i in range(c, n):
            if _nonzero(m[i][c]):
                piv = i
                break
        if piv is None:
            return ring.zero()
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            d = -d
        p = m[c][c]
        d = d * p
        inv = p.inverse()
        for k in range(c + 1, n):
            if m[k][c].num:
                fac = m[k][c] * inv
                m[k] = [x - fac * y for x, y in zip(m[k], m[c])]
    return d


# -- exact linear algebra over Q ----------------------------------------------


def rational_nullspace(rows, ncols: int):
    """Nullspace of a sparse rational matrix given as a list of {col: value}.

    Returns the reduced basis as a list of {col: Fraction}, one vector per
    free column, each scaled to integer entries with content 1.
    """
    piv_rows: dict = {}  # pivot col -> row dict (pivot entry 1)
    for row in rows:
        r = {c: Fraction(v) for c, v in row.items() if v}
        for c, pr in piv_rows.items():
            f = r.get(c)
            if f:
                for k, v in pr.items():
                    nv = r.get(k, 0) - f * v
                    if nv:
                        r[k] = nv
                    else:
                        r.pop(k, None)
        if not r:
            continue
        c0 = min(r)
        inv = 1 / r[c0]
        r = {k: v * inv for k, v in r.items()}
        for c, pr in piv_rows.items():
            f = pr.get(c0)
            if f:
                for k, v in r.items():
                    nv = pr.get(k, 0) - f * v
                    if nv:
                        pr[k] = nv
                    else:
                        pr.pop(k, None)
        piv_rows[c0] = r
    free = [c for c in range(ncols) if c not in piv_rows]
    basis = []
    for f in free:
        v = {f: Fraction(1)}
        for c, pr in piv_rows.items():
            if f in pr:
                v[c] = -pr[f]
        basis.append(_primitive(v))
    return basis


def rational_solve(rows, rhs, ncols: int):
    """Particular solution of a sparse rational system (free columns zero).

    Returns {col: Fraction} or None when the system is inconsistent.
    """
    aug = []
    for row, b in zip(rows, rhs):
        r = {c: Fraction(v) for c, v in row.items() if v}
        if b:
            r[ncols] = Fraction(b)
        aug.append(r)
    piv_rows: dict = {}
    for r in aug:
        for c, pr in piv_rows.items():
            f = r.get(c)
            if f:
                for k, v in pr.items():
                    nv = r.get(k, 0) - f * v
                    if nv:
                        r[k] = nv
                    else:
                        r.pop(k, None)
        if not r:
            continue
        c0 = min(r)
        if c0 == ncols:
            return None
        inv = 1 / r[c0]
        r = {k: v * inv for k, v in r.items()}
        for c, pr in piv_rows.items():
            f = pr.get(c0)
            if f:
                for k, v in r.items():
                    nv = pr.get(k, 0) - f * v
                    if nv:
                        pr[k] = nv
                    else:
                        pr.pop(k, None)
        piv_rows[c0] = r
    return {c: pr[ncols] for c, pr in piv_rows.items() if pr.get(ncols)}


def _primitive(v: dict) -> dict:
    from math import gcd, lcm

    den = 1
    for x in v.values():
        den = lcm(den, x.denominator)
    ints = {k: x * den for k, x in v.items()}
    g = 0
    for x in ints.values():
        g = gcd(g, int(x))
    lead = ints[max(ints)]
    if lead < 0:
        g = -g
    return {k: Fraction(int(x) // g) for k, x in ints.items()}


def linear_relation_rows(exprs, rhs=None):
    """Rational equations for ``sum_k c_k exprs[k] == rhs`` identically.

    Everything is put over a common denominator and the numerator is split
    into monomials of its kernels, which are treated as independent
    indeterminates.  Returns (rows, rhs_values) suitable for
    ``rational_solve`` / ``rational_nullspace``.
    """
    from edsaffine.symkernel import poly as P

    exprs = [sympify(e) for e in exprs]
    target = sympify(rhs) if rhs is not None else sympify(0)
    allx = exprs + [target]
    ring = ring_of(*allx)
    rfs = [to_rational(e, ring) for e in allx]
    den = {0: 1}
    for rf in rfs:
        if rf.num:
            _, a, _ = P.gcd_cofactors(den, rf.den, ring.nvars)
            den = P.mul(a, rf.den)
    eqs: dict = {}
    for col, rf in enumerate(rfs):
        if not rf.num:
            continue
        scaled = P.mul(rf.num, P.divexact(den, rf.den, ring.nvars))
        for mono, c in scaled.items():
            eqs.setdefault(mono, {})[col] = c
    nc = len(exprs)
    rows, vals = [], []
    for mono in sorted(eqs):
        eq = eqs[mono]
        rows.append({c: v for c, v in eq.items() if c < nc})
        vals.append(eq.get(nc, 0))
    return rows, vals
