"""Infinitesimal affine symmetries of y' = f(x, y).

A field of the affine algebra is given by alpha = (a1..a6) with

    xi  = a1 + a3*x + a4*y
    eta = a2 + a5*x + a6*y

ordered like the group chart (x1..x6).  It generates symmetries of the ODE
iff the determining residual

    R = eta_x + (eta_y - xi_x) f - xi_y f^2 - xi f_x - eta f_y

vanishes identically.  R is linear in alpha, so the symmetry algebra is the
nullspace of a 6-column linear system.  Rational f is solved exactly over Q;
any f can be handled by the numerical rank oracle (SVD on sample points).
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from edsaffine import linalg
from edsaffine.affine import AffineElement
from edsaffine.symkernel.calculus import differentiate, substitute
from edsaffine.symkernel.expr import ZERO, Const, Expr, Var, sympify
from edsaffine.symkernel.numeric import DomainError, _eval, is_zero, parameter_sets, sample_points
from edsaffine.symkernel.printer import to_string
from edsaffine.symkernel.rational import cancel, ring_of

X, Y = Var("x"), Var("y")
N_SAMPLES = 12
RANK_TOL = 1e-8


class SymmetryDisagreement(ArithmeticError):
    """The exact and numerical solvers found different dimensions."""

    def __init__(self, symbolic, numeric):
        self.symbolic = symbolic
        self.numeric = numeric
        super().__init__(f"symbolic dimension {symbolic.dimension} != numeric dimension {numeric.dimension}")


class SamplingFailure(ArithmeticError):
    pass


class AffineVectorField:
    __slots__ = ("alpha",)

    def __init__(self, alpha):
        if len(alpha) != 6:
            raise ValueError("an affine field has six parameters")
        self.alpha = tuple(_coef(a) for a in alpha)

    @classmethod
    def from_xi_eta(cls, xi, eta) -> "AffineVectorField":
        """Read alpha off affine-linear xi(x, y), eta(x, y)."""
        xi, eta = sympify(xi), sympify(eta)
        out = []
        for comp in (xi, eta):
            c0 = cancel(_at_origin(comp))
            cx = cancel(differentiate(comp, "x"))
            cy = cancel(differentiate(comp, "y"))
            out.append((c0, cx, cy))
        (a1, a3, a4), (a2, a5, a6) = out
        return cls((a1, a2, a3, a4, a5, a6))

    @property
    def xi(self) -> Expr:
        a = self.alpha
        return cancel(a[0] + a[2] * X + a[3] * Y)

    @property
    def eta(self) -> Expr:
        a = self.alpha
        return cancel(a[1] + a[4] * X + a[5] * Y)

    def matrix(self) -> list:
        """3x3 matrix of the Lie algebra element."""
        a1, a2, a3, a4, a5, a6 = self.alpha
        return [[a3, a4, a1], [a5, a6, a2], [ZERO, ZERO, ZERO]]

    @classmethod
    def from_matrix(cls, m) -> "AffineVectorField":
        return cls((m[0][2], m[1][2], m[0][0], m[0][1], m[1][0], m[1][1]))

    def is_zero(self) -> bool:
        return all(is_zero(a) for a in self.alpha)

    def floats(self) -> list:
        return [_to_float(a) for a in self.alpha]

    def __add__(self, other):
        return AffineVectorField([cancel(a + b) for a, b in zip(self.alpha, other.alpha)])

    def __rmul__(self, c):
        c = sympify(c)
        return AffineVectorField([cancel(c * a) for a in self.alpha])

    def __repr__(self):
        return f"AffineVectorField(xi={to_string(self.xi)}, eta={to_string(self.eta)})"

    def to_json(self) -> dict:
        return {"xi": to_string(self.xi), "eta": to_string(self.eta), "alpha": [to_string(a) for a in self.alpha]}


def _coef(a):
    if isinstance(a, float):
        return Const(Fraction(a).limit_denominator(10**9)) if math.isfinite(a) else Const(0)
    return sympify(a)


def _to_float(e) -> float:
    return float(_eval(sympify(e), {}, {}))


def _at_origin(e):
    from edsaffine.symkernel.calculus import substitute

    return substitute(e, {"x": ZERO, "y": ZERO})


def bracket(v: AffineVectorField, w: AffineVectorField) -> AffineVectorField:
    """Vector-field bracket [v, w]; equals minus the matrix commutator."""
    a, b = v.matrix(), w.matrix()
    ab = _matmul(a, b)
    ba = _matmul(b, a)
    return AffineVectorField.from_matrix([[cancel(ba[i][j] - ab[i][j]) for j in range(3)] for i in range(3)])


def _matmul(a, b):
    return [[cancel(sum((a[i][k] * b[k][j] for k in range(3)), ZERO)) for j in range(3)] for i in range(3)]


@dataclass
class SymmetryAlgebra:
    basis: list
    path: str = "symbolic"
    numeric_dimension: int | None = None
    singular_values: list = field(default_factory=list)
    # for right-hand sides with symbolic parameters: dimension per value
    parameter_dimensions: dict = field(default_factory=dict)

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def to_json(self) -> dict:
        out = {"dimension": self.dimension, "path": self.path, "basis": [v.to_json() for v in self.basis]}
        if self.singular_values:
            out["singular_values"] = [float(f"{s:.6g}") for s in self.singular_values]
        if self.parameter_dimensions:
            out["parameter_dimensions"] = dict(self.parameter_dimensions)
        return out


# -- the determining equation ----------------------------------------------------


def determining_residual(f, v) -> Expr:
    f = sympify(f)
    if not isinstance(v, AffineVectorField):
        v = AffineVectorField(v)
    a1, a2, a3, a4, a5, a6 = v.alpha
    xi = a1 + a3 * X + a4 * Y
    eta = a2 + a5 * X + a6 * Y
    fx, fy = differentiate(f, "x"), differentiate(f, "y")
    # eta_x = a5, eta_y = a6, xi_x = a3, xi_y = a4
    return a5 + (a6 - a3) * f - a4 * f * f - xi * fx - eta * fy


def residual_columns(f) -> list:
    """R for each unit alpha; R(alpha) = sum_i alpha_i * columns[i]."""
    cols = []
    for i in range(6):
        unit = [0] * 6
        unit[i] = 1
        cols.append(determining_residual(f, unit))
    return cols


def is_rational(f) -> bool:
    f = sympify(f)
    return ring_of(f).all_variables


def _symbolic(f) -> SymmetryAlgebra:
    rows, _ = linalg.linear_relation_rows(residual_columns(f))
    basis = linalg.rational_nullspace(rows, 6)
    fields = [AffineVectorField([v.get(i, Fraction(0)) for i in range(6)]) for v in basis]
    return SymmetryAlgebra(fields, "symbolic")


def numeric_matrix(f, n: int = N_SAMPLES, check=None):
    """n x 6 matrix of residual columns at seeded domain points."""
    cols = residual_columns(f)
    names = set()
    for c in cols:
        names |= c.free_symbols
    names |= sympify(f).free_symbols
    names |= {"x", "y"}
    rows = []

    def probe(pt):
        if check is not None:
            check(pt)
        fpt = {k: float(v) for k, v in pt.items()}
        memo: dict = {}
        _eval(sympify(f), fpt, memo)
        row = [float(_eval(c, fpt, memo)) for c in cols]
        if not all(math.isfinite(r) for r in row):
            raise DomainError("non-finite residual")
        rows.append(row)

    pts = sample_points(names, n, probe, salt=11, mixed=True)
    if len(pts) < n:
        raise SamplingFailure(f"found only {len(pts)} of {n} sample points in the domain")
    return np.array(rows, dtype=float)


def equilibrate(m: np.ndarray, sweeps: int = 5):
    """Alternate row and column normalization; returns (scaled, column scales).

    Rank is unchanged, and the nullspace of m is ``scales * nullspace(scaled)``.
    """
    m = m.copy()
    cs = np.ones(m.shape[1])
    for _ in range(sweeps):
        rn = np.linalg.norm(m, axis=1)
        rn[rn == 0] = 1.0
        m = m / rn[:, None]
        cn = np.linalg.norm(m, axis=0)
        cn[cn == 0] = 1.0
        m = m / cn[None, :]
        cs = cs / cn
    return m, cs


def _numeric(f, n: int = N_SAMPLES, tol: float = RANK_TOL, check=None) -> SymmetryAlgebra:
    m, cs = equilibrate(numeric_matrix(f, n, check))
    _, s, vt = np.linalg.svd(m)
    rank = int(np.sum(s > tol * s[0])) if s[0] > 0 else 0
    null = vt[rank:] * cs[None, :]
    basis = [AffineVectorField(v) for v in _rationalize_basis(null, f)]
    return SymmetryAlgebra(basis, "numeric", numeric_dimension=6 - rank, singular_values=list(s))


def _rationalize_basis(null: np.ndarray, f) -> list:
    """Reduced echelon form of a numeric nullspace basis, with entries
    rounded to small rationals when the rounded field still passes the
    determining equation."""
    if len(null) == 0:
        return []
    a = null.copy()
    rows, cols = a.shape
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        p = r + int(np.argmax(np.abs(a[r:, c])))
        if abs(a[p, c]) < 1e-9:
            continue
        a[[r, p]] = a[[p, r]]
        a[r] = a[r] / a[r, c]
        for k in range(rows):
            if k != r:
                a[k] = a[k] - a[k, c] * a[r]
        r += 1
    out = []
    for vec in a:
        exact = [Fraction(float(v)).limit_denominator(1000) for v in vec]
        if all(abs(float(e) - v) < 1e-7 for e, v in zip(exact, vec)):
            res = determining_residual(f, exact)
            if _residual_vanishes(res):
                out.append(exact)
                continue
        out.append([float(v) for v in vec])
    return out


def _residual_vanishes(res) -> bool:
    from edsaffine.symkernel.numeric import numerically_zero

    res = sympify(res)
    if ring_of(res).all_variables:
        return is_zero(res)
    return numerically_zero(res)


def symmetry_algebra(f, path: str = "auto", check=None) -> SymmetryAlgebra:
    """Basis of the affine symmetry algebra of y' = f.

    path: "symbolic", "numeric", or "auto" (both for rational f, numeric
    otherwise; raises SymmetryDisagreement if both run and disagree).
    """
    f = sympify(f)
    if f.free_symbols - {"x", "y"}:
        return _parametric(f, path, check)
    if path == "symbolic":
        if not is_rational(f):
            raise ValueError("the exact solver needs a rational right-hand side")
        return _symbolic(f)
    if path == "numeric":
        return _numeric(f, check=check)
    if path != "auto":
        raise ValueError(f"unknown path {path!r}")
    num = _numeric(f, check=check)
    if not is_rational(f):
        return num
    sym = _symbolic(f)
    if sym.dimension != num.dimension:
        raise SymmetryDisagreement(sym, num)
    sym.path = "both"
    sym.numeric_dimension = num.dimension
    sym.singular_values = num.singular_values
    return sym


def _parametric(f, path, check) -> SymmetryAlgebra:
    """Solve once per bound parameter value; the generic dimension is the
    smallest one seen, and values with a larger algebra are reported."""
    names = sorted(f.free_symbols - {"x", "y"})
    sets = parameter_sets()
    missing = [n for n in names if n not in sets]
    if missing:
        raise SamplingFailure(f"parameters {missing} need a value set (parameter_values)")
    results = []
    for combo in itertools.product(*(sets[n] for n in names)):
        fa = substitute(f, {n: Const(v) for n, v in zip(names, combo)})
        key = ", ".join(f"{n}={v}" for n, v in zip(names, combo))
        results.append((key, symmetry_algebra(fa, path, check)))
    generic = min(alg.dimension for _, alg in results)
    key, alg = next((k, a) for k, a in results if a.dimension == generic)
    alg.path = f"{alg.path} at {key}"
    alg.parameter_dimensions = {k: a.dimension for k, a in results}
    return alg


def symmetry_dimension(f, path: str = "auto") -> int:
    return symmetry_algebra(f, path).dimension


# -- conjugation and subspaces ------------------------------------------------------


def adjoint(g: AffineElement, v: AffineVectorField) -> AffineVectorField:
    """G M G^-1: the generator carried along by the point map g."""
    G = g.matrix()
    Gi = g.inverse().matrix()
    return AffineVectorField.from_matrix(_matmul(_matmul(G, v.matrix()), Gi))


def conjugate_algebra(g: AffineElement, alg: SymmetryAlgebra) -> SymmetryAlgebra:
    """The symmetry algebra of transform_ode(g, f) given that of f."""
    return SymmetryAlgebra([adjoint(g, v) for v in alg.basis], alg.path)


def _float_matrix(fields) -> np.ndarray:
    if not fields:
        return np.zeros((0, 6))
    return np.array([v.floats() for v in fields], dtype=float)


def _rank(m: np.ndarray, tol: float = 1e-8) -> int:
    if m.size == 0:
        return 0
    s = np.linalg.svd(m, compute_uv=False)
    return int(np.sum(s > tol * max(s[0], 1e-300))) if s[0] > 0 else 0


def same_subspace(a, b, tol: float = 1e-8) -> bool:
    """Compare spans of two lists of fields (or algebras) by stacked rank."""
    a = a.basis if isinstance(a, SymmetryAlgebra) else a
    b = b.basis if isinstance(b, SymmetryAlgebra) else b
    ma, mb = _float_matrix(a), _float_matrix(b)
    ra, rb = _rank(ma, tol), _rank(mb, tol)
    if ra != rb:
        return False
    if ra == 0:
        return True
    return _rank(np.vstack([ma, mb]), tol) == ra


def in_span(v: AffineVectorField, fields, tol: float = 1e-8) -> bool:
    m = _float_matrix(fields)
    r = _rank(m, tol)
    return _rank(np.vstack([m, _float_matrix([v])]) if len(fields) else _float_matrix([v]), tol) == r


def is_closed(alg: SymmetryAlgebra) -> bool:
    """Every bracket of basis fields lies in the span of the basis."""
    b = alg.basis
    for i in range(len(b)):
        for j in range(i + 1, len(b)):
            if not in_span(bracket(b[i], b[j]), b):
                return False
    return True
