"""The affine group A(2, R) of the plane.

An element is the 3x3 matrix

    [[x3, x4, x1],
     [x5, x6, x2],
     [ 0,  0,  1]]

with D = x3*x6 - x4*x5 != 0.  Its left-invariant coframe w1..w6 on the chart
(x1..x6) satisfies

    dw1 = w1^w3 + w2^w4      dw4 = -w3^w4 - w4^w6
    dw2 = w1^w5 + w2^w6      dw5 = w3^w5 + w5^w6
    dw3 = -w4^w5             dw6 = w4^w5
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from edsaffine import assumptions
from edsaffine.exterior import (
    Chart,
    ChartMap,
    Form,
    d,
    expand_in_coframe,
    parse_one_form,
    pullback,
    wedge,
)
from edsaffine.symkernel.calculus import substitute
from edsaffine.symkernel.expr import ONE, ZERO, Expr, Var, sympify
from edsaffine.symkernel.numeric import is_zero
from edsaffine.symkernel.rational import cancel

COORDS = ("x1", "x2", "x3", "x4", "x5", "x6")
CHART = Chart("A2", COORDS)
X, Y = Var("x"), Var("y")


class NonGraphError(ArithmeticError):
    """The image of the ODE is not a graph over the new x axis."""


def maurer_cartan_coframe(chart: Chart = CHART) -> list:
    x1, x2, x3, x4, x5, x6 = chart.vars
    D = x3 * x6 - x4 * x5
    dx = [chart.d(i) for i in range(6)]
    w = [
        x6 * dx[0] - x4 * dx[1],
        x3 * dx[1] - x5 * dx[0],
        x6 * dx[2] - x4 * dx[4],
        x6 * dx[3] - x4 * dx[5],
        x3 * dx[4] - x5 * dx[2],
        x3 * dx[5] - x5 * dx[3],
    ]
    return [wi / D for wi in w]


# right-hand sides as (coefficient, i, j) for w_i ^ w_j, 0-based
STRUCTURE = (
    ((1, 0, 2), (1, 1, 3)),
    ((1, 0, 4), (1, 1, 5)),
    ((-1, 3, 4),),
    ((-1, 2, 3), (-1, 3, 5)),
    ((1, 2, 4), (1, 4, 5)),
    ((1, 3, 4),),
)


def structure_rhs(coframe, k: int) -> Form:
    out = Form(coframe[0].chart, 2, {})
    for c, i, j in STRUCTURE[k]:
        out = out + c * wedge(coframe[i], coframe[j])
    return out


def verify_structure_equations(coframe):
    """Return (ok, residuals): residual_k = dw_k - (right-hand side)."""
    residuals = [d(coframe[k]) - structure_rhs(coframe, k) for k in range(6)]
    return all(r.is_zero for r in residuals), residuals


def structure_constants(coframe) -> list:
    """dw_k expanded in the wedge basis of the coframe (frame-chart forms)."""
    return [expand_in_coframe(d(w), coframe) for w in coframe]


@dataclass(frozen=True)
class BasisChange:
    a: Fraction
    b: Fraction
    c: Fraction

    def __post_init__(self):
        if Fraction(self.a) * Fraction(self.c) == 0:
            raise ValueError("basis change needs a*c != 0")


def change_basis(coframe, bc: BasisChange) -> list:
    a, b, c = (sympify(Fraction(v)) for v in (bc.a, bc.b, bc.c))
    w1, w2, w3, w4, w5, w6 = coframe
    return [
        a * w1 + b * w2,
        c * w2,
        w3 + (b / a) * w5,
        (a / c) * w4 - (b / c) * w3 - (b * b / (a * c)) * w5 + (b / c) * w6,
        (c / a) * w5,
        w6 - (b / a) * w5,
    ]


def compose_basis_changes(first: BasisChange, second: BasisChange) -> BasisChange:
    """The change equal to applying ``first`` and then ``second``."""
    a1, b1, c1 = (Fraction(v) for v in (first.a, first.b, first.c))
    a2, b2, c2 = (Fraction(v) for v in (second.a, second.b, second.c))
    return BasisChange(a2 * a1, a2 * b1 + b2 * c1, c2 * c1)


# -- group elements ------------------------------------------------------------


class AffineElement:
    """(x, y) -> linear @ (x, y) + translation."""

    __slots__ = ("linear", "translation")

    def __init__(self, linear, translation=(0, 0)):
        (p, q), (r, s) = linear
        self.linear = ((sympify(_num(p)), sympify(_num(q))), (sympify(_num(r)), sympify(_num(s))))
        self.translation = (sympify(_num(translation[0])), sympify(_num(translation[1])))
        if is_zero(self.det):
            raise ValueError("affine element needs a nonzero determinant")

    @classmethod
    def from_params(cls, x3, x4, x5, x6, x1, x2) -> "AffineElement":
        """CLI order: linear part row-major, then translation."""
        return cls(((x3, x4), (x5, x6)), (x1, x2))

    @classmethod
    def identity(cls) -> "AffineElement":
        return cls(((1, 0), (0, 1)))

    def params(self) -> tuple:
        (p, q), (r, s) = self.linear
        return (p, q, r, s) + self.translation

    @property
    def det(self) -> Expr:
        (p, q), (r, s) = self.linear
        return cancel(p * s - q * r)

    def matrix(self) -> list:
        (p, q), (r, s) = self.linear
        t1, t2 = self.translation
        return [[p, q, t1], [r, s, t2], [ZERO, ZERO, ONE]]

    def compose(self, other: "AffineElement") -> "AffineElement":
        """self o other (apply other first)."""
        (a, b), (c, e) = self.linear
        (p, q), (r, s) = other.linear
        t1, t2 = other.translation
        u1, u2 = self.translation
        lin = ((cancel(a * p + b * r), cancel(a * q + b * s)), (cancel(c * p + e * r), cancel(c * q + e * s)))
        tr = (cancel(a * t1 + b * t2 + u1), cancel(c * t1 + e * t2 + u2))
        return AffineElement(lin, tr)

    __matmul__ = compose

    def inverse(self) -> "AffineElement":
        (p, q), (r, s) = self.linear
        D = self.det
        lin = ((cancel(s / D), cancel(-q / D)), (cancel(-r / D), cancel(p / D)))
        t1, t2 = self.translation
        tr = (cancel(-(lin[0][0] * t1 + lin[0][1] * t2)), cancel(-(lin[1][0] * t1 + lin[1][1] * t2)))
        return AffineElement(lin, tr)

    def apply(self, point) -> tuple:
        x, y = (sympify(_num(v)) for v in point)
        (p, q), (r, s) = self.linear
        t1, t2 = self.translation
        return (cancel(p * x + q * y + t1), cancel(r * x + s * y + t2))

    def __eq__(self, other):
        if not isinstance(other, AffineElement):
            return NotImplemented
        return all(is_zero(a - b) for a, b in zip(self.params(), other.params()))

    __hash__ = None

    def __repr__(self):
        return "AffineElement(" + ", ".join(str(v) for v in self.params()) + ")"

    def to_json(self) -> dict:
        (p, q), (r, s) = self.linear
        return {
            "linear": [[str(p), str(q)], [str(r), str(s)]],
            "translation": [str(self.translation[0]), str(self.translation[1])],
            "map": [str(c) for c in self.apply((X, Y))],
        }


def _num(v):
    if isinstance(v, float):
        return Fraction(v).limit_denominator(10**12)
    if isinstance(v, str):
        return sympify(v)
    return v


def left_translation(g: AffineElement, chart: Chart = CHART) -> ChartMap:
    """The map h -> g h of the group chart to itself."""
    x1, x2, x3, x4, x5, x6 = chart.vars
    h = AffineElement.__new__(AffineElement)
    h.linear = ((x3, x4), (x5, x6))
    h.translation = (x1, x2)
    gh = g.compose(h)
    (p, q), (r, s) = gh.linear
    return ChartMap(chart, chart, [gh.translation[0], gh.translation[1], p, q, r, s])


def is_left_invariant(g: AffineElement, coframe=None) -> bool:
    coframe = coframe or maurer_cartan_coframe()
    phi = left_translation(g)
    return all((pullback(phi, w) - w).is_zero for w in coframe)


def transform_ode(g: AffineElement, f, x: str = "x", y: str = "y") -> Expr:
    """Slope of the image ODE under (x, y) -> g(x, y), as a function of the
    new coordinates (again named x, y)."""
    f = sympify(f)
    (al, be), (de, ep) = g.linear
    ginv = g.inverse()
    px, py = ginv.apply((Var(x), Var(y)))
    fb = substitute(f, {x: px, y: py})
    den = cancel(al + be * fb)
    if den == ZERO or is_zero(den):
        raise NonGraphError("the transformed equation is not a graph over x")
    if not den.is_constant:
        assumptions.record(den)
    return cancel((de + ep * fb) / den)


def affine_from_matrix(m) -> AffineElement:
    return AffineElement(((m[0][0], m[0][1]), (m[1][0], m[1][1])), (m[0][2], m[1][2]))


def random_element(rng, lo: int = -3, hi: int = 3) -> AffineElement:
    while True:
        vals = [Fraction(rng.randint(lo, hi), rng.randint(1, 2)) for _ in range(6)]
        if vals[0] * vals[3] - vals[1] * vals[2] != 0:
            return AffineElement.from_params(*vals)


def coframe_literals(chart: Chart = CHART) -> list:
    """The coframe built from its textual definition (used as a cross-check)."""
    D = "(x3*x6 - x4*x5)"
    texts = [
        f"(x6*dx1 - x4*dx2)/{D}",
        f"(x3*dx2 - x5*dx1)/{D}",
        f"(x6*dx3 - x4*dx5)/{D}",
        f"(x6*dx4 - x4*dx6)/{D}",
        f"(x3*dx5 - x5*dx3)/{D}",
        f"(x3*dx6 - x5*dx4)/{D}",
    ]
    return [parse_one_form(chart, t) for t in texts]
