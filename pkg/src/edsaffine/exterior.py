"""Differential forms on a coordinate chart.

A k-form is a sparse map from strictly increasing k-tuples of coordinate
indices to coefficient expressions.  Coefficients are kept in canonical
rational form and zero coefficients are pruned after every operation.
"""
from __future__ import annotations

import itertools
import re

from edsaffine import linalg
from edsaffine.symkernel.calculus import differentiate, substitute
from edsaffine.symkernel.expr import ONE, ZERO, Const, Expr, Var, sympify
from edsaffine.symkernel.numeric import is_zero
from edsaffine.symkernel.parser import parse
from edsaffine.symkernel.rational import cancel, ring_of


class ChartMismatch(ValueError):
    pass


class Chart:
    __slots__ = ("name", "coords", "index", "vars")

    def __init__(self, name: str, coords):
        coords = tuple(coords)
        if len(set(coords)) != len(coords):
            raise ValueError("chart coordinates must be distinct")
        self.name = name
        self.coords = coords
        self.index = {c: i for i, c in enumerate(coords)}
        self.vars = tuple(Var(c) for c in coords)

    @property
    def dim(self) -> int:
        return len(self.coords)

    def __eq__(self, other):
        return isinstance(other, Chart) and self.coords == other.coords and self.name == other.name

    def __hash__(self):
        return hash((self.name, self.coords))

    def __repr__(self):
        return f"Chart({self.name!r}, {list(self.coords)})"

    def d(self, coord) -> "Form":
        """The coordinate differential d<coord>."""
        i = self.index[coord] if isinstance(coord, str) else int(coord)
        return Form(self, 1, {(i,): ONE}, clean=False)

    def function(self, e) -> "Form":
        return Form(self, 0, {(): sympify(e)})


def _clean(c) -> Expr | None:
    c = cancel(sympify(c))
    if c == ZERO:
        return None
    if isinstance(c, Const):
        return c
    if not ring_of(c).all_variables and is_zero(c):
        return None
    return c


def _sort_sign(idx):
    """Sort an index tuple; returns (sign, sorted) or (0, None) on repeats."""
    idx = list(idx)
    if len(set(idx)) != len(idx):
        return 0, None
    sign = 1
    for i in range(len(idx)):
        for j in range(len(idx) - 1 - i):
            if idx[j] > idx[j + 1]:
                idx[j], idx[j + 1] = idx[j + 1], idx[j]
                sign = -sign
    return sign, tuple(idx)


class Form:
    __slots__ = ("chart", "degree", "coeffs")

    def __init__(self, chart: Chart, degree: int, coeffs=None, clean: bool = True):
        self.chart = chart
        self.degree = degree
        out = {}
        for k, v in (coeffs or {}).items():
            k = tuple(k)
            if len(k) != degree:
                raise ValueError(f"key {k} does not match degree {degree}")
            if any(a >= b for a, b in zip(k, k[1:])):
                raise ValueError(f"key {k} is not strictly increasing")
            v = _clean(v) if clean else sympify(v)
            if v is not None:
                out[k] = v
        self.coeffs = out

    # -- construction helpers ---------------------------------------------
    @classmethod
    def one_form(cls, chart: Chart, components) -> "Form":
        return cls(chart, 1, {(i,): c for i, c in enumerate(components)})

    @classmethod
    def zero(cls, chart: Chart, degree: int) -> "Form":
        return cls(chart, degree, {})

    def components(self) -> list:
        """Coefficient list of a 1-form (one entry per coordinate)."""
        if self.degree != 1:
            raise ValueError("components() needs a 1-form")
        return [self.coeffs.get((i,), ZERO) for i in range(self.chart.dim)]

    def coeff(self, *names) -> Expr:
        idx = tuple(self.chart.index[n] for n in names)
        sign, key = _sort_sign(idx)
        if not sign:
            return ZERO
        v = self.coeffs.get(key, ZERO)
        return v if sign > 0 else -v

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def scalar(self) -> Expr:
        if self.degree != 0:
            raise ValueError("not a function")
        return self.coeffs.get((), ZERO)

    # -- algebra -------------------------------------------------------------
    def _check(self, other):
        if not isinstance(other, Form):
            raise TypeError("expected a Form")
        if other.chart != self.chart:
            raise ChartMismatch(f"{self.chart.name} vs {other.chart.name}")

    def __add__(self, other):
        if not isinstance(other, Form):
            other = Form(self.chart, 0, {(): other}) if self.degree == 0 else NotImplemented
            if other is NotImplemented:
                return other
        self._check(other)
        if other.degree != self.degree and self.coeffs and other.coeffs:
            raise ValueError("cannot add forms of different degree")
        deg = self.degree if self.coeffs or not other.coeffs else other.degree
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, ZERO) + v
        return Form(self.chart, deg, out)

    def __neg__(self):
        return Form(self.chart, self.degree, {k: -v for k, v in self.coeffs.items()}, clean=False)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, Form):
            return wedge(self, other)
        c = sympify(other)
        return Form(self.chart, self.degree, {k: v * c for k, v in self.coeffs.items()})

    def __rmul__(self, other):
        c = sympify(other)
        return Form(self.chart, self.degree, {k: c * v for k, v in self.coeffs.items()})

    def __truediv__(self, other):
        c = sympify(other)
        return Form(self.chart, self.degree, {k: v / c for k, v in self.coeffs.items()})

    def __xor__(self, other):
        return wedge(self, other)

    def __eq__(self, other):
        if not isinstance(other, Form):
            return NotImplemented
        return self.chart == other.chart and (self - other).is_zero

    __hash__ = None

    def __repr__(self):
        return f"Form({self})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for k in sorted(self.coeffs):
            v = self.coeffs[k]
            basis = "^".join("d" + self.chart.coords[i] for i in k)
            if not k:
                parts.append(f"({v})")
            elif v == ONE:
                parts.append(basis)
            else:
                parts.append(f"({v})*{basis}")
        return " + ".join(parts)


def wedge(a: Form, b: Form) -> Form:
    a._check(b)
    out: dict = {}
    for ka, va in a.coeffs.items():
        for kb, vb in b.coeffs.items():
            sign, key = _sort_sign(ka + kb)
            if not sign:
                continue
            t = va * vb
            out[key] = out.get(key, ZERO) + (t if sign > 0 else -t)
    return Form(a.chart, a.degree + b.degree, out)


def wedge_all(forms, chart: Chart | None = None) -> Form:
    forms = list(forms)
    if not forms:
        return Form(chart, 0, {(): ONE})
    acc = forms[0]
    for f in forms[1:]:
        acc = wedge(acc, f)
    return acc


def exterior_derivative(w: Form) -> Form:
    ch = w.chart
    out: dict = {}
    for k, v in w.coeffs.items():
        names = v.free_symbols
        for j, c in enumerate(ch.coords):
            if c not in names:
                continue
            sign, key = _sort_sign((j,) + k)
            if not sign:
                continue
            dv = differentiate(v, c)
            out[key] = out.get(key, ZERO) + (dv if sign > 0 else -dv)
    return Form(ch, w.degree + 1, out)


d = exterior_derivative


def function_differential(chart: Chart, f) -> Form:
    return exterior_derivative(Form(chart, 0, {(): sympify(f)}))


class VectorField:
    __slots__ = ("chart", "components")

    def __init__(self, chart: Chart, components):
        comps = tuple(sympify(c) for c in components)
        if len(comps) != chart.dim:
            raise ValueError("component count must equal chart dimension")
        self.chart = chart
        self.components = comps

    @classmethod
    def coordinate(cls, chart: Chart, coord) -> "VectorField":
        i = chart.index[coord] if isinstance(coord, str) else coord
        return cls(chart, [ONE if j == i else ZERO for j in range(chart.dim)])

    def __call__(self, f) -> Expr:
        f = sympify(f)
        return cancel(sum((c * differentiate(f, n) for c, n in zip(self.components, self.chart.coords)), ZERO))


def interior_product(X: VectorField, w: Form) -> Form:
    if X.chart != w.chart:
        raise ChartMismatch("vector field and form live on different charts")
    if w.degree < 1:
        raise ValueError("interior product needs a form of degree >= 1")
    out: dict = {}
    for k, v in w.coeffs.items():
        for pos, i in enumerate(k):
            xi = X.components[i]
            if xi == ZERO:
                continue
            key = k[:pos] + k[pos + 1 :]
            t = xi * v
            out[key] = out.get(key, ZERO) + (t if pos % 2 == 0 else -t)
    return Form(w.chart, w.degree - 1, out)


class ChartMap:
    """Map source -> target given by target coordinates as source functions."""

    __slots__ = ("source", "target", "components")

    def __init__(self, source: Chart, target: Chart, components):
        comps = tuple(sympify(c) for c in components)
        if len(comps) != target.dim:
            raise ValueError("component count must equal target dimension")
        self.source = source
        self.target = target
        self.components = comps

    @classmethod
    def identity(cls, chart: Chart) -> "ChartMap":
        return cls(chart, chart, chart.vars)

    def bindings(self) -> dict:
        return dict(zip(self.target.coords, self.components))


def pullback(phi: ChartMap, w: Form) -> Form:
    if w.chart != phi.target:
        raise ChartMismatch("form does not live on the map's target chart")
    bind = phi.bindings()
    src = phi.source
    dphi = [function_differential(src, c) for c in phi.components]
    out = Form(src, w.degree, {})
    for k, v in w.coeffs.items():
        term = Form(src, 0, {(): substitute(v, bind)})
        for i in k:
            term = wedge(term, dphi[i])
        out = out + term
    if w.degree == 0 and not w.coeffs:
        return Form(src, 0, {})
    return out


# -- coframes ----------------------------------------------------------------


def coefficient_matrix(forms) -> list:
    return [f.components() for f in forms]


def express_in_coframe(w: Form, coframe) -> list:
    """Coefficients c with w = sum c_i coframe_i (coframe spans the chart)."""
    if w.degree != 1:
        raise ValueError("express_in_coframe needs a 1-form")
    rows = coefficient_matrix(coframe)
    n = w.chart.dim
    if len(rows) != n:
        raise ValueError("coframe must have chart-dimension many forms")
    # solve sum_i c_i rows[i][j] = w_j  <=>  rows^T c = w
    cols = [[rows[i][j] for i in range(n)] for j in range(n)]
    rhs = w.components()
    ring, mat = linalg.to_matrix(cols + [rhs])
    a, b = mat[:n], mat[n]
    try:
        sol = linalg.solve(a, b)
    except linalg.SingularError:
        raise linalg.SingularError("dependent coframe") from None
    if linalg.rank(a) != n:
        raise linalg.SingularError("dependent coframe")
    return [s.to_expr() for s in sol]


def express_in_span(w: Form, forms):
    """Coefficients c with w = sum c_i forms_i, or None when w is not in the span."""
    if w.degree != 1:
        raise ValueError("express_in_span needs a 1-form")
    forms = list(forms)
    if not forms:
        return [] if w.is_zero else None
    rows = coefficient_matrix(forms)
    n = w.chart.dim
    cols = [[rows[i][j] for i in range(len(forms))] for j in range(n)]
    ring, mat = linalg.to_matrix([r + [c] for r, c in zip(cols, w.components())])
    k = len(forms)
    red, pivots = linalg.row_reduce(mat, k + 1)
    if k in pivots:
        return None
    sol = [ring.zero() for _ in range(k)]
    for r, p in enumerate(pivots):
        sol[p] = red[r][k]
    return [s.to_expr() for s in sol]


def in_span(w: Form, forms) -> bool:
    return express_in_span(w, forms) is not None


def span_rank(forms) -> int:
    forms = [f for f in forms]
    if not forms:
        return 0
    _, mat = linalg.to_matrix(coefficient_matrix(forms))
    return linalg.rank(mat)


def same_span(a, b) -> bool:
    ra, rb = span_rank(a), span_rank(b)
    return ra == rb == span_rank(list(a) + list(b))


def dual_basis(coframe):
    """Matrix B with dx_i = sum_j B[i][j] coframe_j (coframe spans the chart)."""
    n = len(coframe)
    rows = coefficient_matrix(coframe)
    ring, mat = linalg.to_matrix(rows)
    inv = linalg.inverse(mat)  # coframe = M dx  =>  dx = M^-1 coframe
    return [[inv[i][j].to_expr() for j in range(n)] for i in range(n)]


def frame_chart(n: int, prefix: str = "w") -> Chart:
    return Chart("frame", [f"{prefix}{i + 1}" for i in range(n)])


def expand_in_coframe(w: Form, coframe, inverse=None) -> Form:
    """Rewrite a k-form in the wedge basis of ``coframe``.

    The result is a Form on an abstract chart whose i-th coordinate
    differential stands for ``coframe[i]``; its keys index the coframe.
    """
    n = len(coframe)
    if n != w.chart.dim:
        raise ValueError("coframe must have chart-dimension many forms")
    B = inverse if inverse is not None else dual_basis(coframe)
    fc = frame_chart(n)
    images = [Form(fc, 1, {(j,): B[i][j] for j in range(n)}) for i in range(n)]
    out = Form(fc, w.degree, {})
    for k, v in w.coeffs.items():
        term = Form(fc, 0, {(): v})
        for i in k:
            term = wedge(term, images[i])
        out = out + term
    return out


def assemble(frame_form: Form, coframe) -> Form:
    """Inverse of expand_in_coframe: substitute the coframe forms back."""
    ch = coframe[0].chart
    out = Form(ch, frame_form.degree, {})
    for k, v in frame_form.coeffs.items():
        term = Form(ch, 0, {(): v})
        for i in k:
            term = wedge(term, coframe[i])
        out = out + term
    return out


# -- literal syntax ------------------------------------------------------------


def parse_one_form(chart: Chart, text: str) -> Form:
    """Parse ``dz + p*dx + p^2*dy``: linear in the symbols d<coord>."""
    e = parse(text)
    dn = {"d" + c: i for i, c in enumerate(chart.coords)}
    clash = set(dn) & set(chart.coords)
    if clash:
        raise ValueError(f"coordinate names clash with differentials: {sorted(clash)}")
    comps = [ZERO] * chart.dim
    rest = e
    for name, i in dn.items():
        if name in e.free_symbols:
            c = differentiate(e, name)
            if c.free_symbols & dn.keys():
                raise ValueError(f"form literal is not linear in the differentials: {text}")
            comps[i] = c
            rest = rest - c * Var(name)
    if not is_zero(rest):
        raise ValueError(f"form literal has a term without a differential: {text}")
    return Form.one_form(chart, comps)


_GROUP = re.compile(r"\[([^\[\]]*)\]")


def parse_form(chart: Chart, text: str) -> Form:
    """A 1-form literal or a wedge of bracketed 1-forms ``[a]^[b]^...``."""
    text = text.strip()
    if text.startswith("["):
        groups = _GROUP.findall(text)
        skeleton = _GROUP.sub("G", text).replace(" ", "")
        if skeleton != "^".join("G" * len(groups)):
            raise ValueError(f"malformed wedge literal: {text}")
        return wedge_all([parse_one_form(chart, g) for g in groups])
    return parse_one_form(chart, text)


def random_form(chart: Chart, degree: int, rng, max_terms: int = 3, max_deg: int = 2) -> Form:
    """Form with small random polynomial coefficients (test helper)."""
    keys = list(itertools.combinations(range(chart.dim), degree))
    out = {}
    for k in rng.sample(keys, min(len(keys), rng.randint(1, max_terms))):
        c = Const(rng.randint(-3, 3))
        for _ in range(rng.randint(0, max_deg)):
            c = c + rng.randint(-2, 2) * rng.choice(chart.vars) ** rng.randint(1, 2)
        out[k] = c
    return Form(chart, degree, out)


def random_function(chart: Chart, rng, max_terms: int = 3) -> Expr:
    e = Const(rng.randint(-3, 3))
    for _ in range(rng.randint(1, max_terms)):
        e = e + rng.randint(-3, 3) * rng.choice(chart.vars) ** rng.randint(1, 2) * rng.choice(chart.vars)
    return e
