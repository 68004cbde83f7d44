"""Differential forms on charts."""
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from edsaffine.exterior import (
    Chart,
    ChartMap,
    ChartMismatch,
    VectorField,
    assemble,
    d,
    dual_basis,
    expand_in_coframe,
    express_in_coframe,
    function_differential,
    interior_product,
    parse_form,
    pullback,
    random_form,
    random_function,
    same_span,
    span_rank,
    wedge,
)
from edsaffine.symkernel.expr import Var
from edsaffine.symkernel.parser import parse

R3 = Chart("R3", ["x", "y", "z"])
R4 = Chart("R4", ["x", "y", "z", "p"])
R2 = Chart("R2", ["u", "v"])
seeds = st.integers(min_value=0, max_value=2**32)
degrees = st.integers(min_value=0, max_value=3)


def form(seed, degree, chart=R3):
    return random_form(chart, degree, random.Random(seed))


# -- oracle examples -------------------------------------------------------------


def test_wedge_of_coordinate_differentials():
    dx, dy = R3.d("x"), R3.d("y")
    assert wedge(dx, dy) == -wedge(dy, dx)
    assert wedge(dx, dx).is_zero
    assert wedge(dx, dy).coeff("x", "y") == parse("1")


def test_contact_form_derivative():
    theta = parse_form(R4, "dz + p*dx + p^2*dy")
    assert d(theta) == parse_form(R4, "[dp]^[dx + 2*p*dy]")


def test_derivative_of_function():
    assert function_differential(R3, parse("x*y + z^2")) == parse_form(R3, "y*dx + x*dy + 2*z*dz")


def test_interior_product_examples():
    X = VectorField(R3, [1, 0, Var("x")])
    assert interior_product(X, parse_form(R3, "[dx]^[dz]")) == parse_form(R3, "dz - x*dx")
    assert interior_product(X, parse_form(R3, "y*dx + dz")).scalar == parse("y + x")
    with pytest.raises(ValueError):
        interior_product(X, R3.function(1))


def test_pullback_of_polar_area_form():
    polar = Chart("polar", ["r", "t"])
    phi = ChartMap(polar, R2, [parse("r*cos(t)"), parse("r*sin(t)")])
    area = pullback(phi, wedge(R2.d("u"), R2.d("v")))
    from edsaffine.symkernel.numeric import is_zero

    assert is_zero(area.coeff("r", "t") - parse("r"))


def test_chart_mismatch():
    with pytest.raises(ChartMismatch):
        wedge(R3.d("x"), R4.d("x"))
    with pytest.raises(ValueError):
        Chart("bad", ["x", "x"])


def test_form_literal_errors():
    with pytest.raises(ValueError):
        parse_form(R3, "dx*dy")
    with pytest.raises(ValueError):
        parse_form(R3, "dx + 1")
    with pytest.raises(ValueError):
        parse_form(R3, "[dx]^^[dy]")


def test_span_utilities():
    a = [parse_form(R3, "dx + y*dz"), parse_form(R3, "dy")]
    b = [parse_form(R3, "2*dx + 2*y*dz + dy"), parse_form(R3, "dy")]
    assert span_rank(a) == 2
    assert same_span(a, b)
    assert not same_span(a, [R3.d("x"), R3.d("y")])


def test_express_in_coframe_example():
    frame = [parse_form(R3, t) for t in ("dx", "dy + x*dx", "dz - y*dx")]
    w = parse_form(R3, "3*dx + dy + dz")
    c = express_in_coframe(w, frame)
    rebuilt = sum((ci * f for ci, f in zip(c[1:], frame[1:])), c[0] * frame[0])
    assert rebuilt == w


def test_zero_coefficients_are_pruned():
    w = parse_form(R3, "x*dx") - parse_form(R3, "x*dx")
    assert w.coeffs == {}


# -- properties --------------------------------------------------------------------


@given(seeds, degrees)
def test_d_squared_is_zero(seed, k):
    assert d(d(form(seed, k))).is_zero


@given(seeds, seeds, degrees, degrees)
def test_graded_leibniz(s1, s2, p, q):
    a, b = form(s1, p), form(s2, q)
    sign = -1 if p % 2 else 1
    assert d(wedge(a, b)) == wedge(d(a), b) + sign * wedge(a, d(b))


@given(seeds, seeds, degrees, degrees)
def test_graded_anticommutativity(s1, s2, p, q):
    a, b = form(s1, p), form(s2, q)
    assert wedge(a, b) == (-1) ** (p * q) * wedge(b, a)


@given(seeds, seeds, degrees)
def test_pullback_commutes_with_d(s1, s2, k):
    r = random.Random(s2)
    phi = ChartMap(R4, R3, [random_function(R4, r) for _ in range(3)])
    w = form(s1, k)
    assert pullback(phi, d(w)) == d(pullback(phi, w))


@given(seeds, seeds, seeds)
def test_pullback_respects_wedge(s1, s2, s3):
    r = random.Random(s3)
    phi = ChartMap(R2, R3, [random_function(R2, r) for _ in range(3)])
    a, b = form(s1, 1), form(s2, 1)
    assert pullback(phi, wedge(a, b)) == wedge(pullback(phi, a), pullback(phi, b))


@given(seeds, seeds, seeds, st.integers(1, 2), st.integers(0, 2))
def test_interior_product_is_an_antiderivation(s1, s2, s3, p, q):
    r = random.Random(s3)
    X = VectorField(R3, [random_function(R3, r) for _ in range(3)])
    a, b = form(s1, p), form(s2, q)
    lhs = interior_product(X, wedge(a, b))
    rhs = wedge(interior_product(X, a), b)
    if q:
        rhs = rhs + (-1) ** p * wedge(a, interior_product(X, b))
    assert lhs == rhs


@given(seeds, st.integers(1, 3))
def test_expand_and_reassemble(seed, k):
    frame = [parse_form(R3, t) for t in ("dx + y*dz", "dy - x*dx", "(1 + x^2)*dz")]
    w = form(seed, k)
    B = dual_basis(frame)
    assert assemble(expand_in_coframe(w, frame, B), frame) == w
