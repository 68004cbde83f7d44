"""Affine symmetry algebras of y' = f(x, y)."""
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from edsaffine.affine import NonGraphError, random_element, transform_ode
from edsaffine.classify import CLAIRAUT
from edsaffine.symkernel.expr import ZERO
from edsaffine.symkernel.numeric import is_zero, parameter_values, seeded
from edsaffine.symkernel.parser import parse
from edsaffine.symmetry import (
    AffineVectorField,
    SamplingFailure,
    SymmetryDisagreement,
    adjoint,
    bracket,
    conjugate_algebra,
    determining_residual,
    equilibrate,
    in_span,
    is_closed,
    same_subspace,
    symmetry_algebra,
)

from strategies import fractions

alphas = st.lists(fractions, min_size=6, max_size=6)
seeds = st.integers(0, 2**32)

DIMENSIONS = {
    "0": 5,
    "y/x": 4,
    "x": 3,
    "log(x)": 2,
    "exp(x)": 2,
    "x^2": 2,
    "x^3": 2,
    "x^5": 2,
    "x^(-2)": 2,
    "-x/y": 2,
    "-y/x": 2,
    "y/x + x^4": 2,
    "y/x + x": 2,
    "y/x + x^3": 2,
    CLAIRAUT: 2,
    "3": 5,
    "(y+2)/(x+1)": 4,
}


def f_of(text):
    return parse(text)


# -- determining residual ---------------------------------------------------------------


def test_residual_for_zero_slope_is_alpha5():
    v = AffineVectorField([1, 2, 3, 4, 5, 6])
    assert determining_residual(ZERO, v) == parse("5")


def test_translation_in_y_when_f_ignores_y():
    v = AffineVectorField([0, 1, 0, 0, 0, 0])
    for F in ("x^3 - x", "exp(x)", "sin(x)"):
        assert is_zero(determining_residual(parse(F), v))


@pytest.mark.parametrize("F", ["s", "s^2"])
def test_row3_symmetry(F):
    f = parse("y") * parse(F.replace("s", "(y*exp(-x))"))
    assert is_zero(determining_residual(f, AffineVectorField([1, 0, 0, 0, 0, 1])))


@given(alphas, alphas, fractions)
def test_residual_is_linear(a, b, c):
    f = parse("y/x + x^2")
    va, vb = AffineVectorField(a), AffineVectorField(b)
    lhs = determining_residual(f, va + c * vb)
    assert is_zero(lhs - determining_residual(f, va) - c * determining_residual(f, vb))


# -- algebras ------------------------------------------------------------------------------


@pytest.mark.parametrize("f, dim", sorted(DIMENSIONS.items()))
def test_symmetry_dimensions(f, dim):
    alg = symmetry_algebra(f_of(f))
    assert alg.dimension == dim
    assert alg.path in ("both", "numeric")


def test_zero_slope_algebra_is_alpha5_zero():
    alg = symmetry_algebra(ZERO)
    assert all(v.alpha[4] == 0 for v in alg.basis)


def test_y_over_x_has_no_translations():
    alg = symmetry_algebra(parse("y/x"))
    assert all(v.alpha[0] == 0 and v.alpha[1] == 0 for v in alg.basis)


def test_exp_algebra():
    alg = symmetry_algebra(parse("exp(x)"), path="numeric")
    assert same_subspace(alg.basis, [AffineVectorField([1, 0, 0, 0, 0, 1]), AffineVectorField([0, 1, 0, 0, 0, 0])])


def test_paths_agree_for_rational_f():
    f = parse("(x - y)/(x + 2*y)")
    sym = symmetry_algebra(f, path="symbolic")
    num = symmetry_algebra(f, path="numeric")
    assert sym.dimension == num.dimension
    assert same_subspace(sym.basis, num.basis)


def test_symbolic_path_needs_rational_f():
    with pytest.raises(ValueError):
        symmetry_algebra(parse("exp(x)"), path="symbolic")


def test_disagreement_error_carries_both_answers():
    a = symmetry_algebra(parse("x"), path="symbolic")
    b = symmetry_algebra(parse("y/x"), path="symbolic")
    err = SymmetryDisagreement(a, b)
    assert err.symbolic.dimension == 3 and err.numeric.dimension == 4


def test_sampling_failure_outside_domain():
    with pytest.raises(SamplingFailure):
        symmetry_algebra(parse("log(-x^2 - y^2 - 1)"), path="numeric")


def test_parametric_exponent():
    with parameter_values({"a": [2, 3, 5, -2]}):
        alg = symmetry_algebra(parse("x^a"))
    assert alg.dimension == 2
    assert set(alg.parameter_dimensions.values()) == {2}
    with parameter_values({"a": [0, 1, 2]}):
        alg = symmetry_algebra(parse("x^a"))
    assert alg.parameter_dimensions == {"a=0": 5, "a=1": 3, "a=2": 2}


def test_seed_changes_points_not_answers():
    for seed in (0, 1, 99):
        with seeded(seed):
            assert symmetry_algebra(parse(CLAIRAUT)).dimension == 2


def test_equilibration_preserves_rank():
    rng = np.random.default_rng(0)
    m = rng.normal(size=(12, 4)) @ rng.normal(size=(4, 6)) * np.logspace(-6, 6, 6)
    scaled, cs = equilibrate(m)
    assert np.linalg.matrix_rank(scaled, tol=1e-8 * np.linalg.norm(scaled, 2)) == 4


@pytest.mark.parametrize("f", ["0", "y/x", "x", "-x/y", "y/x + x^4", "(y+2)/(x+1)"])
def test_algebras_are_closed(f):
    assert is_closed(symmetry_algebra(parse(f)))


# -- brackets and conjugation ------------------------------------------------------------


@given(alphas, alphas)
def test_bracket_antisymmetric(a, b):
    va, vb = AffineVectorField(a), AffineVectorField(b)
    assert (bracket(va, vb) + bracket(vb, va)).is_zero()


@given(alphas, alphas, alphas)
def test_jacobi_identity(a, b, c):
    u, v, w = AffineVectorField(a), AffineVectorField(b), AffineVectorField(c)
    total = bracket(u, bracket(v, w)) + bracket(v, bracket(w, u)) + bracket(w, bracket(u, v))
    assert total.is_zero()


@given(seeds, alphas, alphas)
def test_adjoint_is_a_lie_homomorphism(seed, a, b):
    g = random_element(random.Random(seed))
    va, vb = AffineVectorField(a), AffineVectorField(b)
    lhs = adjoint(g, bracket(va, vb))
    rhs = bracket(adjoint(g, va), adjoint(g, vb))
    assert (lhs + Fraction(-1) * rhs).is_zero()


@given(seeds, st.sampled_from(["y/x", "x", "-x/y", "y/x + x", "exp(x)", "3"]))
def test_conjugation_equivariance(seed, f):
    g = random_element(random.Random(seed))
    try:
        ft = transform_ode(g, parse(f))
    except NonGraphError:
        return
    alg = symmetry_algebra(parse(f))
    assert same_subspace(conjugate_algebra(g, alg).basis, symmetry_algebra(ft).basis)


def test_adjoint_of_y_translation_under_shear():
    from edsaffine.affine import AffineElement

    g = AffineElement(((1, 0), (-3, 1)))
    v = adjoint(g, AffineVectorField.from_xi_eta(1, 0))
    assert in_span(v, [AffineVectorField.from_xi_eta(1, -3)])
