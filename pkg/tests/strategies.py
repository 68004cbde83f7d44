"""Hypothesis strategies shared by the test modules."""
from fractions import Fraction

from hypothesis import strategies as st

from edsaffine.symkernel.expr import Const, Var, func

small_ints = st.integers(min_value=-4, max_value=4)
nonzero_ints = small_ints.filter(bool)
fractions = st.builds(Fraction, small_ints, st.integers(min_value=1, max_value=3))
nonzero_fractions = fractions.filter(bool)


def variables(names=("x", "y")):
    return st.sampled_from([Var(n) for n in names])


def polynomials(names=("x", "y"), max_leaves=6):
    leaves = st.one_of(variables(names), st.builds(Const, small_ints))
    return st.recursive(
        leaves,
        lambda sub: st.one_of(
            st.builds(lambda a, b: a + b, sub, sub),
            st.builds(lambda a, b: a * b, sub, sub),
            st.builds(lambda a, k: a ** k, sub, st.integers(min_value=1, max_value=2)),
        ),
        max_leaves=max_leaves,
    )


def rational_functions(names=("x", "y")):
    return st.builds(lambda p, q: p / (q * q + 1), polynomials(names), polynomials(names, 3))


def expressions(names=("x", "y"), max_leaves=6):
    """Polynomials with exp, sin, cos of polynomial arguments and integer powers."""
    leaves = st.one_of(variables(names), st.builds(Const, small_ints))
    return st.recursive(
        leaves,
        lambda sub: st.one_of(
            st.builds(lambda a, b: a + b, sub, sub),
            st.builds(lambda a, b: a * b, sub, sub),
            st.builds(lambda a, k: a ** k, sub, st.integers(min_value=1, max_value=3)),
            st.builds(lambda t, a: func(t, a), st.sampled_from(["exp", "sin", "cos"]), sub),
        ),
        max_leaves=max_leaves,
    )
