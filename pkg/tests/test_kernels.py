"""The compiled kernels agree with the pure-Python fallback."""
import os
import subprocess
import sys

import pytest
from hypothesis import given
from hypothesis import strategies as st

from edsaffine import _kernels_py, kernels
from edsaffine.symkernel import poly as P

compiled = pytest.importorskip("edsaffine._kernels_c")

monomials = st.lists(st.integers(min_value=0, max_value=4), min_size=3, max_size=3).map(P.pack)
polys = st.dictionaries(monomials, st.integers(min_value=-10**30, max_value=10**30).filter(bool), max_size=12)


def test_backend_is_selected_at_import():
    assert kernels.BACKEND in ("cython", "python")


def test_environment_forces_fallback():
    code = "from edsaffine import kernels; print(kernels.BACKEND)"
    env = dict(os.environ, EDSAFFINE_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


@given(polys, polys)
def test_poly_mul_agrees(f, g):
    assert compiled.poly_mul(f, g) == _kernels_py.poly_mul(f, g)


@given(
    st.lists(st.lists(st.integers(min_value=0, max_value=3), min_size=2, max_size=2), min_size=1, max_size=8),
    st.lists(st.lists(st.floats(min_value=-3, max_value=3), min_size=2, max_size=2), min_size=1, max_size=5),
    st.data(),
)
def test_poly_eval_batch_agrees(exps, points, data):
    coeffs = data.draw(st.lists(st.integers(-9, 9), min_size=len(exps), max_size=len(exps)))
    vc, mc = compiled.poly_eval_batch(exps, coeffs, points)
    vp, mp = _kernels_py.poly_eval_batch(exps, coeffs, points)
    for a, b in zip(list(vc) + list(mc), list(vp) + list(mp)):
        assert a == pytest.approx(b, rel=1e-12, abs=1e-12)
