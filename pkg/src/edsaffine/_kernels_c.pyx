# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the kernels in ``_kernels_py``; same signatures."""
import numpy as np

cimport cython
from libc.math cimport fabs, pow


def poly_mul(dict f, dict g):
    cdef dict out = {}
    cdef list fkeys, fvals
    cdef Py_ssize_t i, n
    cdef object mg, cg, m, c
    if len(f) < len(g):
        f, g = g, f
    fkeys = list(f.keys())
    fvals = list(f.values())
    n = len(fkeys)
    for mg, cg in g.items():
        for i in range(n):
            m = fkeys[i] + mg
            c = out.get(m, 0) + fvals[i] * cg
            if c:
                out[m] = c
            else:
                out.pop(m, None)
    return out


def poly_eval_batch(exps, coeffs, points):
    if len(coeffs) == 0:
        return [0.0] * len(points), [0.0] * len(points)
    cdef long long[:, :] e = np.ascontiguousarray(exps, dtype=np.int64).reshape(len(coeffs), -1)
    cdef double[:] c = np.ascontiguousarray(coeffs, dtype=np.float64)
    cdef double[:, :] p = np.ascontiguousarray(points, dtype=np.float64).reshape(len(points), -1)
    cdef Py_ssize_t npts = p.shape[0], nterms = e.shape[0], nvars = e.shape[1]
    cdef Py_ssize_t i, j, k
    cdef double t, v, m
    cdef long long ex
    values = np.empty(npts)
    mags = np.empty(npts)
    cdef double[:] vv = values
    cdef double[:] mm = mags
    for i in range(npts):
        v = 0.0
        m = 0.0
        for j in range(nterms):
            t = c[j]
            for k in range(nvars):
                ex = e[j, k]
                if ex == 1:
                    t *= p[i, k]
                elif ex:
                    t *= pow(p[i, k], <double>ex)
            v += t
            m += fabs(t)
        vv[i] = v
        mm[i] = m
    return values.tolist(), mags.tolist()
