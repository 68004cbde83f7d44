"""Pure-Python versions of the hot kernels.

Polynomials are dicts mapping a packed monomial (an int holding one
exponent field per variable) to an integer coefficient, so multiplying
monomials is integer addition.
"""


def poly_mul(f, g):
    if len(f) < len(g):
        f, g = g, f
    out = {}
    get = out.get
    fitems = list(f.items())
    for mg, cg in g.items():
        for mf, cf in fitems:
            m = mf + mg
            c = get(m, 0) + cf * cg
            if c:
                out[m] = c
            else:
                out.pop(m, None)
    return out


def poly_eval_batch(exps, coeffs, points):
    """Evaluate sum(c * prod(x**e)) at each point.

    Returns the values and the matching sums of absolute term values, the
    latter being the scale used by relative zero tests.
    """
    values = []
    mags = []
    terms = [(tuple(e), float(c)) for e, c in zip(exps, coeffs)]
    for pt in points:
        pt = [float(v) for v in pt]
        v = 0.0
        m = 0.0
        for e, c in terms:
            t = c
            for xi, k in zip(pt, e):
                if k:
                    t *= xi**k
            v += t
            m += abs(t)
        values.append(v)
        mags.append(m)
    return values, mags
