"""Acceptance suite: one test per exit criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -s`` (or -v) to see the lines;
they are also written to the terminal summary.
"""
import random
import time
from fractions import Fraction

import pytest

from edsaffine.affine import (
    BasisChange,
    NonGraphError,
    change_basis,
    maurer_cartan_coframe,
    random_element,
    transform_ode,
    verify_structure_equations,
)
from edsaffine.classify import CLAIMED_DIMENSION, CLAIRAUT, classify, verify_table_row, witness_holds
from edsaffine.exterior import ChartMap, d, function_differential, parse_form, pullback, random_form, random_function, same_span, wedge
from edsaffine.pfaffian import (
    EXAMPLE_A,
    EXAMPLE_B_CHART,
    PfaffianSystem,
    cauchy_system,
    example_b_coframe,
    example_b_integrals,
    example_b_relations,
    example_b_structure,
    first_integrals_by_quadrature,
    integrals_independent,
    is_completely_integrable,
    is_solvable_system,
    parse_fixture,
)
from edsaffine.symkernel.numeric import DomainError, is_zero, parameter_values
from edsaffine.symkernel.parser import parse
from edsaffine.symmetry import conjugate_algebra, same_subspace, symmetry_algebra

import pfaffian_corpus

pytestmark = pytest.mark.acceptance

LINES = []


@pytest.fixture
def announce(request):
    """Record and print the verdict line for one criterion."""
    tr = request.config.pluginmanager.get_plugin("terminalreporter")

    def emit(n, ok, what, detail=""):
        line = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {what}" + (f"  [{detail}]" if detail else "")
        LINES.append(line)
        if tr is not None:
            tr.write_line("")
            tr.write_line(line)
        else:
            print(line)
        return ok

    return emit




# -- 1 ----------------------------------------------------------------------------


def test_criterion_1_structure_equations(announce):
    t = time.perf_counter()
    w = maurer_cartan_coframe()
    ok, residuals = verify_structure_equations(w)
    rng = random.Random(1)
    changed = []
    for _ in range(20):
        a, b, c = (Fraction(rng.randint(-6, 6) or 1, rng.randint(1, 4)) for _ in range(3))
        changed.append(verify_structure_equations(change_basis(w, BasisChange(a, b, c)))[0])
    good = ok and all(r.is_zero for r in residuals) and all(changed)
    announce(1, good, "six structure equations exact; 20 random basis changes",
             f"{sum(changed)}/20 changes, {time.perf_counter() - t:.1f}s")
    assert good


# -- 2 ----------------------------------------------------------------------------


def test_criterion_2_example_a(announce):
    sigma = parse_fixture(EXAMPLE_A)
    R4 = sigma.chart
    theta = sigma.generators[0]
    x, y, z, p = R4.vars
    ch = cauchy_system(sigma)
    expected_span = [parse_form(R4, "dp"), parse_form(R4, "dx + 2*p*dy"), theta]
    us = first_integrals_by_quadrature(expected_span)
    u3, u2, u1 = p, x + 2 * y * p, z + x * p + y * p**2
    recovered = all(any(is_zero(u - e) for u in us) for e in (u1, u2, u3))
    df = lambda h: function_differential(R4, h)  # noqa: E731
    identity = theta == df(u1) - u2 * df(u3)
    checks = {
        "rank 3": ch.rank == 3,
        "span": same_span(ch.generators, expected_span),
        "solvable": is_solvable_system(expected_span, sigma),
        "integrals": recovered and integrals_independent(us, R4),
        "theta = du1 - u2 du3": identity,
    }
    good = all(checks.values())
    announce(2, good, "example (a): Cauchy system, quadrature, theta identity",
             ", ".join(k for k, v in checks.items() if not v) or "all checks")
    assert good


# -- 3 ----------------------------------------------------------------------------


def _example_b_checks(as_printed):
    R6 = EXAMPLE_B_CHART
    w = example_b_coframe()
    struct = [(d(a) - b).is_zero for a, b in zip(w, example_b_structure(as_printed=as_printed))]
    sigma = PfaffianSystem(R6, [w[2], w[3], w[4]])
    W = [w[1], w[3], w[2], w[4], w[5]]  # w2, w4, w3, w5, w6
    us = first_integrals_by_quadrature(W)
    expected = example_b_integrals()
    recovered = all(any(is_zero(u - e) for u in us) for e in expected)
    rel = [r.is_zero for r in example_b_relations(expected, as_printed=as_printed)]
    return {
        "structure equations": all(struct),
        "solvable system": same_span(W, w[1:]) and is_solvable_system(W, sigma),
        "five integrals": recovered and integrals_independent(us, R6),
        "three relations": all(rel),
    }, struct, rel


def test_criterion_3_example_b(announce):
    """Faithful to the published statements: dw6 with -x^2 w1^w4 and the
    third relation w5 - x w3 = du4 - u5 du1."""
    checks, struct, rel = _example_b_checks(as_printed=True)
    good = all(checks.values())
    failed = [k for k, v in checks.items() if not v]
    detail = "all checks" if good else (
        "fails as printed: " + ", ".join(failed)
        + f" (structure {struct.count(True)}/6, relations {rel.count(True)}/3)"
    )
    announce(3, good, "example (b): structure equations, solvable system, integrals, relations", detail)
    assert good


def test_example_b_holds_after_correcting_two_terms():
    # not a criterion: the same checks with +x^2 w1^w4 in dw6 and x^2 w4 in the third relation
    checks, struct, rel = _example_b_checks(as_printed=False)
    assert all(checks.values()), checks


# -- 4 ----------------------------------------------------------------------------


def _clairaut_domain(pt):
    if Fraction(pt["x"]) ** 2 <= 2 * Fraction(pt["y"]):
        raise DomainError("outside x^2 > 2y")


def test_criterion_4_symmetry_dimensions(announce):
    cases = [("0", 5), ("y/x", 4), ("x", 3), ("log(x)", 2), ("exp(x)", 2)]
    cases += [(f"x^({a})", 2) for a in (2, 3, 5, -2)]
    cases += [("-x/y", 2), ("-y/x", 2), ("y/x + x^4", 2), ("y/x + x", 2)]
    bad = []
    for f, dim in cases:
        alg = symmetry_algebra(parse(f))  # both paths for rational f; raises if they disagree
        if alg.dimension != dim or (alg.path == "both" and alg.numeric_dimension != dim):
            bad.append(f"{f}: {alg.dimension}")
    with parameter_values({"a": [2, 3, 5, -2]}):
        alg = symmetry_algebra(parse("x^a"))
        if alg.dimension != 2 or set(alg.parameter_dimensions.values()) != {2}:
            bad.append(f"x^a: {alg.parameter_dimensions}")
    clairaut = symmetry_algebra(parse(CLAIRAUT), path="numeric", check=_clairaut_domain)
    if clairaut.dimension != 2:
        bad.append(f"Clairaut: {clairaut.dimension}")
    s = clairaut.singular_values
    gap = s[3] / s[0] if len(s) > 4 else None
    good = not bad
    announce(4, good, f"{len(cases) + 2} symmetry dimensions (tolerance 1e-8 relative)",
             ", ".join(bad) or f"Clairaut smallest kept singular value ratio {gap:.1e}")
    assert good


# -- 5 ----------------------------------------------------------------------------

CORPUS_5 = {
    "3": ("I.1", (True, True, True, True)),
    "(y+2)/(x+1)": ("I.2.1", (True, True, True, True)),
    "x": ("II.1", (False, True, True, True)),
    "exp(x)": ("II.2", (False, False, True, True)),
    "-x/y": ("II.3.1", (False, True, False, True)),
    "-y/x": ("II.3.2", (False, True, False, True)),
    "y/x + x^4": ("II.5", (False, True, False, False)),
    "y/x + x": ("II.6", (False, False, True, False)),
    "y/x + x^3": ("II.8", (False, False, False, False)),
}


def test_criterion_5_classification(announce):
    bad, witnesses = [], 0
    for f, (case, sig) in CORPUS_5.items():
        res = classify(f)
        if (res.case, res.dimension, res.signature) != (case, CLAIMED_DIMENSION[case], sig):
            bad.append(f"{f} -> {res.case}/{res.dimension}")
        if res.witness is not None:
            witnesses += 1
            back = transform_ode(res.witness.inverse(), res.standard_form)
            if not (witness_holds(res.witness, parse(f), res.standard_form) and is_zero(back - parse(f))):
                bad.append(f"{f}: witness")
    good = not bad
    announce(5, good, "9 right-hand sides land in their cases", ", ".join(bad) or f"{witnesses} witnesses round-trip")
    assert good


# -- 6 ----------------------------------------------------------------------------


def test_criterion_6_invariance(announce):
    t = time.perf_counter()
    rng = random.Random(6)
    gs = []
    while len(gs) < 10:
        gs.append(random_element(rng))
    base = {f: (classify(f), symmetry_algebra(parse(f))) for f in CORPUS_5}
    bad, runs, skipped = [], 0, 0
    for g in gs:
        for f, (res, alg) in base.items():
            try:
                ft = transform_ode(g, parse(f))
            except NonGraphError:
                skipped += 1
                continue
            runs += 1
            rt = classify(ft)
            if (rt.case, rt.signature, rt.dimension) != (res.case, res.signature, res.dimension):
                bad.append(f"{f} under {g.params()}: {rt.case}")
            if not same_subspace(conjugate_algebra(g, alg).basis, symmetry_algebra(ft).basis):
                bad.append(f"{f} under {g.params()}: algebra")
    good = not bad and runs >= 80
    announce(6, good, "labels, signatures, dimensions and algebras invariant under 10 random g",
             ", ".join(bad[:3]) or f"{runs} transformed ODEs, {skipped} vertical images, {time.perf_counter() - t:.0f}s")
    assert good


# -- 7 ----------------------------------------------------------------------------


def test_criterion_7_table(announce):
    instances = {1: ["s^2", "s^3 - s"], 2: ["s + 1", "s^2"], 3: ["s", "s^2"], 4: ["s^2", "s^3 + 1"],
                 5: ["s", "s^2 + 1"], 6: ["s", "s^2 + 2"], 7: ["s", "s^2 + 1"]}
    bad, methods = [], {}
    for row, Fs in instances.items():
        for F in Fs:
            chk = verify_table_row(row, parse(F))
            methods.setdefault(chk.method, []).append(row)
            if not chk.ok:
                bad.append(f"row {row}, F = {F}")
            if row == 7 and not chk.method.startswith("numeric"):
                bad.append("row 7 not numeric")
    good = not bad
    summary = "; ".join(f"{m}: rows {sorted(set(r))}" for m, r in methods.items())
    announce(7, good, "table rows 1-7, two F instances each", ", ".join(bad) or summary)
    assert good


# -- 8 ----------------------------------------------------------------------------


def test_criterion_8_property_suites(announce):
    rng = random.Random(8)
    names = pfaffian_corpus.ALL
    bad = []
    for name in names:
        sigma = pfaffian_corpus.load(name)
        chart = sigma.chart
        for th in sigma.generators:
            if not d(d(th)).is_zero:
                bad.append(f"{name}: d d")
        a = random_form(chart, 1, rng)
        b = random_form(chart, 2, rng)
        if d(wedge(a, b)) != wedge(d(a), b) - wedge(a, d(b)):
            bad.append(f"{name}: Leibniz")
        th = sigma.generators[0]
        if d(wedge(th, a)) != wedge(d(th), a) - wedge(th, d(a)):
            bad.append(f"{name}: Leibniz on generator")
        phi = ChartMap(chart, chart, [v + random_function(chart, rng, 1) for v in chart.vars])
        if pullback(phi, d(th)) != d(pullback(phi, th)):
            bad.append(f"{name}: pullback")
        ch = cauchy_system(sigma)
        if is_completely_integrable(sigma) and not ch.same_span(sigma):
            bad.append(f"{name}: Ch != Sigma for integrable Sigma")
        if not is_completely_integrable(ch):
            bad.append(f"{name}: Ch not integrable")
    good = not bad and len(names) >= 10 and len(pfaffian_corpus.RANDOM) >= 5
    announce(8, good, f"d d = 0, graded Leibniz, pullback and d, Ch(Sigma) facts on {len(names)} systems",
             ", ".join(bad) or f"{len(pfaffian_corpus.RANDOM)} random integrable systems included")
    assert good
