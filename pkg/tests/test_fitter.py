import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lacuna.classical import ball_cap_poly
from lacuna.errors import DomainError, RankDeficient
from lacuna.exact import BiPoly, PiNumber
from lacuna.fitter import (SampleSet, detect_degree, disk_segment_area, fit_poly,
                           monomials)
from lacuna.oracle import adaptive_quad
from lacuna.tube import tube_cut_poly


def line_samples():
    b = np.linspace(-1, 1, 10)
    return SampleSet(b[:, None], 2 * b + 1, ("b",))


def test_monomial_order():
    assert monomials(1, 3) == [(0,), (1,), (2,), (3,)]
    assert monomials(2, 2) == [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]
    with pytest.raises(ValueError):
        monomials(3, 1)


def test_fit_line():
    rep = fit_poly(line_samples(), 1)
    assert rep.max_abs_residual < 1e-12
    assert rep.coefficients == pytest.approx([1.0, 2.0], abs=1e-13)
    assert len(rep.coefficients) == 2


def test_fit_constant():
    s = SampleSet(np.arange(5.0)[:, None], np.full(5, 3.25), ("x",))
    rep = fit_poly(s, 0)
    assert rep.max_abs_residual == 0.0
    assert rep.coefficients == [3.25]


def test_fit_tube_cut_poly(spec21):
    p = tube_cut_poly(spec21)
    e = float(spec21.epsilon)
    bmax = math.sqrt(1 - e)
    grid_a = np.linspace(0, bmax / (2 * e), 8)
    grid_b = np.linspace(0, bmax / 2, 8)
    s = SampleSet.from_function(lambda a, b: p(a, b), [grid_a, grid_b], ("a", "b"))
    rep = fit_poly(s, 3)
    assert rep.max_abs_residual < 1e-10
    det = detect_degree(s, 8)
    assert det.degree == 3 == 2 * spec21.k - 1


def test_detect_linear():
    assert detect_degree(line_samples(), 5).degree == 1


def test_rank_deficient():
    s = SampleSet(np.array([[0.0], [1.0]]), np.array([1.0, 2.0]), ("x",))
    with pytest.raises(RankDeficient):
        fit_poly(s, 2)
    dup = SampleSet(np.array([[1.0]] * 6), np.ones(6), ("x",))
    with pytest.raises(RankDeficient):
        fit_poly(dup, 1)


def test_evaluate_report():
    rep = fit_poly(line_samples(), 2)
    assert rep(0.5) == pytest.approx(2.0, abs=1e-12)


# ---------------------------------------------------------------- recovering exact polynomials

def _random_bipoly(rng, degree):
    terms = {}
    for i, j in monomials(2, degree):
        terms[(i, j)] = PiNumber({int(rng.integers(0, 3)): Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 6)))})
    return BiPoly(terms)


@pytest.mark.parametrize("degree", [0, 1, 3, 5, 7])
def test_recovers_bipoly(degree):
    rng = np.random.default_rng(degree)
    p = _random_bipoly(rng, degree)
    ncoef = len(monomials(2, degree))
    side = math.ceil(math.sqrt(2 * ncoef)) + 1
    g = np.linspace(-1, 1, side)
    s = SampleSet.from_function(lambda a, b: p(a, b), [g, np.linspace(0, 1.5, side)], ("a", "b"))
    rep = fit_poly(s, degree)
    assert rep.max_abs_residual < 1e-10
    for (exps, coef) in zip(rep.monomials, rep.coefficients):
        ref = float(p.terms.get(exps, PiNumber()))
        assert coef == pytest.approx(ref, rel=1e-8, abs=1e-8 * max(1.0, abs(ref)))


@pytest.mark.parametrize("N", [1, 3, 5, 7])
def test_recovers_unipoly(N):
    poly = ball_cap_poly(N)
    h = np.linspace(-1, 1, 4 * (N + 1))
    rep = fit_poly(SampleSet(h[:, None], poly(h), ("h",)), N)
    assert rep.max_abs_residual < 1e-10
    for (e,), coef in zip(rep.monomials, rep.coefficients):
        ref = float(poly.terms.get(e, PiNumber()))
        assert coef == pytest.approx(ref, rel=1e-8, abs=1e-10)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.floats(-3, 3), min_size=1, max_size=6),
       st.floats(1e-14, 1e-1), st.floats(1.0, 1e6))
def test_detect_monotone_in_tol(coefs, tol, factor):
    x = np.linspace(-1, 1, 40)
    y = np.polynomial.polynomial.polyval(x, coefs) + 1e-4 * np.sin(7 * x)
    s = SampleSet(x[:, None], y, ("x",))
    tight = detect_degree(s, 10, tol).degree
    loose = detect_degree(s, 10, tol * factor).degree
    if tight is not None:
        assert loose is not None and loose <= tight


# ---------------------------------------------------------------- disk segment

def test_disk_segment_examples():
    assert disk_segment_area(0.0) == pytest.approx(math.pi / 2, rel=1e-15)
    assert disk_segment_area(1.0) == 0.0
    ref = adaptive_quad(lambda x: 2 * np.sqrt(np.maximum(1 - x * x, 0)), 0.5, 1.0, 1e-12)
    assert disk_segment_area(0.5) == pytest.approx(ref, abs=1e-9)
    assert disk_segment_area(0.5) == pytest.approx(math.pi / 3 - math.sqrt(3) / 4, rel=1e-14)
    with pytest.raises(DomainError):
        disk_segment_area(1.01)


def test_newton_control_none_for_every_dmax():
    b = np.linspace(-0.95, 0.95, 200)
    s = SampleSet(b[:, None], disk_segment_area(b), ("b",))
    full = detect_degree(s, 15, 1e-6)
    assert full.degree is None
    # a prefix of the same history answers every smaller dmax
    for dmax in range(16):
        assert detect_degree(s, dmax, 1e-6).degree is None


# ---------------------------------------------------------------- CSV

def test_csv_roundtrip():
    s = SampleSet.from_function(lambda a, b: a * b + 1 / 3, [[0.1, 0.2], [1.0, 2.5, 7.0]], ("a", "b"))
    text = s.to_csv()
    assert text.splitlines()[0] == "a,b,value"
    back = SampleSet.from_csv(text)
    assert np.array_equal(back.inputs, s.inputs) and np.array_equal(back.values, s.values)
    assert back.to_csv() == text


def test_csv_requires_value_column():
    with pytest.raises(ValueError):
        SampleSet.from_csv("a,b\n1,2\n")


def test_sampleset_validation():
    with pytest.raises(ValueError):
        SampleSet(np.zeros((0, 1)), np.zeros(0), ("x",))
    with pytest.raises(ValueError):
        SampleSet(np.array([[0.0]]), np.array([np.nan]), ("x",))


def test_fit_report_json():
    data = fit_poly(line_samples(), 1).to_json()
    assert set(data) == {"degree", "coefficients", "monomials", "max_abs_residual", "rms_residual"}


# residual-vs-degree table from the first calibration run (odd degrees; each even
# degree repeats the odd one below it because the target is odd about b = 0)
NEWTON_FLOOR = {7: 6.4259e-4, 9: 1.8676e-4, 11: 5.8282e-5, 13: 1.8931e-5, 15: 6.2837e-6}


def test_newton_residual_table_pinned():
    b = np.linspace(-0.95, 0.95, 200)
    s = SampleSet(b[:, None], disk_segment_area(b), ("b",))
    history = {r.degree: r.max_abs_residual for r in detect_degree(s, 15, 1e-6).history}
    for d, ref in NEWTON_FLOOR.items():
        assert history[d] == pytest.approx(ref, rel=1e-3)
        if d < 15:
            assert history[d + 1] == pytest.approx(history[d], rel=1e-6)
    assert min(v for d, v in history.items() if d >= 8) >= 6.0e-6
