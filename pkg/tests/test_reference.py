from __future__ import annotations

from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from vimairy.engine import PAPER_PROBLEM, run
from vimairy.exactcore import Poly
from vimairy.multiplier import MultiplierSpec
from vimairy.reference import (
    EVAL_TOLERANCE,
    airy_prefix_length,
    bound_check,
    bound_profile,
    check_lemmas,
    choose_exact_degree,
    exact_series,
    knot_factorial,
    recursion_defects,
    sup_error_bound,
    tail_mass,
)

PS2 = MultiplierSpec.parse("ps2")
PSI1 = Poly([1, 0, F(-1, 2), F(-1, 6), 0, F(1, 24), F(1, 120)])
PSI2_TAIL = [F(1, 180), F(-1, 420), F(-1, 1440), F(-1, 15120), F(1, 72576), F(1, 100800), F(1, 950400)]
PSI2 = Poly([1, 0, F(-1, 2), F(-1, 6), F(1, 24), F(1, 30), *PSI2_TAIL])


def test_exact_series_head():
    assert exact_series(6).coefficients == (1, 0, F(-1, 2), F(-1, 6), F(1, 24), F(1, 30), F(1, 240))


def test_exact_series_single_steps():
    a = exact_series(4)
    assert a[3] == -(a[1] + a[0]) / (2 * 3) == F(-1, 6)
    assert a[4] == -(a[2] + a[1]) / (3 * 4) == F(1, 24)


def test_exact_series_rejects_small_degree():
    with pytest.raises(ValueError):
        exact_series(1)


def test_exact_series_solves_ode():
    # independent check: w'' + (r + 1) w vanishes below the truncation
    w = exact_series(30).as_poly()
    res = w.diff().diff() + Poly([1, 1]) * w
    assert all(res[k] == 0 for k in range(29))
    assert recursion_defects(exact_series(60)) == []


def test_recursion_defects_detects_tampering():
    from vimairy.reference import ExactSeries

    coeffs = list(exact_series(10).coefficients)
    coeffs[7] += 1
    assert 7 in recursion_defects(ExactSeries(tuple(coeffs)))


def test_airy_prefix_lengths():
    ex = exact_series(20)
    assert airy_prefix_length(Poly.constant(1), ex) == 2
    assert airy_prefix_length(PSI1, ex) == 4
    assert airy_prefix_length(PSI2, ex) == 6
    assert airy_prefix_length(ex.as_poly(), ex) == ex.degree + 1


def test_airy_prefix_needs_long_enough_series():
    with pytest.raises(ValueError):
        airy_prefix_length(PSI2, exact_series(5))


def test_tail_mass_examples():
    ex = exact_series(20)
    assert tail_mass(PSI1, ex, 4, F(1)) == F(1, 20)
    assert tail_mass(PSI1, ex, 50, F(3)) == 0
    # oracle: sum of the magnitudes of the listed coefficients a_6..a_12
    assert tail_mass(PSI2, ex, 6, F(1)) == sum(abs(c) for c in PSI2_TAIL)
    assert sum(abs(c) for c in PSI2_TAIL) == F(87037, 9979200)


@given(
    st.lists(st.fractions(-2, 2, max_denominator=9), max_size=12),
    st.integers(0, 12),
    st.fractions(0, 3, max_denominator=5),
    st.fractions(0, 3, max_denominator=5),
)
def test_tail_mass_monotone(coeffs, p, R1, R2):
    w = Poly(coeffs)
    lo, hi = sorted((R1, R2))
    assert tail_mass(w, None, p + 1, hi) <= tail_mass(w, None, p, hi)
    assert tail_mass(w, None, p, lo) <= tail_mass(w, None, p, hi)


def test_check_lemmas_on_three_iterations():
    trace = run(PAPER_PROBLEM, PS2, 3)
    report = check_lemmas(trace, exact_series(40))
    assert report.all_pass
    assert report.prefix_lengths == [2, 4, 6, 8]
    assert report.degrees == [0, 6, 12, 18]


def test_check_lemmas_vacuous():
    assert check_lemmas(run(PAPER_PROBLEM, PS2, 0)).all_pass


def test_check_lemmas_negative_controls():
    rows = list(run(PAPER_PROBLEM, PS2, 3).profiles)
    doctored = rows[2].padded(len(rows[2]))
    doctored[8] = F(2)
    rows[2] = Poly(doctored)
    report = check_lemmas(rows)
    assert not report.l3_bounded
    assert report.bound_violations == [{"n": 2, "k": 8, "value": F(2)}]

    # a jump of degree 12 breaks support growth; a reset breaks prefix growth
    bad = [Poly.constant(1), Poly.monomial(F(1, 1000), 12) + Poly([1])]
    report = check_lemmas(bad)
    assert not report.l2_support_growth
    assert not report.l1_prefix_growth


def test_bound_profile_examples():
    b = bound_profile(12)
    assert (b.m, b.a, b.bound_value) == (2, 0, F(1, 550))
    assert bound_profile(6).bound_value == F(1, 10)
    assert bound_profile(3).bound_value == 1
    assert F(1, 950400) <= bound_profile(12).bound_value
    assert F(1, 180) <= bound_profile(6).bound_value


@pytest.mark.parametrize("k", range(8, 60))
def test_bound_ratio(k):
    ratio = bound_profile(k + 6).bound_value / bound_profile(k).bound_value
    assert ratio <= F(2, (k + 5) * (k + 4))
    assert bound_profile(k).bound_value > 0


def test_bound_check_passes_and_zero_entries():
    report = bound_check(run(PAPER_PROBLEM, PS2, 4))
    assert report.all_pass
    assert all(e.k >= 8 for e in report.entries)
    zero = bound_check([Poly([0] * 9 + [1])])
    assert zero.entries[0].ok  # k = 8 coefficient is zero
    assert not zero.entries[1].ok  # |1| exceeds 2/(8*7) at k = 9


def test_knot_factorial_partial_definition():
    assert knot_factorial(6) == 60
    assert knot_factorial(9) == 336
    assert knot_factorial(12) == 11 * 10 * 9 * 60
    assert knot_factorial(8) is None
    assert knot_factorial(3) is None


def test_choose_exact_degree_rule():
    R = F(2)
    D = choose_exact_degree(R)
    alpha = exact_series(D + 3).coefficients
    assert all(abs(alpha[k]) * R**k < EVAL_TOLERANCE for k in range(D, D + 4))
    # minimality
    assert not all(abs(alpha[k]) * R**k < EVAL_TOLERANCE for k in range(D - 1, D + 3))


def test_sup_error_bound_shrinks():
    trace = run(PAPER_PROBLEM, PS2, 6)
    ex = exact_series(choose_exact_degree(F(2)))
    bounds = [sup_error_bound(p, ex, F(2)) for p in trace.profiles]
    assert all(b > a for a, b in zip(bounds[1:], bounds))
