from __future__ import annotations

from fractions import Fraction as F

import pytest

from vimairy.exactcore import R, S_MINUS_R, BiPoly, Poly, bipoly_mul
from vimairy.multiplier import (
    MultiplierKind,
    MultiplierSpec,
    build_lambda,
    lambda_residual,
    shift_potential,
    shifted_residual,
)


def test_parse_strings():
    assert MultiplierSpec.parse("ps1").kind is MultiplierKind.PARTIAL_SUM_1
    assert MultiplierSpec.parse("ps2").kind is MultiplierKind.PARTIAL_SUM_2
    spec = MultiplierSpec.parse("series:12")
    assert (spec.kind, spec.order) == (MultiplierKind.SERIES, 12)
    assert spec.label() == "series:12"


@pytest.mark.parametrize("text", ["series:0", "series:-1", "series:", "ps3", "", "series:1.5"])
def test_parse_rejects(text):
    with pytest.raises(ValueError):
        MultiplierSpec.parse(text)


def test_partial_sums_require_linear_potential():
    with pytest.raises(ValueError):
        MultiplierSpec(MultiplierKind.PARTIAL_SUM_2, Poly([0, 0, 1]))
    with pytest.raises(ValueError):
        MultiplierSpec(MultiplierKind.SERIES, R, 0)


def test_ps1_kernel():
    k = build_lambda(MultiplierSpec.parse("ps1"))
    assert k.expanded == S_MINUS_R


def test_ps2_kernel():
    k = build_lambda(MultiplierSpec.parse("ps2"))
    cubic = bipoly_mul(S_MINUS_R, bipoly_mul(S_MINUS_R, S_MINUS_R))
    assert k.expanded == S_MINUS_R + bipoly_mul(BiPoly({(0, 1): F(-1, 6)}), cubic)


def test_series3_shifted_coeffs():
    k = build_lambda(MultiplierSpec.parse("series:3"))
    assert k.shifted_coeffs == (Poly(), Poly.constant(1), Poly(), Poly([0, F(-1, 6)]))
    assert k.expanded == build_lambda(MultiplierSpec.parse("ps2")).expanded


def test_shift_potential():
    assert shift_potential(R) == [R, Poly.constant(1)]
    # s^2 = u^2 + 2 r u + r^2
    assert shift_potential(Poly([0, 0, 1])) == [Poly([0, 0, 1]), Poly([0, 2]), Poly.constant(1)]


@pytest.mark.parametrize("text", ["ps1", "ps2", "series:1", "series:5", "series:12", "series:20"])
def test_boundary_conditions(text):
    k = build_lambda(MultiplierSpec.parse(text))
    assert k.expanded.subs_s_equals_r() == Poly()
    assert k.expanded.diff_s().subs_s_equals_r() == Poly.constant(1)


def test_ps1_residual():
    k = build_lambda(MultiplierSpec.parse("ps1"))
    assert lambda_residual(k) == BiPoly({(2, 0): 1, (1, 1): -1})


def test_zero_potential_residual_vanishes():
    spec = MultiplierSpec(MultiplierKind.SERIES, Poly(), 2)
    k = build_lambda(spec)
    assert k.expanded == S_MINUS_R
    assert lambda_residual(k).is_zero()


@pytest.mark.parametrize("K", [2, 3, 6, 12, 17])
def test_residual_is_pure_truncation_tail(K):
    k = build_lambda(MultiplierSpec.parse(f"series:{K}"))
    tail = shifted_residual(k)
    assert all(c.is_zero() for c in tail[: K - 1])
    assert not tail[K - 1].is_zero() or not tail[K].is_zero()
    # shifted-basis residual agrees with the monomial-basis computation
    from vimairy.exactcore import expand_shifted_powers

    assert expand_shifted_powers(tail) == lambda_residual(k)


def test_quadratic_potential_residual_tail():
    spec = MultiplierSpec(MultiplierKind.SERIES, Poly([1, 0, F(1, 2)]), 9)
    tail = shifted_residual(build_lambda(spec))
    assert all(c.is_zero() for c in tail[:8])


def test_prefix_stable():
    long = build_lambda(MultiplierSpec.parse("series:30")).shifted_coeffs
    for K in (1, 4, 9, 17):
        short = build_lambda(MultiplierSpec.parse(f"series:{K}")).shifted_coeffs
        assert short == long[: K + 1]


def test_shifted_coeff_degree_bound():
    coeffs = build_lambda(MultiplierSpec.parse("series:30")).shifted_coeffs
    assert coeffs[2].is_zero()
    # deg a_{n+2} = max(1 + deg a_n, deg a_{n-1}) starting from a_1 = 1
    for n, a in enumerate(coeffs):
        if n % 2 == 1:
            assert a.degree == (n - 1) // 2
        elif n >= 4:
            assert a.degree == (n - 4) // 2


def test_known_low_coefficients():
    # a_4 = -(r a_2 + a_1)/12, a_5 = -(r a_3 + a_2)/20
    a = build_lambda(MultiplierSpec.parse("series:6")).shifted_coeffs
    assert a[4] == Poly.constant(F(-1, 12))
    assert a[5] == Poly([0, 0, F(1, 120)])
    assert a[6] == Poly([0, F(1, 120)])
