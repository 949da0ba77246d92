import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from hyprec.errors import GammaOverflow, PoleError
from hyprec.specialfun import (
    digamma, gamma, gamma_ratio, log_gamma_signed, near_pole, pochhammer, reciprocal_gamma, sinpi,
)

SQRT_PI = math.sqrt(math.pi)


def test_gamma_known_values():
    assert gamma(0.5) == pytest.approx(1.7724538509055160, rel=1e-15)
    assert gamma(5) == 24
    assert gamma(-0.5) == pytest.approx(-3.5449077018110320, rel=1e-14)


def test_gamma_frozen_values():
    assert gamma(0.3) == pytest.approx(2.991568987687591, rel=1e-14)
    assert gamma(-2.5) == pytest.approx(-0.9453087204829419, rel=1e-14)


@pytest.mark.parametrize("x", [0, -1, -7, -1e-14])
def test_gamma_poles_raise(x):
    with pytest.raises(PoleError):
        gamma(x)


def test_gamma_overflow_raises():
    with pytest.raises(GammaOverflow):
        gamma(172.0)


def test_reciprocal_gamma_examples():
    assert reciprocal_gamma(0) == 0
    assert reciprocal_gamma(-3) == 0
    assert reciprocal_gamma(2) == 1
    assert reciprocal_gamma(-4.5) == pytest.approx(-16.661223639144676, rel=1e-13)


@pytest.mark.parametrize("n", range(0, 7))
@pytest.mark.parametrize("sign", [1, -1])
def test_reciprocal_gamma_continuous_at_poles(n, sign):
    assert abs(reciprocal_gamma(-n + sign * 1e-9)) < 1e-6


@pytest.mark.xfail(strict=True, reason="1/Γ(-n±δ) ≈ n!·δ, which exceeds 1e-6 once n! > 1000")
@pytest.mark.parametrize("n", range(7, 11))
def test_reciprocal_gamma_literal_bound_large_n(n):
    assert abs(reciprocal_gamma(-n + 1e-9)) < 1e-6


@pytest.mark.parametrize("n", range(0, 11))
def test_reciprocal_gamma_pole_scaling(n):
    delta = 1e-9
    expected = (-1) ** n * math.factorial(n) * delta
    assert reciprocal_gamma(-n + delta) == pytest.approx(expected, rel=1e-6)


def test_reciprocal_gamma_large_argument():
    assert reciprocal_gamma(180.0) == pytest.approx(math.exp(-math.lgamma(180.0)), rel=1e-12)


def test_digamma_examples():
    assert digamma(1) == pytest.approx(-0.5772156649015329, rel=1e-15)
    assert digamma(0.5) == pytest.approx(-1.9635100260214235, rel=1e-14)
    assert digamma(2.5) == pytest.approx(0.7031566406452432, rel=1e-14)
    assert digamma(-1.5) == pytest.approx(0.7031566406452432, rel=1e-13)
    assert digamma(30) == pytest.approx(3.384438132685525, rel=1e-15)


def test_digamma_pole():
    with pytest.raises(PoleError):
        digamma(-2)


def test_pochhammer_examples():
    assert pochhammer(3.7, 0) == 1
    assert pochhammer(1, 5) == 120
    assert pochhammer(Fraction(1, 2), 2) == Fraction(3, 4)
    assert isinstance(pochhammer(Fraction(1, 3), 3), Fraction)
    with pytest.raises(ValueError):
        pochhammer(1.0, -1)


def test_log_gamma_signed_examples():
    lg, s = log_gamma_signed(5)
    assert s == 1 and lg == pytest.approx(math.log(24), rel=1e-15)
    lg, s = log_gamma_signed(-0.5)
    assert s == -1 and lg == pytest.approx(math.log(2 * SQRT_PI), rel=1e-14)
    lg, s = log_gamma_signed(171.5)
    assert s == 1 and lg == pytest.approx(709.1431630309282, rel=1e-14)
    lg, s = log_gamma_signed(-10.3)
    assert s == -1 and lg == pytest.approx(-14.457515440024208, rel=1e-12)


def test_gamma_ratio_beyond_overflow():
    # Γ(200)/Γ(199) = 199 although both gammas overflow
    assert gamma_ratio([200.0], [199.0]) == pytest.approx(199.0, rel=1e-12)
    assert gamma_ratio([1.5], [-2.0]) == 0.0
    with pytest.raises(PoleError):
        gamma_ratio([-2.0], [1.5])


def test_near_pole_and_sinpi():
    assert near_pole(-3.0) and near_pole(Fraction(-2)) and not near_pole(Fraction(-1, 2))
    assert not near_pole(1.0)
    assert sinpi(1e6) == 0.0
    assert sinpi(0.5) == 1.0


finite = st.floats(min_value=-30, max_value=30, allow_nan=False).filter(lambda x: abs(x - round(x)) > 1e-3)


@settings(max_examples=200, deadline=None)
@given(finite)
def test_gamma_matches_mpmath(x):
    assert gamma(x) == pytest.approx(float(mpmath.gamma(x)), rel=1e-12)


@settings(max_examples=200, deadline=None)
@given(finite)
def test_digamma_matches_mpmath(x):
    assert digamma(x) == pytest.approx(float(mpmath.digamma(x)), rel=1e-11, abs=1e-12)


@settings(max_examples=200, deadline=None)
@given(finite)
def test_recurrence_and_reciprocal(x):
    # Γ(x+1) = x Γ(x) and Γ · (1/Γ) = 1
    assert gamma(x + 1) == pytest.approx(x * gamma(x), rel=1e-12)
    assert gamma(x) * reciprocal_gamma(x) == pytest.approx(1.0, rel=1e-13)


@settings(max_examples=100, deadline=None)
@given(st.floats(min_value=0.1, max_value=20), st.integers(min_value=0, max_value=15))
def test_pochhammer_is_gamma_ratio(x, m):
    assert pochhammer(x, m) == pytest.approx(gamma_ratio([x + m], [x]), rel=1e-12)
