from __future__ import annotations

from fractions import Fraction

import mpmath as mp
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mumtau.arith import (central_binomial, const_log2, const_pi, harmonic,
                          hypergeometric_coeffs, zeta, zeta_even_rational)
from mumtau.errors import InputError

# independent fixed-point oracles; they share nothing with mpmath


def machin_pi(digits: int) -> Fraction:
    """pi = 16 atan(1/5) - 4 atan(1/239) in integer fixed point."""
    scale = 10 ** (digits + 10)

    def atan_inv(x: int) -> int:
        power = scale // x
        total = power
        n = 1
        x2 = x * x
        while power:
            power //= x2
            term = power // (2 * n + 1)
            total += -term if n % 2 else term
            n += 1
        return total

    return Fraction(16 * atan_inv(5) - 4 * atan_inv(239), scale)


def atanh_log2(digits: int) -> Fraction:
    """log 2 = 2 atanh(1/3) in integer fixed point."""
    scale = 10 ** (digits + 10)
    total = 0
    k = 0
    while True:
        term = scale // ((2 * k + 1) * 3 ** (2 * k + 1))
        if term == 0:
            break
        total += term
        k += 1
    return Fraction(2 * total, scale)


def test_pi_against_independent_oracle():
    p = const_pi(60)
    oracle = machin_pi(60)
    with mp.workdps(90):
        assert abs(mp.mpf(oracle.numerator) / oracle.denominator - p) < mp.mpf("1e-58")


def test_pi_frozen_30_digits():
    # leading 30 significant digits
    want = Fraction("3.14159265358979323846264338327")
    with mp.workdps(60):
        assert abs(const_pi(30) - mp.mpf(want.numerator) / want.denominator) < mp.mpf("1e-28")


def test_log2_against_independent_oracle():
    v = const_log2(60)
    oracle = atanh_log2(60)
    with mp.workdps(90):
        assert abs(mp.mpf(oracle.numerator) / oracle.denominator - v) < mp.mpf("1e-58")


def test_exp_log2_is_two():
    with mp.workdps(70):
        assert abs(mp.exp(const_log2(50)) - 2) < mp.mpf("1e-45")


def test_zeta2_consistent_with_pi():
    with mp.workdps(70):
        assert abs(const_pi(50) ** 2 / 6 - zeta(2, 50)) < mp.mpf("1e-45")


def test_zeta3_100_digits():
    z = zeta(3, 100)
    assert mp.nstr(z, 15) == "1.20205690315959"
    with mp.workdps(120):
        assert abs(z - mp.zeta(3)) < mp.mpf("1e-100")


def test_zeta3_direct_sum_bracket():
    # zeta(3) lies between the partial sum and the partial sum plus the
    # integral tail bound 1/(2 N^2); crude but entirely independent
    n_max = 4000
    partial = sum(Fraction(1, n ** 3) for n in range(1, n_max + 1))
    lo = partial + Fraction(1, 2 * (n_max + 1) ** 2)
    hi = partial + Fraction(1, 2 * n_max ** 2)
    z = zeta(3, 60)
    with mp.workdps(90):
        assert mp.mpf(lo.numerator) / lo.denominator < z < mp.mpf(hi.numerator) / hi.denominator


def test_zeta_decreases_toward_one():
    values = [zeta(k, 40) for k in range(2, 12)]
    assert all(values[i] > values[i + 1] > 1 for i in range(len(values) - 1))


def test_zeta_domain_error():
    with pytest.raises(InputError):
        zeta(1, 50)


def test_zeta_even_rationals():
    assert zeta_even_rational(2) == Fraction(1, 6)
    assert zeta_even_rational(4) == Fraction(1, 90)
    assert zeta_even_rational(6) == Fraction(1, 945)
    assert zeta_even_rational(8) == Fraction(1, 9450)


@pytest.mark.parametrize("k", [3, 5, 7, 9])
def test_zeta_vs_mpmath(k):
    with mp.workdps(100):
        assert abs(zeta(k, 80) - mp.zeta(k)) < mp.mpf("1e-80")


def test_constants_agree_across_precisions():
    with mp.workdps(110):
        for fn in (const_pi, const_log2):
            assert abs(fn(40) - fn(80)) < mp.mpf("1e-40")
        assert abs(zeta(3, 40) - zeta(3, 80)) < mp.mpf("1e-40")


def test_harmonic_values():
    assert harmonic(0) == 0
    assert harmonic(1) == 1
    assert harmonic(3) == Fraction(11, 6)


@given(st.integers(min_value=1, max_value=400))
@settings(max_examples=40, deadline=None)
def test_harmonic_difference(r):
    assert harmonic(r) - harmonic(r - 1) == Fraction(1, r)


def test_central_binomial():
    assert central_binomial(0) == 1
    assert central_binomial(1) == 2
    assert central_binomial(5) == 252


def test_hypergeometric_first_coefficient():
    c = hypergeometric_coeffs(Fraction(1, 2), Fraction(1, 2), Fraction(1), 3)
    assert c[0] == 1
    assert c[1] == Fraction(1, 4)


def test_hypergeometric_legendre_closed_form():
    n_terms = 40
    c = hypergeometric_coeffs(Fraction(1, 2), Fraction(1, 2), Fraction(1), n_terms)
    for n in range(n_terms + 1):
        assert c[n] * 16 ** n == central_binomial(n) ** 2


def test_hypergeometric_pochhammer_error_names_index():
    with pytest.raises(InputError, match="n=3"):
        hypergeometric_coeffs(Fraction(1), Fraction(1), Fraction(-2), 10)


@given(st.fractions(max_denominator=10 ** 6), st.fractions(max_denominator=10 ** 6))
@settings(max_examples=50, deadline=None)
def test_rational_arithmetic_exact(p, q):
    assert (p + q) - q == p
