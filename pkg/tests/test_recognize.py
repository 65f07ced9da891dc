from __future__ import annotations

import random
from fractions import Fraction

import mpmath as mp
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mumtau.arith import working_dps, zeta
from mumtau.errors import InputError
from mumtau.recognize import (ConstantBasis, build_basis, default_generators,
                              integer_relation, recognize,
                              recognize_with_fallback)


def test_default_generators():
    assert default_generators(3) == ("pi^2", "zeta3")
    assert default_generators(7) == ("pi^2", "zeta3", "zeta5", "zeta7")


def test_basis_weight3_homogeneous():
    b = build_basis(3, None, "homogeneous", 60)
    assert b.labels == ("zeta3",)


def test_basis_weight6_spec_example():
    b = build_basis(6, ("pi^2", "zeta3", "zeta5"), "homogeneous", 60)
    assert b.labels == ("pi^6", "zeta3^2")


def test_basis_weight0():
    b = build_basis(0, None, "homogeneous", 60)
    assert b.labels == ("1",)


def test_basis_graded_includes_lower_weights():
    b = build_basis(3, None, "graded", 60)
    assert b.labels == ("1", "pi^2", "zeta3")


def test_basis_even_zeta_generator_folds_to_pi():
    b = build_basis(4, ("zeta4",), "homogeneous", 60)
    assert b.labels == ("pi^4",)


def test_integer_relation_half():
    with mp.workdps(80):
        rel = integer_relation([mp.mpf(1), mp.mpf(1) / 2], 60)
    assert rel.status == "found"
    v = rel.vector
    assert v in ((1, -2), (-1, 2))


def test_integer_relation_tau0_and_zeta3():
    prec = 80
    with mp.workdps(working_dps(prec)):
        tau0 = 4 * zeta(3, prec)
        rel = integer_relation([tau0, zeta(3, prec)], prec)
    assert rel.status == "found"
    v = rel.vector
    assert v in ((1, -4), (-1, 4))


def test_integer_relation_rejects_zero_entries():
    with pytest.raises(InputError):
        integer_relation([mp.mpf(0), mp.mpf(1)], 60)


def test_integer_relation_insufficient_precision():
    with mp.workdps(60):
        vals = [mp.cbrt(2), mp.pi, mp.euler, mp.catalan,
                mp.sqrt(5), mp.log(3), mp.zeta(5), mp.sqrt(7)]
        rel = integer_relation(vals, 40, height_bound=10 ** 9,
                               detection_digits=20)
    assert rel.status == "insufficient_precision"


def test_recognize_zeta4_over_pi4():
    prec = 80
    basis = build_basis(4, None, "homogeneous", prec)
    with mp.workdps(working_dps(prec)):
        r = recognize(zeta(4, prec), basis, prec)
    assert r.found
    assert r.as_label_map() == {"pi^4": "1/90"}
    assert r.verified_digits >= prec // 2


def test_recognize_zero_value():
    basis = build_basis(3, None, "homogeneous", 80)
    r = recognize(mp.mpf(10) ** -70, basis, 80)
    assert r.found and r.consistent_with_zero
    assert all(c == 0 for c in r.coefficients)


def test_recognize_round_trip_small():
    prec = 200
    basis = build_basis(7, None, "graded", prec)
    rng = random.Random(20260810)
    with mp.workdps(working_dps(prec)):
        values = basis.values(prec)
        for _case in range(20):
            den = rng.randint(1, 1000)
            coeffs = [Fraction(rng.randint(-10 ** 6, 10 ** 6), den)
                      for _ in values]
            x = mp.fsum(mp.mpf(c.numerator) / c.denominator * v
                        for c, v in zip(coeffs, values))
            r = recognize(x, basis, prec)
            assert r.found
            assert list(r.coefficients) == coeffs


def test_recognize_no_false_positive():
    prec = 200
    basis = build_basis(7, None, "graded", prec)
    rng = random.Random(99)
    with mp.workdps(working_dps(prec)):
        digits = "".join(rng.choice("0123456789") for _ in range(prec))
        x = mp.mpf("0." + digits) + 1
        r = recognize(x, basis, prec)
    assert not r.found
    assert r.status == "not_found"


@given(st.integers(min_value=-50, max_value=50).filter(bool),
       st.integers(min_value=1, max_value=40))
@settings(max_examples=8, deadline=None)
def test_recognize_scale_equivariance(num, den):
    q = Fraction(num, den)
    prec = 120
    basis = build_basis(3, None, "graded", prec)
    with mp.workdps(working_dps(prec)):
        x = 3 * zeta(3, prec) - mp.mpf(5) / 7
        qx = mp.mpf(q.numerator) / q.denominator * x
        r = recognize(qx, basis, prec)
    assert r.found
    by_label = dict(zip(r.basis.labels, r.coefficients))
    assert by_label["zeta3"] == 3 * q
    assert by_label["1"] == Fraction(-5, 7) * q


def test_recognize_basis_reordering_permutes_coefficients():
    prec = 120
    base = build_basis(6, None, "homogeneous", prec)
    flipped = ConstantBasis(tuple(reversed(base.entries)), base.max_weight,
                            base.grading_mode, base.generators, base.precision)
    with mp.workdps(working_dps(prec)):
        x = 2 * zeta(6, prec) + 5 * zeta(3, prec) ** 2
        r1 = recognize(x, base, prec)
        r2 = recognize(x, flipped, prec)
    assert r1.found and r2.found
    m1 = dict(zip(r1.basis.labels, r1.coefficients))
    m2 = dict(zip(r2.basis.labels, r2.coefficients))
    assert m1 == m2


def test_recognize_with_fallback_weight1():
    prec = 80
    r = recognize_with_fallback(mp.mpf(1), 1, prec)
    assert r.found
    assert r.as_label_map() == {"1": "1"}
