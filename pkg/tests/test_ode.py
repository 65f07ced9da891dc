from __future__ import annotations

from fractions import Fraction

import mpmath as mp
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mumtau.errors import ChartMismatchError, InputError
from mumtau.fixtures import FIXTURES, get_fixture
from mumtau.ode import (ThetaOperator, apply_operator, derive_recurrence,
                        from_d_form, indicial_polynomial, invert_variable,
                        is_mum, rescale_variable, shift_variable, singularities,
                        to_d_form)
from mumtau.poly import PolyQ
from mumtau.series import LogSeries, SeriesQ

D3 = get_fixture("D3").operator
D2 = get_fixture("D2").operator
DL = get_fixture("DL").operator
THETA = ThetaOperator.of([[], [1]], chart="c")


def test_apply_theta_to_power():
    s = LogSeries.pure_power("c", 1, 4)
    out = apply_operator(THETA, s)
    assert out.block(0).coeffs == s.block(0).coeffs


def test_apply_theta_product_rule():
    # theta(x log x) = x log x + x
    x = SeriesQ.of(1, [1, 0, 0])
    s = LogSeries("c", (SeriesQ.zero(1, 2), x))
    out = apply_operator(THETA, s)
    assert out.block(1).coeffs == x.coeffs
    assert out.block(0).coeffs == x.coeffs


def test_apply_operator_chart_mismatch():
    s = LogSeries.pure_power("other", 1, 4)
    with pytest.raises(ChartMismatchError):
        apply_operator(THETA, s)


def test_d3_recurrence_matches_displayed_form():
    rec = derive_recurrence(D3)
    # initial condition 1 + 24 a_1 = 0 and
    # n^3 a_{n-1} + (n+1)(2n+1)(2n+2) a_n = 0
    assert rec.span == 1
    assert rec.plain_coefficient(0, 1, Fraction(0)) == 24
    assert rec.plain_coefficient(1, 1, Fraction(0)) == 1
    for n in range(2, 12):
        q0 = rec.plain_coefficient(0, n, Fraction(0))
        q1 = rec.plain_coefficient(1, n, Fraction(0))
        # the displayed recurrence, cleared of the common factor n
        assert q0 * n ** 3 == q1 * (n + 1) * (2 * n + 1) * (2 * n + 2)


def test_recurrence_of_theta_operator():
    rec = derive_recurrence(THETA)
    assert rec.span == 0
    assert rec.indicial.coeffs == (Fraction(0), Fraction(1))


def _recurrence_tap_oracle(op: ThetaOperator, m: int, n: int) -> Fraction:
    """Coefficient of x^n in op(x^(n-m)), via plain operator application."""
    trunc = n + 2
    mono = SeriesQ(Fraction(0), tuple(Fraction(1 if i == n - m else 0)
                                      for i in range(trunc + 1)))
    out = apply_operator(op, LogSeries.from_series(op.chart, mono))
    return out.block(0)[n]


@pytest.mark.parametrize("name", ["D2", "D3", "DL"])
def test_derive_recurrence_against_symbolic_oracle(name):
    op = get_fixture(name).operator
    rec = derive_recurrence(op)
    for n in range(1, 8):
        for m in range(min(n, rec.span) + 1):
            assert rec.plain_coefficient(m, n, Fraction(0)) == \
                _recurrence_tap_oracle(op, m, n)


def test_indicial_and_mum_d3():
    inv = invert_variable(D3)
    q = indicial_polynomial(inv)
    # (sigma - 1)^4
    assert q.coeffs == (Fraction(1), Fraction(-4), Fraction(6), Fraction(-4),
                        Fraction(1))
    check = is_mum(inv)
    assert check.is_mum and check.rho == 1


def test_indicial_d2():
    check = is_mum(invert_variable(D2))
    assert check.is_mum and check.rho == 1


def test_mum_all_family_fixtures():
    for name, fixture in FIXTURES.items():
        if fixture.family_k is None:
            continue
        check = is_mum(invert_variable(fixture.operator))
        assert check.is_mum and check.rho == 1, name


def test_theta_power_is_mum_at_zero():
    op = ThetaOperator.of([[], [], [1]], chart="c")  # theta^2
    check = is_mum(op)
    assert check.is_mum and check.rho == 0 and check.order == 2


def test_non_mum_reports_diagnostic():
    op = ThetaOperator.of([[0, 1], [1, 0], [1]], chart="c")  # indicial s^2 + s
    check = is_mum(op)
    assert not check.is_mum
    assert check.rho is None
    assert "not" in check.detail


def test_legendre_is_mum_at_zero():
    check = is_mum(DL)
    assert check.is_mum and check.rho == 0


def test_invert_d3_matches_displayed_d_form():
    inv = invert_variable(D3)
    assert inv.chart == "phitilde"
    d = to_d_form(inv)
    assert d[4] == PolyQ.of(0, 0, 0, 0, 1, 4)       # x^4 (1 + 4x)
    assert d[3] == PolyQ.of(0, 0, 0, 2, 14)         # 2 x^3 (1 + 7x)
    assert d[2] == PolyQ.of(0, 0, 1, 6)             # x^2 (1 + 6x)
    assert d[1] == PolyQ.of(0, -1)                  # -x
    assert d[0] == PolyQ.of(1)


def test_invert_is_involution():
    for name in ("D2", "D3", "D5"):
        op = get_fixture(name).operator
        assert invert_variable(invert_variable(op)) == op


def test_invert_theta():
    # -theta, canonically normalized back to theta
    out = invert_variable(THETA)
    assert out.theta_coeffs == THETA.theta_coeffs


def test_rescale_identity_and_taps():
    assert rescale_variable(D3, Fraction(1)) == D3
    inv = invert_variable(D3)
    rec = derive_recurrence(inv)
    rec4 = derive_recurrence(rescale_variable(inv, Fraction(4)))
    for m, (a, b) in enumerate(zip(rec.taps, rec4.taps)):
        assert b == a * Fraction(4) ** m


def test_rescale_zero_rejected():
    with pytest.raises(InputError):
        rescale_variable(D3, Fraction(0))


def test_shift_identity():
    assert shift_variable(DL, Fraction(0)) == DL


def test_shift_moves_singularities():
    shifted = shift_variable(DL, Fraction(1))  # u = lambda - 1
    s = singularities(shifted, 40)
    exact = sorted(p.exact for p in s.finite_points)
    assert exact == [Fraction(-1), Fraction(0)]


def test_theta_d_round_trip_fixtures():
    for name, fixture in FIXTURES.items():
        op = fixture.operator
        assert from_d_form(to_d_form(op), op.chart) == op, name


small_poly = st.lists(st.fractions(max_denominator=6), min_size=0, max_size=3)


@given(st.lists(small_poly, min_size=2, max_size=4))
@settings(max_examples=40, deadline=None)
def test_theta_d_round_trip_random(rows):
    try:
        op = ThetaOperator.of(rows, chart="c")
    except InputError:
        return
    assert from_d_form(to_d_form(op), "c") == op


def test_singularities_d3_phi_chart():
    s = singularities(D3, 40)
    exact = sorted(p.exact for p in s.finite_points)
    assert exact == [Fraction(-4), Fraction(0)]
    assert s.has_infinity


def test_singularities_d3_local_chart():
    s = singularities(invert_variable(D3), 40)
    exact = sorted(p.exact for p in s.finite_points)
    assert exact == [Fraction(-1, 4), Fraction(0)]


def test_singularities_theta_squared():
    s = singularities(ThetaOperator.of([[], [], [1]], chart="c"), 40)
    assert [p.exact for p in s.finite_points] == [Fraction(0)]


def test_singularities_irrational_roots():
    # leading theta coefficient x^2 - 2: numeric roots +-sqrt(2)
    op = ThetaOperator.of([[1], [0], [-2, 0, 1]], chart="c")
    s = singularities(op, 40)
    vals = sorted(float(p.value.real) for p in s.finite_points
                  if p.exact is None)
    assert len(vals) == 2
    assert abs(vals[0] + 2 ** 0.5) < 1e-30
    assert abs(vals[1] - 2 ** 0.5) < 1e-30


@pytest.mark.parametrize("k", [Fraction(2), Fraction(3), Fraction(1, 2)])
def test_singularities_rescale_correspondence(k):
    base = singularities(D3, 40)
    scaled = singularities(rescale_variable(D3, k), 40)
    with mp.workdps(60):
        kf = mp.mpf(k.numerator) / k.denominator
        base_pts = sorted([p.value / kf for p in base.finite_points],
                          key=lambda z: (z.real, z.imag))
        new_pts = sorted([p.value for p in scaled.finite_points],
                         key=lambda z: (z.real, z.imag))
        for a, b in zip(base_pts, new_pts):
            assert abs(a - b) < mp.mpf("1e-35")


def test_operator_requires_order():
    with pytest.raises(InputError):
        ThetaOperator.of([[1]])
