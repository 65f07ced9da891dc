from __future__ import annotations

from fractions import Fraction

import mpmath as mp
import pytest

from mumtau.arith import central_binomial
from mumtau.errors import InputError, NotMumError
from mumtau.fixtures import (FIXTURES, family_sub_block_coefficient,
                             family_top_block_coefficient, get_fixture)
from mumtau.frobenius import (analytic_solution, frobenius_basis,
                              residual_order)
from mumtau.ode import (ThetaOperator, apply_operator, derive_recurrence,
                        invert_variable)
from mumtau.series import LogSeries, SeriesQ


def test_analytic_solution_d3_leading_coefficients():
    rec = derive_recurrence(get_fixture("D3").operator)
    s = analytic_solution(rec, Fraction(1), 3)
    assert s.coeffs == (Fraction(1), Fraction(-1, 24), Fraction(1, 270),
                        Fraction(-1, 2240))


def test_analytic_solution_matches_seed_closed_form():
    fixture = get_fixture("D3")
    rec = derive_recurrence(fixture.operator)
    s = analytic_solution(rec, Fraction(1), 60)
    for n in range(61):
        assert s[n] == fixture.seed_coefficient(n)


def test_analytic_solution_theta_operator_constant():
    rec = derive_recurrence(ThetaOperator.of([[], [1]], chart="c"))
    s = analytic_solution(rec, Fraction(1), 10)
    assert s.coeffs == (Fraction(1),) + (Fraction(0),) * 10


def test_analytic_solution_legendre_closed_form():
    fixture = get_fixture("DL")
    rec = derive_recurrence(fixture.operator)
    s = analytic_solution(rec, Fraction(1), 40)
    for n in range(41):
        assert s[n] == Fraction(central_binomial(n) ** 2, 16 ** n)


def test_analytic_solution_resonance_error_names_index():
    # theta (theta - 2): exponents 0 and 2 resonate at n = 2
    op = ThetaOperator.of([[], [-2], [1]], chart="c")
    rec = derive_recurrence(op)
    assert rec.indicial.coeffs == (Fraction(0), Fraction(-2), Fraction(1))
    op2 = ThetaOperator.of([[], [-2, 1], [1, 1]], chart="c")
    rec2 = derive_recurrence(op2)
    with pytest.raises(InputError, match="n=2"):
        analytic_solution(rec2, Fraction(1), 10)


def test_frobenius_rejects_non_mum():
    op = ThetaOperator.of([[], [-2, 1], [1, 1]], chart="c")
    with pytest.raises(NotMumError):
        frobenius_basis(op, 10)


def test_d3_h2_h3_closed_forms(d3_basis_small):
    h2 = d3_basis_small.sigma_series[2]
    h3 = d3_basis_small.sigma_series[3]
    for n in range(1, 41):
        assert h2[n] == family_sub_block_coefficient(3, n)
        assert h3[n] == family_top_block_coefficient(3, n)


def test_d3_paper_recursions_for_h2_h3(d3_basis_small):
    # b_2 = -4 with (n-1)(2n-1)(2n-2) b_n + n^3 b_{n+1} = 0, and the coupled
    # c recursion 6(3 - 8n + 5n^2) b_n + 2n(n-1)^2 (2n-1) c_n + n^4 c_{n+1} = 0
    h2 = d3_basis_small.sigma_series[2]
    h3 = d3_basis_small.sigma_series[3]
    b = {n: h2[n - 1] for n in range(2, 42)}   # coefficient of x^n
    c = {n: h3[n - 1] for n in range(2, 42)}
    assert b[2] == -4 and c[2] == 12
    for n in range(2, 40):
        assert (n - 1) * (2 * n - 1) * (2 * n - 2) * b[n] + n ** 3 * b[n + 1] == 0
        assert (6 * (3 - 8 * n + 5 * n ** 2) * b[n]
                + 2 * n * (n - 1) ** 2 * (2 * n - 1) * c[n]
                + n ** 4 * c[n + 1]) == 0


def test_leading_normalization(d3_basis_small):
    assert d3_basis_small.sigma_series[0][0] == 1
    for h in d3_basis_small.sigma_series[1:]:
        assert h[0] == 0
    # h_0 and h_1 vanish identically beyond the leading term for this family
    assert all(c == 0 for c in d3_basis_small.sigma_series[0].coeffs[1:])
    assert d3_basis_small.sigma_series[1].is_zero


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_first_solution_is_pure_power(name):
    fixture = get_fixture(name)
    op = invert_variable(fixture.operator) if fixture.mum_transform == "invert" \
        else fixture.operator
    basis = frobenius_basis(op, 30, radius=fixture.local_radius)
    w0 = basis.solutions[0]
    assert w0.block(0)[0] == 1
    if fixture.family_k is not None:
        assert all(c == 0 for c in w0.block(0).coeffs[1:])


@pytest.mark.parametrize("k", [2, 4, 5, 6, 7])
def test_family_displayed_blocks(k):
    fixture = get_fixture(f"D{k}")
    basis = frobenius_basis(invert_variable(fixture.operator), 30,
                            radius=fixture.local_radius)
    sub = basis.sigma_series[k - 1]
    top = basis.sigma_series[k]
    for m in range(1, k - 1):
        assert basis.sigma_series[m].is_zero
    for n in range(1, 30):
        assert sub[n] == family_sub_block_coefficient(k, n)
        assert top[n] == family_top_block_coefficient(k, n)
    # the penultimate solution shows the sub block with binomial weight r-1
    w = basis.solutions[k]
    assert w.block(1).coeffs == ((k) * sub).coeffs


def test_residuals_clean_small(d3_local, d3_basis_small):
    for j, sol in enumerate(d3_basis_small.solutions):
        assert residual_order(d3_local, sol) is None, j


def test_residual_detects_perturbation(d3_local, d3_basis_small):
    sol = d3_basis_small.solutions[2]
    bad_block = list(sol.blocks[0].coeffs)
    bad_block[17] += 1
    bad = LogSeries(sol.chart, (SeriesQ(sol.base, tuple(bad_block)),)
                    + sol.blocks[1:])
    order = residual_order(d3_local, bad)
    assert order is not None
    assert 15 <= order <= 18


def test_residual_theta_constant():
    op = ThetaOperator.of([[], [1]], chart="c")
    one = LogSeries.from_series("c", SeriesQ.of(0, [1, 0, 0, 0]))
    assert residual_order(op, one) is None


def test_b_growth_ratio(d3_basis):
    # |b_{n+1}| 4^-n n^(5/2) approaches 2/sqrt(pi), within 5% by n = 200
    n = 200
    b = abs(d3_basis.sigma_series[2][n])  # = |b_{n+1}| at x^(n+1)
    with mp.workdps(40):
        ratio = mp.mpf(b.numerator) / b.denominator * mp.mpf(4) ** (-n) \
            * mp.mpf(n) ** mp.mpf("2.5")
        target = 2 / mp.sqrt(mp.pi)
        assert abs(ratio - target) / target < 0.05


def test_gamma_normalization_numeric(d3_basis_small):
    # the gamma basis is the plain basis with solution j divided by
    # (2*pi*i)^j; checked numerically at a test point
    from mumtau.continuation import eval_logseries
    gamma = d3_basis_small.with_normalization("gamma")
    prec = 40
    with mp.workdps(70):
        z = mp.mpf(1) / 30
        two_pi_i = mp.mpc(0, 2 * mp.pi)
        for j in range(4):
            plain_val = eval_logseries(d3_basis_small.solutions[j], z, prec,
                                       d3_basis_small.radius)
            gamma_val = eval_logseries(gamma.solutions[j], z, prec,
                                       gamma.radius) * gamma.solution_prefactor(j, prec)
            assert d3_basis_small.solution_prefactor(j, prec) == 1
            assert abs(gamma_val - plain_val / two_pi_i ** j) < mp.mpf("1e-55")


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_recurrence_synthesis_residual_every_fixture(name):
    # re-synthesizing the analytic solution from the derived recurrence and
    # applying the operator leaves no residual through the truncation
    fixture = get_fixture(name)
    op = fixture.operator
    rec = derive_recurrence(op)
    s = analytic_solution(rec, Fraction(1), 40)
    assert residual_order(op, LogSeries.from_series(op.chart, s)) is None
