from __future__ import annotations

from fractions import Fraction

import mpmath as mp
import pytest

from mumtau.arith import central_binomial
from mumtau.continuation import (SolutionSample, continue_along,
                                 eval_logseries, eval_logseries_ex,
                                 eval_logseries_jet, formal_monodromy,
                                 monodromy_matrix, taylor_step, to_mpc,
                                 transport_basis)
from mumtau.errors import InputError, NumericError
from mumtau.fixtures import get_fixture
from mumtau.frobenius import frobenius_basis
from mumtau.ode import ThetaOperator, invert_variable, singularities
from mumtau.series import LogSeries, SeriesQ

PREC = 40


@pytest.fixture(scope="module")
def d3(d3_local):
    sing = singularities(d3_local, 40)
    return d3_local, sing


def test_eval_w0_is_identity(d3_basis_small):
    with mp.workdps(70):
        v = eval_logseries(d3_basis_small.solutions[0], Fraction(1, 20), PREC,
                           d3_basis_small.radius)
        assert abs(v - mp.mpf(1) / 20) < mp.mpf("1e-55")


def test_eval_w1_closed_form(d3_basis_small):
    with mp.workdps(70):
        v = eval_logseries(d3_basis_small.solutions[1], Fraction(1, 20), PREC,
                           d3_basis_small.radius)
        z = mp.mpf(1) / 20
        assert abs(v - z * mp.log(z)) < mp.mpf("1e-54")


def test_eval_seed_series_matches_direct_sum():
    fixture = get_fixture("D3")
    coeffs = tuple(fixture.seed_coefficient(n) for n in range(120))
    series = LogSeries.from_series("phi", SeriesQ(Fraction(0), coeffs))
    with mp.workdps(70):
        v = eval_logseries(series, Fraction(1, 2), PREC, fixture.seed_radius)
        direct = mp.nsum(lambda n: 2 * (-1) ** (n - 1) / (n ** 3
                         * central_binomial(int(n))) * mp.mpf("0.5") ** (n - 1),
                         [1, 80])
        assert abs(v - direct) < mp.mpf("1e-45")


def test_eval_outside_radius_raises(d3_basis_small):
    with pytest.raises(NumericError):
        eval_logseries(d3_basis_small.solutions[2], Fraction(1, 3), PREC,
                       d3_basis_small.radius)


def test_eval_at_origin_rejected(d3_basis_small):
    with pytest.raises(InputError):
        eval_logseries(d3_basis_small.solutions[0], 0, PREC,
                       d3_basis_small.radius)


def test_jet_of_w1(d3_basis_small):
    with mp.workdps(70):
        jet = eval_logseries_jet(d3_basis_small.solutions[1], Fraction(1, 20),
                                 4, PREC, d3_basis_small.radius)
        z = mp.mpf(1) / 20
        expect = [z * mp.log(z), mp.log(z) + 1, 1 / z, -1 / z ** 2]
        for a, b in zip(jet, expect):
            assert abs(a - b) < mp.mpf("1e-54")


def test_taylor_step_constant_solutions():
    op = ThetaOperator.of([[], [1]], chart="c")
    sing = singularities(op, 40)
    with mp.workdps(70):
        s = SolutionSample(mp.mpc(1), (mp.mpc(7),), PREC)
        out = taylor_step(op, s, mp.mpc("1.4"), sing)
        assert abs(out.jet[0] - 7) == 0


def test_taylor_step_rejects_oversized_step(d3):
    op, sing = d3
    with mp.workdps(70):
        s = SolutionSample(mp.mpc(1) / 20, (mp.mpc(1),) * 4, PREC)
        with pytest.raises(NumericError, match="smaller step"):
            taylor_step(op, s, mp.mpc(1) / 10, sing)


def test_round_trip_reversibility(d3, d3_basis_small):
    op, sing = d3
    with mp.workdps(70):
        jet = eval_logseries_jet(d3_basis_small.solutions[2], Fraction(1, 20),
                                 4, PREC, d3_basis_small.radius)
        s0 = SolutionSample(to_mpc(Fraction(1, 20)), jet, PREC)
        s1 = continue_along(op, s0, [mp.mpf(1) / 10, to_mpc(Fraction(1, 20))],
                            sing)
        err = max(abs(a - b) for a, b in zip(s0.jet, s1.jet))
        assert err < mp.mpf(10) ** (-(PREC + 5))


def test_legendre_transport_matches_direct_sum():
    fixture = get_fixture("DL")
    op = fixture.operator
    sing = singularities(op, 40)
    basis = frobenius_basis(op, 140, radius=fixture.local_radius)
    with mp.workdps(70):
        jet = eval_logseries_jet(basis.solutions[0], Fraction(1, 8), 2, PREC,
                                 basis.radius)
        s0 = SolutionSample(to_mpc(Fraction(1, 8)), jet, PREC)
        out = continue_along(op, s0, [mp.mpf("0.5")], sing)
        direct = mp.nsum(lambda n: central_binomial(int(n)) ** 2
                         / mp.mpf(16) ** n * mp.mpf("0.5") ** n, [0, 300])
        assert abs(out.jet[0] - direct) < mp.mpf(10) ** (-(PREC - 3))


def test_subdivision_independence(d3, d3_basis_small):
    op, sing = d3
    with mp.workdps(70):
        jet = eval_logseries_jet(d3_basis_small.solutions[3], Fraction(1, 20),
                                 4, PREC, d3_basis_small.radius)
        s0 = SolutionSample(to_mpc(Fraction(1, 20)), jet, PREC)
        a = continue_along(op, s0, [mp.mpf(2)], sing, step_factor=0.5)
        b = continue_along(op, s0, [mp.mpf(2)], sing, step_factor=0.3)
        err = max(abs(x - y) for x, y in zip(a.jet, b.jet))
        assert err < mp.mpf(10) ** (-(PREC - 20))


def test_homotopic_path_independence(d3, d3_basis_small):
    op, sing = d3
    with mp.workdps(70):
        jet = eval_logseries_jet(d3_basis_small.solutions[2], Fraction(1, 20),
                                 4, PREC, d3_basis_small.radius)
        s0 = SolutionSample(to_mpc(Fraction(1, 20)), jet, PREC)
        a = continue_along(op, s0, [mp.mpf(2)], sing)
        b = continue_along(op, s0, [mp.mpc(1, "0.4"), mp.mpf(2)], sing)
        err = max(abs(x - y) for x, y in zip(a.jet, b.jet))
        assert err < mp.mpf(10) ** (-(PREC - 20))


def test_linearity_of_transport(d3, d3_basis_small):
    op, sing = d3
    with mp.workdps(70):
        j1 = eval_logseries_jet(d3_basis_small.solutions[1], Fraction(1, 20),
                                4, PREC, d3_basis_small.radius)
        j2 = eval_logseries_jet(d3_basis_small.solutions[2], Fraction(1, 20),
                                4, PREC, d3_basis_small.radius)
        alpha, beta = mp.mpf(3) / 7, mp.mpf(-5) / 11
        combo = tuple(alpha * a + beta * b for a, b in zip(j1, j2))
        start = to_mpc(Fraction(1, 20))
        t1 = continue_along(op, SolutionSample(start, j1, PREC), [mp.mpf(3)], sing)
        t2 = continue_along(op, SolutionSample(start, j2, PREC), [mp.mpf(3)], sing)
        tc = continue_along(op, SolutionSample(start, combo, PREC), [mp.mpf(3)], sing)
        err = max(abs(alpha * a + beta * b - c)
                  for a, b, c in zip(t1.jet, t2.jet, tc.jet))
        assert err < mp.mpf(10) ** (-(PREC - 20))


def test_path_too_close_to_singularity_names_it(d3, d3_basis_small):
    op, sing = d3
    with mp.workdps(70):
        jet = eval_logseries_jet(d3_basis_small.solutions[0], Fraction(-1, 10),
                                 4, PREC, d3_basis_small.radius)
        s0 = SolutionSample(to_mpc(Fraction(-1, 10)), jet, PREC)
        with pytest.raises(NumericError, match="0.25"):
            continue_along(op, s0, [mp.mpf("-0.25") + mp.mpf(10) ** -12], sing,
                           safety_margin=1e-9)


def test_eval_precision_consistency(d3_basis):
    a = eval_logseries(d3_basis.solutions[2], Fraction(1, 20), 40,
                       d3_basis.radius)
    b = eval_logseries(d3_basis.solutions[2], Fraction(1, 20), 80,
                       d3_basis.radius)
    with mp.workdps(110):
        assert abs(a - b) < mp.mpf("1e-40")


def test_transport_basis_w0_targets(d3, d3_basis_small):
    op, sing = d3
    res = transport_basis(op, d3_basis_small, Fraction(1, 20), [2, 3, 4, 5],
                          PREC, sing)
    with mp.workdps(70):
        for row, want in zip(res.value_matrix(), (2, 3, 4, 5)):
            assert abs(row[0] - want) < mp.mpf(10) ** (-(PREC - 2))


def test_monodromy_matches_formal(d3, d3_basis_small):
    op, sing = d3
    M = monodromy_matrix(op, d3_basis_small, 0, 40, sing=sing)
    F = formal_monodromy(d3_basis_small, 40)
    with mp.workdps(70):
        err = max(abs(M.entries[j][m] - F.entries[j][m])
                  for j in range(4) for m in range(4))
        assert err < mp.mpf("1e-35")
        # closed binomial form with 2 pi i powers
        tau = mp.mpc(0, 2 * mp.pi)
        for j in range(4):
            for m in range(4):
                want = mp.binomial(j, m) * tau ** (j - m) if m <= j else 0
                assert abs(M.entries[j][m] - want) < mp.mpf("1e-35")
        # nilpotency of M - I
        A = M.matrix - mp.eye(4)
        P = A ** 4
        assert max(abs(P[i, j]) for i in range(4) for j in range(4)) < mp.mpf("1e-30")


def test_null_homotopic_loop_is_identity(d3, d3_basis_small):
    op, sing = d3
    with mp.workdps(70):
        jet = eval_logseries_jet(d3_basis_small.solutions[2], Fraction(1, 20),
                                 4, PREC, d3_basis_small.radius)
        s0 = SolutionSample(to_mpc(Fraction(1, 20)), jet, PREC)
        center = mp.mpf("0.1")
        loop = [center + mp.mpf("0.02") * mp.exp(2j * mp.pi * i / 8)
                for i in range(9)]
        out = continue_along(op, s0, [loop[0]] + loop[1:], sing)
        back = continue_along(op, out, [to_mpc(Fraction(1, 20))], sing)
        err = max(abs(a - b) for a, b in zip(s0.jet, back.jet))
        assert err < mp.mpf(10) ** (-(PREC - 20))


def test_monodromy_loop_encircling_two_singularities_rejected(d3, d3_basis_small):
    op, sing = d3
    with pytest.raises(InputError):
        monodromy_matrix(op, d3_basis_small, 0, 40, loop_radius=0.3, sing=sing)


def test_gamma_monodromy_is_integer_binomial(d3, d3_basis_small):
    op, sing = d3
    gamma = d3_basis_small.with_normalization("gamma")
    M = monodromy_matrix(op, gamma, 0, 40, sing=sing)
    with mp.workdps(70):
        for j in range(4):
            for m in range(4):
                want = mp.binomial(j, m) if m <= j else 0
                assert abs(M.entries[j][m] - want) < mp.mpf("1e-30")


def test_boundary_mode_eval_matches_exact_value(d3_local):
    # h2(-1/4) = log(2)^2 - pi^2/12 follows from the vanishing imaginary
    # part of the expansion at the negative boundary point; the generic
    # fitted-tail evaluation should hit it to ~1e-8 with 400 coefficients
    basis = frobenius_basis(d3_local, 400, radius=Fraction(1, 4))
    h2 = LogSeries.from_series(d3_local.chart, basis.sigma_series[2])
    from mumtau.continuation import eval_logseries_ex
    with mp.workdps(60):
        value, err = eval_logseries_ex(h2, mp.mpf("-0.25"), 30,
                                       radius=Fraction(1, 4),
                                       boundary_mode=True)
        exact = mp.log(2) ** 2 - mp.pi ** 2 / 12
        assert abs(value - exact) < mp.mpf("1e-8")
        assert err < mp.mpf("1e-6")
        assert abs(value - exact) < err + mp.mpf("1e-12")
