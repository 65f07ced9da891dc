"""Canonical solution basis at a point of maximally unipotent monodromy.

The deformed coefficients a_n(sigma) of  sum a_n(sigma) x**(n+sigma)  are
propagated through the recurrence as truncated polynomials in
eps = sigma - rho (eps**r = 0), which yields all sigma-derivatives
exactly without symbolic differentiation.  The j-th basis solution is

    w_j = sum_{m<=j} C(j, m) * h_m * log**(j-m),

where h_m collects the m-th sigma-derivative series; h_0 has unit leading
coefficient and every higher h_m starts above the leading exponent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction

import mpmath as mp

from .arith import const_pi, working_dps
from .errors import InputError, NotMumError, NumericError
from .ode import Recurrence, ThetaOperator, apply_operator, derive_recurrence, is_mum
from .poly import EpsPoly
from .series import LogSeries, SeriesQ

_ZERO = Fraction(0)


def analytic_solution(rec: Recurrence, seed: Fraction, n_terms: int,
                      exponent: Fraction = Fraction(0)) -> SeriesQ:
    """Power-series solution x**exponent * (seed + ...) of the plain recurrence.

    Fails with the offending index when the leading recurrence factor
    vanishes at some n >= 1 (resonance with another local exponent).
    """
    seed = Fraction(seed)
    exponent = Fraction(exponent)
    taps = rec.taps
    coeffs = [seed]
    for n in range(1, n_terms + 1):
        lead = taps[0](exponent + n)
        if lead == 0:
            raise InputError(f"recurrence leading factor vanishes at n={n} "
                             f"(resonant exponent {exponent + n})")
        acc = _ZERO
        for m in range(1, min(n, rec.span) + 1):
            c = coeffs[n - m]
            if c:
                acc += taps[m](exponent + (n - m)) * c
        coeffs.append(-acc / lead)
    return SeriesQ(exponent, tuple(coeffs))


def deformed_coefficients(rec: Recurrence, rho: Fraction, order: int,
                          n_terms: int) -> list[EpsPoly]:
    """a_n(rho + eps) mod eps**order with a_0 = 1, n = 0..n_terms."""
    one = EpsPoly.constant(Fraction(1), order)
    table = [one]
    for n in range(1, n_terms + 1):
        lead = rec.taps[0](EpsPoly.eps_shifted(rho + n, order))
        if lead[0] == 0:
            raise InputError(f"deformed recurrence leading factor vanishes at n={n}")
        acc = EpsPoly.constant(_ZERO, order)
        for m in range(1, min(n, rec.span) + 1):
            prev = table[n - m]
            tap = rec.taps[m](EpsPoly.eps_shifted(rho + (n - m), order))
            acc = acc + tap * prev
        table.append(-1 * (acc * lead.inverse()))
    return table


@dataclass(frozen=True)
class FrobeniusBasis:
    operator: ThetaOperator
    rho: Fraction
    solutions: tuple[LogSeries, ...]
    sigma_series: tuple[SeriesQ, ...]
    normalization: str = "plain"
    radius: Fraction | None = None

    @property
    def order(self) -> int:
        return len(self.solutions)

    @property
    def truncation(self) -> int:
        return self.solutions[0].truncation

    def solution_prefactor(self, j: int, precision: int) -> mp.mpc:
        """1 for plain normalization, (2*pi*i)**(-j) for gamma."""
        if self.normalization == "plain" or j == 0:
            return mp.mpc(1)
        with mp.workdps(working_dps(precision)):
            return mp.mpc(0, 2 * const_pi(precision)) ** (-j)

    def with_normalization(self, normalization: str) -> "FrobeniusBasis":
        if normalization not in ("plain", "gamma"):
            raise InputError(f"unknown normalization {normalization!r}")
        return replace(self, normalization=normalization)


def frobenius_basis(op: ThetaOperator, n_terms: int,
                    normalization: str = "plain",
                    radius: Fraction | None = None) -> FrobeniusBasis:
    """Canonical basis w_0..w_{r-1} at x = 0 of a MUM operator."""
    if normalization not in ("plain", "gamma"):
        raise InputError(f"unknown normalization {normalization!r}")
    check = is_mum(op)
    if not check.is_mum:
        raise NotMumError(f"operator is not MUM at the origin of chart "
                          f"{op.chart!r}: {check.detail}")
    rho = check.rho
    r = op.order
    rec = derive_recurrence(op)
    table = deformed_coefficients(rec, rho, r, n_terms)
    sigma_series = []
    for m in range(r):
        fact = math.factorial(m)
        sigma_series.append(SeriesQ(rho, tuple(fact * a[m] for a in table)))
    solutions = []
    for j in range(r):
        blocks = []
        for t in range(j + 1):          # block log**t gets C(j, j-t) h_{j-t}
            m = j - t
            blocks.append(Fraction(math.comb(j, m)) * sigma_series[m])
        solutions.append(LogSeries(op.chart, tuple(blocks)))
    return FrobeniusBasis(op, rho, tuple(solutions), tuple(sigma_series),
                          normalization, radius)


def residual_order(op: ThetaOperator, s: LogSeries) -> int | None:
    """Smallest coefficient index surviving operator application, None if clean.

    The result is exact rational arithmetic: a constructed solution must
    come back None (clean through the truncation order).
    """
    res = apply_operator(op, s)
    return res.first_nonzero()


def required_terms(radius: Fraction, eval_abs: Fraction, digits: int,
                   margin: int = 25) -> int:
    """Truncation making the geometric tail at |x| = eval_abs < radius tiny."""
    ratio = Fraction(eval_abs) / Fraction(radius)
    if ratio >= 1:
        raise NumericError(f"evaluation point at or beyond radius "
                           f"({eval_abs} vs {radius})")
    decay = -math.log10(float(ratio))
    return int(math.ceil((digits + 10) / decay)) + margin
