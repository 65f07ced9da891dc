"""Summation of central-binomial series at the edge of convergence.

The sums handled here converge like n**(-s) with s as small as 1/2 above
1, so direct summation cannot reach even eight digits.  Each summand is
split as  (explicit terms up to N) + (asymptotic tail): the central
binomial coefficient has the exact Stirling expansion

    binom(2n, n) * 4**-n * sqrt(pi*n) = sum_j e_j * n**-j,

with e_j computed exactly from Bernoulli fractions, and the tails of
n**-s (plain or alternating) are Euler-Maclaurin Hurwitz-zeta tails.  The
harmonic factor  c + 2n*(H_{n-1} - H_{2n-1})  likewise has an exact
expansion  (c - 1/2) - 2n*log2 - sum_j beta_j n**(1-2j).

Everything is deterministic: the truncation point and the number of
asymptotic orders are chosen so the first omitted correction is far below
the requested accuracy.
"""

from __future__ import annotations

import functools
from fractions import Fraction

import mpmath as mp

from .arith import bernoulli_fraction, const_log2, const_pi
from .errors import InputError, NumericError
from .poly import ps_exp, ps_mul

_ZERO = Fraction(0)

SUM_KINDS = ("binom", "inv_binom", "binom_harmonic")


# -- Hurwitz-zeta tails --------------------------------------------------------

def hurwitz_em(s, a, dps: int) -> mp.mpf:
    """zeta_H(s, a) = sum_{n>=0} (a+n)**-s for real s > 1, real a > 0.

    Euler-Maclaurin at a shifted base point A >= 64; the remainder is
    bounded by the first omitted Bernoulli term for real s.
    """
    with mp.workdps(dps + 10):
        s = mp.mpf(s)
        a = mp.mpf(a)
        if s <= 1:
            raise InputError(f"hurwitz_em requires s > 1, got {s}")
        direct = mp.mpf(0)
        A = a
        while A < 64:
            direct += A ** (-s)
            A += 1
        acc = direct + A ** (1 - s) / (s - 1) + A ** (-s) / 2
        eps = mp.mpf(10) ** (-(dps + 5))
        poch = s
        apow = A ** (-(s + 1))
        prev = mp.inf
        j = 1
        while True:
            term = mp.bernoulli(2 * j) / mp.factorial(2 * j) * poch * apow
            acc += term
            if abs(term) < eps:
                break
            if abs(term) > prev:
                raise NumericError(f"Hurwitz Euler-Maclaurin diverged (s={s}, a={a})")
            prev = abs(term)
            poch *= (s + 2 * j - 1) * (s + 2 * j)
            apow /= A * A
            j += 1
        return +acc


def zeta_tail(s, a: int, alternating: bool, dps: int) -> mp.mpf:
    """sum_{n>=a} n**-s, or sum_{n>=a} (-1)**n n**-s when alternating."""
    with mp.workdps(dps + 10):
        if not alternating:
            return hurwitz_em(s, a, dps)
        half = mp.mpf(a) / 2
        value = mp.mpf(2) ** (-mp.mpf(s)) * (hurwitz_em(s, half, dps)
                                             - hurwitz_em(s, half + mp.mpf("0.5"), dps))
        return +value if a % 2 == 0 else -value


# -- exact asymptotic series ---------------------------------------------------

@functools.lru_cache(maxsize=None)
def _stirling_exponent(n_terms: int) -> tuple[Fraction, ...]:
    """G with exp(G(1/n)) = binom(2n,n) 4**-n sqrt(pi n); G(x) = sum g_p x**p."""
    g = [_ZERO] * n_terms
    j = 1
    while 2 * j - 1 < n_terms:
        b = bernoulli_fraction(2 * j)
        g[2 * j - 1] = b * (Fraction(2) ** (1 - 2 * j) - 2) / (2 * j * (2 * j - 1))
        j += 1
    return tuple(g)


@functools.lru_cache(maxsize=None)
def binom_ratio_series(n_terms: int) -> tuple[Fraction, ...]:
    """e_j with binom(2n,n) 4**-n = (pi n)**-1/2 * sum_j e_j n**-j (exact)."""
    return tuple(ps_exp(list(_stirling_exponent(n_terms)), n_terms))


@functools.lru_cache(maxsize=None)
def inv_binom_ratio_series(n_terms: int) -> tuple[Fraction, ...]:
    """f_j with 4**n / binom(2n,n) = sqrt(pi n) * sum_j f_j n**-j (exact)."""
    neg = [-c for c in _stirling_exponent(n_terms)]
    return tuple(ps_exp(neg, n_terms))


@functools.lru_cache(maxsize=None)
def harmonic_offset_series(n_terms: int) -> tuple[Fraction, ...]:
    """beta series:  2n(H_{n-1} - H_{2n-1}) = -2n log2 - 1/2 - sum_p beta_p n**-p.

    Returned tuple is indexed by the power p >= 0 (beta_0 = 1/2 covers the
    constant, odd powers carry B_{2j}(1 - 4**-j)/j).
    """
    beta = [_ZERO] * n_terms
    beta[0] = Fraction(1, 2)
    j = 1
    while 2 * j - 1 < n_terms:
        beta[2 * j - 1] = bernoulli_fraction(2 * j) * (1 - Fraction(4) ** (-j)) / j
        j += 1
    return tuple(beta)


# -- the summation engine ------------------------------------------------------

def _tail_from_series(coeffs, s0, a: int, alternating: bool, dps: int) -> mp.mpf:
    """sum_{n>=a} (+-1)**n sum_j coeffs[j] n**-(s0+j), coeffs exact."""
    with mp.workdps(dps + 10):
        acc = mp.mpf(0)
        for j, c in enumerate(coeffs):
            if c:
                t = zeta_tail(mp.mpf(s0.numerator) / s0.denominator + j, a,
                              alternating, dps)
                acc += mp.mpf(c.numerator) / c.denominator * t
        return +acc


def _direct_part(kind: str, m: int, sign: int, c: int, n_max: int, dps: int) -> mp.mpf:
    with mp.workdps(dps + 10):
        acc = mp.mpf(0)
        w = mp.mpf(1)            # binom(2n,n)/4**n, starts at n=0
        h_small = mp.mpf(0)      # H_{n-1}
        h_big = mp.mpf(0)        # H_{2n-1}
        for n in range(1, n_max + 1):
            w *= mp.mpf(2 * n - 1) / (2 * n)
            if kind == "binom_harmonic":
                h_small += mp.mpf(1) / (n - 1) if n > 1 else 0
                h_big += (mp.mpf(1) / (2 * n - 2) if n > 1 else 0) + mp.mpf(1) / (2 * n - 1)
            npow = mp.mpf(n) ** (-m)
            if kind == "binom":
                term = w * npow
            elif kind == "inv_binom":
                term = npow / w
            else:
                term = w * npow * (c + 2 * n * (h_small - h_big))
            if sign < 0 and n % 2:
                term = -term
            acc += term
        return +acc


@functools.lru_cache(maxsize=None)
def central_sum(kind: str, m: int, sign: int, digits: int = 30,
                c: int | None = None) -> mp.mpf:
    """High-accuracy value of a central-binomial boundary sum.

    kind "binom":          sum_{n>=1} sign**n binom(2n,n) / (4**n n**m)
    kind "inv_binom":      sum_{n>=1} sign**n 4**n / (binom(2n,n) n**m)
    kind "binom_harmonic": sum_{n>=1} sign**n binom(2n,n) / (4**n n**m)
                               * (c + 2n (H_{n-1} - H_{2n-1})),  c defaults to m
    """
    if kind not in SUM_KINDS:
        raise InputError(f"unknown sum kind {kind!r}")
    if sign not in (1, -1):
        raise InputError("sign must be +1 or -1")
    if c is None:
        c = m
    # convergence: binom needs m >= 1; the others need m >= 2 for sign=+1
    s_lead = Fraction(2 * m + 1, 2) if kind == "binom" else Fraction(2 * m - 1, 2)
    if s_lead <= 1 and sign == 1:
        raise InputError(f"sum {kind} with m={m} diverges")
    dps = digits + 15
    orders = 14
    n_max = 3000
    alternating = sign < 0
    while True:
        log_part = None
        if kind == "binom":
            e = binom_ratio_series(orders + 1)
            tail_coeffs = list(e[:orders])
            omitted = abs(e[orders])
            s0 = Fraction(2 * m + 1, 2)
            s_omit = s0 + orders
        elif kind == "inv_binom":
            f = inv_binom_ratio_series(orders + 1)
            tail_coeffs = list(f[:orders])
            omitted = abs(f[orders])
            s0 = Fraction(2 * m - 1, 2)
            s_omit = s0 + orders
        else:
            # summand/sign = (pi n)^-1/2 E(1/n) n^-m (c - 2n log2 - B(1/n))
            e = binom_ratio_series(orders + 1)
            beta = harmonic_offset_series(orders + 1)
            shifted = ps_mul(list(e), list(beta), orders + 1)
            tail_coeffs = [c * e[j] - shifted[j] for j in range(orders)]
            log_part = list(e[:orders])
            omitted = abs(c * e[orders] - shifted[orders]) + 2 * abs(e[orders])
            s0 = Fraction(2 * m + 1, 2)
            s_omit = Fraction(2 * m - 1, 2) + orders
        with mp.workdps(dps + 10):
            omf = mp.mpf(omitted.numerator) / omitted.denominator
            bound = omf * zeta_tail(mp.mpf(s_omit.numerator) / s_omit.denominator,
                                    n_max + 1, False, dps) * 4
            if bound < mp.mpf(10) ** (-(digits + 5)):
                break
        if n_max > 4 * 10 ** 6:
            raise NumericError(f"boundary sum {kind} m={m} cannot reach "
                               f"{digits} digits (bound {mp.nstr(bound, 3)})")
        n_max *= 4
    with mp.workdps(dps + 10):
        total = _direct_part(kind, m, sign, c, n_max, dps)
        inv_sqrt_pi = 1 / mp.sqrt(const_pi(dps))
        if kind == "binom":
            total += inv_sqrt_pi * _tail_from_series(tail_coeffs, s0, n_max + 1,
                                                     alternating, dps)
        elif kind == "inv_binom":
            total += (1 / inv_sqrt_pi) * _tail_from_series(tail_coeffs, s0,
                                                           n_max + 1, alternating, dps)
        else:
            total += inv_sqrt_pi * _tail_from_series(tail_coeffs, s0, n_max + 1,
                                                     alternating, dps)
            log2 = const_log2(dps)
            total += inv_sqrt_pi * (-2 * log2) * _tail_from_series(
                log_part, Fraction(2 * m - 1, 2), n_max + 1, alternating, dps)
        return +total


# -- generic fitted tail for boundary evaluation of computed series -------------

def fitted_power_tail(samples: list[tuple[int, mp.mpf]], start: int,
                      alternating: bool, dps: int) -> tuple[mp.mpf, mp.mpf]:
    """Estimate sum_{n>=start} u_n from trailing samples of u_n (sign removed).

    Fits u_n ~ c0 n**-alpha + c1 n**-(alpha+1) + c2 n**-(alpha+2) with alpha
    from a log-log slope (snapped to the nearest half-integer when close)
    and returns (tail estimate, error estimate).  This is an estimate, not
    a certificate: accuracy is limited by how asymptotic the samples are.
    """
    import math as _math

    pts = [(n, u) for n, u in samples if u != 0]
    if len(pts) < 8:
        return mp.mpf(0), mp.inf
    xs = [_math.log(n) for n, _ in pts]
    ys = [float(mp.log(abs(u))) for _, u in pts]
    n_pts = len(pts)
    mean_x = sum(xs) / n_pts
    mean_y = sum(ys) / n_pts
    sxx = sum((x - mean_x) ** 2 for x in xs)
    sxy = sum((x - mean_x) * (y - mean_y) for x, y in zip(xs, ys))
    alpha = -sxy / sxx
    snapped = round(alpha * 2) / 2
    if abs(alpha - snapped) < 0.05:
        alpha = snapped
    if alpha <= 1:
        return mp.mpf(0), mp.inf
    with mp.workdps(dps + 10):
        # linear least squares for c0, c1, c2 on u_n * n**alpha ~ c0 + c1/n + c2/n^2
        rows = []
        rhs = []
        for n, u in pts:
            nf = mp.mpf(n)
            rows.append([mp.mpf(1), 1 / nf, 1 / nf ** 2])
            rhs.append(u * nf ** alpha)
        ata = mp.zeros(3, 3)
        atb = mp.matrix(3, 1)
        for row, b in zip(rows, rhs):
            for i in range(3):
                for j in range(3):
                    ata[i, j] += row[i] * row[j]
                atb[i] += row[i] * b
        try:
            sol = mp.lu_solve(ata, atb)
        except ZeroDivisionError:
            return mp.mpf(0), mp.inf
        tails = [zeta_tail(mp.mpf(alpha) + i, start, alternating, dps) for i in range(3)]
        correction = sum(sol[i] * tails[i] for i in range(3))
        resid = max(abs(u * mp.mpf(n) ** alpha
                        - (sol[0] + sol[1] / n + sol[2] / mp.mpf(n) ** 2))
                    for n, u in pts)
        err = abs(sol[2] * tails[2]) / 2 + resid * abs(tails[0])
        return +correction, +err
