"""Exact rationals and arbitrary-precision constants.

Rationals are ``fractions.Fraction`` (exact, arbitrary size); reals and
complexes are mpmath ``mpf``/``mpc`` values created at an explicit working
precision.  Every public routine takes a target precision in decimal
digits and computes with ``GUARD_DIGITS`` extra digits, so the returned
value is accurate to at least ``10**-precision``.

Odd zeta values are computed by Euler-Maclaurin summation with an explicit
remainder bound; even zeta values are derived from pi through exact
Bernoulli fractions so that relations like ``zeta(4) = pi**4 / 90`` hold
to working precision by construction.  Computed constants are cached per
label at the highest precision seen so far.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction

import mpmath as mp

from .errors import InputError, NumericError

Rational = Fraction

GUARD_DIGITS = 20
MIN_PRECISION = 30

_cache_lock = threading.RLock()
_constant_cache: dict[str, tuple[int, mp.mpf]] = {}

_harmonic_lock = threading.RLock()
_harmonic_table: list[Fraction] = [Fraction(0)]


def working_dps(precision: int) -> int:
    """Decimal working precision used internally for a target precision."""
    return int(precision) + GUARD_DIGITS


def _require_precision(precision: int) -> int:
    if precision < MIN_PRECISION:
        raise InputError(f"precision must be >= {MIN_PRECISION}, got {precision}")
    return int(precision)


def mpf_from_fraction(q: Fraction, dps: int | None = None) -> mp.mpf:
    """Correctly rounded mpf of an exact rational at the given dps."""
    if dps is None:
        return mp.mpf(q.numerator) / q.denominator
    with mp.workdps(dps):
        return mp.mpf(q.numerator) / q.denominator


def _cached(label: str, precision: int, compute) -> mp.mpf:
    dps = working_dps(precision)
    with _cache_lock:
        hit = _constant_cache.get(label)
        if hit is not None and hit[0] >= dps:
            return hit[1]
    value = compute(dps)
    with _cache_lock:
        hit = _constant_cache.get(label)
        if hit is None or hit[0] < dps:
            _constant_cache[label] = (dps, value)
    return value


def clear_constant_cache() -> None:
    with _cache_lock:
        _constant_cache.clear()


def const_pi(precision: int) -> mp.mpf:
    """pi with absolute error below ``10**-precision``."""
    _require_precision(precision)

    def compute(dps):
        with mp.workdps(dps):
            return +mp.pi

    return _cached("pi", precision, compute)


def const_log2(precision: int) -> mp.mpf:
    """log 2 with absolute error below ``10**-precision``."""
    _require_precision(precision)

    def compute(dps):
        with mp.workdps(dps):
            return mp.log(2)

    return _cached("log2", precision, compute)


def bernoulli_fraction(n: int) -> Fraction:
    """Exact Bernoulli number B_n."""
    if n < 0:
        raise InputError(f"Bernoulli index must be >= 0, got {n}")
    p, q = mp.bernfrac(n)
    return Fraction(p, q)


def zeta_even_rational(k: int) -> Fraction:
    """Exact rational r with zeta(k) = r * pi**k, for even k >= 2."""
    if k < 2 or k % 2:
        raise InputError(f"zeta_even_rational needs even k >= 2, got {k}")
    m = k // 2
    sign = 1 if m % 2 else -1
    return sign * bernoulli_fraction(k) * Fraction(2 ** (k - 1), math.factorial(k))


def _zeta_euler_maclaurin(s: int, dps: int) -> mp.mpf:
    """zeta(s) for integer s >= 2 by Euler-Maclaurin with remainder control.

    Direct terms up to M plus Bernoulli corrections; for real s the
    remainder is bounded by the first omitted correction term, so the loop
    stops once a term drops below the target epsilon.
    """
    with mp.workdps(dps + 10):
        M = dps + 10
        acc = mp.fsum(mp.mpf(n) ** (-s) for n in range(1, M))
        Mf = mp.mpf(M)
        acc += Mf ** (1 - s) / (s - 1) + Mf ** (-s) / 2
        eps = mp.mpf(10) ** (-(dps + 5))
        poch = mp.mpf(s)              # rising factorial (s)_{2j-1}
        mpow = Mf ** (-(s + 1))       # M^{-s-2j+1}
        prev = mp.inf
        j = 1
        while True:
            term = mp.bernoulli(2 * j) / mp.factorial(2 * j) * poch * mpow
            acc += term
            if abs(term) < eps:
                break
            if abs(term) > prev:
                raise NumericError("Euler-Maclaurin correction terms diverged "
                                   f"before reaching 10^-{dps + 5} (s={s}, M={M})")
            prev = abs(term)
            poch *= (s + 2 * j - 1) * (s + 2 * j)
            mpow /= Mf * Mf
            j += 1
        return +acc


def zeta(k: int, precision: int) -> mp.mpf:
    """zeta(k) for integer k >= 2, accurate to ``10**-precision``."""
    if k < 2:
        raise InputError(f"zeta requires k >= 2, got {k}")
    _require_precision(precision)
    if k % 2 == 0:
        rat = zeta_even_rational(k)

        def compute(dps, _rat=rat, _k=k):
            pi = const_pi(dps)  # pi to dps + guard, ample here
            with mp.workdps(dps):
                return mpf_from_fraction(_rat) * pi ** _k

        return _cached(f"zeta{k}", precision, compute)

    def compute(dps, _k=k):
        return _zeta_euler_maclaurin(_k, dps)

    return _cached(f"zeta{k}", precision, compute)


def harmonic(r: int) -> Fraction:
    """Exact harmonic number H_r; H_0 = 0."""
    if r < 0:
        raise InputError(f"harmonic index must be >= 0, got {r}")
    with _harmonic_lock:
        while len(_harmonic_table) <= r:
            n = len(_harmonic_table)
            _harmonic_table.append(_harmonic_table[-1] + Fraction(1, n))
        return _harmonic_table[r]


def central_binomial(n: int) -> int:
    """Exact binomial(2n, n)."""
    if n < 0:
        raise InputError(f"central_binomial index must be >= 0, got {n}")
    return math.comb(2 * n, n)


def hypergeometric_coeffs(a: Fraction, b: Fraction, c: Fraction, n_terms: int) -> list[Fraction]:
    """First ``n_terms + 1`` exact Taylor coefficients of 2F1(a, b; c; x).

    Raises :class:`InputError` naming the offending index when the
    Pochhammer factor (c)_n vanishes within range.
    """
    a, b, c = Fraction(a), Fraction(b), Fraction(c)
    coeffs = [Fraction(1)]
    cur = Fraction(1)
    for n in range(n_terms):
        if c + n == 0:
            raise InputError(f"Pochhammer factor (c)_n vanishes at index n={n + 1} "
                             f"for c={c}")
        cur *= (a + n) * (b + n)
        cur /= (c + n) * (n + 1)
        coeffs.append(cur)
    return coeffs


@dataclass(frozen=True)
class ConstantValue:
    """A labeled exact constant with a high-precision value.

    ``factors`` records the monomial structure, e.g. ``(("pi", 4),)`` or
    ``(("zeta3", 1), ("pi", 2))``, so the value can be recomputed at any
    precision.  The empty tuple is the constant 1.
    """

    label: str
    weight: int
    factors: tuple[tuple[str, int], ...]
    value: mp.mpf
    precision: int

    def at_precision(self, precision: int) -> mp.mpf:
        return evaluate_monomial(self.factors, precision)


def symbol_weight(symbol: str) -> int:
    if symbol == "pi" or symbol == "log2":
        return 1
    if symbol.startswith("zeta"):
        k = int(symbol[4:])
        if k < 2:
            raise InputError(f"invalid constant symbol {symbol!r}")
        return k
    raise InputError(f"unknown constant symbol {symbol!r}")


def symbol_value(symbol: str, precision: int) -> mp.mpf:
    if symbol == "pi":
        return const_pi(precision)
    if symbol == "log2":
        return const_log2(precision)
    if symbol.startswith("zeta"):
        return zeta(int(symbol[4:]), precision)
    raise InputError(f"unknown constant symbol {symbol!r}")


def evaluate_monomial(factors: tuple[tuple[str, int], ...], precision: int) -> mp.mpf:
    """Value of a product of symbol powers at the given precision."""
    with mp.workdps(working_dps(precision)):
        acc = mp.mpf(1)
        for symbol, power in factors:
            acc *= symbol_value(symbol, precision) ** power
        return +acc


def monomial_label(factors: tuple[tuple[str, int], ...]) -> str:
    if not factors:
        return "1"
    parts = []
    for symbol, power in factors:
        parts.append(symbol if power == 1 else f"{symbol}^{power}")
    return "*".join(parts)
