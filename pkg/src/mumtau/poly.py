"""Dense univariate polynomials over Q, and truncated power series helpers.

``PolyQ`` is the coefficient type of differential operators: immutable,
ascending-degree tuples of ``Fraction`` with trailing zeros trimmed (the
zero polynomial is the empty tuple).  ``EpsPoly`` is a polynomial
truncated modulo ``eps**order``, used to push deformed series
coefficients a_n(rho + eps) through a recurrence.  The ``ps_*`` functions
operate on plain lists of Fractions viewed as truncated power series and
support the asymptotic-expansion machinery of the boundary summation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import InputError

_ZERO = Fraction(0)


def _trim(coeffs) -> tuple[Fraction, ...]:
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(Fraction(c) for c in coeffs)


@dataclass(frozen=True)
class PolyQ:
    coeffs: tuple[Fraction, ...] = ()

    @staticmethod
    def of(*coeffs) -> "PolyQ":
        return PolyQ(_trim(Fraction(c) for c in coeffs))

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _trim(self.coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __getitem__(self, d: int) -> Fraction:
        return self.coeffs[d] if 0 <= d < len(self.coeffs) else _ZERO

    def __add__(self, other: "PolyQ") -> "PolyQ":
        n = max(len(self.coeffs), len(other.coeffs))
        return PolyQ(tuple(self[i] + other[i] for i in range(n)))

    def __sub__(self, other: "PolyQ") -> "PolyQ":
        n = max(len(self.coeffs), len(other.coeffs))
        return PolyQ(tuple(self[i] - other[i] for i in range(n)))

    def __neg__(self) -> "PolyQ":
        return PolyQ(tuple(-c for c in self.coeffs))

    def __mul__(self, other) -> "PolyQ":
        if isinstance(other, (int, Fraction)):
            return PolyQ(tuple(c * other for c in self.coeffs))
        if not self.coeffs or not other.coeffs:
            return PolyQ()
        out = [_ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return PolyQ(tuple(out))

    __rmul__ = __mul__

    def shift_degree(self, m: int) -> "PolyQ":
        """Multiply by x**m."""
        if not self.coeffs:
            return self
        return PolyQ((_ZERO,) * m + self.coeffs)

    def __call__(self, x):
        """Horner evaluation; works for Fraction, mpf/mpc, EpsPoly."""
        if not self.coeffs:
            return x * 0
        acc = None
        for c in reversed(self.coeffs):
            acc = c if acc is None else acc * x + c
        return acc

    def derivative(self) -> "PolyQ":
        return PolyQ(tuple(i * c for i, c in enumerate(self.coeffs) if i >= 1))

    def compose_scale(self, k: Fraction) -> "PolyQ":
        """p(k*x)."""
        k = Fraction(k)
        return PolyQ(tuple(c * k ** i for i, c in enumerate(self.coeffs)))

    def compose_shift(self, a: Fraction) -> "PolyQ":
        """p(x + a), exact Taylor shift."""
        a = Fraction(a)
        if not a or not self.coeffs:
            return self
        out = list(self.coeffs)
        n = len(out)
        for i in range(n - 1):          # synthetic division by (x - (-a)), repeated
            for j in range(n - 2, i - 1, -1):
                out[j] += a * out[j + 1]
        return PolyQ(tuple(out))

    def content(self) -> Fraction:
        """Positive rational content (gcd of numerators over lcm of denominators)."""
        if not self.coeffs:
            return Fraction(1)
        num = 0
        den = 1
        for c in self.coeffs:
            num = _gcd(num, abs(c.numerator))
            den = _lcm(den, c.denominator)
        return Fraction(num, den)

    def monomial_content(self) -> int:
        """Largest m with x**m dividing the polynomial (0 for the zero poly)."""
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return 0

    @property
    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else _ZERO

    def as_strings(self) -> list[str]:
        return [str(c) for c in self.coeffs]


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def _lcm(a: int, b: int) -> int:
    return a // _gcd(a, b) * b if a and b else max(a, b)


def poly_from_strings(items) -> PolyQ:
    return PolyQ(tuple(Fraction(s) for s in items))


@dataclass(frozen=True)
class EpsPoly:
    """Polynomial in a nilpotent eps with eps**order == 0."""

    coeffs: tuple[Fraction, ...]
    order: int

    @staticmethod
    def constant(c: Fraction, order: int) -> "EpsPoly":
        return EpsPoly((Fraction(c),) + (_ZERO,) * (order - 1), order)

    @staticmethod
    def eps_shifted(c: Fraction, order: int) -> "EpsPoly":
        """The element c + eps."""
        base = [Fraction(c)] + [_ZERO] * (order - 1)
        if order > 1:
            base[1] = Fraction(1)
        return EpsPoly(tuple(base), order)

    def _promote(self, other) -> "EpsPoly":
        if isinstance(other, EpsPoly):
            return other
        return EpsPoly.constant(Fraction(other), self.order)

    def __add__(self, other) -> "EpsPoly":
        other = self._promote(other)
        return EpsPoly(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)), self.order)

    __radd__ = __add__

    def __sub__(self, other) -> "EpsPoly":
        other = self._promote(other)
        return EpsPoly(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)), self.order)

    def __neg__(self) -> "EpsPoly":
        return EpsPoly(tuple(-a for a in self.coeffs), self.order)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return EpsPoly(tuple(a * other for a in self.coeffs), self.order)
        out = [_ZERO] * self.order
        for i, a in enumerate(self.coeffs):
            if a:
                for j in range(self.order - i):
                    b = other.coeffs[j]
                    if b:
                        out[i + j] += a * b
        return EpsPoly(tuple(out), self.order)

    __rmul__ = __mul__

    def inverse(self) -> "EpsPoly":
        c0 = self.coeffs[0]
        if c0 == 0:
            raise InputError("EpsPoly with zero constant term is not invertible")
        inv0 = 1 / c0
        out = [inv0] + [_ZERO] * (self.order - 1)
        for m in range(1, self.order):
            s = _ZERO
            for i in range(1, m + 1):
                if self.coeffs[i]:
                    s += self.coeffs[i] * out[m - i]
            out[m] = -s * inv0
        return EpsPoly(tuple(out), self.order)

    def __getitem__(self, i: int) -> Fraction:
        return self.coeffs[i]


# -- truncated power series over Q (plain lists, index = power) --------------

def ps_mul(a: list[Fraction], b: list[Fraction], n_terms: int) -> list[Fraction]:
    out = [_ZERO] * n_terms
    for i, x in enumerate(a[:n_terms]):
        if x:
            for j, y in enumerate(b[: n_terms - i]):
                if y:
                    out[i + j] += x * y
    return out


def ps_exp(a: list[Fraction], n_terms: int) -> list[Fraction]:
    """exp of a series with zero constant term, via e' = a' e."""
    if a and a[0] != 0:
        raise InputError("ps_exp requires zero constant term")
    e = [_ZERO] * n_terms
    e[0] = Fraction(1)
    for n in range(1, n_terms):
        s = _ZERO
        for k in range(1, n + 1):
            ak = a[k] if k < len(a) else _ZERO
            if ak:
                s += k * ak * e[n - k]
        e[n] = s / n
    return e
