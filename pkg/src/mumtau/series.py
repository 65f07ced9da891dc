"""Truncated exact series and log-series in a local chart variable.

``SeriesQ`` stores rational coefficients for x**(base + n), n = 0..N.
``LogSeries`` is a finite sum  sum_k S_k(x) * log(x)**k  with all blocks
sharing one base exponent and truncation; it is closed under the theta
operation (x d/dx), plain differentiation, and multiplication by
polynomials, which is everything operator application needs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import ChartMismatchError, InputError
from .poly import PolyQ

_ZERO = Fraction(0)


@dataclass(frozen=True)
class SeriesQ:
    base: Fraction
    coeffs: tuple[Fraction, ...]

    @staticmethod
    def of(base, coeffs) -> "SeriesQ":
        return SeriesQ(Fraction(base), tuple(Fraction(c) for c in coeffs))

    @property
    def truncation(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, n: int) -> Fraction:
        return self.coeffs[n] if 0 <= n < len(self.coeffs) else _ZERO

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def first_nonzero(self) -> int | None:
        for n, c in enumerate(self.coeffs):
            if c:
                return n
        return None

    def theta(self) -> "SeriesQ":
        """Apply x d/dx: coefficient n picks up the factor (base + n)."""
        return SeriesQ(self.base, tuple((self.base + n) * c
                                        for n, c in enumerate(self.coeffs)))

    def derivative(self) -> "SeriesQ":
        """d/dx: exponents drop by one."""
        return SeriesQ(self.base - 1, tuple((self.base + n) * c
                                            for n, c in enumerate(self.coeffs)))

    def shift_exponent(self, delta) -> "SeriesQ":
        return SeriesQ(self.base + Fraction(delta), self.coeffs)

    def mul_poly(self, p: PolyQ) -> "SeriesQ":
        """Multiply by a polynomial in x, keeping the truncation window."""
        n = len(self.coeffs)
        out = [_ZERO] * n
        for d, pd in enumerate(p.coeffs):
            if pd:
                for m in range(d, n):
                    c = self.coeffs[m - d]
                    if c:
                        out[m] += pd * c
        return SeriesQ(self.base, tuple(out))

    def __add__(self, other: "SeriesQ") -> "SeriesQ":
        if self.base != other.base:
            raise InputError("cannot add series with different base exponents "
                             f"({self.base} vs {other.base})")
        n = min(len(self.coeffs), len(other.coeffs))
        return SeriesQ(self.base, tuple(self.coeffs[i] + other.coeffs[i] for i in range(n)))

    def __mul__(self, q) -> "SeriesQ":
        q = Fraction(q)
        return SeriesQ(self.base, tuple(c * q for c in self.coeffs))

    __rmul__ = __mul__

    def __neg__(self) -> "SeriesQ":
        return SeriesQ(self.base, tuple(-c for c in self.coeffs))

    def truncate(self, n_terms: int) -> "SeriesQ":
        return SeriesQ(self.base, self.coeffs[: n_terms + 1])

    @staticmethod
    def zero(base, truncation: int) -> "SeriesQ":
        return SeriesQ(Fraction(base), (_ZERO,) * (truncation + 1))


@dataclass(frozen=True)
class LogSeries:
    chart: str
    blocks: tuple[SeriesQ, ...]

    def __post_init__(self):
        if not self.blocks:
            raise InputError("LogSeries needs at least one block")
        base = self.blocks[0].base
        n = self.blocks[0].truncation
        for b in self.blocks[1:]:
            if b.base != base or b.truncation != n:
                raise InputError("LogSeries blocks must share base exponent and truncation")

    @property
    def base(self) -> Fraction:
        return self.blocks[0].base

    @property
    def truncation(self) -> int:
        return self.blocks[0].truncation

    @property
    def max_log_power(self) -> int:
        top = 0
        for k, b in enumerate(self.blocks):
            if not b.is_zero:
                top = k
        return top

    def block(self, k: int) -> SeriesQ:
        if 0 <= k < len(self.blocks):
            return self.blocks[k]
        return SeriesQ.zero(self.base, self.truncation)

    def theta(self) -> "LogSeries":
        """x d/dx acting on  sum S_k log^k:  theta(S_k) log^k + (k+1) S_{k+1} log^k."""
        out = []
        for k in range(len(self.blocks)):
            s = self.blocks[k].theta()
            if k + 1 < len(self.blocks):
                s = s + (k + 1) * self.blocks[k + 1]
            out.append(s)
        return LogSeries(self.chart, tuple(out))

    def derivative(self) -> "LogSeries":
        """d/dx; every block's base exponent drops by one."""
        out = []
        for k in range(len(self.blocks)):
            s = self.blocks[k].derivative()
            if k + 1 < len(self.blocks):
                s = s + (k + 1) * self.blocks[k + 1].shift_exponent(-1)
            out.append(s)
        return LogSeries(self.chart, tuple(out))

    def mul_poly(self, p: PolyQ) -> "LogSeries":
        return LogSeries(self.chart, tuple(b.mul_poly(p) for b in self.blocks))

    def __add__(self, other: "LogSeries") -> "LogSeries":
        if self.chart != other.chart:
            raise ChartMismatchError(f"charts differ: {self.chart!r} vs {other.chart!r}")
        if self.base != other.base:
            raise InputError("cannot add log-series with different base exponents")
        n = max(len(self.blocks), len(other.blocks))
        trunc = min(self.truncation, other.truncation)
        out = []
        for k in range(n):
            out.append(self.block(k).truncate(trunc) + other.block(k).truncate(trunc))
        return LogSeries(self.chart, tuple(out))

    def __mul__(self, q) -> "LogSeries":
        q = Fraction(q)
        return LogSeries(self.chart, tuple(b * q for b in self.blocks))

    __rmul__ = __mul__

    def __neg__(self) -> "LogSeries":
        return LogSeries(self.chart, tuple(-b for b in self.blocks))

    def is_zero(self) -> bool:
        return all(b.is_zero for b in self.blocks)

    def first_nonzero(self) -> int | None:
        """Smallest coefficient index with a nonzero entry in any block."""
        best = None
        for b in self.blocks:
            n = b.first_nonzero()
            if n is not None and (best is None or n < best):
                best = n
        return best

    @staticmethod
    def pure_power(chart: str, base, truncation: int) -> "LogSeries":
        """The series x**base as a LogSeries."""
        coeffs = [Fraction(1)] + [_ZERO] * truncation
        return LogSeries(chart, (SeriesQ(Fraction(base), tuple(coeffs)),))

    @staticmethod
    def from_series(chart: str, s: SeriesQ, log_power: int = 0) -> "LogSeries":
        blocks = [SeriesQ.zero(s.base, s.truncation) for _ in range(log_power)] + [s]
        return LogSeries(chart, tuple(blocks))
