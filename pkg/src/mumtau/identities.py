"""Catalog of the zeta-value identities for central-binomial sums.

For each exponent k = 2..7 the expansion of the seed series over the
canonical basis, evaluated at the two boundary points of its convergence
disc, yields three identities: one at the positive boundary point and a
real/imaginary pair at the negative one (where the logarithm acquires its
imaginary part).  Each identity is stored as "sum of terms equals zero",
a term being a rational multiple of an optional boundary sum and an
optional monomial in pi, log 2 and zeta values.  The numeric check
evaluates both sides through the tail-corrected summation engine.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath as mp

from .arith import evaluate_monomial, working_dps
from .boundary import central_sum
from .errors import InputError

F = Fraction


@dataclass(frozen=True)
class SumSpec:
    kind: str      # "binom" | "inv_binom" | "binom_harmonic"
    power: int
    sign: int      # +1 or -1 inside the summand


@dataclass(frozen=True)
class Term:
    coef: Fraction
    sum: SumSpec | None = None
    consts: tuple[tuple[str, int], ...] = ()

    def value(self, digits: int) -> mp.mpf:
        with mp.workdps(digits + 10):
            acc = mp.mpf(self.coef.numerator) / self.coef.denominator
            if self.sum is not None:
                acc *= central_sum(self.sum.kind, self.sum.power, self.sum.sign,
                                   digits)
            if self.consts:
                acc *= evaluate_monomial(self.consts, digits)
            return +acc


@dataclass(frozen=True)
class IdentityDef:
    ident: str
    k: int
    description: str
    lhs: tuple[Term, ...]
    rhs: tuple[Term, ...]


def _s2(m, sign):
    return SumSpec("inv_binom", m, sign)


def _s1(m, sign):
    return SumSpec("binom", m, sign)


def _s3(m, sign):
    return SumSpec("binom_harmonic", m, sign)


def _t(coef, sum_spec=None, **consts) -> Term:
    factors = []
    for symbol, power in consts.items():
        factors.append((symbol, power))
    return Term(F(coef), sum_spec, tuple(sorted(factors)))


CATALOG: tuple[IdentityDef, ...] = (
    # -- k = 2 ------------------------------------------------------------
    IdentityDef(
        "k2_pos", 2, "alternating inverse-binomial sum, exponent 2, at x = 4",
        lhs=(_t(F(-1, 2), _s2(2, -1)),),
        rhs=(_t(1, log2=2),
             Term(F(-1), _s1(1, -1), (("log2", 1),)),
             _t(F(-1, 2), _s3(2, -1))),
    ),
    IdentityDef(
        "k2_neg_re", 2, "inverse-binomial sum, exponent 2, at x = -4 (real part)",
        lhs=(_t(F(1, 2), _s2(2, 1)),),
        rhs=(_t(F(1, 4), pi=2), _t(1, log2=2), _t(F(1, 2), _s3(2, 1))),
    ),
    IdentityDef(
        "k2_neg_im", 2, "binom(2n,n)/(4^n n) equals 2 log 2",
        lhs=(_t(1, _s1(1, 1)),),
        rhs=(_t(2, log2=1),),
    ),
    # -- k = 3 ------------------------------------------------------------
    IdentityDef(
        "k3_pos", 3, "alternating inverse-binomial sum, exponent 3, at x = 4",
        lhs=(_t(F(-1, 2), _s2(3, -1)),),
        rhs=(_t(1, zeta3=1), _t(F(2, 3), log2=3),
             Term(F(1), _s1(2, -1), (("log2", 1),)),
             _t(F(1, 2), _s3(3, -1))),
    ),
    IdentityDef(
        "k3_neg_re", 3, "inverse-binomial sum, exponent 3, at x = -4 (real part)",
        lhs=(_t(F(1, 2), _s2(3, 1)),),
        rhs=(_t(-1, zeta3=1), _t(F(1, 3), pi=2, log2=1), _t(F(4, 3), log2=3),
             _t(F(-1, 2), _s3(3, 1))),
    ),
    IdentityDef(
        "k3_neg_im", 3, "binom(2n,n)/(4^n n^2) equals pi^2/6 - 2 log^2 2",
        lhs=(_t(1, _s1(2, 1)),),
        rhs=(_t(F(1, 6), pi=2), _t(-2, log2=2)),
    ),
    # -- k = 4 ------------------------------------------------------------
    IdentityDef(
        "k4_pos", 4, "alternating inverse-binomial sum, exponent 4, at x = 4",
        lhs=(_t(F(-1, 2), _s2(4, -1)),),
        rhs=(_t(F(-1, 60), pi=4), _t(2, zeta3=1, log2=1), _t(F(1, 3), log2=4),
             Term(F(-1), _s1(3, -1), (("log2", 1),)),
             _t(F(-1, 2), _s3(4, -1))),
    ),
    IdentityDef(
        "k4_neg_re", 4, "inverse-binomial sum, exponent 4, at x = -4 (real part)",
        lhs=(_t(F(1, 2), _s2(4, 1)),),
        rhs=(_t(F(-1, 240), pi=4), _t(F(1, 6), pi=2, log2=2), _t(1, log2=4),
             _t(F(1, 2), _s3(4, 1))),
    ),
    IdentityDef(
        "k4_neg_im", 4, "binom(2n,n)/(4^n n^3) in zeta(3), pi^2 log 2, log^3 2",
        lhs=(_t(1, _s1(3, 1)),),
        rhs=(_t(2, zeta3=1), _t(F(-1, 3), pi=2, log2=1), _t(F(4, 3), log2=3)),
    ),
    # -- k = 5 ------------------------------------------------------------
    IdentityDef(
        "k5_pos", 5, "alternating inverse-binomial sum, exponent 5, at x = 4",
        lhs=(_t(F(-1, 2), _s2(5, -1)),),
        rhs=(_t(3, zeta5=1), _t(F(-1, 30), pi=4, log2=1), _t(2, zeta3=1, log2=2),
             _t(F(2, 15), log2=5),
             Term(F(1), _s1(4, -1), (("log2", 1),)),
             _t(F(1, 2), _s3(5, -1))),
    ),
    IdentityDef(
        "k5_neg_re", 5, "inverse-binomial sum, exponent 5, at x = -4 (real part)",
        lhs=(_t(F(1, 2), _s2(5, 1)),),
        rhs=(_t(-3, zeta5=1), _t(F(-1, 30), pi=4, log2=1), _t(2, zeta3=1, log2=2),
             _t(F(1, 2), zeta3=1, pi=2), _t(F(8, 15), log2=5),
             _t(F(-1, 2), _s3(5, 1))),
    ),
    IdentityDef(
        "k5_neg_im", 5, "binom(2n,n)/(4^n n^4) in pi^4, zeta(3) log 2, ...",
        lhs=(_t(1, _s1(4, 1)),),
        rhs=(_t(F(1, 40), pi=4), _t(-4, zeta3=1, log2=1), _t(F(1, 3), pi=2, log2=2),
             _t(F(-2, 3), log2=4)),
    ),
    # -- k = 6 ------------------------------------------------------------
    IdentityDef(
        "k6_pos", 6, "alternating inverse-binomial sum, exponent 6, at x = 4",
        lhs=(_t(F(-1, 2), _s2(6, -1)),),
        rhs=(_t(F(-1, 189), pi=6), _t(6, zeta5=1, log2=1),
             _t(F(-1, 30), pi=4, log2=2), _t(1, zeta3=2),
             _t(F(4, 3), zeta3=1, log2=3), _t(F(2, 45), log2=6),
             Term(F(-1), _s1(5, -1), (("log2", 1),)),
             _t(F(-1, 2), _s3(6, -1))),
    ),
    IdentityDef(
        "k6_neg_re", 6, "inverse-binomial sum, exponent 6, at x = -4 (real part)",
        lhs=(_t(F(1, 2), _s2(6, 1)),),
        rhs=(_t(F(-71, 30240), pi=6), _t(F(-7, 120), pi=4, log2=2),
             _t(-1, zeta3=2), _t(F(2, 3), zeta3=1, pi=2, log2=1),
             _t(F(8, 3), zeta3=1, log2=3), _t(F(-1, 18), pi=2, log2=4),
             _t(F(2, 9), log2=6), _t(F(1, 2), _s3(6, 1))),
    ),
    IdentityDef(
        "k6_neg_im", 6, "binom(2n,n)/(4^n n^5) in zeta(5), pi^4 log 2, ...",
        lhs=(_t(1, _s1(5, 1)),),
        rhs=(_t(6, zeta5=1), _t(F(-1, 20), pi=4, log2=1),
             _t(F(-1, 3), zeta3=1, pi=2), _t(4, zeta3=1, log2=2),
             _t(F(-2, 9), pi=2, log2=3), _t(F(4, 15), log2=5)),
    ),
    # -- k = 7 ------------------------------------------------------------
    IdentityDef(
        "k7_pos", 7, "alternating inverse-binomial sum, exponent 7, at x = 4",
        lhs=(_t(F(-1, 2), _s2(7, -1)),),
        rhs=(_t(9, zeta7=1), _t(F(-2, 189), pi=6, log2=1), _t(6, zeta5=1, log2=2),
             _t(F(-1, 45), pi=4, log2=3), _t(F(-1, 30), pi=4, zeta3=1),
             _t(F(2, 3), zeta3=1, log2=4), _t(2, zeta3=2, log2=1),
             _t(F(4, 315), log2=7),
             Term(F(1), _s1(6, -1), (("log2", 1),)),
             _t(F(1, 2), _s3(7, -1))),
    ),
    IdentityDef(
        "k7_neg_re", 7, "inverse-binomial sum, exponent 7, at x = -4 (real part)",
        lhs=(_t(F(1, 2), _s2(7, 1)),),
        rhs=(_t(-9, zeta7=1), _t(F(-5, 504), pi=6, log2=1),
             _t(F(3, 2), zeta5=1, pi=2), _t(6, zeta5=1, log2=2),
             _t(F(-1, 18), pi=4, log2=3), _t(F(-1, 120), pi=4, zeta3=1),
             _t(F(1, 3), zeta3=1, pi=2, log2=2), _t(2, zeta3=1, log2=4),
             _t(F(-2, 45), pi=2, log2=5), _t(F(8, 105), log2=7),
             _t(F(-1, 2), _s3(7, 1))),
    ),
    IdentityDef(
        "k7_neg_im", 7, "binom(2n,n)/(4^n n^6) in pi^6, zeta(5) log 2, ...",
        lhs=(_t(1, _s1(6, 1)),),
        rhs=(_t(F(79, 15120), pi=6), _t(-12, zeta5=1, log2=1),
             _t(F(1, 20), pi=4, log2=2), _t(-2, zeta3=2),
             _t(F(2, 3), zeta3=1, pi=2, log2=1), _t(F(-8, 3), zeta3=1, log2=3),
             _t(F(1, 9), pi=2, log2=4), _t(F(-4, 45), log2=6)),
    ),
)


def identities_for(k: int) -> tuple[IdentityDef, ...]:
    if k not in range(2, 8):
        raise InputError(f"identity catalog covers k = 2..7, got {k}")
    return tuple(d for d in CATALOG if d.k == k)


def evaluate_identity(defn: IdentityDef, digits: int = 30) -> tuple[mp.mpf, mp.mpf]:
    """(left value, right value) of the identity at the requested accuracy."""
    with mp.workdps(working_dps(digits)):
        lhs = mp.fsum(t.value(digits) for t in defn.lhs)
        rhs = mp.fsum(t.value(digits) for t in defn.rhs)
        return +lhs, +rhs
