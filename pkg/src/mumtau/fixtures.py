"""Built-in operators and seed series.

The family D2..D7 annihilates the central-binomial series

    2 * sum_{n>=1} (-1)**(n-1) / (n**k binom(2n,n)) * x**(n-1),

one operator of order k+1 per exponent k; DL is the order-two
hypergeometric operator of the Legendre elliptic family.  Each fixture
records its operator, the exact seed coefficients, convergence data, and
the chart transform that exposes the maximally unipotent point.  Closed
forms for the two nontrivial blocks of the canonical basis are provided
for the family; the basis construction is checked against them exactly in
the tests, which is what licenses their use in boundary evaluation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .arith import central_binomial, harmonic
from .errors import InputError
from .ode import ThetaOperator, from_d_form
from .poly import PolyQ

_D_THETA_ROWS = {
    2: [[0, 1], [2, 3], [6, 3], [4, 1]],
    3: [[0, 1], [2, 4], [8, 6], [10, 4], [4, 1]],
    4: [[0, 1], [2, 5], [10, 10], [18, 10], [14, 5], [4, 1]],
    5: [[0, 1], [2, 6], [12, 15], [28, 20], [32, 15], [18, 6], [4, 1]],
    6: [[0, 1], [2, 7], [14, 21], [40, 35], [60, 35], [50, 21], [22, 7], [4, 1]],
    7: [[0, 1], [2, 8], [16, 28], [54, 56], [100, 70], [110, 56], [72, 28],
        [26, 8], [4, 1]],
}


def _legendre_operator() -> ThetaOperator:
    # x(x-1) y'' + (2x-1) y' + y/4, converted from d/dx form
    return from_d_form([PolyQ.of(Fraction(1, 4)), PolyQ.of(-1, 2), PolyQ.of(0, -1, 1)],
                       chart="lambda")


def family_seed_coefficient(k: int, n: int) -> Fraction:
    """Coefficient of x**n in the k-family seed series (n >= 0)."""
    m = n + 1
    return Fraction(2 * (-1) ** n, m ** k * central_binomial(m))


def legendre_seed_coefficient(n: int) -> Fraction:
    """Coefficient of x**n in the Legendre period series."""
    return Fraction(central_binomial(n) ** 2, 16 ** n)


def family_sub_block_coefficient(k: int, n: int) -> Fraction:
    """Coefficient of x**(n+1) in the log-free part of solution k-1 (n >= 1)."""
    return Fraction((-1) ** n * math.factorial(k - 1) * central_binomial(n),
                    n ** (k - 1))


def family_top_block_coefficient(k: int, n: int) -> Fraction:
    """Coefficient of x**(n+1) in the log-free part of the top solution (n >= 1)."""
    hfac = k + 2 * n * (harmonic(n - 1) - harmonic(2 * n - 1))
    return Fraction((-1) ** (n + 1) * math.factorial(k) * central_binomial(n),
                    n ** k) * hfac


@dataclass(frozen=True)
class Fixture:
    name: str
    operator: ThetaOperator
    seed_name: str
    seed_coefficient: Callable[[int], Fraction]
    seed_radius: Fraction          # convergence radius of the seed series
    mum_transform: str             # "invert" | "none"
    local_radius: Fraction         # basis radius at the MUM point
    family_k: int | None = None


def _build_fixtures() -> dict[str, Fixture]:
    out: dict[str, Fixture] = {}
    for k, rows in _D_THETA_ROWS.items():
        op = ThetaOperator.of(rows, chart="phi")
        out[f"D{k}"] = Fixture(
            name=f"D{k}",
            operator=op,
            seed_name=f"Pi0_k{k}",
            seed_coefficient=(lambda n, _k=k: family_seed_coefficient(_k, n)),
            seed_radius=Fraction(4),
            mum_transform="invert",
            local_radius=Fraction(1, 4),
            family_k=k,
        )
    out["DL"] = Fixture(
        name="DL",
        operator=_legendre_operator(),
        seed_name="legendre_pi0",
        seed_coefficient=legendre_seed_coefficient,
        seed_radius=Fraction(1),
        mum_transform="none",
        local_radius=Fraction(1),
        family_k=None,
    )
    return out


FIXTURES = _build_fixtures()

SEED_BUILTINS = {f.seed_name: f.seed_coefficient for f in FIXTURES.values()}


def get_fixture(name: str) -> Fixture:
    try:
        return FIXTURES[name]
    except KeyError:
        raise InputError(f"unknown fixture {name!r}; available: "
                         f"{', '.join(sorted(FIXTURES))}") from None
