"""Linear differential operators in theta form with exact rational coefficients.

An operator is  sum_j p_j(x) * theta**j  with theta = x d/dx and
``PolyQ`` coefficients; the theta form is canonical, the d/dx form is
derived on demand (Stirling numbers mediate the two).  Chart tags are
explicit, and every cross-chart operation insists on matching tags --
this is the step where a silent x vs 1/x mix-up would otherwise hide.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath as mp

from .arith import working_dps
from .errors import ChartMismatchError, InputError, NumericError
from .poly import PolyQ
from .series import LogSeries

_ZERO = Fraction(0)


def _to_point(z) -> mp.mpc:
    if isinstance(z, Fraction):
        return mp.mpc(mp.mpf(z.numerator) / z.denominator)
    return mp.mpc(z)


def invert_chart_tag(tag: str) -> str:
    if tag == "phi":
        return "phitilde"
    if tag == "phitilde":
        return "phi"
    if tag.startswith("inv(") and tag.endswith(")"):
        return tag[4:-1]
    return f"inv({tag})"


@dataclass(frozen=True)
class ThetaOperator:
    theta_coeffs: tuple[PolyQ, ...]
    chart: str = "phi"

    @staticmethod
    def of(coeff_rows, chart: str = "phi") -> "ThetaOperator":
        """Build from rows of polynomial coefficients, index = theta power."""
        polys = tuple(p if isinstance(p, PolyQ) else PolyQ.of(*p) for p in coeff_rows)
        return ThetaOperator(polys, chart).canonical()

    def __post_init__(self):
        coeffs = list(self.theta_coeffs)
        while coeffs and coeffs[-1].is_zero:
            coeffs.pop()
        if not coeffs or len(coeffs) < 2:
            raise InputError("operator must have order >= 1")
        object.__setattr__(self, "theta_coeffs", tuple(coeffs))

    @property
    def order(self) -> int:
        return len(self.theta_coeffs) - 1

    def coefficient(self, j: int) -> PolyQ:
        return self.theta_coeffs[j] if 0 <= j < len(self.theta_coeffs) else PolyQ()

    @property
    def max_degree(self) -> int:
        return max(p.degree for p in self.theta_coeffs if not p.is_zero)

    def canonical(self) -> "ThetaOperator":
        """Primitive integer coefficients, no common x power, positive leading."""
        m = min((p.monomial_content() for p in self.theta_coeffs if not p.is_zero),
                default=0)
        polys = [PolyQ(p.coeffs[m:]) if not p.is_zero else p for p in self.theta_coeffs]
        content = _ZERO
        for p in polys:
            for c in p.coeffs:
                content = _content_join(content, c)
        if content not in (0, 1):
            polys = [p * (1 / content) for p in polys]
        if polys[-1].leading < 0:
            polys = [-p for p in polys]
        return ThetaOperator(tuple(polys), self.chart)

    def __eq__(self, other) -> bool:
        return (isinstance(other, ThetaOperator)
                and self.chart == other.chart
                and self.theta_coeffs == other.theta_coeffs)

    def as_strings(self) -> list[list[str]]:
        return [p.as_strings() for p in self.theta_coeffs]


def _content_join(acc: Fraction, c: Fraction) -> Fraction:
    if c == 0:
        return acc
    if acc == 0:
        return abs(c)
    return Fraction(math.gcd(acc.numerator, abs(c.numerator)),
                    acc.denominator * c.denominator
                    // math.gcd(acc.denominator, c.denominator))


# -- theta form <-> d/dx form -------------------------------------------------

def _stirling2(n: int) -> list[list[int]]:
    table = [[1]]
    for i in range(1, n + 1):
        row = [0] * (i + 1)
        for j in range(1, i + 1):
            row[j] = (table[i - 1][j - 1] if j - 1 <= i - 1 else 0) \
                + j * (table[i - 1][j] if j <= i - 1 else 0)
        table.append(row)
    return table


def _stirling1_signed(n: int) -> list[list[int]]:
    table = [[1]]
    for i in range(1, n + 1):
        row = [0] * (i + 1)
        for j in range(1, i + 1):
            row[j] = (table[i - 1][j - 1] if j - 1 <= i - 1 else 0) \
                - (i - 1) * (table[i - 1][j] if j <= i - 1 else 0)
        table.append(row)
    return table


def to_d_form(op: ThetaOperator) -> list[PolyQ]:
    """Coefficients q_i with  op = sum_i q_i(x) (d/dx)**i  (exact)."""
    r = op.order
    s2 = _stirling2(r)
    out = [PolyQ() for _ in range(r + 1)]
    for j, p in enumerate(op.theta_coeffs):
        if p.is_zero:
            continue
        for i in range(0, j + 1):
            c = s2[j][i]
            if c:
                out[i] = out[i] + (p * Fraction(c)).shift_degree(i)
    return out


def from_d_form(d_coeffs, chart: str) -> ThetaOperator:
    """Operator from d/dx-form coefficients; clears x powers canonically."""
    d_coeffs = [p if isinstance(p, PolyQ) else PolyQ.of(*p) for p in d_coeffs]
    while d_coeffs and d_coeffs[-1].is_zero:
        d_coeffs.pop()
    if len(d_coeffs) < 2:
        raise InputError("operator must have order >= 1")
    r = len(d_coeffs) - 1
    s1 = _stirling1_signed(r)
    theta = [PolyQ() for _ in range(r + 1)]
    # multiply by x**r on the left:  x**r d**i = x**(r-i) * (x**i d**i)
    # and x**i d**i = sum_j s1[i][j] theta**j
    for i, q in enumerate(d_coeffs):
        if q.is_zero:
            continue
        lifted = q.shift_degree(r - i)
        for j in range(0, i + 1):
            c = s1[i][j]
            if c:
                theta[j] = theta[j] + lifted * Fraction(c)
    return ThetaOperator(tuple(theta), chart).canonical()


# -- operator application ------------------------------------------------------

def apply_operator(op: ThetaOperator, s: LogSeries) -> LogSeries:
    """Exact application of  sum p_j theta**j  to a truncated log-series."""
    if op.chart != s.chart:
        raise ChartMismatchError(f"operator chart {op.chart!r} does not match "
                                 f"series chart {s.chart!r}")
    acc = None
    power = s
    for j, p in enumerate(op.theta_coeffs):
        if not p.is_zero:
            term = power.mul_poly(p)
            acc = term if acc is None else acc + term
        if j < op.order:
            power = power.theta()
    return acc


# -- recurrence ----------------------------------------------------------------

@dataclass(frozen=True)
class Recurrence:
    """Coefficient recurrence  sum_m tap_m(n - m + sigma) a_{n-m}(sigma) = 0.

    ``taps[m]`` is the polynomial (in one variable u = index + sigma)
    multiplying the coefficient shifted down by m; the indicial polynomial
    is the m = 0 tap.
    """

    taps: tuple[PolyQ, ...]
    chart: str

    @property
    def span(self) -> int:
        return len(self.taps) - 1

    @property
    def indicial(self) -> PolyQ:
        return self.taps[0]

    def plain_coefficient(self, m: int, n: int, rho: Fraction) -> Fraction:
        """tap_m evaluated for equation index n at sigma = rho."""
        return self.taps[m](Fraction(n - m) + rho)


def derive_recurrence(op: ThetaOperator) -> Recurrence:
    """Substitute theta -> (index + sigma) on each monomial x**m theta**j."""
    taps = []
    for m in range(op.max_degree + 1):
        tap = PolyQ()
        for j, p in enumerate(op.theta_coeffs):
            c = p[m]
            if c:
                tap = tap + PolyQ((_ZERO,) * j + (Fraction(1),)) * c
        taps.append(tap)
    if taps[0].is_zero:
        raise InputError("operator has identically zero indicial tap; "
                         "the expansion point is not a regular point of the recurrence")
    return Recurrence(tuple(taps), op.chart)


def indicial_polynomial(op: ThetaOperator) -> PolyQ:
    """q_0(sigma): allowed leading exponents at x = 0 in this chart."""
    return derive_recurrence(op).indicial


@dataclass(frozen=True)
class MumCheck:
    is_mum: bool
    rho: Fraction | None
    order: int
    detail: str


def is_mum(op: ThetaOperator) -> MumCheck:
    """MUM iff the indicial polynomial is c * (sigma - rho)**order."""
    q = indicial_polynomial(op)
    r = op.order
    if q.degree != r:
        return MumCheck(False, None, r,
                        f"indicial degree {q.degree} < operator order {r}")
    c = q.leading
    rho = -q.coeffs[r - 1] / (r * c)
    target = PolyQ.of(-rho, 1)
    power = PolyQ.of(1)
    for _ in range(r):
        power = power * target
    if power * c == q:
        return MumCheck(True, rho, r, f"indicial = {c}*(sigma - {rho})^{r}")
    return MumCheck(False, None, r,
                    f"indicial {q.as_strings()} is not a perfect {r}-th power")


# -- chart transforms ----------------------------------------------------------

def invert_variable(op: ThetaOperator) -> ThetaOperator:
    """Operator in the chart y = 1/x (theta_x = -theta_y), canonical form."""
    d = op.max_degree
    new = []
    for j, p in enumerate(op.theta_coeffs):
        rev = [_ZERO] * (d + 1)
        for m, c in enumerate(p.coeffs):
            rev[d - m] = c
        sign = -1 if j % 2 else 1
        new.append(PolyQ(tuple(rev)) * sign)
    return ThetaOperator(tuple(new), invert_chart_tag(op.chart)).canonical()


def rescale_variable(op: ThetaOperator, k: Fraction) -> ThetaOperator:
    """Chart u = x/k: coefficients become p_j(k*u), theta unchanged."""
    k = Fraction(k)
    if k == 0:
        raise InputError("rescale factor must be nonzero")
    new = tuple(p.compose_scale(k) for p in op.theta_coeffs)
    chart = op.chart if k == 1 else f"({op.chart})/{k}"
    return ThetaOperator(new, chart).canonical()


def shift_variable(op: ThetaOperator, x0: Fraction) -> ThetaOperator:
    """Chart u = x - x0, via the d/dx form (d is translation invariant)."""
    x0 = Fraction(x0)
    d_coeffs = [q.compose_shift(x0) for q in to_d_form(op)]
    chart = op.chart if x0 == 0 else f"({op.chart})-({x0})"
    return from_d_form(d_coeffs, chart)


# -- singularities -------------------------------------------------------------

@dataclass(frozen=True)
class SingularPoint:
    value: mp.mpc
    radius: mp.mpf
    exact: Fraction | None = None


@dataclass(frozen=True)
class SingularitySet:
    finite_points: tuple[SingularPoint, ...]
    has_infinity: bool

    def min_distance(self, z) -> mp.mpf:
        if not self.finite_points:
            return mp.inf
        z = _to_point(z)
        return min(abs(z - p.value) for p in self.finite_points)

    def nearest(self, z) -> tuple[SingularPoint, mp.mpf]:
        best = None
        best_d = mp.inf
        z = _to_point(z)
        for p in self.finite_points:
            d = abs(z - p.value)
            if d < best_d:
                best, best_d = p, d
        return best, best_d


def _rational_roots(p: PolyQ) -> tuple[list[tuple[Fraction, int]], PolyQ]:
    """Deflate all rational roots (with multiplicity); returns rest factor."""
    roots: dict[Fraction, int] = {}
    m = p.monomial_content()
    if m:
        roots[Fraction(0)] = m
        p = PolyQ(p.coeffs[m:])
    content = p.content()
    if content not in (0, 1):
        p = p * (1 / content)
    while p.degree >= 1:
        lead = p.leading
        const = p.coeffs[0]
        if const == 0:
            roots[Fraction(0)] = roots.get(Fraction(0), 0) + 1
            p = PolyQ(p.coeffs[1:])
            continue
        head = abs(const.numerator * lead.denominator)
        tail = abs(lead.numerator * const.denominator)
        if head > 10 ** 12 or tail > 10 ** 12:
            break  # divisor enumeration would be absurd; leave to numeric roots
        found = None
        for a in _divisors(head):
            for b in _divisors(tail):
                for cand in (Fraction(a, b), Fraction(-a, b)):
                    if p(cand) == 0:
                        found = cand
                        break
                if found is not None:
                    break
            if found is not None:
                break
        if found is None:
            break
        roots[found] = roots.get(found, 0) + 1
        p = _deflate(p, found)
    return sorted(roots.items()), p


def _divisors(n: int) -> list[int]:
    if n == 0:
        return [1]
    out = set()
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.add(d)
            out.add(n // d)
        d += 1
    return sorted(out)


def _deflate(p: PolyQ, root: Fraction) -> PolyQ:
    """Synthetic division of p by (x - root); remainder must be zero."""
    out = []
    acc = p.coeffs[-1]
    for i in range(p.degree - 1, -1, -1):
        out.append(acc)
        acc = p.coeffs[i] + acc * root
    if acc != 0:
        raise InputError(f"{root} is not a root during deflation")
    out.reverse()
    return PolyQ(tuple(out))


def _polyroots(p: PolyQ, dps: int) -> list[mp.mpc]:
    with mp.workdps(dps):
        coeffs = [mp.mpf(c.numerator) / c.denominator for c in reversed(p.coeffs)]
        try:
            roots = mp.polyroots(coeffs, maxsteps=200, extraprec=60)
        except mp.libmp.NoConvergence as exc:
            raise NumericError(f"root refinement failed to converge at {dps} dps: {exc}")
        return [mp.mpc(r) for r in roots]


def singularities(op: ThetaOperator, precision: int = 50) -> SingularitySet:
    """Roots of the leading d/dx-form coefficient, with isolation radii.

    Rational roots are extracted exactly first; any residual factor goes
    through simultaneous iteration at working precision, and every
    approximate root is re-refined at doubled precision and must stay
    within its isolation radius.
    """
    d = to_d_form(op)
    lead = d[-1]
    if lead.is_zero:
        raise InputError("leading d-form coefficient is zero")
    dps = working_dps(precision)
    rational, rest = _rational_roots(lead)
    approx: list[mp.mpc] = []
    if rest.degree >= 1:
        approx = _polyroots(rest, dps)
        refined = _polyroots(rest, 2 * dps)
    with mp.workdps(dps):
        points = [mp.mpc(mpq_num(v)) for v, _mult in rational]
        all_pts = points + approx
        radii = []
        for i, z in enumerate(all_pts):
            sep = min((abs(z - w) for j, w in enumerate(all_pts) if j != i),
                      default=mp.mpf(1))
            radii.append(sep / 4 if sep > 0 else mp.mpf(10) ** (-precision))
        out = []
        for (v, _mult), z, rad in zip(rational, points, radii[: len(points)]):
            out.append(SingularPoint(z, rad, exact=v))
        for idx, z in enumerate(approx):
            rad = radii[len(points) + idx]
            best = min(refined, key=lambda w: abs(w - z))
            if abs(best - z) >= rad:
                raise NumericError(f"root near {mp.nstr(z, 10)} moved by "
                                   f"{mp.nstr(abs(best - z), 5)} on refinement "
                                   f"(isolation radius {mp.nstr(rad, 5)})")
            out.append(SingularPoint(best, rad, exact=None))
    inv = invert_variable(op)
    inv_lead = to_d_form(inv)[-1]
    has_inf = inv_lead[0] == 0 if inv_lead.coeffs else True
    return SingularitySet(tuple(out), has_inf)


def mpq_num(q: Fraction) -> mp.mpf:
    return mp.mpf(q.numerator) / q.denominator
