"""Numeric evaluation of log-series and transport of solution jets.

Near the expansion point a truncated log-series is summed directly with a
geometric tail estimate.  Away from it, solutions travel by repeated
Taylor steps: at an ordinary point the operator's d/dx form gives a
recurrence for local Taylor coefficients, seeded by the current jet, and
each step moves at most half the distance to the nearest singularity so
the local series converges at ratio 1/2 or better.  Monodromy matrices
come from transporting the whole basis around a loop and re-expressing it
in itself; a formal (exact) monodromy from the substitution
log -> log + 2*pi*i serves as the independent check.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath as mp

from .arith import const_pi, working_dps
from .boundary import fitted_power_tail
from .errors import InputError, NumericError
from .frobenius import FrobeniusBasis
from .ode import SingularitySet, ThetaOperator, singularities, to_d_form
from .series import LogSeries, SeriesQ

STEP_FACTOR = 0.5


def to_mpc(x) -> mp.mpc:
    """mpc from mpf/mpc, int, float, complex, Fraction, or numeric string."""
    if isinstance(x, Fraction):
        return mp.mpc(mp.mpf(x.numerator) / x.denominator)
    return mp.mpc(x)


@dataclass(frozen=True)
class SolutionSample:
    """A point and the jet (value and derivatives 0..r-1) of one solution."""

    point: mp.mpc
    jet: tuple[mp.mpc, ...]
    precision: int

    @property
    def order(self) -> int:
        return len(self.jet)


@dataclass
class TransportAudit:
    steps: int = 0
    max_terms: int = 0
    cancellation_digits: float = 0.0

    def absorb(self, other: "TransportAudit") -> None:
        self.steps += other.steps
        self.max_terms = max(self.max_terms, other.max_terms)
        self.cancellation_digits = max(self.cancellation_digits,
                                       other.cancellation_digits)


@dataclass(frozen=True)
class TransferMatrix:
    entries: tuple[tuple[mp.mpc, ...], ...]

    @property
    def size(self) -> int:
        return len(self.entries)

    @property
    def matrix(self) -> mp.matrix:
        return mp.matrix([list(row) for row in self.entries])


def _series_eval(s: SeriesQ, z: mp.mpc, drop_base: bool = False) -> mp.mpc:
    """Horner sum of the series at z; optionally without the z**base factor."""
    acc = mp.mpc(0)
    for c in reversed(s.coeffs):
        acc = acc * z
        if c:
            acc += mp.mpf(c.numerator) / c.denominator
    if drop_base or s.base == 0:
        return acc
    b = s.base
    zb = z ** (mp.mpf(b.numerator) / b.denominator) if b.denominator != 1 \
        else z ** b.numerator
    return acc * zb


def _series_tail_estimate(s: SeriesQ, absz: mp.mpf, radius) -> mp.mpf:
    """Geometric bound on the dropped tail of one block at |z| = absz."""
    if radius is not None:
        q = absz / (mp.mpf(radius.numerator) / radius.denominator
                    if isinstance(radius, Fraction) else mp.mpf(radius))
    else:
        q = None
        for n in range(len(s.coeffs) - 1, max(len(s.coeffs) - 8, 0), -1):
            if s.coeffs[n] and s.coeffs[n - 1]:
                r = abs(Fraction(s.coeffs[n], s.coeffs[n - 1]))
                est = mp.mpf(r.numerator) / r.denominator * absz
                q = est if q is None else max(q, est)
        if q is None:
            return mp.mpf(0)
    if q >= 1:
        return mp.inf
    top = mp.mpf(0)
    n = len(s.coeffs) - 1
    for back in range(min(6, n + 1)):
        c = s.coeffs[n - back]
        if c:
            mag = abs(mp.mpf(c.numerator) / c.denominator) * absz ** (n - back)
            top = max(top, mag * q ** back)
    return top * q / (1 - q)


def eval_logseries_ex(s: LogSeries, z, precision: int,
                      radius: Fraction | None = None,
                      boundary_mode: bool = False) -> tuple[mp.mpc, mp.mpf]:
    """Value of the log-series at z plus a tail estimate.

    Inside the certified disc the tail estimate is a geometric bound and
    must sit below 10**-precision; with ``boundary_mode`` the point may
    lie on the convergence circle and a fitted power-law tail correction
    is applied, whose accuracy estimate is returned (and typically far
    coarser than the interior bound).
    """
    dps = working_dps(precision)
    with mp.workdps(dps):
        z = to_mpc(z)
        if z == 0:
            raise InputError("cannot evaluate a log-series at the expansion point 0")
        absz = abs(z)
        logz = mp.log(z)
        total = mp.mpc(0)
        tail = mp.mpf(0)
        on_boundary = radius is not None and \
            abs(absz - mp.mpf(radius.numerator) / radius.denominator) < \
            mp.mpf(10) ** (-dps // 2)
        for k, block in enumerate(s.blocks):
            val = _series_eval(block, z)
            lk = logz ** k if k else mp.mpf(1)
            if boundary_mode and on_boundary:
                corr, err = _boundary_block_tail(block, z, dps)
                val += corr
                tail += abs(lk) * err
            else:
                t = _series_tail_estimate(block, absz, radius)
                tail += abs(lk) * t
            total += val * lk
        if mp.isinf(tail) or (not boundary_mode and tail > mp.mpf(10) ** (-precision)):
            where = "on or outside the certified radius" if mp.isinf(tail) \
                else f"tail estimate {mp.nstr(tail, 3)} exceeds 10^-{precision}"
            raise NumericError(f"log-series evaluation at |z|={mp.nstr(absz, 6)} "
                               f"is not certified: {where}; increase the "
                               "truncation or enable boundary_mode on the circle")
        return +total, +tail


def _boundary_block_tail(block: SeriesQ, z: mp.mpc, dps: int) -> tuple[mp.mpc, mp.mpf]:
    """Fitted tail of one block on its convergence circle (theta = 0 or pi).

    The true summand w_n = c_n z**n (real for real z) is inspected over
    the last stored coefficients: constant-sign tails use plain zeta
    tails, alternating ones the alternating variant; anything else gets no
    correction and an infinite error estimate.
    """
    x = mp.re(z)
    if abs(mp.im(z)) > abs(z) * mp.mpf(10) ** (-dps // 2):
        raise NumericError("boundary evaluation is supported on the real axis "
                           "directions only (z/|z| = +-1)")
    n_top = block.truncation
    w = []
    for n in range(max(1, n_top - 60), n_top + 1):
        c = block.coeffs[n]
        w.append((n, (mp.mpf(c.numerator) / c.denominator) * x ** n))
    signs = [mp.sign(v) for _, v in w if v != 0]
    if len(signs) < 8:
        return mp.mpc(0), mp.mpf(0) if all(v == 0 for _, v in w) else mp.inf
    constant_sign = all(s == signs[0] for s in signs)
    alternating = all(signs[i] != signs[i + 1] for i in range(len(signs) - 1))
    if alternating and not constant_sign:
        smooth = [(n, v if n % 2 == 0 else -v) for n, v in w]
        corr, err = fitted_power_tail(smooth, n_top + 1, True, dps)
    elif constant_sign:
        corr, err = fitted_power_tail(w, n_top + 1, False, dps)
    else:
        return mp.mpc(0), mp.inf
    b = block.base
    zb = z ** (mp.mpf(b.numerator) / b.denominator)
    return corr * zb, err * abs(zb)


def eval_logseries(s: LogSeries, z, precision: int,
                   radius: Fraction | None = None,
                   boundary_mode: bool = False) -> mp.mpc:
    return eval_logseries_ex(s, z, precision, radius, boundary_mode)[0]


def eval_logseries_jet(s: LogSeries, z, jet_order: int, precision: int,
                       radius: Fraction | None = None) -> tuple[mp.mpc, ...]:
    """Value and derivatives 0..jet_order-1 with respect to the chart variable."""
    out = []
    cur = s
    for _i in range(jet_order):
        out.append(eval_logseries(cur, z, precision, radius))
        cur = cur.derivative()
    return tuple(out)


# -- Taylor stepping -----------------------------------------------------------

def _dform_mp(op: ThetaOperator, dps: int) -> list[list[mp.mpf]]:
    d = to_d_form(op)
    with mp.workdps(dps):
        return [[mp.mpf(c.numerator) / c.denominator for c in q.coeffs] for q in d]


def _shift_poly_mp(coeffs: list, z0: mp.mpc) -> list:
    """Taylor shift of a polynomial (ascending coefficients) to base point z0."""
    out = list(coeffs)
    n = len(out)
    for i in range(n - 1):
        for j in range(n - 2, i - 1, -1):
            out[j] += z0 * out[j + 1]
    return out


def taylor_step(op: ThetaOperator, sample: SolutionSample, z_next,
                sing: SingularitySet | None = None,
                step_factor: float = STEP_FACTOR,
                audit: TransportAudit | None = None) -> SolutionSample:
    """One local power-series step from sample.point to z_next.

    The target must lie within ``step_factor`` of the distance to the
    nearest singularity, which guarantees at least geometric convergence
    of the local series at ratio ``step_factor``.
    """
    precision = sample.precision
    dps = working_dps(precision)
    if sing is None:
        sing = singularities(op, min(precision, 50))
    with mp.workdps(dps):
        z0 = to_mpc(sample.point)
        z1 = to_mpc(z_next)
        h = z1 - z0
        if h == 0:
            return sample
        dist = sing.min_distance(z0)
        if abs(h) > dist * (step_factor + 1e-12):
            raise NumericError(f"step of size {mp.nstr(abs(h), 6)} from "
                               f"{mp.nstr(z0, 6)} exceeds {step_factor} x distance "
                               f"{mp.nstr(dist, 6)} to the nearest singularity; "
                               "take a smaller step")
        r = op.order
        d_rows = _dform_mp(op, dps)
        shifted = [_shift_poly_mp(row, z0) for row in d_rows]
        lead = shifted[r][0]
        if abs(lead) < mp.mpf(10) ** (-dps // 2):
            raise NumericError(f"base point {mp.nstr(z0, 6)} is numerically "
                               "singular for the operator")
        # local coefficients u_m of y(z0 + t); the jet supplies u_0..u_{r-1}
        u = [sample.jet[i] / mp.factorial(i) for i in range(r)]
        eps = mp.mpf(10) ** (-(dps + 5))
        jet_out = [mp.mpc(0)] * r
        max_mag = [mp.mpf(0)] * r
        inv_h = [mp.mpc(1)]
        for _ in range(r - 1):
            inv_h.append(inv_h[-1] / h)
        scale = max((abs(v) for v in sample.jet), default=mp.mpf(1))
        scale = scale if scale > 0 else mp.mpf(1)
        hpow = mp.mpc(1)
        small_run = 0
        need_run = max(8, r + 2)
        m_cap = 64 * (dps + 10) + 200
        m = 0
        while True:
            if m >= len(u):
                # coefficient of t**(m-r) in op(y) = 0, solved for u_m
                M = m - r
                acc = mp.mpc(0)
                for i in range(r + 1):
                    row = shifted[i]
                    for dgr in range(len(row)):
                        if i == r and dgr == 0:
                            continue
                        idx = M - dgr + i
                        if 0 <= idx < len(u):
                            c = row[dgr]
                            if c:
                                acc += c * u[idx] * _falling(idx, i)
                u.append(-acc / (lead * _falling(m, r)))
            base = u[m] * hpow
            contrib_small = True
            for i in range(min(m, r - 1) + 1):
                term = base * (_falling(m, i) * inv_h[i])
                jet_out[i] += term
                a = abs(term)
                if a > max_mag[i]:
                    max_mag[i] = a
                if a > eps * max(max_mag[i], scale):
                    contrib_small = False
            small_run = small_run + 1 if contrib_small else 0
            m += 1
            hpow *= h
            if small_run >= need_run and m > 2 * r:
                break
            if m > m_cap:
                raise NumericError("local Taylor series did not converge within "
                                   f"{m_cap} terms; take a smaller step")
        if audit is not None:
            audit.steps += 1
            audit.max_terms = max(audit.max_terms, m)
            worst = 0.0
            for i in range(r):
                if abs(jet_out[i]) > 0 and max_mag[i] > 0:
                    worst = max(worst, float(mp.log10(max_mag[i] / abs(jet_out[i]))))
            audit.cancellation_digits = max(audit.cancellation_digits, worst)
        return SolutionSample(z1, tuple(jet_out), precision)


def _falling(m: int, i: int) -> int:
    """m (m-1) ... (m-i+1)."""
    out = 1
    for t in range(i):
        out *= (m - t)
    return out


def continue_along(op: ThetaOperator, sample: SolutionSample, waypoints,
                   sing: SingularitySet | None = None,
                   step_factor: float = STEP_FACTOR,
                   safety_margin: float = 1e-9,
                   audit: TransportAudit | None = None) -> SolutionSample:
    """Transport a jet along a polyline, auto-subdividing each segment."""
    precision = sample.precision
    dps = working_dps(precision)
    if sing is None:
        sing = singularities(op, min(precision, 50))
    with mp.workdps(dps):
        cur = sample
        pts = [to_mpc(w) for w in waypoints]
        if pts and abs(pts[0] - to_mpc(cur.point)) == 0:
            pts = pts[1:]
        for target in pts:
            guard = 0
            while True:
                z0 = to_mpc(cur.point)
                seg = target - z0
                if abs(seg) == 0:
                    break
                nearest, dist = sing.nearest(z0)
                if dist < safety_margin:
                    where = mp.nstr(nearest.value, 8) if nearest else "?"
                    raise NumericError(f"path passes within {safety_margin} of the "
                                       f"singularity at {where}")
                step = min(abs(seg), dist * step_factor)
                z_next = target if step >= abs(seg) else z0 + seg / abs(seg) * step
                cur = taylor_step(op, cur, z_next, sing, step_factor, audit)
                guard += 1
                if guard > 100000:
                    raise NumericError("segment required too many subdivisions; "
                                       "the path is too close to a singularity")
        return cur


# -- basis transport and monodromy ----------------------------------------------

@dataclass
class TransportResult:
    targets: tuple[mp.mpc, ...]
    jets: list[list[SolutionSample]]     # [target][j]
    audit: TransportAudit

    def value_matrix(self) -> list[list[mp.mpc]]:
        return [[s.jet[0] for s in row] for row in self.jets]


def transport_basis(op: ThetaOperator, basis: FrobeniusBasis, start,
                    targets, precision: int,
                    sing: SingularitySet | None = None) -> TransportResult:
    """Values (and jets) of every basis solution at each target point.

    Targets are visited in the given order along straight segments from
    ``start``; the prefix of the walk is shared, so sorted targets on a ray
    cost one pass.  The prefactor of a gamma-normalized basis is applied
    to the transported jets.
    """
    dps = working_dps(precision)
    if sing is None:
        sing = singularities(op, min(precision, 50))
    r = basis.order
    with mp.workdps(dps):
        start = to_mpc(start)
        tgts = [to_mpc(t) for t in targets]
        audit = TransportAudit()
        jets0 = []
        for j in range(r):
            jet = eval_logseries_jet(basis.solutions[j], start, r, precision,
                                     basis.radius)
            pref = basis.solution_prefactor(j, precision)
            if pref != 1:
                jet = tuple(pref * v for v in jet)
            jets0.append(SolutionSample(start, jet, precision))
        rows: list[list[SolutionSample]] = []
        current = jets0
        for t in tgts:
            moved = []
            for j in range(r):
                moved.append(continue_along(op, current[j], [t], sing, audit=audit))
            rows.append(moved)
            current = moved
        return TransportResult(tuple(tgts), rows, audit)


def formal_monodromy(basis: FrobeniusBasis, precision: int) -> TransferMatrix:
    """Exact monodromy of the basis from the substitution log -> log + 2*pi*i.

    Entry (j, m) is the leading-coefficient component of log**m in the
    substituted solution j; for the canonical basis this is
    C(j, m) (2*pi*i)**(j-m) (plain) and C(j, m) (gamma).
    """
    r = basis.order
    dps = working_dps(precision)
    with mp.workdps(dps):
        tau = mp.mpc(0, 2 * const_pi(precision))
        rows = []
        for j in range(r):
            sol = basis.solutions[j]
            row = []
            for m in range(r):
                acc = mp.mpc(0)
                for k in range(m, len(sol.blocks)):
                    lead = sol.blocks[k][0]
                    if lead:
                        acc += (mp.mpf(lead.numerator) / lead.denominator
                                * mp.binomial(k, m) * tau ** (k - m))
                if basis.normalization == "gamma":
                    acc *= tau ** (m - j)
                row.append(acc)
            rows.append(tuple(row))
        return TransferMatrix(tuple(rows))


def monodromy_matrix(op: ThetaOperator, basis: FrobeniusBasis, singularity,
                     precision: int, loop_radius=None, waypoints: int = 16,
                     sing: SingularitySet | None = None) -> TransferMatrix:
    """Monodromy of the basis around one singularity, in basis coordinates.

    The loop is a circle around the singularity through a basepoint inside
    the basis' certified disc; it must enclose no other singularity.
    """
    dps = working_dps(precision)
    if sing is None:
        sing = singularities(op, min(precision, 50))
    r = basis.order
    with mp.workdps(dps):
        center = to_mpc(singularity)
        others = [p.value for p in sing.finite_points
                  if abs(p.value - center) > mp.mpf(10) ** (-10)]
        lim = min((abs(v - center) for v in others), default=mp.mpf(1))
        if loop_radius is None:
            cap = mp.mpf(basis.radius.numerator) / basis.radius.denominator / 5 \
                if basis.radius is not None else lim / 3
            loop_radius = min(lim / 3, cap)
        loop_radius = mp.mpf(loop_radius)
        for v in others:
            if abs(v - center) <= loop_radius:
                raise InputError(f"loop of radius {mp.nstr(loop_radius, 6)} around "
                                 f"{mp.nstr(center, 6)} also encircles the "
                                 f"singularity at {mp.nstr(v, 6)}")
        base_pt = center + loop_radius
        loop = [center + loop_radius * mp.exp(2j * mp.pi * i / waypoints)
                for i in range(1, waypoints)] + [base_pt]
        jets0 = []
        for j in range(r):
            jet = eval_logseries_jet(basis.solutions[j], base_pt, r, precision,
                                     basis.radius)
            pref = basis.solution_prefactor(j, precision)
            if pref != 1:
                jet = tuple(pref * v for v in jet)
            jets0.append(SolutionSample(base_pt, jet, precision))
        audit = TransportAudit()
        moved = [continue_along(op, s, loop, sing, audit=audit) for s in jets0]
        W = mp.matrix(r, r)
        Wp = mp.matrix(r, r)
        for j in range(r):
            for i in range(r):
                W[i, j] = jets0[j].jet[i]
                Wp[i, j] = moved[j].jet[i]
        M_T = W ** -1 * Wp
        det = mp.det(M_T)
        if abs(det) < mp.mpf(10) ** (-dps // 2):
            raise NumericError("monodromy matrix is numerically singular")
        rows = tuple(tuple(M_T[m, j] for m in range(r)) for j in range(r))
        return TransferMatrix(rows)
