"""End-to-end computation of expansion coefficients and their exact forms.

A job names an operator (built-in fixture or explicit theta-form table),
a seed series, and numeric settings.  The run: evaluate the seed at the
sample points by direct summation; build the canonical basis at the MUM
point and transport it to the matching points; solve the square linear
system for the coefficients tau; check the expansion at a held-out point;
recognize each tau over a zeta-value basis; re-verify everything in a
second, independent numeric run at 40 extra digits.

Reports carry every raw high-precision value (decimal strings tagged with
verified digit counts) so the recognition step can be re-run against any
other constant basis without redoing the numerics.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import mpmath as mp

from .arith import GUARD_DIGITS, MIN_PRECISION, working_dps
from .boundary import central_sum
from .continuation import TransportAudit, to_mpc, transport_basis
from .errors import InputError, NumericError
from .fixtures import FIXTURES, Fixture, SEED_BUILTINS, get_fixture
from .frobenius import FrobeniusBasis, frobenius_basis, required_terms
from .identities import evaluate_identity, identities_for
from .ode import (Recurrence, ThetaOperator, derive_recurrence, invert_variable,
                  is_mum, rescale_variable, shift_variable, singularities)
from .recognize import DEFAULT_HEIGHT_BOUND, recognize_with_fallback
from .series import SeriesQ

DEFAULT_PRECISION = 120
DEFAULT_BASEPOINT = Fraction(1, 20)
DEFAULT_TOLERANCE = 1e-8
VERIFY_EXTRA_DIGITS = 40


# -- job description -------------------------------------------------------

@dataclass(frozen=True)
class JobSpec:
    operator: str | ThetaOperator = "D3"
    mum_transform: str = "auto"              # "auto" | "invert" | "none" | "shift:<q>"
    rescale: Fraction = Fraction(1)
    seed: str | None = None                  # builtin seed name; fixture default
    seed_coefficients: tuple[Fraction, ...] | None = None
    seed_exponent: Fraction = Fraction(0)
    precision: int = DEFAULT_PRECISION
    sample_points: tuple[Fraction, ...] | None = None
    held_out: Fraction | None = None
    normalization: str = "plain"
    basis_generators: tuple[str, ...] | None = None
    height_bound: int = DEFAULT_HEIGHT_BOUND
    basepoint: Fraction = DEFAULT_BASEPOINT
    terms: int | None = None

    @staticmethod
    def from_dict(data: dict) -> "JobSpec":
        known = {f for f in JobSpec.__dataclass_fields__}
        unknown = set(data) - known
        if unknown:
            raise InputError(f"unknown job fields: {sorted(unknown)}")
        kw = dict(data)
        if "operator" in kw and isinstance(kw["operator"], (list, dict)):
            spec = kw["operator"]
            rows = spec["theta_coeffs"] if isinstance(spec, dict) else spec
            chart = spec.get("chart", "phi") if isinstance(spec, dict) else "phi"
            kw["operator"] = ThetaOperator.of(
                [[Fraction(str(c)) for c in row] for row in rows], chart=chart)
        for key in ("rescale", "seed_exponent", "basepoint", "held_out"):
            if key in kw and kw[key] is not None:
                kw[key] = Fraction(str(kw[key]))
        if kw.get("sample_points") is not None:
            kw["sample_points"] = tuple(Fraction(str(p)) for p in kw["sample_points"])
        if kw.get("seed_coefficients") is not None:
            kw["seed_coefficients"] = tuple(Fraction(str(c))
                                            for c in kw["seed_coefficients"])
        if kw.get("basis_generators") is not None:
            kw["basis_generators"] = tuple(str(g) for g in kw["basis_generators"])
        return JobSpec(**kw)

    @staticmethod
    def from_file(path: str) -> "JobSpec":
        text = open(path, "rb").read()
        if path.endswith(".toml"):
            try:
                import tomllib
            except ImportError:
                import tomli as tomllib
            data = tomllib.loads(text.decode())
        else:
            data = json.loads(text.decode())
        return JobSpec.from_dict(data)

    def describe(self) -> dict:
        op = self.operator if isinstance(self.operator, str) \
            else {"theta_coeffs": self.operator.as_strings(),
                  "chart": self.operator.chart}
        return {
            "operator": op,
            "mum_transform": self.mum_transform,
            "rescale": str(self.rescale),
            "seed": self.seed,
            "precision": self.precision,
            "sample_points": [str(p) for p in self.sample_points]
            if self.sample_points else None,
            "held_out": str(self.held_out) if self.held_out else None,
            "normalization": self.normalization,
            "basis_generators": list(self.basis_generators)
            if self.basis_generators else None,
            "height_bound": self.height_bound,
            "basepoint": str(self.basepoint),
            "terms": self.terms,
        }


@dataclass
class ResolvedJob:
    job: JobSpec
    operator: ThetaOperator                    # in the seed chart
    fixture: Fixture | None
    seed_fn: Callable[[int], Fraction] | None  # exact coefficient generator
    seed_initial: tuple[Fraction, ...] | None  # explicit initial coefficients
    seed_exponent: Fraction
    family_k: int | None
    transform: str
    shift_point: Fraction | None


def _resolve(job: JobSpec) -> ResolvedJob:
    if job.precision < MIN_PRECISION:
        raise InputError(f"precision must be >= {MIN_PRECISION}")
    if job.normalization not in ("plain", "gamma"):
        raise InputError(f"unknown normalization {job.normalization!r}")
    fixture = None
    if isinstance(job.operator, str):
        fixture = get_fixture(job.operator)
        operator = fixture.operator
    else:
        operator = job.operator
    transform = job.mum_transform
    shift_point = None
    if transform == "auto":
        transform = fixture.mum_transform if fixture else "invert"
    if transform.startswith("shift:"):
        shift_point = Fraction(transform.split(":", 1)[1])
        transform = "shift"
    if transform not in ("invert", "none", "shift"):
        raise InputError(f"unknown mum_transform {job.mum_transform!r}")
    seed_fn = None
    seed_initial = job.seed_coefficients
    if job.seed is not None:
        if job.seed not in SEED_BUILTINS:
            raise InputError(f"unknown builtin seed {job.seed!r}; available: "
                             f"{', '.join(sorted(SEED_BUILTINS))}")
        seed_fn = SEED_BUILTINS[job.seed]
    elif seed_initial is None:
        if fixture is None:
            raise InputError("a non-fixture job needs seed_coefficients or a "
                             "builtin seed name")
        seed_fn = fixture.seed_coefficient
    family_k = fixture.family_k if fixture else None
    return ResolvedJob(job, operator, fixture, seed_fn, seed_initial,
                       job.seed_exponent, family_k, transform, shift_point)


# -- seed handling -----------------------------------------------------------

def extend_seed(rec: Recurrence, initial: tuple[Fraction, ...],
                exponent: Fraction, n_terms: int) -> SeriesQ:
    """Extend explicit initial coefficients through the recurrence.

    Indices where the leading factor vanishes must be covered by the given
    initial values; determined indices must agree with any provided value.
    """
    coeffs = list(initial)
    for n in range(len(coeffs), n_terms + 1):
        lead = rec.taps[0](exponent + n)
        if lead == 0:
            raise InputError(f"seed coefficient at resonant index n={n} is not "
                             "determined; supply it explicitly")
        acc = Fraction(0)
        for m in range(1, min(n, rec.span) + 1):
            c = coeffs[n - m]
            if c:
                acc += rec.taps[m](exponent + (n - m)) * c
        coeffs.append(-acc / lead)
    for n in range(1, len(initial)):
        lead = rec.taps[0](exponent + n)
        if lead == 0:
            continue
        acc = Fraction(0)
        for m in range(1, min(n, rec.span) + 1):
            acc += rec.taps[m](exponent + (n - m)) * coeffs[n - m]
        if initial[n] * lead != -acc:
            raise InputError(f"seed coefficient at n={n} contradicts the "
                             "operator's recurrence")
    return SeriesQ(exponent, tuple(coeffs[: n_terms + 1]))


def _seed_series(res: ResolvedJob, n_terms: int) -> SeriesQ:
    if res.seed_fn is not None:
        return SeriesQ(res.seed_exponent,
                       tuple(res.seed_fn(n) for n in range(n_terms + 1)))
    rec = derive_recurrence(res.operator)
    return extend_seed(rec, res.seed_initial, res.seed_exponent, n_terms)


def _seed_radius(res: ResolvedJob, precision: int) -> Fraction:
    if res.fixture is not None:
        return res.fixture.seed_radius
    sing = singularities(res.operator, min(precision, 50))
    dists = [abs(p.value) for p in sing.finite_points if abs(p.value) > 1e-12]
    if not dists:
        return Fraction(10 ** 6)
    d = min(dists)
    return Fraction(float(d) * 0.999999).limit_denominator(10 ** 12)


def _eval_seed(series: SeriesQ, points, radius: Fraction, dps: int) -> list[mp.mpf]:
    """Horner evaluation with a geometric tail bound at each point."""
    out = []
    n_top = series.truncation
    with mp.workdps(dps + 10):
        coeffs = [mp.mpf(c.numerator) / c.denominator for c in series.coeffs]
        rad = mp.mpf(radius.numerator) / radius.denominator
        for point in points:
            z = to_mpc(point)
            if abs(z) >= rad:
                raise InputError(f"sample point {point} is not inside the seed "
                                 f"series' convergence disc (radius {radius})")
            acc = mp.mpc(0)
            for c in reversed(coeffs):
                acc = acc * z + c
            q = abs(z) / rad
            top = max(abs(coeffs[n_top - i]) * abs(z) ** (n_top - i)
                      for i in range(min(6, n_top)))
            tail = top * q / (1 - q) * 4
            if tail > mp.mpf(10) ** (-(dps - 5)):
                raise NumericError(f"seed tail bound {mp.nstr(tail, 3)} too large "
                                   f"at {point}; raise the term count")
            if series.base != 0:
                acc *= z ** (mp.mpf(series.base.numerator) / series.base.denominator)
            out.append(acc.real if abs(acc.imag) == 0 else acc)
    return out


# -- numeric run --------------------------------------------------------------

@dataclass
class NumericRun:
    precision: int
    tau: list[mp.mpc]
    held_residual: mp.mpf
    condition: mp.mpf
    basis: FrobeniusBasis
    n_terms: int
    local_radius: Fraction
    basepoint: Fraction
    sample_phi: list[Fraction]
    held_phi: Fraction
    targets: list[Fraction]
    seed_values: list[mp.mpc]
    basis_values: list[list[mp.mpc]]
    audit: TransportAudit
    local_op: ThetaOperator
    rho: Fraction


def _local_chart_data(res: ResolvedJob, k: Fraction):
    """Transformed operator and the map phi -> local coordinate."""
    if res.transform == "invert":
        local = invert_variable(res.operator)

        def to_local(phi: Fraction) -> Fraction:
            return 1 / phi / k
    elif res.transform == "shift":
        local = shift_variable(res.operator, res.shift_point)

        def to_local(phi: Fraction, _s=res.shift_point) -> Fraction:
            return (phi - _s) / k
    else:
        local = res.operator

        def to_local(phi: Fraction) -> Fraction:
            return phi / k
    if k != 1:
        local = rescale_variable(local, k)
    return local, to_local


def _numeric_run(res: ResolvedJob, precision: int, guard_extra: int = 0) -> NumericRun:
    job = res.job
    k = job.rescale
    local, to_local = _local_chart_data(res, k)
    check = is_mum(local)
    if not check.is_mum:
        raise InputError(f"operator is not maximally unipotent at the origin of "
                         f"chart {local.chart!r}: {check.detail}")
    r = local.order
    sing_local = singularities(local, min(precision, 50))
    # exact local radius when the nearest singularity is rational
    nonzero = [p for p in sing_local.finite_points if abs(p.value) > 1e-12]
    if res.fixture is not None and k == 1 and res.transform == "invert":
        local_radius = res.fixture.local_radius
    elif all(p.exact is not None for p in nonzero) and nonzero:
        local_radius = min(abs(p.exact) for p in nonzero)
    elif nonzero:
        local_radius = Fraction(float(min(abs(p.value) for p in nonzero))
                                * 0.999999).limit_denominator(10 ** 12)
    else:
        local_radius = Fraction(10 ** 6)

    sample_phi = list(job.sample_points) if job.sample_points is not None \
        else [Fraction(1, i + 2) for i in range(r)]
    if len(sample_phi) < r:
        raise InputError(f"need at least {r} sample points for an order-{r} "
                         f"operator, got {len(sample_phi)}")
    sample_phi = sample_phi[:r]
    held_phi = job.held_out if job.held_out is not None else Fraction(1, r + 2)
    if len(set(sample_phi + [held_phi])) != r + 1:
        raise InputError("sample and held-out points must be distinct")
    seed_rad = _seed_radius(res, precision)
    for p in sample_phi + [held_phi]:
        if p == 0:
            raise InputError("sample points must be nonzero")
        if abs(p) >= seed_rad:
            raise InputError(f"sample point {p} is not inside the seed series' "
                             f"convergence disc (radius {seed_rad})")

    basepoint = job.basepoint / k
    if basepoint >= local_radius:
        raise InputError(f"basepoint {basepoint} lies outside the local disc "
                         f"(radius {local_radius})")
    digits = precision + GUARD_DIGITS + guard_extra
    # fall back to half the basepoint if the series would need too many terms
    n_terms = job.terms
    if n_terms is None:
        n_terms = required_terms(local_radius, basepoint, digits)
        if n_terms > 3000 and basepoint / 2 > 0:
            basepoint = basepoint / 2
            n_terms = required_terms(local_radius, basepoint, digits)
    basis = frobenius_basis(local, n_terms, job.normalization, local_radius)

    targets = [to_local(p) for p in sample_phi]
    held_target = to_local(held_phi)
    order_idx = sorted(range(len(targets)), key=lambda i: (abs(targets[i]),))
    walk = [targets[i] for i in order_idx] + [held_target]

    seed_terms = required_terms(seed_rad,
                                max(abs(p) for p in sample_phi + [held_phi]),
                                digits)
    seed_series = _seed_series(res, seed_terms)
    dps = working_dps(precision) + guard_extra
    seed_vals = _eval_seed(seed_series, sample_phi + [held_phi], seed_rad, dps)

    with mp.workdps(dps):
        result = transport_basis(local, basis, basepoint, walk,
                                 precision + guard_extra, sing_local)
        values = result.value_matrix()
        # undo the walk ordering
        mat = [None] * len(targets)
        for pos, i in enumerate(order_idx):
            mat[i] = values[pos]
        held_row = values[-1]
        A = mp.matrix(r, r)
        for i in range(r):
            for j in range(r):
                A[i, j] = mat[i][j]
        rhs = mp.matrix([[v] for v in seed_vals[:r]])
        cond = mp.mnorm(A, 1) * mp.mnorm(A ** -1, 1)
        if cond > mp.mpf(10) ** (precision / 4):
            raise NumericError(f"sample system is ill-conditioned (estimate "
                               f"{mp.nstr(cond, 3)}); choose different sample "
                               "points")
        tau = mp.lu_solve(A, rhs)
        tau = [tau[j] for j in range(r)]
        held = mp.fsum(tau[j] * held_row[j] for j in range(r))
        held_residual = abs(held - seed_vals[r])
    return NumericRun(precision, tau, held_residual, cond, basis, n_terms,
                      local_radius, basepoint, sample_phi, held_phi, targets,
                      seed_vals, mat, result.audit, local, check.rho)


# -- reports -------------------------------------------------------------------

@dataclass
class TauEntry:
    j: int
    value: mp.mpc
    value_str: str
    imag_str: str
    verified_digits: int
    weight: int | None
    recognized: dict[str, str] | None
    consistent_with_zero: bool
    residual_str: str
    status: str
    basis_labels: tuple[str, ...]
    normalization_power: int = 0

    def to_dict(self) -> dict:
        return {
            "j": self.j,
            "value": self.value_str,
            "imag": self.imag_str,
            "verified_digits": self.verified_digits,
            "weight": self.weight,
            "recognized": self.recognized,
            "consistent_with_zero": self.consistent_with_zero,
            "residual": self.residual_str,
            "status": self.status,
            "basis": list(self.basis_labels),
            "normalization_power": self.normalization_power,
        }


@dataclass
class TauReport:
    job: JobSpec
    order: int
    rho: Fraction
    chart: str
    entries: list[TauEntry]
    held_residual_str: str
    held_residual_ok: bool
    condition_str: str
    n_terms: int
    local_radius: Fraction
    basepoint: Fraction
    sample_phi: list[Fraction]
    held_phi: Fraction
    seed_values: list[str]
    basis_values: list[list[str]]
    verify_precision: int
    transport: dict = field(default_factory=dict)
    timings: dict[str, float] = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)
    figures: list[str] = field(default_factory=list)
    run: NumericRun | None = field(default=None, repr=False)

    @property
    def ok(self) -> bool:
        return self.held_residual_ok and all(
            e.status == "found" for e in self.entries)

    def to_dict(self, deterministic: bool = False) -> dict:
        data = {
            "schema": "tau-report/1",
            "job": self.job.describe(),
            "order": self.order,
            "rho": str(self.rho),
            "chart": self.chart,
            "precision": {
                "requested": self.job.precision,
                "guard": GUARD_DIGITS,
                "verify": self.verify_precision,
            },
            "series": {
                "terms": self.n_terms,
                "local_radius": str(self.local_radius),
                "basepoint": str(self.basepoint),
            },
            "transport": dict(self.transport),
            "samples": {
                "phi": [str(p) for p in self.sample_phi],
                "held_out": str(self.held_phi),
                "seed_values": self.seed_values,
                "basis_values": self.basis_values,
            },
            "solve": {
                "condition_estimate": self.condition_str,
                "held_out_residual": self.held_residual_str,
                "held_out_ok": self.held_residual_ok,
            },
            "tau": [e.to_dict() for e in self.entries],
            "ok": self.ok,
            "warnings": list(self.warnings),
        }
        if not deterministic:
            data["timings"] = dict(self.timings)
            if self.figures:
                data["figures"] = list(self.figures)
        return data

    def to_json(self, deterministic: bool = False) -> str:
        return json.dumps(self.to_dict(deterministic), indent=2)

    def to_text(self) -> str:
        lines = []
        name = self.job.operator if isinstance(self.job.operator, str) \
            else "<custom operator>"
        lines.append(f"operator {name}  (order {self.order}, chart {self.chart}, "
                     f"rho = {self.rho})")
        lines.append(f"precision {self.job.precision} digits "
                     f"(re-verified at {self.verify_precision}); "
                     f"series terms {self.n_terms}, basepoint {self.basepoint}")
        lines.append(f"samples phi = {', '.join(str(p) for p in self.sample_phi)}; "
                     f"held-out {self.held_phi}")
        lines.append(f"held-out residual {self.held_residual_str} "
                     f"[{'ok' if self.held_residual_ok else 'FAIL'}]; "
                     f"condition {self.condition_str}")
        lines.append("")
        for e in self.entries:
            form = format_exact_form(e.recognized, e.normalization_power) \
                if e.recognized is not None else "(not recognized)"
            if e.consistent_with_zero:
                form = "0 (consistent with zero at the residual threshold)"
            lines.append(f"tau_{e.j} = {form}")
            lines.append(f"    value    {e.value_str}")
            lines.append(f"    residual {e.residual_str}   verified digits "
                         f"{e.verified_digits}   [{e.status}]")
        for w in self.warnings:
            lines.append(f"warning: {w}")
        lines.append(f"result: {'PASS' if self.ok else 'FAIL'}")
        return "\n".join(lines)


def format_exact_form(label_map: dict[str, str] | None, norm_power: int = 0) -> str:
    if not label_map:
        return "0"
    parts = []
    for label, coef in label_map.items():
        c = Fraction(coef)
        body = "" if label == "1" else f"*{label}"
        piece = f"{c}{body}"
        if parts and c > 0:
            parts.append("+ " + piece)
        else:
            parts.append(piece if not parts else "- " + str(-c) + body)
    out = " ".join(parts)
    if norm_power:
        out = f"(2*pi*i)^{norm_power} * ({out})"
    return out


@dataclass
class IdentityReport:
    ident: str
    description: str
    left_str: str
    right_str: str
    difference: mp.mpf
    tolerance: float
    passed: bool
    achieved_accuracy: str | None = None

    def to_dict(self) -> dict:
        return {
            "id": self.ident,
            "description": self.description,
            "lhs": self.left_str,
            "rhs": self.right_str,
            "abs_diff": mp.nstr(self.difference, 6),
            "tolerance": repr(self.tolerance),
            "pass": self.passed,
            "achieved_accuracy": self.achieved_accuracy,
        }

    def to_text(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return (f"[{mark}] {self.ident}: |lhs - rhs| = "
                f"{mp.nstr(self.difference, 4)} (tol {self.tolerance:g}) -- "
                f"{self.description}")


# -- the main operations ---------------------------------------------------------

def compute_tau(job: JobSpec) -> TauReport:
    """Run the full pipeline for one job; see the module docstring."""
    res = _resolve(job)
    p = job.precision
    timings: dict[str, float] = {}
    warnings: list[str] = []
    t0 = time.time()
    run = _numeric_run(res, p)
    if run.audit.cancellation_digits > GUARD_DIGITS - 10:
        warnings.append(f"transport cancellation consumed "
                        f"{run.audit.cancellation_digits:.1f} guard digits; "
                        "rerunning with a larger guard")
        run = _numeric_run(res, p, guard_extra=int(run.audit.cancellation_digits) + 20)
    timings["numeric"] = time.time() - t0

    t0 = time.time()
    p_verify = p + VERIFY_EXTRA_DIGITS
    run_v = _numeric_run(res, p_verify)
    timings["verify_numeric"] = time.time() - t0

    t0 = time.time()
    r = run.basis.order
    k_family = res.family_k if res.family_k is not None else r - 1
    entries = []
    with mp.workdps(working_dps(p_verify)):
        tau_pref = []
        for j in range(r):
            # the gamma solve returns tau_j (2 pi i)^j; undo before recognition
            if job.normalization == "gamma":
                pref = run.basis.solution_prefactor(j, p_verify)
                tau_pref.append((run.tau[j] * pref, run_v.tau[j] * pref, j))
            else:
                tau_pref.append((run.tau[j], run_v.tau[j], 0))
        for j in range(r):
            x, x_v, norm_power = tau_pref[j]
            agree = abs(x - x_v)
            verified = p_verify if agree == 0 else max(0, int(-mp.log10(agree)))
            if abs(mp.im(x_v)) > mp.mpf(10) ** (-p // 2):
                warnings.append(f"tau_{j} has unexpected imaginary part "
                                f"{mp.nstr(mp.im(x_v), 5)}")
            weight = max(k_family - j, 0)
            rec = recognize_with_fallback(mp.re(x), weight, p,
                                          job.basis_generators, job.height_bound)
            if rec.found:
                combo = rec.combination_value(p_verify) \
                    if not rec.consistent_with_zero else mp.mpf(0)
                residual = abs(mp.re(x_v) - combo)
            else:
                residual = mp.mpf(1)
            res_digits = p_verify if residual == 0 else \
                max(0, int(-mp.log10(residual)))
            entry_verified = min(verified, res_digits) if rec.found else verified
            entries.append(TauEntry(
                j=j,
                value=x_v,
                value_str=mp.nstr(mp.re(x_v), min(entry_verified + 1, p_verify)
                                  if rec.found else p),
                imag_str=mp.nstr(mp.im(x_v), 6),
                verified_digits=entry_verified,
                weight=weight,
                recognized=rec.as_label_map() if rec.found else None,
                consistent_with_zero=rec.consistent_with_zero,
                residual_str=mp.nstr(residual, 6),
                status=rec.status,
                basis_labels=rec.basis.labels,
                normalization_power=norm_power,
            ))
        held_ok = run.held_residual < mp.mpf(10) ** (-p / 2) and \
            run_v.held_residual < mp.mpf(10) ** (-p_verify / 2)
        seed_strs = [mp.nstr(mp.re(v), p) for v in run_v.seed_values]
        basis_strs = [[mp.nstr(mp.re(v), p) for v in row]
                      for row in run_v.basis_values]
        held_str = mp.nstr(run.held_residual, 6)
        cond_str = mp.nstr(run.condition, 4)
    timings["recognition"] = time.time() - t0
    return TauReport(
        job=job, order=r, rho=run.rho, chart=run.local_op.chart, entries=entries,
        held_residual_str=held_str, held_residual_ok=held_ok,
        condition_str=cond_str, n_terms=run.n_terms,
        local_radius=run.local_radius, basepoint=run.basepoint,
        sample_phi=run.sample_phi, held_phi=run.held_phi,
        seed_values=seed_strs, basis_values=basis_strs,
        verify_precision=p_verify,
        transport={
            "targets": [str(t) for t in run.targets],
            "steps": run.audit.steps,
            "max_local_terms": run.audit.max_terms,
            "cancellation_digits": round(run.audit.cancellation_digits, 2),
        },
        timings=timings, warnings=warnings, run=run,
    )


def verify_expansion_at_boundary(job: JobSpec, phi: int,
                                 report: TauReport | None = None,
                                 tolerance: float = DEFAULT_TOLERANCE,
                                 digits: int = 30) -> IdentityReport:
    """Check the recognized expansion where the seed series stops converging.

    Both sides are evaluated in boundary mode: the seed side through the
    tail-corrected summation, the basis side through the closed-form
    blocks (fixture family) with the principal branch of the logarithm at
    the negative point.
    """
    res = _resolve(job)
    if phi not in (4, -4):
        raise InputError("boundary verification is defined at phi = 4 or -4")
    if res.family_k is None:
        raise InputError("boundary verification needs a family fixture job "
                         "(D2..D7); generic operators only support boundary "
                         "evaluation of their local series")
    if report is None:
        report = compute_tau(job)
    if not all(e.recognized is not None or e.consistent_with_zero
               for e in report.entries):
        raise NumericError("boundary verification requires recognized tau values")
    k = res.family_k
    s = 1 if phi > 0 else -1
    with mp.workdps(digits + 15):
        seed_side = -mp.mpf(s) / 2 * central_sum("inv_binom", k, -s, digits)
        x = mp.mpf(s) / 4
        L = mp.log(mp.mpc(x))
        g1 = mp.factorial(k - 1) * x * central_sum("binom", k - 1, -s, digits)
        g2 = -mp.factorial(k) * x * central_sum("binom_harmonic", k, -s, digits)
        basis_vals = []
        for j in range(k + 1):
            if j <= k - 2:
                basis_vals.append(x * L ** j)
            elif j == k - 1:
                basis_vals.append(x * L ** j + g1)
            else:
                basis_vals.append(x * L ** j + k * g1 * L + g2)
        rhs = mp.mpc(0)
        for e in report.entries:
            if e.consistent_with_zero or not e.recognized:
                continue
            combo = mp.fsum(mp.mpf(Fraction(cstr).numerator)
                            / Fraction(cstr).denominator
                            * _label_value(label, digits + 10)
                            for label, cstr in e.recognized.items())
            rhs += combo * basis_vals[e.j]
        diff = abs(seed_side - rhs)
        passed = diff < mp.mpf(repr(tolerance))
        return IdentityReport(
            ident=f"{res.fixture.name}_boundary_phi={phi}",
            description=f"expansion of the seed over the canonical basis at "
                        f"phi = {phi} (local point {s}/4)",
            left_str=mp.nstr(seed_side, min(digits, 30)),
            right_str=mp.nstr(rhs, min(digits, 30)),
            difference=+diff, tolerance=tolerance, passed=passed,
        )


def _label_value(label: str, digits: int) -> mp.mpf:
    from .arith import symbol_value
    if label == "1":
        return mp.mpf(1)
    acc = mp.mpf(1)
    for part in label.split("*"):
        if "^" in part:
            sym, _, power = part.partition("^")
            acc *= symbol_value(sym, digits) ** int(power)
        else:
            acc *= symbol_value(part, digits)
    return acc


def identity_suite(k: int, tolerance: float = DEFAULT_TOLERANCE,
                   digits: int = 30) -> list[IdentityReport]:
    """Check every cataloged identity for one exponent k."""
    digits = max(digits, MIN_PRECISION)
    out = []
    for defn in identities_for(k):
        lhs, rhs = evaluate_identity(defn, digits)
        with mp.workdps(digits + 10):
            diff = abs(lhs - rhs)
            out.append(IdentityReport(
                ident=defn.ident, description=defn.description,
                left_str=mp.nstr(lhs, min(digits, 30)),
                right_str=mp.nstr(rhs, min(digits, 30)),
                difference=+diff, tolerance=tolerance,
                passed=bool(diff < mp.mpf(repr(tolerance))),
            ))
    return out


def scan_rescale(job: JobSpec, k_max: int = 16) -> list[tuple[int, TauReport]]:
    """Rerun the pipeline for integer rescale factors k = 1..k_max.

    No canonical k is claimed: every k is reported with its recognition
    status.  log 2 joins the generators because integer rescaling feeds
    powers of log k into the coefficients; factors whose logarithms fall
    outside the constant vocabulary simply stay unrecognized.
    """
    from dataclasses import replace

    from .recognize import default_generators
    if k_max < 1:
        raise InputError("scan_rescale needs k_max >= 1")
    res = _resolve(job)
    weight_max = res.family_k if res.family_k is not None \
        else res.operator.order - 1
    gens = job.basis_generators or default_generators(weight_max)
    if "log2" not in gens:
        gens = tuple(gens) + ("log2",)
    out = []
    for k in range(1, k_max + 1):
        scan_job = replace(job, rescale=Fraction(k), basis_generators=gens)
        out.append((k, compute_tau(scan_job)))
    return out


# -- growth diagnostics ----------------------------------------------------------

@dataclass
class GrowthReport:
    n_terms: int
    abs_points: list[tuple[int, float]]
    den_points: list[tuple[int, float]]
    abs_estimate: float
    den_estimate: float
    trend: str

    def to_dict(self) -> dict:
        return {
            "schema": "growth-report/1",
            "terms": self.n_terms,
            "abs_growth": [[n, v] for n, v in self.abs_points],
            "denominator_growth": [[n, v] for n, v in self.den_points],
            "abs_estimate": self.abs_estimate,
            "denominator_estimate": self.den_estimate,
            "trend": self.trend,
        }

    def to_text(self) -> str:
        lines = [f"growth diagnostics over {self.n_terms} coefficients:",
                 f"  sup |a_n|^(1/n)  ~ {self.abs_estimate:.6f}   ({self.trend})",
                 f"  lcm(denoms)^(1/n) ~ {self.den_estimate:.6f}"]
        return "\n".join(lines)


def gfunction_growth_report(series: SeriesQ, n_terms: int | None = None) -> GrowthReport:
    """Coefficient and denominator growth estimates for a rational series."""
    n_top = series.truncation if n_terms is None else min(n_terms, series.truncation)
    if n_top < 10:
        raise InputError("growth report needs at least 10 coefficients")
    abs_points = []
    den_points = []
    lcm = 1
    for n in range(1, n_top + 1):
        c = series.coeffs[n]
        lcm = math.lcm(lcm, c.denominator)
        if n % max(1, n_top // 40) == 0 or n == n_top:
            if c != 0:
                log_abs = math.log(abs(c.numerator)) - math.log(c.denominator)
                abs_points.append((n, math.exp(log_abs / n)))
            den_points.append((n, math.exp(math.log(lcm) / n)))
    abs_estimate = abs_points[-1][1] if abs_points else 0.0
    den_estimate = den_points[-1][1]
    tail = [v for _n, v in abs_points[-5:]]
    head = [v for _n, v in abs_points[:5]]
    if not tail or not head:
        trend = "flat"
    elif tail[-1] < head[0] * 0.99:
        trend = "decreasing"
    elif tail[-1] > head[0] * 1.01:
        trend = "increasing"
    else:
        trend = "flat"
    return GrowthReport(n_top, abs_points, den_points, abs_estimate,
                        den_estimate, trend)


def seed_series_for(name: str, n_terms: int) -> SeriesQ:
    """Builtin seed series by name (growth/Frobenius CLI helpers)."""
    if name in SEED_BUILTINS:
        return SeriesQ(Fraction(0), tuple(SEED_BUILTINS[name](n)
                                          for n in range(n_terms + 1)))
    if name in FIXTURES:
        fix = FIXTURES[name]
        return SeriesQ(Fraction(0), tuple(fix.seed_coefficient(n)
                                          for n in range(n_terms + 1)))
    raise InputError(f"unknown series {name!r}")


# -- selftest ---------------------------------------------------------------------

def selftest(precision: int = 60) -> tuple[bool, str]:
    """Fast internal consistency run: D3 end to end plus one identity."""
    lines = []
    ok = True
    job = JobSpec(operator="D3", precision=max(precision, MIN_PRECISION + 10))
    report = compute_tau(job)
    expected = {0: {"zeta3": "4"}, 3: {"1": "-1/3"}}
    for e in report.entries:
        want = expected.get(e.j)
        if want is not None and e.recognized != want:
            ok = False
            lines.append(f"tau_{e.j} mismatch: {e.recognized} != {want}")
        if e.j in (1, 2) and not e.consistent_with_zero:
            ok = False
            lines.append(f"tau_{e.j} should be consistent with zero")
    if not report.held_residual_ok:
        ok = False
        lines.append("held-out residual failed")
    for rep in identity_suite(2, digits=30):
        if not rep.passed:
            ok = False
            lines.append(f"identity {rep.ident} failed")
    lines.append("selftest " + ("PASS" if ok else "FAIL"))
    return ok, "\n".join(lines)
