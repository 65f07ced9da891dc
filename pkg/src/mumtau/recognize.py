"""Constant bases and integer-relation recognition of high-precision values.

A basis is a list of labeled monomials in pi, log 2 and odd zeta values
(even zetas fold into pi powers, so no redundant entries enter).  A value
is recognized by running PSLQ on [x, basis...] at a detection threshold
of half the working digits, then re-verifying the candidate combination
with 40 extra digits; a relation that does not survive re-verification is
not reported as found.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath as mp

from .arith import (ConstantValue, evaluate_monomial, monomial_label,
                    symbol_weight, working_dps)
from .errors import InputError

DEFAULT_HEIGHT_BOUND = 10 ** 6


def default_generators(max_weight: int) -> tuple[str, ...]:
    """pi**2 plus the odd zetas up to the requested weight."""
    gens = ["pi^2"]
    gens += [f"zeta{m}" for m in range(3, max_weight + 1, 2)]
    return tuple(gens)


def _parse_generator(gen: str) -> tuple[tuple[str, int], ...]:
    """A generator is a symbol with an optional power, e.g. "pi^2"."""
    if "^" in gen:
        symbol, _, power = gen.partition("^")
        power = int(power)
    else:
        symbol, power = gen, 1
    if power < 1:
        raise InputError(f"generator power must be >= 1 in {gen!r}")
    symbol_weight(symbol)  # validates
    if symbol.startswith("zeta"):
        k = int(symbol[4:])
        if k % 2 == 0:
            # fold even zeta generators into pi powers
            return (("pi", k * power),)
    return ((symbol, power),)


@dataclass(frozen=True)
class ConstantBasis:
    entries: tuple[ConstantValue, ...]
    max_weight: int
    grading_mode: str
    generators: tuple[str, ...]
    precision: int

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(e.label for e in self.entries)

    def values(self, precision: int | None = None) -> list[mp.mpf]:
        p = self.precision if precision is None else precision
        if p == self.precision:
            return [e.value for e in self.entries]
        return [e.at_precision(p) for e in self.entries]


def _merge_factors(parts) -> tuple[tuple[str, int], ...]:
    acc: dict[str, int] = {}
    for symbol, power in parts:
        acc[symbol] = acc.get(symbol, 0) + power
    return tuple(sorted(acc.items()))


def build_basis(weight: int, generators=None, grading_mode: str = "homogeneous",
                precision: int = 120) -> ConstantBasis:
    """All monomials in the generators of total weight w (or <= w when graded)."""
    if weight < 0:
        raise InputError(f"weight must be >= 0, got {weight}")
    if grading_mode not in ("homogeneous", "graded"):
        raise InputError(f"unknown grading mode {grading_mode!r}")
    gens = tuple(generators) if generators is not None else default_generators(weight)
    parsed = []
    seen = set()
    for g in gens:
        factors = _parse_generator(g)
        w = sum(symbol_weight(s) * p for s, p in factors)
        if factors in seen:
            continue
        seen.add(factors)
        parsed.append((factors, w))
    monomials: dict[tuple[tuple[str, int], ...], int] = {}
    targets = {weight} if grading_mode == "homogeneous" else set(range(weight + 1))

    def rec(idx: int, factors, w: int):
        if w in targets:
            monomials.setdefault(_merge_factors(factors), w)
        if idx == len(parsed) or w >= weight:
            return
        g_factors, g_w = parsed[idx]
        rec(idx + 1, factors, w)
        if g_w == 0:
            return
        cur = list(factors)
        cur_w = w
        while cur_w + g_w <= weight:
            cur = cur + list(g_factors)
            cur_w += g_w
            rec(idx + 1, cur, cur_w)

    rec(0, [], 0)
    entries = []
    for factors, w in sorted(monomials.items(), key=lambda kv: (kv[1], kv[0])):
        value = evaluate_monomial(factors, precision)
        entries.append(ConstantValue(monomial_label(factors), w, factors,
                                     value, precision))
    return ConstantBasis(tuple(entries), weight, grading_mode, gens, precision)


@dataclass(frozen=True)
class RelationResult:
    vector: tuple[int, ...] | None
    status: str  # "found" | "none" | "insufficient_precision"


def integer_relation(values, precision: int,
                     height_bound: int = DEFAULT_HEIGHT_BOUND,
                     detection_digits: int | None = None) -> RelationResult:
    """Integer vector v with |sum v_i x_i| < 10**-detection, or a status.

    "none" means no relation of the requested height was found at a
    precision that could have seen one; "insufficient_precision" means the
    input digits cannot decide existence at this height.
    """
    values = list(values)
    if any(v == 0 for v in values):
        raise InputError("integer_relation requires nonzero inputs")
    detection = detection_digits if detection_digits is not None else precision // 2
    if precision < 2 * detection:
        raise InputError(f"precision {precision} is below twice the detection "
                         f"threshold {detection}")
    needed = int(math.ceil(len(values) * math.log10(max(height_bound, 2)))) + 15
    # the search itself only needs enough digits to see relations of the
    # requested height; candidates are then re-checked at full precision
    search_dps = min(working_dps(precision), max(detection + 15, needed + 10))
    with mp.workdps(search_dps):
        tol = mp.mpf(10) ** (-min(detection, search_dps - 10))
        vec = mp.pslq(values, tol=tol, maxcoeff=height_bound,
                      maxsteps=5000 + 100 * len(values))
    with mp.workdps(working_dps(precision)):
        if vec is not None:
            # a genuine relation among values accurate to `precision` digits
            # cancels essentially to full precision; anything that only
            # clears the detection threshold is noise
            residual = abs(mp.fsum(int(c) * v for c, v in zip(vec, values)))
            scale = max(abs(v) for v in values) * max(abs(int(c)) for c in vec)
            if residual > scale * mp.mpf(10) ** (-(precision - 10)):
                vec = None
    if vec is None:
        if precision < needed:
            return RelationResult(None, "insufficient_precision")
        return RelationResult(None, "none")
    return RelationResult(tuple(int(c) for c in vec), "found")


@dataclass(frozen=True)
class RecognitionResult:
    coefficients: tuple[Fraction, ...]
    residual: mp.mpf
    verified_digits: int
    status: str  # "found" | "not_found" | "insufficient_precision"
    basis: ConstantBasis
    consistent_with_zero: bool = False

    @property
    def found(self) -> bool:
        return self.status == "found"

    def as_label_map(self) -> dict[str, str]:
        return {label: str(c) for label, c in zip(self.basis.labels,
                                                  self.coefficients) if c != 0}

    def combination_value(self, precision: int) -> mp.mpf:
        with mp.workdps(working_dps(precision)):
            vals = self.basis.values(precision)
            return mp.fsum(mp.mpf(c.numerator) / c.denominator * v
                           for c, v in zip(self.coefficients, vals) if c != 0)


def recognize(x, basis: ConstantBasis, precision: int | None = None,
              height_bound: int = DEFAULT_HEIGHT_BOUND) -> RecognitionResult:
    """Rational coefficients of x over the basis, re-verified at +40 digits."""
    p = basis.precision if precision is None else precision
    detection = p // 2
    zeros = tuple(Fraction(0) for _ in basis.entries)
    with mp.workdps(working_dps(p)):
        ax = abs(mp.mpf(x)) if not isinstance(x, mp.mpc) else abs(x)
        if ax < mp.mpf(10) ** (-detection):
            digits = p if ax == 0 else min(p, int(-mp.log10(ax)))
            return RecognitionResult(zeros, +ax, digits, "found", basis,
                                     consistent_with_zero=True)
    if not basis.entries:
        return RecognitionResult(zeros, mp.mpf(1), 0, "not_found", basis)
    rel = integer_relation([x] + basis.values(p), p, height_bound)
    if rel.vector is None:
        return RecognitionResult(zeros, mp.mpf(1), 0,
                                 "not_found" if rel.status == "none"
                                 else rel.status, basis)
    v0 = rel.vector[0]
    if v0 == 0:
        return RecognitionResult(zeros, mp.mpf(1), 0, "not_found", basis)
    coeffs = tuple(Fraction(-vi, v0) for vi in rel.vector[1:])
    confirm = p + 40
    with mp.workdps(working_dps(confirm)):
        vals = basis.values(confirm)
        combo = mp.fsum(mp.mpf(c.numerator) / c.denominator * v
                        for c, v in zip(coeffs, vals))
        residual = abs(mp.mpf(x) - combo)
        digits = confirm if residual == 0 else int(mp.floor(-mp.log10(residual)))
    if residual < mp.mpf(10) ** (-detection) and digits >= detection:
        return RecognitionResult(coeffs, residual, digits, "found", basis)
    return RecognitionResult(zeros, residual, 0, "not_found", basis)


def recognize_with_fallback(x, weight: int, precision: int, generators=None,
                            height_bound: int = DEFAULT_HEIGHT_BOUND
                            ) -> RecognitionResult:
    """Homogeneous-weight recognition with a graded fallback."""
    basis = build_basis(weight, generators, "homogeneous", precision)
    result = recognize(x, basis, precision, height_bound)
    if result.found:
        return result
    graded = build_basis(weight, generators, "graded", precision)
    fallback = recognize(x, graded, precision, height_bound)
    return fallback if fallback.found else result
