"""Definition-level summation of pFq series.

This is the oracle side of every cross-check: it only ever sums
``sum_m prod (a_i)_m / (m! prod (b_j)_m) z^m`` term by term, with tail
control, and knows nothing about the recursions or closed forms.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Optional, Sequence

import numpy as np

from .errors import DomainError, NoConvergence
from .specialfun import near_pole

UNIT_TOL = 1e-12


class ConvergenceClass(str, enum.Enum):
    TERMINATING = "Terminating"
    ABSOLUTE = "AbsolutelyConvergent"
    CONDITIONAL = "ConditionallyConvergent"
    DIVERGENT = "Divergent"


class TailMode(str, enum.Enum):
    GEOMETRIC = "geometric"
    ALGEBRAIC = "algebraic"
    NONE = "none"


def _termination_index(params) -> Optional[int]:
    """n for the nonpositive-integer parameter of smallest |n|, else None."""
    best = None
    for x in params:
        if near_pole(x):
            n = -int(round(x))
            if best is None or n < best:
                best = n
    return best


@dataclass(frozen=True)
class HypSpec:
    upper: tuple
    lower: tuple
    z: object

    def __post_init__(self):
        object.__setattr__(self, "upper", tuple(self.upper))
        object.__setattr__(self, "lower", tuple(self.lower))
        n_up = _termination_index(self.upper)
        for b in self.lower:
            if near_pole(b):
                pole = -int(round(b))
                # the pole hits term m = pole+1; fine if the series stops first
                if n_up is None or n_up > pole:
                    raise DomainError(f"lower parameter {b!r} is a pole of the series")

    @property
    def p(self) -> int:
        return len(self.upper)

    @property
    def q(self) -> int:
        return len(self.lower)

    @property
    def termination_index(self) -> Optional[int]:
        return _termination_index(self.upper)

    @property
    def excess(self) -> float:
        """s = sum(lower) - sum(upper), the parameter excess at |z| = 1."""
        return float(sum(self.lower) - sum(self.upper))

    def is_exact(self) -> bool:
        return all(isinstance(x, Rational) for x in (*self.upper, *self.lower, self.z))

    def to_dict(self) -> dict:
        def enc(x):
            return str(x) if isinstance(x, Fraction) else x
        return {"upper": [enc(x) for x in self.upper], "lower": [enc(x) for x in self.lower], "z": enc(self.z)}


@dataclass(frozen=True)
class EvalResult:
    value: float
    abs_error_estimate: float
    terms_used: int
    cls: ConvergenceClass

    def __post_init__(self):
        if self.abs_error_estimate < 0 or self.terms_used < 1:
            raise ValueError("EvalResult needs abs_error_estimate >= 0 and terms_used >= 1")


@dataclass(frozen=True)
class SummationPolicy:
    max_terms: int = 2_000_000
    target_abs_error: float = 1e-12
    # None picks geometric for |z| < 1 and algebraic on the unit circle
    tail_mode: Optional[TailMode] = None

    def __post_init__(self):
        if self.max_terms < 1:
            raise ValueError("max_terms must be >= 1")


def classify(spec: HypSpec) -> ConvergenceClass:
    if spec.termination_index is not None:
        return ConvergenceClass.TERMINATING
    p, q = spec.p, spec.q
    if p <= q:
        return ConvergenceClass.ABSOLUTE
    if p > q + 1:
        return ConvergenceClass.DIVERGENT
    az = abs(float(spec.z))
    if az < 1.0 - UNIT_TOL:
        return ConvergenceClass.ABSOLUTE
    if az > 1.0 + UNIT_TOL:
        return ConvergenceClass.DIVERGENT
    s = spec.excess
    if s > 0:
        return ConvergenceClass.ABSOLUTE
    at_one = abs(float(spec.z) - 1.0) < UNIT_TOL
    # 2F1 band is -1 < s <= 0; the general pFq band is -1 < s < 0
    upper_ok = s <= 0 if p == 2 else s < 0
    if not at_one and -1 < s and upper_ok:
        return ConvergenceClass.CONDITIONAL
    return ConvergenceClass.DIVERGENT


def evaluate_terminating_exact(spec: HypSpec) -> Fraction:
    """Exact finite sum in rational arithmetic."""
    n = spec.termination_index
    if n is None:
        raise DomainError("series does not terminate")
    upper = [Fraction(x) for x in spec.upper]
    lower = [Fraction(x) for x in spec.lower]
    z = Fraction(spec.z)
    total = Fraction(0)
    term = Fraction(1)
    for m in range(n + 1):
        total += term
        if m == n:
            break
        num = Fraction(1)
        for a in upper:
            num *= a + m
        den = Fraction(m + 1)
        for b in lower:
            den *= b + m
        if den == 0:
            raise DomainError(f"lower-parameter pole reached at term {m + 1}")
        term = term * num * z / den
    return total


def _ratio(upper, lower, z, m: float) -> float:
    r = z / (m + 1.0)
    for a in upper:
        r *= a + m
    for b in lower:
        r /= b + m
    return r


def _sum_terminating(upper, lower, z, n: int) -> EvalResult:
    term = 1.0
    total = 0.0
    mag = 0.0
    for m in range(n + 1):
        total += term
        mag += abs(term)
        if m < n:
            term *= _ratio(upper, lower, z, m)
    err = 4.0 * (n + 1) * np.finfo(float).eps * mag
    return EvalResult(total, err, n + 1, ConvergenceClass.TERMINATING)


def _sum_geometric(upper, lower, z, cls, policy: SummationPolicy) -> EvalResult:
    term = 1.0
    total = 0.0
    m = 0
    target = policy.target_abs_error
    while True:
        total += term
        term *= _ratio(upper, lower, z, m)
        m += 1
        if abs(term) < target or term == 0.0:
            r = max(abs(_ratio(upper, lower, z, m + i)) for i in range(3))
            if r < 1.0:
                tail = abs(term) * r / (1.0 - r) + abs(term)
                # extra terms are cheap here; run on to working precision
                if tail < target and tail <= 1e-16 * max(abs(total), 1.0):
                    return EvalResult(total, tail, m, cls)
        if m >= policy.max_terms:
            r = max(abs(_ratio(upper, lower, z, m + i)) for i in range(3))
            tail = abs(term) * r / (1.0 - r) + abs(term) if r < 1.0 else math.inf
            raise NoConvergence(
                f"{m} terms, tail estimate {tail:.3g} above target",
                partial=EvalResult(total, tail if math.isfinite(tail) else 0.0, m, cls),
            )


class _TermStream:
    """Vectorised term generator for long sums on the unit circle."""

    def __init__(self, upper, lower, z):
        self.upper = np.asarray(upper, dtype=float)
        self.lower = np.asarray(lower, dtype=float)
        self.z = float(z)
        self.next_m = 0
        self.next_term = 1.0

    def take(self, count: int) -> np.ndarray:
        m = np.arange(self.next_m, self.next_m + count, dtype=float)
        r = np.full(count, self.z) / (m + 1.0)
        for a in self.upper:
            r *= a + m
        for b in self.lower:
            r /= b + m
        out = np.empty(count)
        out[0] = self.next_term
        np.cumprod(r[:-1], out=out[1:])
        out[1:] *= self.next_term
        self.next_term = out[-1] * r[-1]
        self.next_m += count
        return out


_RICHARDSON_COLUMNS = 5


def _sum_algebraic(upper, lower, s: float, cls, policy: SummationPolicy) -> EvalResult:
    """z = 1, s > 0: partial sums at doubling N plus Richardson on N^-(s+i)."""
    scale = max([1.0] + [abs(float(x)) for x in (*upper, *lower)])
    n0 = max(64, 1 << math.ceil(math.log2(8 * scale)))
    stream = _TermStream(upper, lower, 1.0)
    chunk = stream.take(n0)
    partial = math.fsum(chunk)
    magnitude = math.fsum(np.abs(chunk))
    n = n0
    rows: list[list[float]] = [[partial]]
    best_prev = math.nan
    err = math.inf
    while True:
        if len(rows) > 1:
            prev = rows[-2]
            row = rows[-1]
            for i in range(1, min(len(rows), _RICHARDSON_COLUMNS)):
                f = 2.0 ** (s + i - 1)
                row.append((f * row[i - 1] - prev[i - 1]) / (f - 1.0))
            best = row[-1]
            err = max(abs(row[-1] - row[-2]), abs(best - best_prev)) if len(rows) >= 3 else math.inf
            best_prev = best
            # rounding in the partial sums, amplified by the extrapolation weights
            floor = 256.0 * np.finfo(float).eps * magnitude
            err = max(err, floor)
            if err <= max(policy.target_abs_error, floor):
                return EvalResult(best, err, n, cls)
        if 2 * n > policy.max_terms:
            value = rows[-1][-1]
            raise NoConvergence(
                f"{n} terms, extrapolation error {err:.3g} above target",
                partial=EvalResult(value, err if math.isfinite(err) else 0.0, n, cls),
            )
        chunk = stream.take(n)
        partial = partial + math.fsum(chunk)
        magnitude += math.fsum(np.abs(chunk))
        n *= 2
        rows.append([partial])


def _sum_alternating(upper, lower, z, s: float, cls, policy: SummationPolicy) -> EvalResult:
    """|z| = 1, z != 1, s > 0: plain partial sums with the algebraic tail bound."""
    stream = _TermStream(upper, lower, z)
    total = 0.0
    n = 0
    chunk = 4096
    while n < policy.max_terms:
        terms = stream.take(chunk)
        total += math.fsum(terms)
        n += chunk
        t_n = abs(stream.next_term)
        bound = t_n * n / (s - 1.0) if s > 1.0 else math.inf
        if t_n < policy.target_abs_error and bound < policy.target_abs_error:
            return EvalResult(total, bound, n, cls)
        chunk = min(2 * chunk, policy.max_terms - n) or 1
    raise NoConvergence(f"{n} terms without reaching the target", partial=EvalResult(total, 0.0, max(n, 1), cls))


def evaluate_series(spec: HypSpec, policy: Optional[SummationPolicy] = None) -> EvalResult:
    policy = policy or SummationPolicy()
    cls = classify(spec)
    if cls in (ConvergenceClass.CONDITIONAL, ConvergenceClass.DIVERGENT):
        raise DomainError(f"series is {cls.value}; direct summation refused")
    upper = [float(x) for x in spec.upper]
    lower = [float(x) for x in spec.lower]
    z = float(spec.z)
    if cls is ConvergenceClass.TERMINATING:
        return _sum_terminating(upper, lower, z, spec.termination_index)
    mode = policy.tail_mode
    on_unit = spec.p == spec.q + 1 and abs(abs(z) - 1.0) < UNIT_TOL
    if mode is None:
        mode = TailMode.ALGEBRAIC if on_unit else TailMode.GEOMETRIC
    if mode is TailMode.GEOMETRIC:
        if on_unit:
            raise DomainError("geometric tail bound needs |z| < 1 or p <= q")
        return _sum_geometric(upper, lower, z, cls, policy)
    s = spec.excess
    if mode is TailMode.ALGEBRAIC and abs(z - 1.0) < UNIT_TOL:
        return _sum_algebraic(upper, lower, s, cls, policy)
    if on_unit:
        return _sum_alternating(upper, lower, z, s, cls, policy)
    return _sum_geometric(upper, lower, z, cls, policy)


def pfaff_transform_2f1(spec: HypSpec) -> tuple[HypSpec, float]:
    """2F1(a,b;c;z) = (1-z)^-a 2F1(a, c-b; c; z/(z-1)).

    Returns the transformed spec and the prefactor (1-z)^-a.
    """
    if spec.p != 2 or spec.q != 1:
        raise DomainError("pfaff_transform_2f1 needs a 2F1")
    a, b = spec.upper
    (c,) = spec.lower
    z = spec.z
    if not float(z) < 1.0 or z == 0:
        raise DomainError("pfaff_transform_2f1 needs z < 1, z != 0")
    new_z = z / (z - 1) if isinstance(z, Rational) else float(z) / (float(z) - 1.0)
    prefactor = (1.0 - float(z)) ** (-float(a))
    return HypSpec((a, c - b), (c,), new_z), prefactor


def hyp_value(spec: HypSpec, policy: Optional[SummationPolicy] = None) -> EvalResult:
    """evaluate_series, routing 2F1 at z < -1/2 through the Pfaff transform.

    The transformed series converges geometrically even where the original
    one at z = -1 is only conditionally convergent or divergent; the result
    is then the analytic (Abel) value, and ``cls`` describes the series that
    was actually summed.
    """
    if spec.p == 2 and spec.q == 1 and float(spec.z) < -0.5 and classify(spec) is not ConvergenceClass.TERMINATING:
        inner, pref = pfaff_transform_2f1(spec)
        res = evaluate_series(inner, policy)
        return EvalResult(pref * res.value, abs(pref) * res.abs_error_estimate, res.terms_used, res.cls)
    return evaluate_series(spec, policy)


def hyp2f1(a, b, c, z, policy: Optional[SummationPolicy] = None) -> float:
    return hyp_value(HypSpec((a, b), (c,), z), policy).value


def hyp3f2_unit(upper: Sequence, lower: Sequence, policy: Optional[SummationPolicy] = None) -> float:
    return evaluate_series(HypSpec(tuple(upper), tuple(lower), 1), policy).value
