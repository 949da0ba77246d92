"""Closed-form evaluations of the G_k families.

Each evaluator is an independent route to a value the recursion engine also
produces; :data:`CLOSED_FORMS` records which family (if any) it reproduces.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Callable, Optional

from .errors import DegenerateBase, DomainError, PoleError
from .series import HypSpec, evaluate_series, evaluate_terminating_exact
from .specialfun import gamma_ratio, near_pole, pochhammer


class ClosedFormId(str, enum.Enum):
    HALF_ARGUMENT_POWER = "half-argument-power"
    KUMMER_CHOI = "kummer-choi"
    CHOI_IDENTITY = "choi-identity"
    MILLER_CLOSED = "miller-closed"
    PFAFF_CLOSED = "pfaff-closed"
    BAILEY_CLOSED = "bailey-closed"


def _need_k(k: int, lo: int):
    if int(k) != k or k < lo:
        raise DomainError(f"k must be an integer >= {lo}, got {k!r}")


def _terminating_3f2(upper, lower, exact: bool):
    spec = HypSpec(tuple(upper), tuple(lower), 1)
    if exact:
        return evaluate_terminating_exact(spec)
    return evaluate_series(spec).value


def half_argument_power(a: float, k: int) -> float:
    """2F1(a, a+k; a+1 | 1/2) as 2^a (2^(k-1) - sum_i (k-1)!/((i-1)!(k-i-1)!(a+i)))."""
    _need_k(k, 1)
    total = 0.0
    for i in range(1, k):
        if abs(a + i) < 1e-12:
            raise PoleError(f"a + {i} vanishes")
        total += (k - 1) * math.comb(k - 2, i - 1) / (a + i)
    return 2.0 ** a * (2.0 ** (k - 1) - total)


def kummer_choi(a: float, b: float, k: int) -> float:
    """2F1(a+k, b; a-b+1 | -1) as a finite binomial sum of gamma ratios."""
    _need_k(k, 0)
    if near_pole(1 + a - b):
        raise PoleError("Γ(1+a-b) has a pole")
    if near_pole(a + k):
        raise PoleError("Γ(a+k) has a pole")
    total = 0.0
    for m in range(k + 1):
        total += math.comb(k, m) * gamma_ratio([1 + a - b, (a + k + m) / 2], [a + k, (a - k + m) / 2 - b + 1])
    return total / 2


def _choi_weight(a, b, k, m):
    return a + (k - 1) / 2 - b * m / k - (k + 1) * (a + k - 1) / (2 * (m + 1))


def choi_identity_sides(a: float, b: float, k: int) -> tuple[float, float]:
    """(LHS, RHS) of the gamma identity

    Γ((a+k+1)/2)/Γ((a-k+1)/2-b)
        = sum_m C(k,m) w_m Γ((a+k+m)/2)/Γ((a-k+m)/2-b+1).
    """
    _need_k(k, 1)
    lhs = gamma_ratio([(a + k + 1) / 2], [(a - k + 1) / 2 - b])
    rhs = 0.0
    for m in range(k + 1):
        rhs += math.comb(k, m) * _choi_weight(a, b, k, m) * gamma_ratio([(a + k + m) / 2], [(a - k + m) / 2 - b + 1])
    return lhs, rhs


def choi_identity_residual(a: float, b: float, k: int) -> float:
    lhs, rhs = choi_identity_sides(a, b, k)
    return lhs - rhs


def choi_intermediate_sides(a: float, b: float, k: int) -> tuple[float, float]:
    """The two binomial sums equated on the way to the gamma identity."""
    _need_k(k, 1)
    lhs = sum(
        math.comb(k + 1, m) * gamma_ratio([(a + k + m + 1) / 2], [(a - k + m + 1) / 2 - b])
        for m in range(k + 2)
    )
    rhs = sum(
        math.comb(k, m) * (a + k - b * m / k) * gamma_ratio([(a + k + m) / 2], [(a - k + m) / 2 - b + 1])
        for m in range(k + 1)
    )
    return lhs, rhs


def miller_closed(a: float, b: float, c: float, d: float, k: int) -> float:
    """3F2(a, b, c+k+1; d+1, c | 1) as a finite sum over j = 0..k."""
    _need_k(k, 0)
    if abs(c) < 1e-12:
        raise DegenerateBase("Miller closed form divides by c = 0")
    pref = (-1) ** k * gamma_ratio([d + 1, d - a - b - k], [d - a + 1, d - b + 1]) / c
    total = 0.0
    for j in range(k + 1):
        term = (
            (-1) ** j
            * pochhammer(a + b - d + j + 1, k - j)
            * pochhammer(a, j)
            * pochhammer(b, j)
            / pochhammer(c + 1, j)
            * math.comb(k, j)
            * (a * (b - c) - (b + j) * c + (c + j) * d)
        )
        total += term
    return pref * total


def miller_bracket(a, b, c, d, form: str = "d-b"):
    if form == "d-b":
        return a * (b - c) + c * (d - b)
    if form == "d-c":
        return a * (b - c) + c * (d - c)
    raise ValueError(f"unknown bracket form {form!r}")


def miller_relation(a: float, b: float, c: float, d: float, k: int, bracket: str = "d-b") -> float:
    """The closed form repackaged as two terminating 3F2 sums.

    ``bracket`` selects the constant multiplying the first sum; only "d-b"
    reproduces the family, "d-c" is kept to demonstrate that it does not.
    """
    _need_k(k, 0)
    if abs(c) < 1e-12:
        raise DegenerateBase("Miller closed form divides by c = 0")
    pref = (
        (-1) ** k
        * gamma_ratio([d + 1, d - a - b - k], [d - a + 1, d - b + 1])
        * pochhammer(a + b - d + 1, k)
        / c
    )
    s1 = _terminating_3f2((-k, a, b), (c + 1, a + b - d + 1), False)
    s2 = 0.0
    if k >= 1:
        s2 = _terminating_3f2((1 - k, a + 1, b + 1), (c + 2, a + b - d + 2), False)
    tail = a * b * (c - d) * k / ((c + 1) * (a + b - d + 1)) * s2
    return pref * (miller_bracket(a, b, c, d, bracket) * s1 + tail)


def pfaff_closed(n: int, a, b, c, k: int):
    """3F2(-n, a, b; c+k, a+b+1-n-c | 1) via the Pfaff-Saalschutz ratio times a
    terminating 3F2 correction. Exact (Fraction) when a, b, c are rational."""
    _need_k(k, 0)
    if int(n) != n or n < 0:
        raise DomainError("pfaff_closed needs an integer n >= 0")
    n = int(n)
    exact = all(isinstance(x, Rational) for x in (a, b, c))
    if exact:
        a, b, c = Fraction(a), Fraction(b), Fraction(c)
    else:
        a, b, c = float(a), float(b), float(c)
    if n == 0:
        return Fraction(1) if exact else 1.0
    den = pochhammer(c + k, n) * pochhammer(c - a - b, n)
    if den == 0 or (not exact and abs(den) < 1e-300):
        raise PoleError("Pochhammer zero in the denominator of the Pfaff-Saalschutz ratio")
    ratio = pochhammer(c - a, n) * pochhammer(c - b + k, n) / den
    corr = _terminating_3f2((-k, -n, b), (c - a, b - c - k - n + 1), exact)
    return ratio * corr


def pfaff_gamma_sum(n: int, a: float, b: float, c: float, k: int) -> float:
    """The same value as a single gamma-weighted sum over j = 0..min(k, n)."""
    _need_k(k, 0)
    den = pochhammer(c + k, n) * pochhammer(c - a - b, n)
    if abs(den) < 1e-300:
        raise PoleError("Pochhammer zero in the denominator")
    total = 0.0
    for j in range(min(k, n) + 1):
        total += (
            (-1) ** j
            * math.comb(k, j)
            * pochhammer(b, j)
            * pochhammer(n - j + 1, j)
            * gamma_ratio([c - a + n, c - b + n + k - j], [c - b + k, c - a + j])
        )
    return total / den


def bailey_closed(a: float, b: float, c: float, k: int) -> float:
    """3F2(a, b, c+1; 1+2c-b+k, c | 1) in closed form."""
    _need_k(k, 0)
    if abs(c) < 1e-12:
        raise DegenerateBase("Bailey closed form divides by c = 0")
    g = gamma_ratio([2 * c - b + k + 1, 2 * c - a - 2 * b + k], [2 * c - 2 * b + k + 1, 2 * c - a - b + k + 1])
    return ((a - 2 * c) * (b - c) + k * c) * g / c


@dataclass(frozen=True)
class ClosedForm:
    id: ClosedFormId
    param_names: tuple
    k_min: int
    family: Optional[str]  # recursion family reproduced, by kebab name
    evaluate: Callable  # (k, params) -> value; for the identity, the residual
    title: str

    @property
    def name(self) -> str:
        return self.id.value


CLOSED_FORMS: dict[ClosedFormId, ClosedForm] = {
    f.id: f
    for f in [
        ClosedForm(ClosedFormId.HALF_ARGUMENT_POWER, ("a",), 1, "gauss2nd-diag",
                   lambda k, p: half_argument_power(p[0], k),
                   "2F1(a, a+k; a+1 | 1/2) as 2^a times a finite sum"),
        ClosedForm(ClosedFormId.KUMMER_CHOI, ("a", "b"), 0, "kummer",
                   lambda k, p: kummer_choi(p[0], p[1], k),
                   "2F1(a+k, b; a-b+1 | -1) as a binomial sum of gamma ratios"),
        ClosedForm(ClosedFormId.CHOI_IDENTITY, ("a", "b"), 1, None,
                   lambda k, p: choi_identity_residual(p[0], p[1], k),
                   "gamma identity obtained by comparing two evaluations of the Kummer family"),
        ClosedForm(ClosedFormId.MILLER_CLOSED, ("a", "b", "c", "d"), 0, "miller",
                   lambda k, p: miller_closed(*p, k),
                   "3F2(a, b, c+k+1; d+1, c | 1) as a finite j-sum"),
        ClosedForm(ClosedFormId.PFAFF_CLOSED, ("n", "a", "b", "c"), 0, "pfaff",
                   lambda k, p: pfaff_closed(*p, k),
                   "3F2(-n, a, b; c+k, a+b+1-n-c | 1) as a Saalschutz ratio times a terminating 3F2"),
        ClosedForm(ClosedFormId.BAILEY_CLOSED, ("a", "b", "c"), 0, "bailey",
                   lambda k, p: bailey_closed(*p, k),
                   "3F2(a, b, c+1; 1+2c-b+k, c | 1) in closed form"),
    ]
}


def get_closed_form(name) -> ClosedForm:
    if isinstance(name, ClosedForm):
        return name
    try:
        return CLOSED_FORMS[ClosedFormId(name)]
    except ValueError:
        raise KeyError(f"unknown closed form {name!r}") from None


def closed_form_for_family(family: str) -> Optional[ClosedForm]:
    for cf in CLOSED_FORMS.values():
        if cf.family == family:
            return cf
    return None
