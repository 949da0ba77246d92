"""The recursion families G_k and a memoized engine over their shift lattices.

Every family is a parametrised hypergeometric value G_k(params) with

* a definition (the series it stands for, see :func:`definition`),
* a base case at k = 0 (k = 1 for Kummer and Dixon) given by a classical
  summation theorem,
* a contiguous-relation step expressing G_k through values one index
  closer to the base, possibly at integer-shifted parameters.

:func:`recurse` resolves a point by applying steps until every leaf is a base
case, memoizing each lattice point it visits.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Callable, Iterator, Optional

from .errors import CoefficientPole, DegenerateBase, DomainError, HyprecError, PoleError
from .series import EvalResult, HypSpec, SummationPolicy, evaluate_terminating_exact, hyp_value
from .specialfun import POLE_TOL, digamma, gamma_ratio, pochhammer

SQRT_PI = math.sqrt(math.pi)

# Gauss2nd with j = 1 has a removable 1/(a-b) in its base; refuse close to it
DEGENERATE_AB = 0.05


class FamilyId(str, enum.Enum):
    GAUSS2ND = "gauss2nd"
    GAUSS2ND_DIAG = "gauss2nd-diag"
    SRIVASTAVA = "srivastava"
    KUMMER = "kummer"
    MILLER = "miller"
    PFAFF = "pfaff"
    DIXON = "dixon"
    WATSON_LAVOIE = "watson-lavoie"
    WATSON_SHIFT = "watson-shift"
    BAILEY = "bailey"


@dataclass(frozen=True)
class FamilyPoint:
    family: FamilyId
    k: int
    base_params: tuple
    shift: tuple

    @property
    def params(self) -> tuple:
        return tuple(p + s for p, s in zip(self.base_params, self.shift))

    def child(self, dk: int, delta: tuple) -> "FamilyPoint":
        return FamilyPoint(self.family, self.k + dk, self.base_params,
                           tuple(s + d for s, d in zip(self.shift, delta)))

    def to_dict(self) -> dict:
        def enc(x):
            return str(x) if isinstance(x, Fraction) else x
        return {
            "family": self.family.value,
            "k": self.k,
            "base_params": [enc(x) for x in self.base_params],
            "shift": list(self.shift),
        }


class MemoTable:
    """Insert-once map FamilyPoint -> value; the first stored value wins."""

    def __init__(self):
        self._data: dict = {}

    def get(self, point: FamilyPoint):
        return self._data.get(point)

    def insert(self, point: FamilyPoint, value):
        return self._data.setdefault(point, value)

    def __contains__(self, point) -> bool:
        return point in self._data

    def __len__(self) -> int:
        return len(self._data)

    def points(self) -> list:
        return list(self._data)


def _is_zero(x) -> bool:
    if isinstance(x, Rational):
        return x == 0
    return abs(x) < POLE_TOL


def _half(x):
    return Fraction(x) / 2 if isinstance(x, Rational) else x / 2.0


# ---------------------------------------------------------------------------
# steps: each returns (terms, denominators); terms are (coef, dk, delta)


def _step_gauss2nd(k, p):
    a, b, j = p
    den = a + b + 1 + j
    return [(1, -1, (0, 0, 0)), (lambda: a / den, -1, (1, 1, 0))], [("a+b+1+j", den)]


def _step_diag(k, p):
    (a,) = p
    den = 2 * (a + 1)
    return [(1, -1, (0,)), (lambda: a / den, -1, (1,))], [("2(a+1)", den)]


def _step_srivastava(k, p):
    n, a = p
    d1 = k * (2 * a + k - 1)
    return (
        [
            (lambda: 2 * (a + k - 1) * (2 * a + k + n - 1) / d1, +1, (0, 0)),
            (lambda: -(2 * a + k - 2) / k, +1, (0, -1)),
        ],
        [("k(2a+k-1)", d1)],
    )


def _step_kummer(k, p):
    a, b = p
    kk = k - 1
    d2 = kk * (a - b + 1)
    return (
        [
            (lambda: (b + kk) / kk, -1, (0, 0)),
            (lambda: -2 * b * (a + kk + 1) / d2, -1, (2, 1)),
        ],
        [("k", kk), ("k(a-b+1)", d2)],
    )


def _step_miller(k, p):
    a, b, c, d = p
    den = c * (d + 1)
    return [(1, -1, (0, 0, 0, 0)), (lambda: a * b / den, -1, (1, 1, 1, 1))], [("c(d+1)", den)]


def _step_pfaff(k, p):
    n, a, b, c = p
    terms = [(1, -1, (0, 1, 0, 1))]
    dens = []
    if n != 0:
        den = (c + k) * (a + b + 1 - n - c)
        terms.append((lambda: n * b / den, -1, (-1, 1, 1, 2)))
        dens.append(("(c+k)(a+b+1-n-c)", den))
    return terms, dens


def _step_dixon(k, p):
    a, b, c = p
    kk = k - 1
    den = kk * (b + c + kk)
    return (
        [
            (lambda: a * (a - 1 - 2 * (b + c + kk)) / den, -1, (1, 1, 1)),
            (lambda: -(a - b) * (a - c) / den, -1, (-1, 0, 0)),
        ],
        [("k(b+c+k)", den)],
    )


def _step_watson_lavoie(k, p):
    a, b, c = p
    den = (a + b + 1) * (2 * c + k - 1) * (2 * c + k)
    return [(1, -1, (0, 0, 0)), (lambda: -2 * a * b * c / den, -1, (1, 1, 1))], [("(a+b+1)(2c+k-1)(2c+k)", den)]


def _step_watson_shift(k, p):
    a, b, c = p
    d1 = a + b + 1
    d2 = (2 * c + 1) * (a + b + 3)
    return (
        [
            (1, -1, (0, 0, 0)),
            (lambda: b / d1 * (a + k) * (b + 1) / d2, -1, (2, 2, 1)),
            (lambda: b / d1, -1, (1, 1, 0)),
        ],
        [("a+b+1", d1), ("(2c+1)(a+b+3)", d2)],
    )


def _step_bailey(k, p):
    a, b, c = p
    kk = k - 1
    den = (a - 1) * (2 * c - 2 * b + kk + 1) * (c - b + kk)

    def pref():
        return (2 * c - b + kk) * (2 * c - b + kk + 1) / den

    first = (lambda: pref() * (c - 1), -1, (-1, -1, -1))
    if c - 1 == 0:
        # the child sits at c = 0 where G ~ 1/c; (c-1) G tends to the residue
        first = (lambda: pref() * _bailey_residue(a - 1, b - 1, kk), None, None)
    return (
        [first, (lambda: -pref() * (c - a), -1, (-1, 0, 0))],
        [("(a-1)(2c-2b+k+1)(c-b+k)", den)],
    )


def _bailey_residue(a, b, k):
    """lim_{c->0} c * 3F2(a, b, c+1; 1+2c-b+k, c | 1), a Gauss sum."""
    return a * b * gamma_ratio([1 - b + k, k - a - 2 * b], [1 - a - b + k, 1 - 2 * b + k])


# ---------------------------------------------------------------------------
# base cases


def watson_sum(a, b, c) -> float:
    """3F2(a, b, c; (a+b+1)/2, 2c | 1) by Watson's theorem."""
    return SQRT_PI * gamma_ratio(
        [c + 0.5, (a + b + 1) / 2, (1 - a - b) / 2 + c],
        [(a + 1) / 2, (b + 1) / 2, (1 - a) / 2 + c, (1 - b) / 2 + c],
    )


def _base_gauss2nd(p):
    a, b, j = p
    if j == 0:
        return SQRT_PI * gamma_ratio([(a + b + 1) / 2], [(a + 1) / 2, (b + 1) / 2])
    if abs(a - b) < DEGENERATE_AB:
        raise DegenerateBase(
            f"|a-b| = {abs(a - b):.3g} < {DEGENERATE_AB}: the j=1 base is singular at a=b; use gauss2nd-diag"
        )
    top = (a + b) / 2 + 1
    bracket = gamma_ratio([top], [a / 2, (b + 1) / 2]) - gamma_ratio([top], [(a + 1) / 2, b / 2])
    return 2 * SQRT_PI / (a - b) * bracket


def _base_diag(p):
    (a,) = p
    return 2.0 ** (a - 1) * a * (digamma((a + 1) / 2) - digamma(a / 2))


def _base_srivastava(p):
    # Γ-ratios of the base formula written as Pochhammer symbols:
    # even n: (1/2)_{n/2} / (a-1/2)_{n/2};  odd n: -(1/2)_{(n+1)/2} / (a-1/2)_{(n+1)/2}
    n, a = p
    exact = isinstance(a, Rational)
    half = Fraction(1, 2) if exact else 0.5
    m = (n + 1) // 2
    den = pochhammer(a - half, m)
    if _is_zero(den):
        raise PoleError(f"Srivastava base has a pole at a={a!r}")
    val = pochhammer(half, m) / den
    return val if n % 2 == 0 else -val


def _base_kummer(p):
    """Choi's G_1(a, b) = 2F1(a+1, b; a-b+1 | -1)."""
    a, b = p
    s = gamma_ratio([a + 1 - b], [a / 2 + 1, (a + 1) / 2 - b]) + gamma_ratio([a + 1 - b], [(a + 1) / 2, a / 2 - b + 1])
    return SQRT_PI / 2.0 ** (a + 1) * s


def kummer_theorem(a, b) -> float:
    """2F1(a, b; a-b+1 | -1) by Kummer's theorem."""
    return gamma_ratio([a - b + 1, a / 2 + 1], [a + 1, a / 2 - b + 1])


def _base_miller(p):
    a, b, c, d = p
    if _is_zero(c):
        raise DegenerateBase("Miller base divides by c = 0")
    return gamma_ratio([d + 1, d - a - b], [d - a + 1, d - b + 1]) / c * (a * (b - c) + c * (d - b))


def _base_pfaff(p):
    n, a, b, c = p
    den = pochhammer(c, n) * pochhammer(c - a - b, n)
    if _is_zero(den):
        raise PoleError("Pfaff-Saalschutz base: Pochhammer zero in the denominator")
    return pochhammer(c - a, n) * pochhammer(c - b, n) / den


def _base_dixon(p):
    """Lavoie's G_1(a, b, c) = 3F2(a, b+1, c+1; a-b+1, a-c+1 | 1)."""
    a, b, c = p
    if _is_zero(b) or _is_zero(c):
        raise DegenerateBase("Dixon G_1 base divides by b*c = 0")
    t1 = gamma_ratio([1 + a - b, 1 + a - c, (a + 1) / 2 - c, a / 2 - b - c],
                     [a - 2 * c, a - b - c, (a + 1) / 2, a / 2 - b])
    t2 = gamma_ratio([1 + a - b, 1 + a - c, (a + 1) / 2 - b - c, a / 2 - c],
                     [a - 2 * c, a - b - c, a / 2, (a + 1) / 2 - b])
    return (t1 - t2) / (2.0 ** (2 * c + 1) * b * c)


def dixon_theorem(a, b, c) -> float:
    """3F2(a, b, c; a-b+1, a-c+1 | 1) by Dixon's theorem."""
    return gamma_ratio(
        [a / 2 + 1, a - b + 1, a - c + 1, a / 2 - b - c + 1],
        [a + 1, a / 2 - b + 1, a / 2 - c + 1, a - b - c + 1],
    )


def _base_watson(p):
    a, b, c = p
    return watson_sum(a, b, c)


def _base_bailey(p):
    a, b, c = p
    if _is_zero(c):
        raise DegenerateBase("Bailey base divides by c = 0")
    return (1 - a / (2 * c)) * gamma_ratio([2 * c - b + 1, 2 * c - a - 2 * b], [2 * c - 2 * b, 2 * c - a - b + 1])


# ---------------------------------------------------------------------------
# definitions


def _def_gauss2nd(k, p):
    a, b, j = p
    return HypSpec((a, b + k), (_half(a + b + j + 1),), Fraction(1, 2))


def _def_diag(k, p):
    (a,) = p
    return HypSpec((a, a + k), (a + 1,), Fraction(1, 2))


def _def_srivastava(k, p):
    n, a = p
    return HypSpec((-n, a), (2 * a - 1 + k,), 2)


def _def_kummer(k, p):
    a, b = p
    return HypSpec((a + k, b), (a - b + 1,), -1)


def _def_miller(k, p):
    a, b, c, d = p
    return HypSpec((a, b, c + k + 1), (d + 1, c), 1)


def _def_pfaff(k, p):
    n, a, b, c = p
    return HypSpec((-n, a, b), (c + k, a + b + 1 - n - c), 1)


def _def_dixon(k, p):
    a, b, c = p
    return HypSpec((a, b + k, c + k), (a - b + 1, a - c + 1), 1)


def _def_watson_lavoie(k, p):
    a, b, c = p
    return HypSpec((a, b, c), (_half(a + b + 1), 2 * c + k), 1)


def _def_watson_shift(k, p):
    a, b, c = p
    return HypSpec((a + k, b, c), (_half(a + b + 1), 2 * c), 1)


def _def_bailey(k, p):
    a, b, c = p
    return HypSpec((a, b, c + 1), (1 + 2 * c - b + k, c), 1)


# ---------------------------------------------------------------------------
# critical values for the pole pre-scan: (zero-critical, gamma-pole-critical)


def _crit_gauss2nd(p):
    a, b, j = p
    if j == 0:
        return [], [(a + b + 1) / 2]
    return [a - b], [(a + b) / 2 + 1]


def _crit_diag(p):
    (a,) = p
    return [a], [(a + 1) / 2, a / 2]


def _crit_srivastava(p):
    n, a = p
    return [a - 0.5 + i for i in range((n + 1) // 2)], []


def _crit_kummer(p):
    a, b = p
    return [], [a + 1 - b]


def _crit_kummer_theorem(p):
    a, b = p
    return [], [a - b + 1, a / 2 + 1]


def _crit_miller(p):
    a, b, c, d = p
    return [c], [d + 1, d - a - b]


def _crit_pfaff(p):
    n, a, b, c = p
    return [c + i for i in range(n)] + [c - a - b + i for i in range(n)], []


def _crit_dixon(p):
    a, b, c = p
    return [b, c], [1 + a - b, 1 + a - c, (a + 1) / 2 - c, a / 2 - b - c, (a + 1) / 2 - b - c, a / 2 - c]


def _crit_dixon_theorem(p):
    a, b, c = p
    return [], [a / 2 + 1, a - b + 1, a - c + 1, a / 2 - b - c + 1]


def _crit_watson(p):
    a, b, c = p
    return [], [c + 0.5, (a + b + 1) / 2, (1 - a - b) / 2 + c]


def _crit_bailey(p):
    a, b, c = p
    return [c], [2 * c - b + 1, 2 * c - a - 2 * b]


@dataclass(frozen=True)
class Family:
    id: FamilyId
    param_names: tuple
    int_params: frozenset
    base_k: int
    direction: int  # -1: walk k down to base_k; +1: walk k up to base_k
    step: Callable
    base: Callable
    definition: Callable
    critical: Callable
    classical: Optional[Callable] = None  # k = 0 value where the recursion collapses
    classical_critical: Optional[Callable] = None
    exact_capable: bool = False
    title: str = ""

    @property
    def name(self) -> str:
        return self.id.value

    def admissible(self, k: int) -> bool:
        if self.direction > 0:
            return k <= self.base_k
        if self.classical is not None and k == 0:
            return True
        return k >= self.base_k


FAMILIES: dict[FamilyId, Family] = {
    f.id: f
    for f in [
        Family(FamilyId.GAUSS2ND, ("a", "b", "j"), frozenset({"j"}), 0, -1,
               _step_gauss2nd, _base_gauss2nd, _def_gauss2nd, _crit_gauss2nd,
               title="2F1(a, b+k; (a+b+j+1)/2 | 1/2), j = 0, 1"),
        Family(FamilyId.GAUSS2ND_DIAG, ("a",), frozenset(), 0, -1,
               _step_diag, _base_diag, _def_diag, _crit_diag,
               title="2F1(a, a+k; a+1 | 1/2)"),
        Family(FamilyId.SRIVASTAVA, ("n", "a"), frozenset({"n"}), 0, +1,
               _step_srivastava, _base_srivastava, _def_srivastava, _crit_srivastava,
               exact_capable=True, title="2F1(-n, a; 2a-1+k | 2), k <= 0"),
        Family(FamilyId.KUMMER, ("a", "b"), frozenset(), 1, -1,
               _step_kummer, _base_kummer, _def_kummer, _crit_kummer,
               classical=lambda p: kummer_theorem(*p), classical_critical=_crit_kummer_theorem,
               title="2F1(a+k, b; a-b+1 | -1)"),
        Family(FamilyId.MILLER, ("a", "b", "c", "d"), frozenset(), 0, -1,
               _step_miller, _base_miller, _def_miller, _crit_miller,
               title="3F2(a, b, c+k+1; d+1, c | 1)"),
        Family(FamilyId.PFAFF, ("n", "a", "b", "c"), frozenset({"n"}), 0, -1,
               _step_pfaff, _base_pfaff, _def_pfaff, _crit_pfaff,
               exact_capable=True, title="3F2(-n, a, b; c+k, a+b+1-n-c | 1)"),
        Family(FamilyId.DIXON, ("a", "b", "c"), frozenset(), 1, -1,
               _step_dixon, _base_dixon, _def_dixon, _crit_dixon,
               classical=lambda p: dixon_theorem(*p), classical_critical=_crit_dixon_theorem,
               title="3F2(a, b+k, c+k; a-b+1, a-c+1 | 1)"),
        Family(FamilyId.WATSON_LAVOIE, ("a", "b", "c"), frozenset(), 0, -1,
               _step_watson_lavoie, _base_watson, _def_watson_lavoie, _crit_watson,
               title="3F2(a, b, c; (a+b+1)/2, 2c+k | 1)"),
        Family(FamilyId.WATSON_SHIFT, ("a", "b", "c"), frozenset(), 0, -1,
               _step_watson_shift, _base_watson, _def_watson_shift, _crit_watson,
               title="3F2(a+k, b, c; (a+b+1)/2, 2c | 1)"),
        Family(FamilyId.BAILEY, ("a", "b", "c"), frozenset(), 0, -1,
               _step_bailey, _base_bailey, _def_bailey, _crit_bailey,
               title="3F2(a, b, c+1; 1+2c-b+k, c | 1)"),
    ]
}


def get_family(family) -> Family:
    if isinstance(family, Family):
        return family
    try:
        return FAMILIES[FamilyId(family)]
    except ValueError:
        raise KeyError(f"unknown family {family!r}") from None


def _normalize(fam: Family, params) -> tuple:
    params = tuple(params)
    if len(params) != len(fam.param_names):
        raise DomainError(f"{fam.name} takes parameters {fam.param_names}, got {len(params)} values")
    exact = fam.exact_capable and all(isinstance(x, Rational) for x in params)
    out = []
    for name, x in zip(fam.param_names, params):
        if name in fam.int_params:
            if x != int(x):
                raise DomainError(f"{fam.name}: parameter {name} must be an integer")
            out.append(int(x))
        elif exact:
            out.append(Fraction(x))
        else:
            out.append(float(x))
    if fam.id is FamilyId.GAUSS2ND and out[2] not in (0, 1):
        raise DomainError("gauss2nd needs j in {0, 1}")
    if fam.id in (FamilyId.SRIVASTAVA, FamilyId.PFAFF) and out[0] < 0:
        raise DomainError(f"{fam.name} needs n >= 0")
    return tuple(out)


def _check_k(fam: Family, k: int):
    if not fam.admissible(k):
        rng = f"k <= {fam.base_k}" if fam.direction > 0 else f"k >= {fam.base_k}"
        raise DomainError(f"{fam.name}: k={k} outside the admissible range ({rng})")


def base_value(family, params):
    """Closed-form value at the family's base index."""
    fam = get_family(family)
    return fam.base(_normalize(fam, params))


def _expand(point: FamilyPoint):
    """Children of a non-base point as (coef, child_point), with pole checks."""
    fam = FAMILIES[point.family]
    terms, dens = fam.step(point.k, point.params)
    for label, den in dens:
        if _is_zero(den):
            raise CoefficientPole(f"coefficient denominator {label} vanishes", point=point)
    out = []
    for coef, dk, delta in terms:
        value = coef() if callable(coef) else coef
        if dk is None:
            out.append((value, None))
        elif value != 0:
            out.append((value, point.child(dk, delta)))
    return out


def recursion_step(family, k: int, params) -> list:
    """One application of the family's contiguous relation at (k, params).

    Returns ``[(coefficient, child_point), ...]``. Children whose coefficient
    is exactly zero are omitted. A child of ``None`` marks a constant term:
    the finite limit of coefficient times a child sitting on a removable
    singularity (Bailey at c = 1).
    """
    fam = get_family(family)
    params = _normalize(fam, params)
    at_base = k == fam.base_k
    if at_base or not fam.admissible(k) or (fam.classical is not None and k == 0):
        raise DomainError(f"{fam.name}: no recursion step at k={k}")
    root = FamilyPoint(fam.id, k, params, (0,) * len(params))
    return _expand(root)


def _resolve(point: FamilyPoint, memo: MemoTable):
    hit = memo.get(point)
    if hit is not None:
        return hit
    fam = FAMILIES[point.family]
    if point.k == fam.base_k:
        try:
            value = fam.base(point.params)
        except HyprecError as exc:
            exc.point = point
            raise
    else:
        value = 0
        for coef, child in _expand(point):
            value = value + (coef if child is None else coef * _resolve(child, memo))
    return memo.insert(point, value)


def recurse(family, k: int, params, memo: Optional[MemoTable] = None):
    """G_k(params) from the base case by repeated recursion steps.

    For Kummer and Dixon the recursion collapses at k = 0; that index is
    answered by the classical summation theorem instead.
    """
    fam = get_family(family)
    params = _normalize(fam, params)
    _check_k(fam, k)
    if fam.classical is not None and k == 0:
        return fam.classical(params)
    memo = memo if memo is not None else MemoTable()
    root = FamilyPoint(fam.id, k, params, (0,) * len(params))
    return _resolve(root, memo)


def definition(family, k: int, params) -> HypSpec:
    fam = get_family(family)
    params = _normalize(fam, params)
    _check_k(fam, k)
    return fam.definition(k, params)


def direct_value(family, k: int, params, policy: Optional[SummationPolicy] = None) -> EvalResult:
    """Sum the defining series of G_k(params) directly (the oracle)."""
    spec = definition(family, k, params)
    return hyp_value(spec, policy)


def direct_value_exact(family, k: int, params) -> Fraction:
    """Exact rational value of a terminating definition (Pfaff, Srivastava)."""
    fam = get_family(family)
    if not fam.exact_capable:
        raise DomainError(f"{fam.name} has no exact rational mode")
    return evaluate_terminating_exact(definition(fam, k, params))


def walk(family, k: int, params) -> Iterator[FamilyPoint]:
    """Every lattice point the recursion for (k, params) visits, without values."""
    fam = get_family(family)
    params = _normalize(fam, params)
    _check_k(fam, k)
    root = FamilyPoint(fam.id, k, params, (0,) * len(params))
    if fam.classical is not None and k == 0:
        yield root
        return
    seen = {root}
    stack = [root]
    while stack:
        pt = stack.pop()
        yield pt
        if pt.k == fam.base_k:
            continue
        terms, dens = fam.step(pt.k, pt.params)
        live = all(not _is_zero(d) for _, d in dens)
        for coef, dk, delta in terms:
            if dk is None or (live and callable(coef) and coef() == 0):
                continue
            ch = pt.child(dk, delta)
            if ch not in seen:
                seen.add(ch)
                stack.append(ch)


def _near_pole_margin(x, margin: float) -> bool:
    r = round(float(x))
    return r <= 0 and abs(float(x) - r) < margin


def pole_scan(family, k: int, params, margin: float) -> Optional[str]:
    """Reason string if any denominator or gamma argument of the recursion tree,
    or any lower parameter of the definition, is within ``margin`` of a
    singularity; None if the whole tree is clean."""
    fam = get_family(family)
    params = _normalize(fam, params)
    _check_k(fam, k)
    try:
        spec = fam.definition(k, params)
    except DomainError as exc:
        return f"definition: {exc}"
    n_term = spec.termination_index
    for lo in spec.lower:
        reach = range(n_term) if n_term is not None else [0]
        for i in reach:
            if abs(float(lo) + i) < margin:
                return f"definition lower parameter {float(lo):.6g} near a pole"
        if n_term is None and _near_pole_margin(lo, margin):
            return f"definition lower parameter {float(lo):.6g} near a pole"
    for pt in walk(fam, k, params):
        p = pt.params
        if fam.classical is not None and pt.k == 0:
            zeros, poles = fam.classical_critical(p)
        elif pt.k == fam.base_k:
            zeros, poles = fam.critical(p)
        else:
            terms, dens = fam.step(pt.k, p)
            zeros, poles = [d for _, d in dens], []
        for z in zeros:
            if abs(float(z)) < margin:
                return f"CoefficientPole near k={pt.k}, shift={pt.shift}"
        for g in poles:
            if _near_pole_margin(g, margin):
                return f"gamma pole near k={pt.k}, shift={pt.shift}"
        if fam.id is FamilyId.GAUSS2ND and p[2] == 1 and pt.k == 0 and abs(p[0] - p[1]) < DEGENERATE_AB:
            return "DegenerateBase: |a-b| too small for j=1"
    return None
