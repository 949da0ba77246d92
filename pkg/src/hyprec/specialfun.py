"""Scalar kernels: gamma, reciprocal gamma, log-gamma, digamma, Pochhammer.

Real arguments only. Values for ``x > 0`` come from :func:`math.gamma` /
:func:`math.lgamma`; negative arguments go through the reflection formula.
"""
from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational

from .errors import GammaOverflow, PoleError

POLE_TOL = 1e-12

# Γ(x) overflows binary64 just above this.
_GAMMA_MAX = 171.6243769563027

_EULER = 0.57721566490153286061

# B_2 .. B_14
_BERNOULLI = (
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
)

_DIGAMMA_SHIFT = 10.0


def near_pole(x, tol: float = POLE_TOL) -> bool:
    """True when ``x`` is a nonpositive integer (within ``tol`` for floats)."""
    if isinstance(x, Rational):
        return x <= 0 and Fraction(x).denominator == 1
    r = round(x)
    return r <= 0 and abs(x - r) < tol


def sinpi(x: float) -> float:
    """sin(pi*x) with exact argument reduction."""
    r = math.fmod(x, 2.0)
    if r > 1.0:
        r -= 2.0
    elif r < -1.0:
        r += 2.0
    # r in [-1, 1]; fold to [-1/2, 1/2] where sin is well conditioned
    if r > 0.5:
        r = 1.0 - r
    elif r < -0.5:
        r = -1.0 - r
    return math.sin(math.pi * r)


def gamma(x: float) -> float:
    x = float(x)
    if near_pole(x):
        raise PoleError(f"gamma has a pole at {x!r}")
    if x > _GAMMA_MAX:
        raise GammaOverflow(f"gamma({x!r}) overflows binary64")
    if x >= 0.5:
        return math.gamma(x)
    # reflection: Γ(x) Γ(1-x) = π / sin(πx)
    g = math.gamma(1.0 - x) if 1.0 - x <= _GAMMA_MAX else math.inf
    return math.pi / (sinpi(x) * g)


def reciprocal_gamma(x: float) -> float:
    """1/Γ(x); exactly zero at the poles of Γ."""
    x = float(x)
    if near_pole(x):
        return 0.0
    if x > _GAMMA_MAX:
        return math.exp(-math.lgamma(x))
    if x >= 0.5:
        return 1.0 / math.gamma(x)
    one_minus = 1.0 - x
    if one_minus > _GAMMA_MAX:
        lg = math.lgamma(one_minus)
        s = sinpi(x)
        if s == 0.0:
            return 0.0
        return math.copysign(math.exp(lg + math.log(abs(s)) - math.log(math.pi)), s)
    return sinpi(x) * math.gamma(one_minus) / math.pi


def log_gamma_signed(x: float) -> tuple[float, int]:
    """Return ``(log|Γ(x)|, sign Γ(x))``; usable far beyond the overflow point."""
    x = float(x)
    if near_pole(x):
        raise PoleError(f"gamma has a pole at {x!r}")
    if x > 0:
        return math.lgamma(x), 1
    # Γ is negative on (-1, 0), (-3, -2), ...
    sign = -1 if math.floor(x) % 2 else 1
    if x > -0.5:
        return math.lgamma(x), sign
    # log|Γ(x)| = log π - log|sin πx| - log Γ(1-x)
    lg = math.log(math.pi) - math.log(abs(sinpi(x))) - math.lgamma(1.0 - x)
    return lg, sign


def digamma(x: float) -> float:
    """psi(x) by upward recurrence to x >= 10 and the Stirling-type series."""
    x = float(x)
    if near_pole(x):
        raise PoleError(f"digamma has a pole at {x!r}")
    if x == 1.0:
        return -_EULER
    if x < 0.5:
        # psi(1-x) - psi(x) = π cot(πx)
        r = math.fmod(x, 1.0)
        cot = math.cos(math.pi * r) / math.sin(math.pi * r)
        return digamma(1.0 - x) - math.pi * cot
    acc = 0.0
    while x < _DIGAMMA_SHIFT:
        acc -= 1.0 / x
        x += 1.0
    inv2 = 1.0 / (x * x)
    series = 0.0
    power = inv2
    for k, b in enumerate(_BERNOULLI, start=1):
        series += b / (2 * k) * power
        power *= inv2
    return acc + math.log(x) - 0.5 / x - series


def pochhammer(x, m: int):
    """Rising factorial (x)_m. Exact for int/Fraction input."""
    if m < 0:
        raise ValueError("pochhammer needs m >= 0")
    if isinstance(x, Rational):
        out = Fraction(1)
        x = Fraction(x)
    else:
        out = 1.0
    for i in range(m):
        out *= x + i
    return out


def gamma_ratio(num, den) -> float:
    """prod Γ(num) / prod Γ(den), combined in log space.

    A pole in ``den`` makes the ratio zero; a pole in ``num`` raises PoleError.
    """
    logs = 0.0
    sign = 1
    for x in den:
        if near_pole(x):
            return 0.0
    for x in num:
        lg, s = log_gamma_signed(x)
        logs += lg
        sign *= s
    for x in den:
        lg, s = log_gamma_signed(x)
        logs -= lg
        sign *= s
    try:
        return sign * math.exp(logs)
    except OverflowError:
        raise GammaOverflow("gamma ratio overflows binary64") from None
