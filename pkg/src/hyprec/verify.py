"""Randomized cross-checks: recursion vs. series oracle vs. closed form.

A sweep draws parameters per target from a counter-based generator (numpy's
Philox, keyed by seed and target name), rejects draws whose recursion trees
come near a singularity, and runs :func:`check_point` for every k.
"""
from __future__ import annotations

import json
import logging
import math
import time
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Optional

import numpy as np

from . import closedforms, recursions
from .closedforms import CLOSED_FORMS, ClosedFormId, closed_form_for_family
from .errors import HyprecError
from .recursions import FamilyId, get_family
from .series import ConvergenceClass, classify, pfaff_transform_2f1

log = logging.getLogger(__name__)

REPORT_VERSION = 1
GENERATOR = "numpy.random.Philox"
MAX_REDRAWS = 1000

# Oracle comparisons loosen to this absolute tolerance when the series tail
# estimate is above ORACLE_NOISY.
RELAXED_ABS = 5e-8
ORACLE_NOISY = 1e-9

CHOI_TOL_REL = 1e-9

DEFAULT_BOX = (0.1, 3.0)

# Per-target intervals that differ from DEFAULT_BOX. Integer parameters are
# given as (lo, hi) inclusive ranges of integers. The shifted boxes keep every
# 3F2-at-1 oracle at s >= 1.25 for all k <= 8 (see README).
FAMILY_BOXES: dict[str, dict[str, tuple]] = {
    "gauss2nd": {"j": (0, 1)},
    "srivastava": {"n": (1, 8)},
    "miller": {"d": (15.5, 18.0)},
    "pfaff": {"n": (1, 6)},
    "dixon": {"a": (-3.0, -0.1), "b": (-7.0, -4.7), "c": (-7.0, -4.7)},
    "watson-lavoie": {"c": (4.0, 7.0)},
    "watson-shift": {"c": (12.0, 15.0)},
    "bailey": {"a": (-3.0, -0.1), "b": (-3.0, -0.1), "c": (0.6, 3.0)},
}

CHOI_TARGET = ClosedFormId.CHOI_IDENTITY.value
ALL_TARGETS = tuple(f.value for f in FamilyId) + (CHOI_TARGET,)


@dataclass(frozen=True)
class SamplerConfig:
    seed: int = 42
    draws_per_family: int = 50
    parameter_box: Optional[dict] = None  # name -> (lo, hi), overrides every target's box
    pole_margin: float = 0.05
    k_max: int = 8
    s_min: float = 1.25
    tol_abs: float = 1e-8
    tol_rel: float = 1e-8

    def __post_init__(self):
        if not self.pole_margin > 0:
            raise ValueError("pole_margin must be > 0")
        if self.k_max < 1:
            raise ValueError("k_max must be >= 1")
        if self.draws_per_family < 0:
            raise ValueError("draws_per_family must be >= 0")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        for name, (lo, hi) in (self.parameter_box or {}).items():
            if not lo < hi:
                raise ValueError(f"empty interval for {name}: ({lo}, {hi})")

    def box_for(self, target: str, name: str) -> tuple:
        if self.parameter_box and name in self.parameter_box:
            return tuple(self.parameter_box[name])
        return FAMILY_BOXES.get(target, {}).get(name, DEFAULT_BOX)

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "draws_per_family": self.draws_per_family,
            "parameter_box": {k: list(v) for k, v in sorted((self.parameter_box or {}).items())},
            "pole_margin": self.pole_margin,
            "k_max": self.k_max,
            "s_min": self.s_min,
            "tol_abs": self.tol_abs,
            "tol_rel": self.tol_rel,
        }


@dataclass
class CheckOutcome:
    target: str
    k: int
    params: tuple
    recursion_value: object = None
    oracle_value: object = None
    closedform_value: object = None
    abs_diffs: dict = field(default_factory=dict)
    status: str = "Pass"  # Pass | Fail | Skipped
    reason: Optional[str] = None
    relaxed: bool = False
    tolerance: Optional[float] = None

    @property
    def passed(self) -> bool:
        return self.status == "Pass"

    def key(self) -> tuple:
        return (self.target, self.k, tuple(str(p) for p in self.params))

    def to_dict(self) -> dict:
        return {
            "target": self.target,
            "k": self.k,
            "params": [_enc(p) for p in self.params],
            "recursion_value": _enc(self.recursion_value),
            "oracle_value": _enc(self.oracle_value),
            "closedform_value": _enc(self.closedform_value),
            "abs_diffs": {k: _enc(v) for k, v in sorted(self.abs_diffs.items())},
            "status": self.status,
            "reason": self.reason,
            "relaxed": self.relaxed,
            "tolerance": self.tolerance,
        }


def _enc(x):
    if x is None:
        return None
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else str(x.numerator)
    if isinstance(x, (bool, str)):
        return x
    if isinstance(x, (int, np.integer)):
        return int(x)
    x = float(x)
    if math.isfinite(x):
        return x
    return repr(x)


_REASONS = {
    "CoefficientPole": "coefficient-pole",
    "DegenerateBase": "degenerate-base",
    "PoleError": "pole",
    "GammaOverflow": "gamma-overflow",
    "NoConvergence": "no-convergence",
    "DomainError": "domain",
}


def _reason(exc: HyprecError) -> str:
    return _REASONS.get(exc.kind, "domain")


def _oracle_ok(spec, s_min: float) -> bool:
    cls = classify(spec)
    if spec.p == 2 and spec.q == 1 and float(spec.z) < -0.5 and cls is not ConvergenceClass.TERMINATING:
        # the oracle sums the Pfaff-transformed series instead
        spec = pfaff_transform_2f1(spec)[0]
        cls = classify(spec)
    if cls is ConvergenceClass.TERMINATING:
        return True
    if cls is not ConvergenceClass.ABSOLUTE:
        return False
    if spec.p == spec.q + 1 and abs(float(spec.z)) == 1.0:
        return spec.excess >= s_min
    return True


def _choi_outcome(k, params) -> CheckOutcome:
    out = CheckOutcome(CHOI_TARGET, k, tuple(params))
    try:
        lhs, rhs = closedforms.choi_identity_sides(params[0], params[1], k)
    except HyprecError as exc:
        out.status, out.reason = "Skipped", _reason(exc)
        return out
    diff = abs(lhs - rhs)
    tol = max(CHOI_TOL_REL * max(abs(lhs), abs(rhs)), 1e-300)
    out.recursion_value, out.closedform_value = lhs, rhs
    out.abs_diffs = {"lhs-rhs": diff}
    out.tolerance = tol
    out.status = "Pass" if diff <= tol else "Fail"
    return out


def check_point(target, k: int, params, tol_abs: float = 1e-8, tol_rel: float = 1e-8,
                s_min: float = 1.25) -> CheckOutcome:
    """Evaluate every available face at (target, k, params) and compare pairwise.

    Never raises on evaluation problems; they become ``Skipped`` outcomes.
    Rational parameters for pfaff/srivastava run fully exact and must agree
    exactly.
    """
    name = target.value if hasattr(target, "value") else str(target)
    params = tuple(params)
    if name == CHOI_TARGET:
        return _choi_outcome(k, params)
    out = CheckOutcome(name, k, params)
    try:
        fam = get_family(name)
        spec = recursions.definition(fam, k, params)
    except HyprecError as exc:
        out.status, out.reason = "Skipped", _reason(exc)
        return out
    exact = fam.exact_capable and all(isinstance(p, Rational) for p in params)

    faces = {}
    try:
        faces["recursion"] = recursions.recurse(fam, k, params)
    except HyprecError as exc:
        out.status, out.reason = "Skipped", _reason(exc)
        return out

    oracle_err = 0.0
    if exact:
        faces["oracle"] = recursions.direct_value_exact(fam, k, params)
    elif _oracle_ok(spec, s_min):
        try:
            res = recursions.direct_value(fam, k, params)
            faces["oracle"] = res.value
            oracle_err = float(res.abs_error_estimate)
        except HyprecError as exc:
            log.debug("oracle failed at %s k=%s %s: %s", name, k, params, exc)

    cf = closed_form_for_family(name)
    if cf is not None and k >= cf.k_min:
        try:
            faces["closedform"] = cf.evaluate(k, params)
        except HyprecError as exc:
            log.debug("closed form failed at %s k=%s %s: %s", name, k, params, exc)

    out.recursion_value = faces.get("recursion")
    out.oracle_value = faces.get("oracle")
    out.closedform_value = faces.get("closedform")
    if len(faces) < 2:
        out.status, out.reason = "Skipped", "oracle-precondition"
        return out

    if exact:
        names = sorted(faces)
        ok = True
        for i, a in enumerate(names):
            for b in names[i + 1:]:
                d = abs(Fraction(faces[a]) - Fraction(faces[b]))
                out.abs_diffs[f"{a}-{b}"] = d
                ok = ok and d == 0
        out.tolerance = 0.0
        out.status = "Pass" if ok else "Fail"
        return out

    magnitude = max(abs(float(v)) for v in faces.values())
    tol = max(tol_abs, tol_rel * magnitude)
    relaxed_tol = max(RELAXED_ABS, tol) if oracle_err > ORACLE_NOISY else tol
    out.relaxed = relaxed_tol > tol
    out.tolerance = tol
    ok = True
    names = sorted(faces)
    for i, a in enumerate(names):
        for b in names[i + 1:]:
            d = abs(float(faces[a]) - float(faces[b]))
            out.abs_diffs[f"{a}-{b}"] = d
            limit = relaxed_tol if "oracle" in (a, b) else tol
            if not d <= limit:
                ok = False
    out.status = "Pass" if ok else "Fail"
    return out


# ---------------------------------------------------------------------------
# sampling


def target_names(families) -> list:
    if families is None or families == "all" or list(families) == ["all"]:
        return list(ALL_TARGETS)
    out = []
    for f in families:
        name = f.value if hasattr(f, "value") else str(f)
        if name == "all":
            out.extend(t for t in ALL_TARGETS if t not in out)
            continue
        if name not in ALL_TARGETS:
            raise KeyError(f"unknown family {name!r}")
        if name not in out:
            out.append(name)
    return out


def _param_names(target: str) -> tuple:
    if target == CHOI_TARGET:
        return CLOSED_FORMS[ClosedFormId.CHOI_IDENTITY].param_names
    return get_family(target).param_names


def _int_names(target: str) -> frozenset:
    if target == CHOI_TARGET:
        return frozenset()
    return get_family(target).int_params


def k_values(target: str, k_max: int) -> list:
    if target == CHOI_TARGET:
        return list(range(1, k_max + 1))
    fam = get_family(target)
    if fam.direction > 0:
        return list(range(fam.base_k, -k_max - 1, -1))
    start = 0 if fam.classical is not None else fam.base_k
    return list(range(start, k_max + 1))


def generator_for(seed: int, target: str) -> np.random.Generator:
    ss = np.random.SeedSequence(seed, spawn_key=(zlib.crc32(target.encode()),))
    return np.random.Generator(np.random.Philox(ss))


def _draw(rng, config: SamplerConfig, target: str) -> tuple:
    ints = _int_names(target)
    out = []
    for name in _param_names(target):
        lo, hi = config.box_for(target, name)
        if name in ints:
            out.append(int(rng.integers(int(lo), int(hi), endpoint=True)))
        else:
            out.append(float(rng.uniform(lo, hi)))
    return tuple(out)


def _choi_rejects(params, ks, margin) -> Optional[str]:
    a, b = params
    for k in ks:
        for x in [(a + k + 1) / 2, (a - k + 1) / 2 - b] + [
            v for m in range(k + 1) for v in ((a + k + m) / 2, (a - k + m) / 2 - b + 1)
        ]:
            r = round(x)
            if r <= 0 and abs(x - r) < margin:
                return "gamma argument near a pole"
    return None


def rejection_reason(target: str, params, ks, margin: float) -> Optional[str]:
    if target == CHOI_TARGET:
        return _choi_rejects(params, ks, margin)
    for k in ks:
        try:
            why = recursions.pole_scan(target, k, params, margin)
        except HyprecError as exc:
            return _reason(exc)
        if why:
            return why
    return None


def sample_points(config: SamplerConfig, target: str) -> list:
    """Deterministic accepted draws for one target: list of (params or None)."""
    rng = generator_for(config.seed, target)
    ks = k_values(target, config.k_max)
    out = []
    for _ in range(config.draws_per_family):
        for _attempt in range(MAX_REDRAWS):
            params = _draw(rng, config, target)
            if rejection_reason(target, params, ks, config.pole_margin) is None:
                out.append(params)
                break
        else:
            out.append(None)
    return out


# ---------------------------------------------------------------------------
# reports


@dataclass
class VerificationReport:
    config: SamplerConfig
    targets: list
    outcomes: list
    meta: dict = field(default_factory=dict)

    def counts(self) -> dict:
        per = {}
        for t in self.targets:
            per[t] = {"pass": 0, "fail": 0, "skip": 0, "skip_reasons": {},
                      "worst_abs_diff": 0.0, "worst_rel_diff": 0.0}
        for o in self.outcomes:
            c = per[o.target]
            if o.status == "Pass":
                c["pass"] += 1
            elif o.status == "Fail":
                c["fail"] += 1
            else:
                c["skip"] += 1
                c["skip_reasons"][o.reason] = c["skip_reasons"].get(o.reason, 0) + 1
            diffs = [float(d) for d in o.abs_diffs.values()]
            if diffs:
                worst = max(diffs)
                vals = [abs(float(v)) for v in (o.recursion_value, o.oracle_value, o.closedform_value) if v is not None]
                mag = max(vals) if vals else 0.0
                c["worst_abs_diff"] = max(c["worst_abs_diff"], worst)
                if mag > 0:
                    c["worst_rel_diff"] = max(c["worst_rel_diff"], worst / mag)
        for c in per.values():
            c["skip_reasons"] = dict(sorted(c["skip_reasons"].items()))
            c["attempted"] = c["pass"] + c["fail"] + c["skip"]
        return per

    @property
    def failures(self) -> list:
        return sorted((o for o in self.outcomes if o.status == "Fail"), key=CheckOutcome.key)

    @property
    def n_failures(self) -> int:
        return sum(1 for o in self.outcomes if o.status == "Fail")

    def skip_rate(self, target: Optional[str] = None) -> float:
        sel = [o for o in self.outcomes if target is None or o.target == target]
        if not sel:
            return 0.0
        return sum(1 for o in sel if o.status == "Skipped") / len(sel)

    def body(self) -> dict:
        """The comparable part of the report: everything except ``meta``."""
        per = self.counts()
        totals = {key: sum(c[key] for c in per.values()) for key in ("pass", "fail", "skip", "attempted")}
        return {
            "report_version": REPORT_VERSION,
            "generator": GENERATOR,
            "config": self.config.to_dict(),
            "targets": per,
            "totals": totals,
            "failures": [o.to_dict() for o in self.failures],
        }

    def to_dict(self) -> dict:
        out = self.body()
        out["meta"] = dict(self.meta)
        return out

    def to_json(self, comparable: bool = False) -> str:
        data = self.body() if comparable else self.to_dict()
        return json.dumps(data, sort_keys=True, indent=2)


def _run_draw(target: str, params, ks, config: SamplerConfig) -> list:
    if params is None:
        return [CheckOutcome(target, k, (), status="Skipped", reason="pole-proximity") for k in ks]
    return [check_point(target, k, params, config.tol_abs, config.tol_rel, config.s_min) for k in ks]


def sweep(config: SamplerConfig, families=None, jobs: int = 1) -> VerificationReport:
    """Run the randomized verification; deterministic for a given config.

    ``jobs`` bounds the worker threads; the outcome order (and so the report)
    does not depend on it.
    """
    started = time.time()
    targets = target_names(families)
    tasks = []
    for target in targets:
        ks = k_values(target, config.k_max)
        for params in sample_points(config, target):
            tasks.append((target, params, ks))
    if jobs > 1 and len(tasks) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(lambda t: _run_draw(*t, config), tasks))
    else:
        chunks = [_run_draw(*t, config) for t in tasks]
    outcomes = [o for chunk in chunks for o in chunk]
    meta = {
        "started_at": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime(started)),
        "elapsed_s": round(time.time() - started, 3),
        "jobs": jobs,
    }
    log.info("sweep finished: %d outcomes in %.1fs", len(outcomes), meta["elapsed_s"])
    return VerificationReport(config, targets, outcomes, meta)
