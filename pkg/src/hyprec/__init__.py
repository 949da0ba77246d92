"""Recursive summation formulas for 2F1 and 3F2 hypergeometric series."""
from .errors import (
    CoefficientPole,
    DegenerateBase,
    DomainError,
    GammaOverflow,
    HyprecError,
    NoConvergence,
    PoleError,
)
from .recursions import FamilyId, FamilyPoint, MemoTable, base_value, direct_value, recurse, recursion_step
from .series import EvalResult, HypSpec, SummationPolicy, evaluate_series, hyp_value

__all__ = [
    "CoefficientPole", "DegenerateBase", "DomainError", "GammaOverflow", "HyprecError", "NoConvergence",
    "PoleError", "FamilyId", "FamilyPoint", "MemoTable", "base_value", "direct_value", "recurse",
    "recursion_step", "EvalResult", "HypSpec", "SummationPolicy", "evaluate_series", "hyp_value",
]

__version__ = "0.1.0"
