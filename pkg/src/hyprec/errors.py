"""Exception hierarchy shared by all modules."""
from __future__ import annotations


class HyprecError(Exception):
    """Base class. ``kind`` is the machine-readable name used in CLI/JSON output."""

    kind = "HyprecError"

    def __init__(self, message: str = "", point=None):
        super().__init__(message)
        self.point = point

    def to_dict(self) -> dict:
        out = {"error": self.kind, "message": str(self)}
        if self.point is not None:
            out["point"] = self.point.to_dict() if hasattr(self.point, "to_dict") else repr(self.point)
        return out


class DomainError(HyprecError, ValueError):
    kind = "DomainError"


class PoleError(DomainError):
    kind = "PoleError"


class GammaOverflow(DomainError, OverflowError):
    kind = "GammaOverflow"


class NoConvergence(HyprecError, ArithmeticError):
    kind = "NoConvergence"

    def __init__(self, message: str = "", partial=None, point=None):
        super().__init__(message, point)
        self.partial = partial


class CoefficientPole(DomainError):
    kind = "CoefficientPole"


class DegenerateBase(DomainError):
    kind = "DegenerateBase"
