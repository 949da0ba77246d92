"""Contiguous relations as data, with numerical and exact residuals.

A relation is a list of terms ``coef(params, z) * pFq(shifted params | z)``
split into a left and a right side. Shifts are integer offsets of the upper
and lower parameters. ``relation_residual`` returns LHS - RHS.

2F1 relations take (alpha, beta, gamma) and an argument z; 3F2 relations take
(alpha, beta, gamma, delta, epsilon) and are evaluated at unit argument.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Callable, Optional

from .errors import DomainError
from .series import HypSpec, evaluate_terminating_exact, hyp_value


@dataclass(frozen=True)
class Term:
    coef: Callable  # (params, z) -> scalar
    upper: tuple  # integer shifts of the upper parameters
    lower: tuple  # integer shifts of the lower parameters


@dataclass(frozen=True)
class Relation:
    id: str
    kind: str  # "2F1" or "3F2"
    statement: str
    reference: str
    lhs: tuple
    rhs: tuple
    parent: Optional[str] = None  # set for intermediate forms

    @property
    def arity(self) -> int:
        return 3 if self.kind == "2F1" else 5

    def specs(self, params, z=None) -> list:
        return [_spec(self, t, params, z) for t in self.lhs + self.rhs]

    def min_excess(self, params) -> float:
        """Smallest s = sum(lower) - sum(upper) over the relation's series."""
        return min(float(s.excess) for s in self.specs(params, 1))

    def to_dict(self) -> dict:
        out = {"id": self.id, "kind": self.kind, "statement": self.statement, "reference": self.reference}
        if self.parent:
            out["parent"] = self.parent
        return out


def _spec(rel: Relation, term: Term, params, z) -> HypSpec:
    if rel.kind == "2F1":
        a, b, c = params
        upper = (a + term.upper[0], b + term.upper[1])
        lower = (c + term.lower[0],)
        return HypSpec(upper, lower, z)
    a, b, c, d, e = params
    upper = tuple(x + s for x, s in zip((a, b, c), term.upper))
    lower = tuple(x + s for x, s in zip((d, e), term.lower))
    return HypSpec(upper, lower, 1)


def T(coef, upper, lower) -> Term:
    return Term(coef, tuple(upper), tuple(lower))


def _one(p, z):
    return 1


_2F1 = [
    Relation(
        "lebedev-9.2.13", "2F1",
        "F(a,b+1;c) = F(a,b;c) + (a z/c) F(a+1,b+1;c+1)",
        "Lebedev, Special Functions and Their Applications, (9.2.13)",
        lhs=(T(_one, (0, 1), (0,)),),
        rhs=(T(_one, (0, 0), (0,)), T(lambda p, z: p[0] * z / p[2], (1, 1), (1,))),
    ),
    Relation(
        "lebedev-combined", "2F1",
        "c F(a,b;c) = (c-a+1)(c-b) z/(c+1) F(a,b+1;c+2) + (c-(c-b)z) F(a,b+1;c+1)",
        "eliminates F(a+1,b+1;c+2) between lebedev-9.2.7 and lebedev-9.2.14",
        lhs=(T(lambda p, z: p[2], (0, 0), (0,)),),
        rhs=(
            T(lambda p, z: (p[2] - p[0] + 1) * (p[2] - p[1]) * z / (p[2] + 1), (0, 1), (2,)),
            T(lambda p, z: p[2] - (p[2] - p[1]) * z, (0, 1), (1,)),
        ),
    ),
    Relation(
        "lebedev-9.2.7", "2F1",
        "c(c+1) F(a,b;c) = c(c-a+1) F(a,b+1;c+2) + a(c-(c-b)z) F(a+1,b+1;c+2)",
        "Lebedev, Special Functions and Their Applications, (9.2.7)",
        lhs=(T(lambda p, z: p[2] * (p[2] + 1), (0, 0), (0,)),),
        rhs=(
            T(lambda p, z: p[2] * (p[2] - p[0] + 1), (0, 1), (2,)),
            T(lambda p, z: p[0] * (p[2] - (p[2] - p[1]) * z), (1, 1), (2,)),
        ),
        parent="lebedev-combined",
    ),
    Relation(
        "lebedev-9.2.14", "2F1",
        "F(a,b+1;c+1) = F(a,b;c) + a(c-b) z/(c(c+1)) F(a+1,b+1;c+2)",
        "Lebedev, Special Functions and Their Applications, (9.2.14)",
        lhs=(T(_one, (0, 1), (1,)),),
        rhs=(
            T(_one, (0, 0), (0,)),
            T(lambda p, z: p[0] * (p[2] - p[1]) * z / (p[2] * (p[2] + 1)), (1, 1), (2,)),
        ),
        parent="lebedev-combined",
    ),
    Relation(
        "kummer-derived", "2F1",
        "z(1-z)(a+1)b/c F(a+2,b+1;c+1) = (c-a-1) F(a,b;c) + (a+1-c+bz) F(a+1,b;c)",
        "DLMF 15.5.20 combined with the derivative formula DLMF 15.5.1",
        lhs=(T(lambda p, z: z * (1 - z) * (p[0] + 1) * p[1] / p[2], (2, 1), (1,)),),
        rhs=(
            T(lambda p, z: p[2] - p[0] - 1, (0, 0), (0,)),
            T(lambda p, z: p[0] + 1 - p[2] + p[1] * z, (1, 0), (0,)),
        ),
    ),
]


def _w1(p, z):
    a, b, c, d, e = p
    return (b + 1) * (d - a) * (c + 1) / (d * (d + 1) * (e + 1))


_3F2 = [
    Relation(
        "andrews-3.7.9", "3F2",
        "F(a+1,b,c;d,e) = F(a,b,c;d,e) + bc/(de) F(a+1,b+1,c+1;d+1,e+1)",
        "Andrews, Askey & Roy, Special Functions, (3.7.9)",
        lhs=(T(_one, (1, 0, 0), (0, 0)),),
        rhs=(
            T(_one, (0, 0, 0), (0, 0)),
            T(lambda p, z: p[1] * p[2] / (p[3] * p[4]), (1, 1, 1), (1, 1)),
        ),
    ),
    Relation(
        "andrews-3.7.9-c", "3F2",
        "F(a,b,c+1;d,e) = F(a,b,c;d,e) + ab/(de) F(a+1,b+1,c+1;d+1,e+1)",
        "andrews-3.7.9 with the roles of a and c exchanged",
        lhs=(T(_one, (0, 0, 1), (0, 0)),),
        rhs=(
            T(_one, (0, 0, 0), (0, 0)),
            T(lambda p, z: p[0] * p[1] / (p[3] * p[4]), (1, 1, 1), (1, 1)),
        ),
        parent="andrews-3.7.9",
    ),
    Relation(
        "dixon-combined", "3F2",
        "de F(a,b,c;d,e) - (a+1)(d+e-a-b-c-2) F(a+2,b+1,c+1;d+1,e+1)"
        " = [(d-a-1)(e-a-1) - bc] F(a+1,b+1,c+1;d+1,e+1)",
        "eliminates F(a+1,b,c;d,e) between dixon-step and andrews-3.7.9",
        lhs=(
            T(lambda p, z: p[3] * p[4], (0, 0, 0), (0, 0)),
            T(lambda p, z: -(p[0] + 1) * (p[3] + p[4] - p[0] - p[1] - p[2] - 2), (2, 1, 1), (1, 1)),
        ),
        rhs=(
            T(lambda p, z: (p[3] - p[0] - 1) * (p[4] - p[0] - 1) - p[1] * p[2], (1, 1, 1), (1, 1)),
        ),
    ),
    Relation(
        "dixon-step", "3F2",
        "de F(a+1,b,c;d,e) = (a+1)(d+e-a-b-c-2) F(a+2,b+1,c+1;d+1,e+1)"
        " + (d-a-1)(e-a-1) F(a+1,b+1,c+1;d+1,e+1)",
        "three-term relation at unit argument raising a by one",
        lhs=(T(lambda p, z: p[3] * p[4], (1, 0, 0), (0, 0)),),
        rhs=(
            T(lambda p, z: (p[0] + 1) * (p[3] + p[4] - p[0] - p[1] - p[2] - 2), (2, 1, 1), (1, 1)),
            T(lambda p, z: (p[3] - p[0] - 1) * (p[4] - p[0] - 1), (1, 1, 1), (1, 1)),
        ),
        parent="dixon-combined",
    ),
    Relation(
        "watson-combined", "3F2",
        "F(a,b,c;d,e+1) = F(a,b,c;d,e) - abc/(de(e+1)) F(a+1,b+1,c+1;d+1,e+2)",
        "andrews-3.7.9-c at e+1 subtracted from the relation raising c and e together",
        lhs=(T(_one, (0, 0, 0), (0, 1)),),
        rhs=(
            T(_one, (0, 0, 0), (0, 0)),
            T(lambda p, z: -p[0] * p[1] * p[2] / (p[3] * p[4] * (p[4] + 1)), (1, 1, 1), (1, 2)),
        ),
    ),
    Relation(
        "raise-c-and-e", "3F2",
        "F(a,b,c+1;d,e+1) = F(a,b,c;d,e) + ab(e-c)/(de(e+1)) F(a+1,b+1,c+1;d+1,e+2)",
        "Andrews, Askey & Roy, Special Functions, section 3.7",
        lhs=(T(_one, (0, 0, 1), (0, 1)),),
        rhs=(
            T(_one, (0, 0, 0), (0, 0)),
            T(lambda p, z: p[0] * p[1] * (p[4] - p[2]) / (p[3] * p[4] * (p[4] + 1)), (1, 1, 1), (1, 2)),
        ),
        parent="watson-combined",
    ),
    Relation(
        "watson-shifted", "3F2",
        "F(a,b+1,c;d,e) = F(a,b,c;d,e) + ac/(de) [ (b+1)(d-a)(c+1)/(d(d+1)(e+1))"
        " F(a+1,b+2,c+2;d+2,e+2) + F(a,b+1,c+1;d,e+1) ]",
        "andrews-3.7.9 (b raised) with its last term expanded by watson-step",
        lhs=(T(_one, (0, 1, 0), (0, 0)),),
        rhs=(
            T(_one, (0, 0, 0), (0, 0)),
            T(lambda p, z: p[0] * p[2] / (p[3] * p[4]) * _w1(p, z), (1, 2, 2), (2, 2)),
            T(lambda p, z: p[0] * p[2] / (p[3] * p[4]), (0, 1, 1), (0, 1)),
        ),
    ),
    Relation(
        "watson-step", "3F2",
        "F(a+1,b+1,c+1;d+1,e+1) = (b+1)(d-a)(c+1)/(d(d+1)(e+1)) F(a+1,b+2,c+2;d+2,e+2)"
        " + F(a,b+1,c+1;d,e+1)",
        "three-term relation at unit argument lowering a and d together",
        lhs=(T(_one, (1, 1, 1), (1, 1)),),
        rhs=(T(_w1, (1, 2, 2), (2, 2)), T(_one, (0, 1, 1), (0, 1))),
        parent="watson-shifted",
    ),
    Relation(
        "andrews-3.7.14", "3F2",
        "e F(a,b,c;d,e) = (e-a) F(a,b+1,c+1;d+1,e+1) + a(d-b)(d-c)/(d(d+1)) F(a+1,b+1,c+1;d+2,e+1)",
        "Andrews, Askey & Roy, Special Functions, (3.7.14)",
        lhs=(T(lambda p, z: p[4], (0, 0, 0), (0, 0)),),
        rhs=(
            T(lambda p, z: p[4] - p[0], (0, 1, 1), (1, 1)),
            T(lambda p, z: p[0] * (p[3] - p[1]) * (p[3] - p[2]) / (p[3] * (p[3] + 1)), (1, 1, 1), (2, 1)),
        ),
    ),
]

RELATIONS: dict[str, Relation] = {r.id: r for r in _2F1 + _3F2}

# The eight relations the recursions are built from; the others are the
# intermediate steps that combine into them.
PRIMARY_IDS = (
    "lebedev-9.2.13",
    "lebedev-combined",
    "kummer-derived",
    "andrews-3.7.9",
    "dixon-combined",
    "watson-combined",
    "watson-shifted",
    "andrews-3.7.14",
)


def get_relation(rid: str) -> Relation:
    try:
        return RELATIONS[rid]
    except KeyError:
        raise KeyError(f"unknown relation {rid!r}") from None


def list_relations(include_intermediate: bool = False) -> list:
    """Catalog entries as (id, statement, reference) in a stable order."""
    ids = list(PRIMARY_IDS)
    if include_intermediate:
        ids += [r for r in RELATIONS if r not in PRIMARY_IDS]
    return [(RELATIONS[i].id, RELATIONS[i].statement, RELATIONS[i].reference) for i in ids]


def _check_args(rel: Relation, params, z):
    if len(params) != rel.arity:
        raise DomainError(f"{rel.id} takes {rel.arity} parameters, got {len(params)}")
    if rel.kind == "2F1" and z is None:
        raise DomainError(f"{rel.id} needs an argument z")


def relation_sides(rid: str, params, z=None, exact: Optional[bool] = None):
    """(LHS, RHS) of a relation. ``exact`` defaults to True when every input is
    rational; the exact path needs every series to terminate."""
    rel = get_relation(rid)
    params = tuple(params)
    _check_args(rel, params, z)
    zz = 1 if rel.kind == "3F2" else z
    if exact is None:
        exact = all(isinstance(x, Rational) for x in params + (zz,))
    if exact:
        params = tuple(Fraction(x) for x in params)
        zz = Fraction(zz)
    else:
        params = tuple(float(x) for x in params)
        zz = float(zz)

    def side(terms):
        total = Fraction(0) if exact else 0.0
        for t in terms:
            spec = _spec(rel, t, params, zz)
            value = evaluate_terminating_exact(spec) if exact else hyp_value(spec).value
            total += t.coef(params, zz) * value
        return total

    return side(rel.lhs), side(rel.rhs)


def relation_residual(rid: str, params, z=None, exact: Optional[bool] = None):
    lhs, rhs = relation_sides(rid, params, z, exact)
    return lhs - rhs
