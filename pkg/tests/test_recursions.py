import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from hyprec import closedforms
from hyprec.errors import CoefficientPole, DegenerateBase, DomainError
from hyprec.recursions import (
    FAMILIES, FamilyId, FamilyPoint, MemoTable, base_value, definition, direct_value, direct_value_exact,
    dixon_theorem, get_family, kummer_theorem, pole_scan, recurse, recursion_step, walk, watson_sum,
)


def test_family_names_are_kebab_case():
    assert [f.value for f in FamilyId] == [
        "gauss2nd", "gauss2nd-diag", "srivastava", "kummer", "miller",
        "pfaff", "dixon", "watson-lavoie", "watson-shift", "bailey",
    ]
    with pytest.raises(KeyError):
        get_family("nosuch")


def test_memo_table_is_insert_once():
    memo = MemoTable()
    pt = FamilyPoint(FamilyId.GAUSS2ND_DIAG, 1, (0.3,), (0,))
    assert memo.insert(pt, 1.0) == 1.0
    assert memo.insert(pt, 2.0) == 1.0
    assert memo.get(pt) == 1.0 and len(memo) == 1 and pt in memo


def test_family_point_child_and_params():
    pt = FamilyPoint(FamilyId.KUMMER, 3, (0.5, 0.25), (0, 0))
    ch = pt.child(-1, (2, 1))
    assert ch.k == 2 and ch.shift == (2, 1) and ch.params == (2.5, 1.25)
    assert ch.to_dict() == {"family": "kummer", "k": 2, "base_params": [0.5, 0.25], "shift": [2, 1]}


# base cases


def test_srivastava_base_examples():
    assert base_value("srivastava", (0, 2.3)) == 1
    assert base_value("srivastava", (1, 2.0)) == pytest.approx(-1 / 3, rel=1e-15)
    assert base_value("srivastava", (1, Fraction(2))) == Fraction(-1, 3)


def test_watson_miller_bailey_bases_reduce_to_one():
    assert base_value("watson-lavoie", (0.0, 0.8, 1.3)) == pytest.approx(1.0, rel=1e-13)
    assert base_value("miller", (1.3, 0.0, 0.7, 2.1)) == pytest.approx(1.0, rel=1e-13)
    assert base_value("bailey", (0.0, 0.4, 1.7)) == pytest.approx(1.0, rel=1e-13)


def test_kummer_bases():
    # G_1(1, 1/2) = 2F1(2, 1/2; 3/2 | -1) = (π + 2)/8; G_0 is Kummer's theorem, π/4
    assert base_value("kummer", (1, 0.5)) == pytest.approx((math.pi + 2) / 8, rel=1e-14)
    assert kummer_theorem(1, 0.5) == pytest.approx(math.pi / 4, rel=1e-14)
    assert recurse("kummer", 0, (1, 0.5)) == pytest.approx(math.pi / 4, rel=1e-14)


def test_classical_sums_against_mpmath():
    assert watson_sum(0.5, 0.7, 1.5) == pytest.approx(1.326621346050305, rel=1e-13)
    a, b, c = -1.5, -5.0, -5.5
    assert dixon_theorem(a, b, c) == pytest.approx(float(mpmath.hyp3f2(a, b, c, a - b + 1, a - c + 1, 1)), rel=1e-12)


def test_gauss2nd_j1_degenerate():
    with pytest.raises(DegenerateBase):
        base_value("gauss2nd", (0.7, 0.72, 1))


def test_parameter_validation():
    with pytest.raises(DomainError):
        base_value("gauss2nd", (0.5, 0.7, 2))
    with pytest.raises(DomainError):
        base_value("srivastava", (1.5, 2.0))
    with pytest.raises(DomainError):
        base_value("miller", (1.0, 2.0))
    with pytest.raises(DomainError):
        recurse("srivastava", 2, (1, 2.0))
    with pytest.raises(DomainError):
        recurse("gauss2nd-diag", -1, (0.5,))


# single steps


def test_step_diag():
    (c1, p1), (c2, p2) = recursion_step("gauss2nd-diag", 1, (1,))
    assert (c1, c2) == (1, 0.25)
    assert p1.k == 0 and p1.params == (1.0,) and p2.params == (2.0,)


def test_step_kummer():
    coefs = [c for c, _ in recursion_step("kummer", 2, (1, 0.5))]
    assert coefs == [pytest.approx(1.5), pytest.approx(-2.0)]


def test_step_srivastava():
    coefs = [c for c, _ in recursion_step("srivastava", -1, (2, 3))]
    assert coefs == [pytest.approx(-3.0), pytest.approx(3.0)]


def test_step_refused_at_base():
    with pytest.raises(DomainError):
        recursion_step("miller", 0, (0.4, 0.6, 1.1, 3.2))
    with pytest.raises(DomainError):
        recursion_step("dixon", 0, (-1.5, -5, -5.5))


def test_coefficient_pole_is_reported():
    with pytest.raises(CoefficientPole) as info:
        recurse("kummer", 3, (1.0, 2.0))
    assert info.value.point is not None


# full recursion


def test_diag_iterates():
    assert recurse("gauss2nd-diag", 1, (0.3,)) == pytest.approx(2 ** 0.3, rel=1e-14)
    assert recurse("gauss2nd-diag", 2, (1,)) == pytest.approx(3.0, rel=1e-14)
    assert recurse("gauss2nd-diag", 3, (0.7,)) == pytest.approx(3.3835001782856695, rel=1e-13)


def test_recurse_frozen_values():
    assert recurse("gauss2nd", 2, (0.3, 1.2, 1)) == pytest.approx(1.566786944440977, rel=1e-12)
    assert recurse("kummer", 2, (0.9, 0.2)) == pytest.approx(0.8105949491454378, rel=1e-12)
    assert recurse("bailey", 2, (0.5, 0.3, 2.0)) == pytest.approx(1.041862864915442, rel=1e-12)
    assert recurse("dixon", 2, (-1.5, -5.0, -5.5)) == pytest.approx(0.32666083916083916, rel=1e-12)


def test_bailey_example_passes_through_c_zero():
    # the k=2 tree reaches c = 0, a removable singularity handled by its limit
    assert recurse("bailey", 2, (0.5, 0.3, 2.0)) == pytest.approx(closedforms.bailey_closed(0.5, 0.3, 2.0, 2), rel=1e-10)


def test_miller_example_against_closed_form():
    # the defining series diverges here (d-a-b-k < 0), so the closed form is the oracle
    v = recurse("miller", 3, (0.4, 0.6, 1.1, 3.2))
    assert v == pytest.approx(closedforms.miller_closed(0.4, 0.6, 1.1, 3.2, 3), rel=1e-9)


def test_miller_k2_against_series():
    p = (0.4, 0.6, 1.1, 4.5)
    assert recurse("miller", 2, p) == pytest.approx(direct_value("miller", 2, p).value, rel=1e-9)


def test_direct_value_examples():
    assert direct_value("srivastava", 0, (3, 1.7)).value == pytest.approx(base_value("srivastava", (3, 1.7)), rel=1e-12)
    assert direct_value("kummer", 2, (0.9, 0.2)).value == pytest.approx(recurse("kummer", 2, (0.9, 0.2)), rel=1e-9)
    assert direct_value("watson-lavoie", 0, (0.5, 0.7, 1.5)).value == pytest.approx(watson_sum(0.5, 0.7, 1.5), abs=1e-9)


def test_exact_pfaff_and_srivastava():
    p = (3, Fraction(1, 3), Fraction(2, 5), Fraction(7, 4))
    for k in range(4):
        assert recurse("pfaff", k, p) == direct_value_exact("pfaff", k, p)
    q = (4, Fraction(5, 3))
    for k in range(0, -4, -1):
        v = recurse("srivastava", k, q)
        assert isinstance(v, Fraction) and v == direct_value_exact("srivastava", k, q)
    with pytest.raises(DomainError):
        direct_value_exact("kummer", 1, (0.5, 0.2))


def test_definitions():
    spec = definition("bailey", 2, (0.5, 0.3, 2.0))
    assert spec.upper == (0.5, 0.3, 3.0) and spec.lower == (6.7, 2.0) and spec.z == 1
    assert definition("srivastava", -2, (3, 2.0)).z == 2


def test_memo_sizes():
    memo = MemoTable()
    recurse("kummer", 6, (0.5, 0.2), memo)
    assert len(memo) == 21
    memo = MemoTable()
    recurse("watson-shift", 8, (0.3, 0.4, 12.5), memo)
    assert len(memo) == 165
    assert set(memo.points()) == set(walk("watson-shift", 8, (0.3, 0.4, 12.5)))


def test_memo_is_reused_across_calls():
    memo = MemoTable()
    recurse("miller", 4, (0.3, 0.5, 0.9, 9.0), memo)
    n = len(memo)
    recurse("miller", 3, (0.3, 0.5, 0.9, 9.0), memo)
    assert len(memo) == n


def test_pole_scan():
    assert pole_scan("kummer", 3, (1.0, 2.0), 0.05) is not None
    assert pole_scan("gauss2nd-diag", 4, (0.7,), 0.05) is None
    assert pole_scan("miller", 1, (0.4, 0.6, 0.02, 5.0), 0.05) is not None


@settings(max_examples=60, deadline=None)
@given(st.floats(min_value=0.1, max_value=3), st.integers(min_value=1, max_value=8))
def test_diag_matches_mpmath(a, k):
    want = float(mpmath.hyp2f1(a, a + k, a + 1, 0.5))
    assert recurse("gauss2nd-diag", k, (a,)) == pytest.approx(want, rel=1e-11)


@settings(max_examples=60, deadline=None)
@given(st.floats(min_value=0.1, max_value=3), st.floats(min_value=0.1, max_value=3), st.integers(min_value=0, max_value=8))
def test_kummer_matches_mpmath(a, b, k):
    if abs(a - b + 1 - round(a - b + 1)) < 0.05 and round(a - b + 1) <= k:
        return
    want = float(mpmath.hyp2f1(a + k, b, a - b + 1, -1))
    try:
        got = recurse("kummer", k, (a, b))
    except CoefficientPole:
        return
    assert got == pytest.approx(want, rel=1e-8, abs=1e-8)


@settings(max_examples=40, deadline=None)
@given(
    st.integers(min_value=0, max_value=6),
    st.fractions(min_value=Fraction(1, 10), max_value=3, max_denominator=12),
    st.fractions(min_value=Fraction(1, 10), max_value=3, max_denominator=12),
    st.fractions(min_value=Fraction(1, 10), max_value=3, max_denominator=12),
    st.integers(min_value=0, max_value=5),
)
def test_pfaff_exact_property(n, a, b, c, k):
    p = (n, a, b, c)
    try:
        v = recurse("pfaff", k, p)
        w = direct_value_exact("pfaff", k, p)
    except DomainError:
        return
    assert v == w


def test_every_family_has_a_definition_and_title():
    for fam in FAMILIES.values():
        assert fam.title and fam.param_names
