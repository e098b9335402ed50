import math
from fractions import Fraction

import pytest

from hahnauto import arithmetic as ar
from hahnauto.decide import (
    NO,
    UNDECIDED,
    YES,
    FieldSpec,
    decide_gamma_m,
    decide_ppf,
    decide_with_value_set,
    enumerate_well_ordered_dfaos,
    reduce_value_group,
)
from hahnauto.encoding import from_finite_series, p_adic_split, support_prefix
from hahnauto.fields import GF, is_in_subfield
from hahnauto.hahn import HahnSum

from _support import px

F2, F3 = GF(2), GF(3)


def spec(field):
    return FieldSpec.finite(field.p, field.e)


def assert_sound(f, decision, field_spec):
    """Independent re-check of a YES: the witness is a root with coefficients in F."""
    x = decision.witness
    assert x is not None
    fx = f.map_coeffs(lambda c: c.map_coeffs(lambda a: x.field(a.value) if a.field.e == 1 else a, x.field.zero))
    if decision.exponent_scale == 1:
        assert ar.is_zero(ar.evaluate_polynomial(fx, x))
    assert all(field_spec.contains(c) for c in x.outputs())


def test_polynomial_root():
    for p in (2, 3, 5):
        F = GF(p)
        f = px(F, "X - t^2")
        d = decide_ppf(f, F, spec(F))
        assert d.verdict == YES
        assert [(e, c) for e, c in d.witness_terms()] == [(2, F.one)]
        assert_sound(f, d, spec(F))


@pytest.mark.parametrize("p", [2, 3])
def test_artin_schreier(p):
    F = GF(p)
    f = px(F, f"X^{p} - X - t")
    d = decide_ppf(f, F, spec(F))
    assert d.verdict == YES and d.oracle_count == p
    assert sum(r is not None for r in d.roots) == p
    assert_sound(f, d, spec(F))
    assert [e for e, _ in d.witness_terms(4)] == [1, p, p**2, p**3]


def test_negative_and_ramified():
    f = px(F3, "X^2 - t")
    d = decide_ppf(f, F3, spec(F3))
    assert d.verdict == NO and d.oracle_count == 0 and d.witness is None
    d2 = decide_gamma_m(f, F3, spec(F3), 2)
    assert d2.verdict == YES
    assert d2.witness_terms() == [(Fraction(1, 2), F3.one)] or d2.witness_terms() == [(Fraction(1, 2), F3(2))]


def test_residue_field_membership():
    f = px(F3, "X^2 + 1")
    assert decide_ppf(f, F3, spec(F3)).verdict == NO
    d = decide_ppf(f, F3, FieldSpec.parse("F9", 3))
    assert d.verdict == YES and d.witness.field.q == 9
    assert decide_ppf(f, F3, FieldSpec.parse("Fbar", 3)).verdict == YES
    assert decide_ppf(f, F3, FieldSpec.parse("deg:4", 3)).verdict == YES
    assert decide_ppf(f, F3, FieldSpec.parse("deg:3", 3)).verdict == NO


def test_gamma_m():
    f = px(F3, "X^2 - t^3")
    d = decide_gamma_m(f, F3, spec(F3), 2)
    assert d.verdict == YES
    assert [e for e, _ in d.witness_terms()] == [Fraction(3, 2)]
    one = decide_ppf(px(F2, "X - t^2"), F2, spec(F2))
    same = decide_gamma_m(px(F2, "X - t^2"), F2, spec(F2), 1)
    assert (one.verdict, one.witness_terms()) == (same.verdict, same.witness_terms())
    with pytest.raises(ValueError):
        decide_gamma_m(px(F3, "X^2 - t"), F3, spec(F3), 3)


def test_substitution_and_bound_soundness():
    for text, m in [("X^2 - t^3", 2), ("X^2 - t", 2), ("X^2 - t^5", 2)]:
        f = px(F3, text)
        d = decide_gamma_m(f, F3, spec(F3), m)
        assert d.verdict == YES
        terms, complete = support_prefix(d.witness, 20)
        assert len(terms) < 20  # finite support: re-evaluate f exactly
        root = HahnSum(F3, {e / m: c for e, c in terms})
        value = HahnSum(F3)
        for i, c in enumerate(f.coeffs):
            coeff = HahnSum(F3, {Fraction(j): a for j, a in enumerate(c.coeffs) if a})
            power = HahnSum(F3, {Fraction(0): F3.one})
            for _ in range(i):
                power = power * root
            value = value + coeff * power
        assert not value
        for e, _ in d.witness_terms():
            assert d.bound_m % p_adic_split(e.denominator, 3)[1] == 0


def test_monotone_in_the_value_group():
    for text in ("X - t^2", "X^3 - X - t"):
        f = px(F3, text)
        assert decide_ppf(f, F3, spec(F3)).verdict == YES
        assert decide_gamma_m(f, F3, spec(F3), 2).verdict == YES


def test_value_group_reduction():
    f = px(F3, "X^2 - t^3")
    assert reduce_value_group(f, F3, set()) == 1
    assert reduce_value_group(f, F3, {2}) == 2
    assert reduce_value_group(f, F3, {4, 5}) == 1
    assert reduce_value_group(f, F3, lambda q: q % 2 == 0) == 2
    assert decide_with_value_set(f, F3, spec(F3), {2}).verdict == YES
    assert decide_with_value_set(f, F3, spec(F3), set()).verdict == NO


def test_resource_caps_are_honest():
    f = px(F3, "X^3 - X - t")
    d = decide_ppf(f, F3, spec(F3), max_states=2)
    assert d.verdict == UNDECIDED and d.caps_hit
    assert decide_ppf(f, F3, spec(F3), max_states=1, max_candidates=1).verdict == UNDECIDED


def test_parallel_search_gives_the_same_report():
    f = px(F3, "X^3 - X - t")
    assert decide_ppf(f, F3, spec(F3), jobs=2).to_dict() == decide_ppf(f, F3, spec(F3)).to_dict()


def test_enumeration_stream():
    first = list(enumerate_well_ordered_dfaos(2, F2, 1))
    assert any(ar.is_zero(x) for x in first)
    # t needs four states: start, after "1", after "1.", dead
    stream = list(enumerate_well_ordered_dfaos(2, F2, 4))
    t = from_finite_series([(1, 1)], F2, 2)
    assert any(ar.equals(x, t) for x in stream)
    head = stream[:200]
    for i, x in enumerate(head):
        for y in head[i + 1:]:
            assert not ar.equals(x, y)
    sizes = [x.dfao.n for x in stream]
    assert sizes == sorted(sizes)


def test_field_spec():
    s = FieldSpec.parse("F9", 3)
    z = GF(3, 2).gen
    assert s.contains(z) and s.contains(GF(3, 2)(2))
    assert not FieldSpec.parse("F3", 3).contains(z)
    assert FieldSpec.parse("perfect", 3).contains(GF(3, 2)(1))
    with pytest.raises(ValueError):
        FieldSpec.parse("F8", 3)
    assert math.gcd(6, 3) == 3 and is_in_subfield(z, 2)
