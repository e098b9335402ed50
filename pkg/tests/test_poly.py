import random

import pytest
from hypothesis import given, settings, strategies as st

from hahnauto.fields import GF
from hahnauto.poly import (
    Poly,
    RationalFunction,
    linear_solve,
    poly_gcd,
    poly_roots,
    rf_zero,
    roots_with_multiplicity,
    squarefree_decomposition,
    squarefree_part,
    t_poly,
    to_rational,
)

from _support import px

F2, F3 = GF(2), GF(3)


def rat(field, text):
    return to_rational(px(field, text), field)


def test_gcd_with_derivative_is_one():
    f = rat(F3, "X^2 - t^3")
    g = poly_gcd(f, f.derivative())
    assert g.degree == 0 and g.is_monic()


def test_frobenius_square_over_f2():
    f = px(F2, "X + 1")
    assert f * f == px(F2, "X^2 + 1")


def test_divmod_single_step():
    q, r = divmod(px(F3, "X^3"), px(F3, "X^2 - t^3"))
    assert q == px(F3, "X")
    assert r == px(F3, "t^3*X")


def test_squarefree_examples():
    f, flag = squarefree_part(rat(F3, "(X - t)^2"))
    assert f == rat(F3, "X - t") and not flag
    f, flag = squarefree_part(rat(F3, "X^2 - t^3"))
    assert f == rat(F3, "X^2 - t^3") and not flag
    for p in (2, 3):
        F = GF(p)
        f, flag = squarefree_part(rat(F, f"X^{p} - t"))
        assert f == rat(F, f"X^{p} - t") and flag


def test_squarefree_of_pth_power_collapses():
    # (X - t)^3 = X^3 - t^3 is a cube, not an inseparable irreducible
    parts = squarefree_decomposition(rat(F3, "X^3 - t^3"))
    assert [(p.poly, p.inseparable_exponent) for p in parts] == [(rat(F3, "X - t"), 0)]


def test_linear_solve_examples():
    zero = rf_zero(F3)
    one = zero + 1
    t3 = RationalFunction(t_poly(F3, [0, 0, 0, 1]))
    v = linear_solve([[one, t3]], zero)
    assert v is not None and v[0] + t3 * v[1] == zero and v[1]
    assert v[0] / v[1] == -t3
    assert linear_solve([[one, zero], [zero, one]], zero) is None
    assert linear_solve([[zero]], zero) == [one]


def test_roots_over_extension():
    F9 = GF(3, 2)
    f = Poly([F9(1), F9(0), F9(1)], F9.zero)  # X^2 + 1
    roots = poly_roots(f)
    assert len(roots) == 2 and all(r * r + 1 == 0 for r in roots)
    assert poly_roots(Poly([F3(1), F3(0), F3(1)], F3.zero)) == []
    mult = roots_with_multiplicity(Poly([F3(1), F3(2), F3(1)], F3.zero))  # (X+1)^2
    assert mult == {F3(2): 2}


def _random_rat_poly(rng, field, deg):
    cs = []
    for _ in range(deg + 1):
        num = t_poly(field, [rng.randrange(field.p) for _ in range(rng.randint(0, 3))])
        den = t_poly(field, [rng.randrange(field.p) for _ in range(rng.randint(0, 2))] + [1])
        cs.append(RationalFunction(num, den))
    return Poly(cs, rf_zero(field))


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 10**6), p=st.sampled_from([2, 3, 5]))
def test_divmod_reconstruction_and_gcd(seed, p):
    rng = random.Random(seed)
    F = GF(p)
    f = _random_rat_poly(rng, F, rng.randint(0, 6))
    g = _random_rat_poly(rng, F, rng.randint(0, 6))
    if not g:
        return
    q, r = divmod(f, g)
    assert q * g + r == f
    assert r.degree < g.degree or not r
    if f:
        d = poly_gcd(f, g)
        assert not (f % d) and not (g % d)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 10**6), p=st.sampled_from([2, 3]))
def test_squarefree_part_divides_and_is_separable(seed, p):
    rng = random.Random(seed)
    F = GF(p)
    f = _random_rat_poly(rng, F, rng.randint(1, 3))
    f = f * f * _random_rat_poly(rng, F, rng.randint(0, 2))
    if f.degree < 1:
        return
    s, _ = squarefree_part(f)
    assert not (f.monic() % s)
    for part in squarefree_decomposition(f):
        d = part.poly.derivative()
        if d:
            assert poly_gcd(part.poly, d).degree == 0


def test_zero_polynomial_has_no_squarefree_part():
    with pytest.raises(ValueError):
        squarefree_decomposition(Poly([], rf_zero(F2)))
