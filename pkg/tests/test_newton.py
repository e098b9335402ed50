import random
from fractions import Fraction

import pytest

from hahnauto import arithmetic as ar
from hahnauto.fields import GF
from hahnauto.newton import (
    AdditivePolynomial,
    OracleDepthError,
    count_roots_oracle,
    envelope,
    in_group,
    maximal_prime_powers,
    ore_additive_multiple,
    ramification_bound,
    substitute_power,
)
from hahnauto.poly import Poly, t_poly

from _support import px, random_terms, series

F2, F3 = GF(2), GF(3)


def random_monic(rng, field, deg):
    cs = [t_poly(field, [rng.randrange(field.p) for _ in range(rng.randint(0, 3))]) for _ in range(deg)]
    return Poly(cs + [t_poly(field, [1])], t_poly(field, []))


def divides(f, P, field):
    return not (P.as_poly(t_poly(field, [])) % f)


def test_ore_examples():
    P = ore_additive_multiple(px(F3, "X^2 - t^3"), F3)
    assert P.as_poly(t_poly(F3, [])) == px(F3, "X^3 - t^3*X")
    for p in (2, 3, 5):
        F = GF(p)
        for text in ("X - t", f"X^{p} - X - t"):
            f = px(F, text)
            assert divides(f, ore_additive_multiple(f, F), F)


@pytest.mark.parametrize("p", [2, 3])
def test_ore_divisibility_random(p):
    F = GF(p)
    rng = random.Random(p)
    for _ in range(15):
        f = random_monic(rng, F, rng.randint(1, 3))
        assert divides(f, ore_additive_multiple(f, F), F)


def test_additive_multiple_is_additive():
    F = F3
    P = ore_additive_multiple(px(F, "X^2 - t^3"), F).as_poly(t_poly(F, []))
    rng = random.Random(9)
    for _ in range(4):
        x, y = series(F, random_terms(rng, F, 3, 1)), series(F, random_terms(rng, F, 3, 1))
        lhs = ar.evaluate_polynomial(P, ar.add(x, y))
        rhs = ar.add(ar.evaluate_polynomial(P, x), ar.evaluate_polynomial(P, y))
        assert ar.equals(lhs, rhs)


def test_envelope_examples():
    one = t_poly(F3, [1])
    assert envelope(AdditivePolynomial(3, {0: one})).breakpoints == ()
    env = envelope(AdditivePolynomial(3, {0: -one, 1: one}))
    assert [r for r, _, _ in env.breakpoints] == [0]
    env = envelope(ore_additive_multiple(px(F3, "X^2 - t^3"), F3))
    assert [r for r, _, _ in env.breakpoints] == [Fraction(3, 2)]


def test_envelope_matches_pointwise_minimum():
    rng = random.Random(11)
    for _ in range(20):
        coeffs = {i: t_poly(F2, [0] * rng.randint(0, 6) + [1]) for i in rng.sample(range(5), rng.randint(1, 4))}
        env = envelope(AdditivePolynomial(2, coeffs))
        for _ in range(10):
            r = Fraction(rng.randint(-40, 40), rng.randint(1, 9))
            best = min(s * r + b for _, s, b in env.lines)
            active = env.active_line(r)
            line = next(l for l in env.lines if l[0] == active)
            assert line[1] * r + line[2] == best == env.value(r)
        for r, i, j in env.breakpoints:
            li = next(l for l in env.lines if l[0] == i)
            lj = next(l for l in env.lines if l[0] == j)
            assert li[1] * r + li[2] == lj[1] * r + lj[2] == env.value(r)


def test_bound_examples():
    assert ramification_bound(px(F3, "X^2 - t^3"), F3).m == 2
    for p in (2, 3, 5):
        F = GF(p)
        assert ramification_bound(px(F, f"X^{p} - X - t"), F).m == 1
        assert ramification_bound(px(F, "X - t"), F).m == 1
    assert maximal_prime_powers(12) == [4, 3]


def test_group_membership():
    assert in_group(Fraction(1, 9), 1, 3)
    assert not in_group(Fraction(1, 2), 1, 3)
    assert in_group(Fraction(3, 2), 2, 3)
    assert in_group(Fraction(5, 12), 4, 3)


def test_oracle_counts():
    for p in (2, 3, 5):
        F = GF(p)
        assert count_roots_oracle(px(F, "X - t"), F).count == 1
        assert count_roots_oracle(px(F, f"X^{p} - X - t"), F).count == p
    assert count_roots_oracle(px(F3, "X^2 - t^3"), F3, 1).count == 0
    assert count_roots_oracle(px(F3, "X^2 - t^3"), F3, 2).count == 2
    assert count_roots_oracle(px(F3, "X^2 - t"), F3).count == 0
    res = count_roots_oracle(px(F3, "X^2 + 1"), F3)
    assert res.count == 2 and res.field.q == 9


def test_oracle_roots_have_the_right_leading_terms():
    res = count_roots_oracle(px(F3, "X^3 - X - t"), F3)
    leads = sorted((r.terms[0][0], r.terms[0][1].value) for r in res.roots)
    # c - t - t^3 - ...: constants 1, 2 lead; c = 0 starts with -t
    assert leads == [(0, 1), (0, 2), (1, 2)]


def test_oracle_counts_distinct_roots():
    # X*(X - t) has roots 0 and t; X^2 has the single root 0
    assert count_roots_oracle(px(F2, "X^2 - t*X"), F2).count == 2
    assert count_roots_oracle(px(F2, "X^2"), F2).count == 1


def test_substitute_power():
    f = substitute_power(px(F3, "X^2 - t^3"), 2)
    assert f == px(F3, "X^2 - t^6")


def test_repeated_residual_roots_are_separated():
    # both roots start with t, so the residual at exponent 1 has a double root
    f = px(F3, "(X - t)*(X - t - t^2)")
    res = count_roots_oracle(f, F3)
    assert res.count == 2 and res.steps >= 1
    with pytest.raises(OracleDepthError):
        count_roots_oracle(f, F3, step_cap=0)


def test_simple_roots_stop_expanding_at_the_cap():
    res = count_roots_oracle(px(F3, "X^3 - X - t"), F3, step_cap=1)
    assert res.count == 3
    assert all(r.known_below is not None for r in res.roots)
