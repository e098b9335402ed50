import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from hahnauto.automata import Dfao, parse_word
from hahnauto.encoding import (
    AutomaticSeries,
    InvalidExpansionError,
    MalformedSeriesError,
    check_well_formed,
    check_well_ordered,
    expansion_of,
    expansion_string,
    expansion_value,
    from_finite_series,
    support_prefix,
    validity_reason,
    zero_series,
)
from hahnauto.fields import GF

from _support import loop_down, loop_up, table_dfao, words


def string_dfao(p, field, texts, c=1):
    """Automaton accepting exactly the given strings (a trie)."""
    edges, outputs, nodes = {}, {}, {(): 0}
    for text in texts:
        w = parse_word(text, p)
        for i in range(1, len(w) + 1):
            if w[:i] not in nodes:
                nodes[w[:i]] = len(nodes)
                edges[(nodes[w[: i - 1]], w[i - 1])] = nodes[w[:i]]
        outputs[nodes[w]] = field(c)
    return table_dfao(p + 1, edges, outputs, field.zero, len(nodes))


def test_expansion_value_examples():
    assert expansion_value("12.1", 3) == Fraction(16, 3)
    assert expansion_value("1.", 2) == 1
    assert expansion_value(".1", 2) == Fraction(1, 2)
    assert expansion_value(".", 5) == 0


def test_expansion_of_examples():
    assert expansion_string(Fraction(16, 3), 3) == "12.1"
    assert expansion_string(0, 3) == "."
    assert expansion_string(Fraction(5, 4), 2) == "1.01"
    with pytest.raises(InvalidExpansionError):
        expansion_of(Fraction(1, 2), 3)
    with pytest.raises(InvalidExpansionError):
        expansion_of(-1, 2)


def test_invalid_words():
    assert validity_reason(parse_word("01.", 2), 2) is not None
    assert validity_reason(parse_word("1.10", 2), 2) is not None
    assert validity_reason(parse_word("1.1.1", 2), 2) is not None
    assert validity_reason(parse_word("10.", 2), 2) is None


@settings(max_examples=200, deadline=None)
@given(p=st.sampled_from([2, 3, 5]), num=st.integers(0, 10**6), k=st.integers(0, 6))
def test_expansion_round_trip(p, num, k):
    e = Fraction(num, p**k)
    w = expansion_of(e, p)
    assert validity_reason(w, p) is None
    assert expansion_value(w, p) == e
    assert expansion_of(expansion_value(w, p), p) == w


def test_well_formed_examples():
    F = GF(2)
    assert check_well_formed(string_dfao(2, F, ["1."]))[0]
    ok, diag = check_well_formed(string_dfao(2, F, ["01."]))
    assert not ok and "0" in diag
    assert not check_well_formed(string_dfao(2, F, ["1.1.1"]))[0]


def random_series_dfao(rng, p, field, n):
    k = p + 1
    delta = tuple(tuple(rng.randrange(n) for _ in range(k)) for _ in range(n))
    tau = tuple(field.from_index(rng.randrange(field.q)) if rng.random() < 0.4 else field.zero for _ in range(n))
    return Dfao(k, delta, rng.randrange(n), tau, field.zero)


@pytest.mark.parametrize("p", [2, 3])
def test_well_formed_agrees_with_direct_validation(p):
    rng = random.Random(p)
    F = GF(p)
    for _ in range(300):
        M = random_series_dfao(rng, p, F, rng.randint(1, 4))
        ok, diag = check_well_formed(M)
        bad = any(M.run(w) and validity_reason(w, p) for w in words(p + 1, 7 if p == 2 else 5))
        if ok:
            assert not bad
        else:
            # the reported string really is accepted and invalid
            w = parse_word(diag.rsplit("'", 2)[1], p)
            assert M.run(w) and validity_reason(w, p)


def test_well_ordered_examples():
    for p in (2, 3, 5):
        F = GF(p)
        assert check_well_ordered(from_finite_series([(1, 1)], F, p).dfao)[0]
        assert check_well_ordered(loop_up(p, F).dfao)[0]
        ok, report = check_well_ordered(loop_down(p, F))
        assert not ok
        (q, label, r), = report.offending_edges()
        assert label == 0 and q == r


def test_from_finite_series_examples():
    F2 = GF(2)
    zero = from_finite_series([], F2, 2)
    assert not zero.dfao.accepting()
    t = from_finite_series([(1, 1)], F2, 2)
    assert t.dfao("1.") == 1
    assert [w for w in words(3, 4) if t.dfao.run(w)] == [parse_word("1.", 2)]
    with pytest.raises(InvalidExpansionError):
        from_finite_series([(Fraction(1, 2), 1), (3, 2)], GF(3), 3)


def test_support_prefix_examples():
    F2 = GF(2)
    assert support_prefix(zero_series(F2, 2), 3)[0] == []
    x = from_finite_series([(1, 1), (2, 1)], F2, 2)
    assert support_prefix(x, 2)[0] == [(1, F2.one), (2, F2.one)]
    loop = loop_up(2, F2)
    assert support_prefix(loop, 3)[0] == [(Fraction(1, 2), 1), (Fraction(3, 4), 1), (Fraction(7, 8), 1)]


@settings(max_examples=80, deadline=None)
@given(
    p=st.sampled_from([2, 3, 5]),
    data=st.lists(st.tuples(st.integers(0, 200), st.integers(0, 3), st.integers(1, 4)), max_size=6),
)
def test_finite_series_round_trip(p, data):
    F = GF(p)
    terms = {Fraction(n, p**k): F(c) for n, k, c in data if c % p}
    x = from_finite_series(sorted(terms.items()), F, p)
    got, _ = support_prefix(x, len(terms) + 1)
    assert got == sorted(terms.items())


def test_malformed_series_rejected():
    with pytest.raises(MalformedSeriesError):
        AutomaticSeries(loop_down(3, GF(3)), GF(3))
    with pytest.raises(MalformedSeriesError):
        AutomaticSeries(string_dfao(2, GF(2), ["01."]), GF(2))
