import itertools

import pytest

from hahnauto.automata import Dfao, minimize
from hahnauto.encoding import check_well_formed, check_well_ordered
from hahnauto.fields import GF
from hahnauto.search import SearchCapError, candidate_automata, digit_sample


def brute_force(p, field, n):
    """Every minimal, well-formed, well-ordered n-state DFAO, in canonical numbering."""
    k = p + 1
    out = set()
    for flat in itertools.product(range(n), repeat=n * k):
        delta = tuple(tuple(flat[q * k:(q + 1) * k]) for q in range(n))
        for tau in itertools.product(list(field.elements()), repeat=n):
            M = Dfao(k, delta, 0, tau, field.zero)
            m = minimize(M)
            if m.n != n or not check_well_formed(m)[0] or not check_well_ordered(m)[0]:
                continue
            out.add((m.delta, m.tau))
    return out


@pytest.mark.parametrize("p,n", [(2, 1), (2, 2), (3, 1), (3, 2)])
def test_search_is_complete_without_coefficient_constraints(p, n):
    F = GF(p)
    trie = digit_sample(p, 4, None, F.zero)
    found = [(M.delta, M.tau) for M in candidate_automata(p, F, n, trie)]
    assert len(found) == len(set(found))
    assert set(found) == brute_force(p, F, n)


def test_candidates_respect_the_sample():
    p, F = 2, GF(2)
    # force the constant term 1 and nothing at t^(1/2)
    required = {(p,): F.one, (p, 1): F.zero}
    trie = digit_sample(p, 3, lambda w: required.get(tuple(w)), F.zero)
    for n in (1, 2, 3):
        for M in candidate_automata(p, F, n, trie):
            assert M.run((p,)) == 1 and M.run((p, 1)) == 0
            assert check_well_formed(M)[0] and check_well_ordered(M)[0]


def test_canonical_numbering():
    p, F = 2, GF(2)
    trie = digit_sample(p, 4, None, F.zero)
    seen = 0
    for M in candidate_automata(p, F, 3, trie):
        assert minimize(M) == M
        seen += 1
    assert seen > 0


def test_search_node_cap():
    p, F = 3, GF(3)
    trie = digit_sample(p, 3, None, F.zero)
    with pytest.raises(SearchCapError):
        list(candidate_automata(p, F, 4, trie, max_nodes=50))
