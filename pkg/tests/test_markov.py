import math

import pytest
from hypothesis import given, strategies as st

from wallcross.errors import DomainError
from wallcross.markov import (
    MarkovTriple,
    adjacent,
    is_markov,
    markov_tree,
    markov_tree_with_parents,
    mutate,
    mutate_ordered,
    neighbors,
)


def brute_force_triples(bound):
    """All sorted solutions of a^2+b^2+c^2 = 3abc with c <= bound."""
    out = set()
    for a in range(1, bound + 1):
        for b in range(a, bound + 1):
            # c is a root of c^2 - 3ab c + (a^2 + b^2) = 0
            disc = 9 * a * a * b * b - 4 * (a * a + b * b)
            if disc < 0:
                continue
            s = math.isqrt(disc)
            if s * s != disc:
                continue
            for c2 in (3 * a * b - s, 3 * a * b + s):
                if c2 % 2 == 0 and b <= c2 // 2 <= bound:
                    out.add((a, b, c2 // 2))
    return out


def test_small_tree():
    assert {t.astuple() for t in markov_tree(0)} == {(1, 1, 1)}
    assert {t.astuple() for t in markov_tree(2)} == {(1, 1, 1), (1, 1, 2), (1, 2, 5)}
    assert {t.astuple() for t in markov_tree(3)} >= {(1, 5, 13), (2, 5, 29)}


def test_tree_matches_brute_force():
    bound = 1000
    found = {t.astuple() for t in markov_tree(14) if t.c <= bound}
    assert found == brute_force_triples(bound)


def test_parents_are_one_mutation_away():
    tree = markov_tree_with_parents(6)
    for child, parent in tree.items():
        if parent is None:
            assert child == MarkovTriple(1, 1, 1)
        else:
            assert adjacent(parent, child) is not None


def test_non_markov_rejected():
    assert not is_markov(1, 2, 3)
    with pytest.raises(DomainError):
        MarkovTriple(1, 2, 3)
    with pytest.raises(DomainError):
        MarkovTriple(5, 2, 1)
    assert MarkovTriple.of(5, 2, 1).astuple() == (1, 2, 5)


def test_weights_are_squares():
    assert MarkovTriple.of(1, 2, 5).weights() == (1, 4, 25)


def test_generic_triples_have_three_neighbors():
    for t in markov_tree(6):
        if t.astuple() in ((1, 1, 1), (1, 1, 2)):
            continue
        assert len(neighbors(t)) == 3


@given(st.lists(st.integers(1, 3), min_size=1, max_size=12))
def test_mutation_preserves_the_equation_and_is_an_involution(slots):
    t = (1, 1, 1)
    for s in slots:
        nxt = mutate_ordered(t, s)
        assert is_markov(*nxt)
        assert mutate_ordered(nxt, s) == t
        t = nxt
    assert mutate(MarkovTriple.of(t), 1) in neighbors(MarkovTriple.of(t))
