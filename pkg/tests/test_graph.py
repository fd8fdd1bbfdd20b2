import itertools
from fractions import Fraction

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import all_simple_paths, brute_alpha, graphs, to_nx
from twalpha.errors import InstanceTooLarge
from twalpha.graph import (Graph, alpha, complement_kKw, complete, complete_bipartite, cycle, enumerate_induced_paths,
                           gnp, is_ab_separator, is_balanced_separator, is_induced_path, maximal_cliques,
                           neighborhood_closed, omega, path)

C5 = cycle(5)
CO3K2 = complement_kKw(3, 2)
DIAMOND = Graph(4, [(0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])  # u=0, v=1, chord 2-3


@pytest.mark.parametrize("g, expected", [(complete(5), 1), (C5, 2), (CO3K2, 2)])
def test_alpha_examples(g, expected):
    assert alpha(g) == expected == brute_alpha(g)


@pytest.mark.parametrize("g, expected", [(complete(5), 5), (C5, 2), (CO3K2, 3)])
def test_omega_examples(g, expected):
    assert omega(g) == expected == brute_alpha(g.complement())


@pytest.mark.parametrize("g, expected", [(CO3K2, 8), (complete(4), 1), (C5, 5)])
def test_maximal_clique_counts(g, expected):
    assert len(maximal_cliques(g)) == expected


def test_alpha_cap():
    with pytest.raises(InstanceTooLarge):
        alpha(complete(5), cap=4)


@pytest.mark.parametrize("k", range(1, 11))
def test_complement_of_matching_has_2k_cliques(k):
    assert len(maximal_cliques(complement_kKw(k, 2))) == 2 ** k


def test_induced_path_examples():
    assert enumerate_induced_paths(path(4), [0], [3]) == [(0, 1, 2, 3)]
    assert len(enumerate_induced_paths(cycle(4), [0], [2])) == 2
    assert enumerate_induced_paths(DIAMOND, [0], [1]) == [(0, 2, 1), (0, 3, 1)]


def test_separator_examples():
    p3 = path(3)
    assert is_ab_separator(p3, [1], [0], [2])
    assert not is_ab_separator(p3, [], [0], [2])
    assert is_ab_separator(cycle(4), [1, 3], [0], [2])
    # a shared endpoint is itself a one-vertex path
    assert not is_ab_separator(p3, [1], [0, 2], [2])


def test_balanced_examples():
    p5 = path(5)
    assert is_balanced_separator(p5, range(5), range(5), Fraction(1, 4))
    assert is_balanced_separator(p5, [2], range(5), Fraction(1, 2))
    assert not is_balanced_separator(p5, [2], range(5), Fraction(1, 4))


def test_generators():
    assert nx.is_isomorphic(to_nx(complement_kKw(2, 3)), to_nx(complete_bipartite(3, 3)))
    c4 = cycle(4)
    assert (c4.n, c4.edge_count()) == (4, 4)
    assert gnp(10, 0.5, seed=7).adj == gnp(10, 0.5, seed=7).adj


def test_closed_neighbourhood():
    assert neighborhood_closed(C5, []) == ()
    assert neighborhood_closed(complete(4), [2]) == (0, 1, 2, 3)
    assert neighborhood_closed(C5, [0]) == (0, 1, 4)


def test_subgraph_lifting():
    g = cycle(6)
    h = g.induced_subgraph([1, 2, 3, 5])
    assert h.n == 4 and h.edges() == [(0, 1), (1, 2)]
    assert h.lift([0, 3]) == (1, 5)
    assert h.localize([5, 2]) == (1, 3)


@settings(max_examples=60, deadline=None)
@given(graphs(max_n=10))
def test_alpha_equals_omega_of_complement(g):
    assert alpha(g) == omega(g.complement())
    assert alpha(g) == len(max(nx.find_cliques(to_nx(g.complement())), key=len))


@settings(max_examples=60, deadline=None)
@given(graphs(max_n=9))
def test_maximal_cliques_match_networkx(g):
    ours = set(maximal_cliques(g))
    theirs = {tuple(sorted(c)) for c in nx.find_cliques(to_nx(g))}
    assert ours == theirs


@settings(max_examples=60, deadline=None)
@given(graphs(min_n=2, max_n=8), st.data())
def test_induced_paths_are_induced_and_stable(g, data):
    a = data.draw(st.lists(st.integers(0, g.n - 1), min_size=1, max_size=2))
    b = data.draw(st.lists(st.integers(0, g.n - 1), min_size=1, max_size=2))
    ps = enumerate_induced_paths(g, a, b)
    assert ps == enumerate_induced_paths(g, a, b)
    for p in ps:
        assert is_induced_path(g, p) and p[0] <= p[-1]
        assert (p[0] in a and p[-1] in b) or (p[-1] in a and p[0] in b)


@settings(max_examples=80, deadline=None)
@given(graphs(min_n=2, max_n=9), st.data())
def test_separator_agrees_with_all_paths(g, data):
    a = data.draw(st.lists(st.integers(0, g.n - 1), min_size=1, max_size=2, unique=True))
    b = data.draw(st.lists(st.integers(0, g.n - 1), min_size=1, max_size=2, unique=True))
    s = data.draw(st.lists(st.integers(0, g.n - 1), max_size=4, unique=True))
    blocked = all(set(p) & set(s) for p in all_simple_paths(g, a, b))
    assert is_ab_separator(g, s, a, b) == blocked


@settings(max_examples=40, deadline=None)
@given(graphs(min_n=1, max_n=8), st.data())
def test_balanced_agrees_with_networkx_components(g, data):
    s = data.draw(st.lists(st.integers(0, g.n - 1), max_size=3, unique=True))
    z = data.draw(st.lists(st.integers(0, g.n - 1), min_size=1, unique=True))
    phi = Fraction(data.draw(st.integers(1, 4)), 4)
    h = to_nx(g)
    h.remove_nodes_from(s)
    ok = all(len(set(c) & set(z)) <= phi * len(z) for c in nx.connected_components(h))
    assert is_balanced_separator(g, s, z, phi) == ok


def test_omega_brute_on_small_subsets():
    g = gnp(9, 0.5, seed=2)
    for s in itertools.combinations(range(9), 5):
        assert alpha(g, s) == brute_alpha(g, s)
