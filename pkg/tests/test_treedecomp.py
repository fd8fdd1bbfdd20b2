import itertools
import math

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import brute_alpha, graphs, to_nx
from twalpha import treedecomp as td
from twalpha.errors import ProviderFailure
from twalpha.graph import Graph, complete, complete_bipartite, cycle, gnp, path
from twalpha.suite import random_chordal, td_corpus

P4_EDGES = td.TreeDecomposition((0, 1, 2), ((0, 1), (1, 2)), {0: (0, 1), 1: (1, 2), 2: (2, 3)})
C4_TWO_BAGS = td.TreeDecomposition((0, 1), ((0, 1),), {0: (0, 1, 2), 1: (0, 2, 3)})


def test_verify_examples():
    g = gnp(7, 0.5, seed=1)
    assert td.verify_td(g, td.TreeDecomposition.single_bag(range(g.n))).passed
    assert td.verify_td(path(4), P4_EDGES).passed
    broken = td.TreeDecomposition((0, 1), ((0, 1),), {0: (0, 1), 1: (2, 3)})
    rep = td.verify_td(path(4), broken)
    assert not rep.passed and rep.uncovered_edge == (1, 2)


def test_independence_and_width_examples():
    assert td.td_independence(complete(6), td.TreeDecomposition.single_bag(range(complete(6).n))) == 1
    k33 = complete_bipartite(3, 3)
    assert td.td_independence(k33, td.TreeDecomposition.single_bag(range(k33.n))) == 3
    assert td.td_independence(path(4), P4_EDGES) == 1
    assert td.td_width(cycle(5), td.TreeDecomposition.single_bag(range(cycle(5).n))) == 4
    assert td.td_width(path(4), P4_EDGES) == 1
    assert td.verify_td(cycle(4), C4_TWO_BAGS).passed and td.td_width(cycle(4), C4_TWO_BAGS) == 2


def test_json_round_trip():
    again = td.TreeDecomposition.from_dict(C4_TWO_BAGS.to_dict())
    assert again == C4_TWO_BAGS


def test_builder_on_clique():
    dec = td.build_td_small_alpha(complete(5), 1, td.exhaustive_provider)
    assert td.verify_td(complete(5), dec).passed and td.td_independence(complete(5), dec) == 1


@pytest.mark.parametrize("t", [3, 4])
def test_builder_reports_unsplittable_side(t):
    g = complete_bipartite(t, t)
    with pytest.raises(ProviderFailure) as err:
        td.build_td_small_alpha(g, t - 1, td.exhaustive_provider)
    ind = set(err.value.independent_set)
    assert len(ind) == t - 1 and (ind <= set(range(t)) or ind <= set(range(t, 2 * t)))


@pytest.mark.parametrize("g, expected", [(path(6), 1), (cycle(6), 2), (complete(5), 4)])
def test_treewidth_oracle(g, expected):
    assert td.brute_tw(g) == expected


@pytest.mark.parametrize("g, expected", [(complete(4), 1), (path(4), 1), (cycle(4), 2),
                                         (complete_bipartite(3, 3), 3), (complete_bipartite(4, 4), 4)])
def test_tree_independence_oracle(g, expected):
    assert td.brute_tw_alpha(g) == expected


def test_balanced_separator_search():
    chk = td.check_tw_balanced_separator(path(5), range(5), 1)
    assert chk.found and chk.separator == (2,)
    chk = td.check_tw_balanced_separator(complete(6), range(6), 2)
    assert not chk.found and chk.tw_lower_bound == 2
    chk = td.check_tw_balanced_separator(cycle(4), range(4), 4)
    assert chk.found


def chordal_supergraph_oracle(g):
    """(tw, tw_alpha) as minima over every chordal supergraph on the same vertices."""
    non_edges = [e for e in itertools.combinations(range(g.n), 2) if not g.has_edge(*e)]
    best_tw = best_ta = math.inf
    for k in range(len(non_edges) + 1):
        for extra in itertools.combinations(non_edges, k):
            h = to_nx(g)
            h.add_edges_from(extra)
            if not nx.is_chordal(h):
                continue
            cliques = list(nx.find_cliques(h))
            best_tw = min(best_tw, max(len(c) for c in cliques) - 1)
            best_ta = min(best_ta, max(brute_alpha(g, c) for c in cliques))
    return best_tw, best_ta


@settings(max_examples=40, deadline=None)
@given(graphs(min_n=1, max_n=5))
def test_oracles_match_chordal_supergraphs(g):
    assert (td.brute_tw(g), td.brute_tw_alpha(g)) == chordal_supergraph_oracle(g)


@settings(max_examples=30, deadline=None)
@given(graphs(min_n=1, max_n=8), st.permutations(range(8)))
def test_elimination_decompositions_are_valid(g, perm):
    order = [v for v in perm if v < g.n]
    dec = td.elimination_decomposition(g, order)
    assert td.verify_td(g, dec).passed
    assert td.brute_tw(g) <= td.td_width(g, dec)
    assert td.brute_tw_alpha(g) <= td.td_independence(g, dec)


@settings(max_examples=30, deadline=None)
@given(graphs(min_n=1, max_n=7), st.integers(1, 3))
def test_builder_output_is_valid(g, a):
    try:
        dec = td.build_td_small_alpha(g, a, td.exhaustive_provider)
    except ProviderFailure:
        return
    assert td.verify_td(g, dec).passed
    assert td.td_independence(g, dec) <= math.ceil(1.5 * a)
    assert td.brute_tw_alpha(g) <= td.td_independence(g, dec)


@pytest.mark.parametrize("g, a", td_corpus())
def test_builder_on_corpus(g, a):
    dec = td.build_td_small_alpha(g, a, td.exhaustive_provider)
    assert all(c["pass"] for c in td.td_claims(g, dec, a))


@settings(max_examples=60, deadline=None)
@given(graphs(min_n=1, max_n=8), st.integers(0, 4), st.data())
def test_refutations_are_sound(g, k, data):
    z = data.draw(st.lists(st.integers(0, g.n - 1), min_size=1, unique=True))
    chk = td.check_tw_balanced_separator(g, z, k)
    tw = td.brute_tw(g)
    if tw + 1 <= k:
        assert chk.found
    if not chk.found:
        assert tw >= chk.tw_lower_bound


def test_treewidth_alone_does_not_bound_separator_size():
    # treewidth 2, yet every (Z, 1/2)-balanced separator needs three vertices
    g = Graph(7, [(0, 1), (0, 2), (0, 3), (0, 4), (0, 6), (1, 3), (2, 3), (2, 4), (2, 5), (3, 5), (4, 6)])
    z = (1, 3, 4, 5, 6)
    assert td.brute_tw(g) == 2
    chk = td.check_tw_balanced_separator(g, z, 2)
    assert not chk.found and chk.tw_lower_bound == 2
    assert td.min_balanced_separator_size(g, z) == 3


def test_random_chordal_is_chordal():
    for seed in range(5):
        assert nx.is_chordal(to_nx(random_chordal(12, seed)))
