import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings

from conftest import brute_alpha, graphs
from twalpha import containers as ct
from twalpha.errors import HypothesisViolated
from twalpha.graph import alpha, complement_kKw, complete, complete_bipartite, cycle, gnp, maximal_cliques, path


def brute_cover_check(g, family, b):
    """Every vertex set of independence number ≤ b inside some member (plain enumeration)."""
    members = [set(s) for s in family]
    for size in range(g.n + 1):
        for s in itertools.combinations(range(g.n), size):
            if brute_alpha(g, s) <= b and not any(set(s) <= m for m in members):
                return s
    return None


def test_b_zero_gives_empty_member():
    cf = ct.build_containers_small_b(cycle(5), ct.ContainerParams(2, 2, 0))
    assert cf.family == ((),)


def test_small_alpha_gives_whole_set():
    g = cycle(5)
    cf = ct.build_containers_small_b(g, ct.ContainerParams(2, 3, 1))
    assert cf.family == (tuple(range(5)),)


def test_k33_family_covers_every_clique():
    g = complete_bipartite(3, 3)
    with pytest.raises(HypothesisViolated):
        ct.build_containers_small_b(g, ct.ContainerParams(3, 2, 1))
    cf = ct.build_containers_small_b(g, ct.ContainerParams(3, 2, 1), check_hypothesis=False)
    assert ct.verify_container_family(g, cf).passed
    assert brute_cover_check(g, cf.family, 1) is None


def test_general_delegates_and_large_b():
    g = gnp(9, 0.5, seed=4)
    p = ct.ContainerParams(3, 3, 2)
    if ct.find_forbidden(g, 3, 3) is None:
        assert ct.build_containers(g, p).family == ct.build_containers_small_b(g, p).family
    easy = path(4)
    assert ct.build_containers(easy, ct.ContainerParams(2, 3, 3)).family == ((0, 1, 2, 3),)


def test_general_on_random_graph():
    g = gnp(10, 0.6, seed=3)
    if ct.find_forbidden(g, 4, 3) is not None:
        pytest.skip("instance contains the forbidden subgraph")
    cf = ct.build_containers(g, ct.ContainerParams(4, 3, 5))
    rep = ct.verify_container_family(g, cf)
    assert rep.passed
    assert brute_cover_check(g, cf.family, 5) is None


def test_family_product():
    assert ct.family_product([()], [(2,), (1,), (1,)]) == ((1,), (2,))
    assert ct.family_product([(0,)], [(1,), (2,)]) == ((0, 1), (0, 2))


def test_verify_examples():
    g = cycle(6)
    assert ct.verify_container_family(g, ct.ContainerFamily((tuple(range(6)),), alpha(g), alpha(g))).passed
    cliques = maximal_cliques(g)
    assert ct.verify_container_family(g, ct.ContainerFamily(cliques, 1, 1)).passed
    broken = ct.verify_container_family(g, ct.ContainerFamily(cliques[1:], 1, 1))
    assert not broken.passed and broken.uncovered == cliques[0]


@pytest.mark.parametrize("args, expected", [((3, 1, 1, 2), 9), ((4, 1, 2, 2), 4), ((2, 1, 1, 1), 2)])
def test_lower_bound_formula(args, expected):
    assert ct.container_lower_bound(*args) == expected


def test_bruteforce_minimum():
    assert ct.minimal_container_bruteforce(complete(5), 1, 1) == 1
    assert ct.minimal_container_bruteforce(complete_bipartite(3, 3), 1, 1) == 9
    assert ct.minimal_container_bruteforce(cycle(4), 1, 2) == 1


@pytest.mark.parametrize("omega, b, a, k", [(2, 1, 1, 2), (2, 1, 1, 3), (3, 1, 2, 2), (3, 2, 2, 2), (3, 1, 1, 2)])
def test_bruteforce_at_least_formula(omega, b, a, k):
    g = complement_kKw(k, omega)
    assert ct.minimal_container_bruteforce(g, b, a) >= ct.container_lower_bound(omega, b, a, k)


def test_size_within_is_exact():
    assert ct.size_within(8, 2, Fraction(3))
    assert not ct.size_within(9, 2, Fraction(3))
    # fractional exponents are rounded down, which keeps the test sound
    assert ct.size_within(4, 4, Fraction(3, 2))
    assert not ct.size_within(5, 4, Fraction(3, 2))
    assert 10 ** 40 <= 2 ** 200 and ct.size_within(10 ** 40, 2, Fraction(400, 2))


@settings(max_examples=40, deadline=None)
@given(graphs(min_n=1, max_n=9))
def test_builder_passes_verification(g):
    for om, k in ((2, 2), (3, 2), (2, 3)):
        if ct.find_forbidden(g, om, k) is None:
            cf = ct.build_containers_small_b(g, ct.ContainerParams(om, k, 1))
            rep = ct.verify_container_family(g, cf)
            assert rep.passed, rep.to_dict()
            assert rep.size_bound_ok and rep.real_alpha_bound_ok
            assert ct.build_containers(g, ct.ContainerParams(om, k, 1)).family == cf.family


@settings(max_examples=30, deadline=None)
@given(graphs(min_n=1, max_n=8))
def test_cliques_are_a_family(g):
    assert ct.verify_container_family(g, ct.clique_family(g)).passed
