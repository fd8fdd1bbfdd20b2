import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import all_simple_paths, graphs
from twalpha import absep, lp
from twalpha.containers import ContainerParams
from twalpha.errors import InfeasibleLP, PreconditionError
from twalpha.graph import (Graph, alpha, complete_bipartite, cycle, enumerate_induced_paths, is_ab_separator,
                           is_induced_path, maximal_cliques, path)

P3 = path(3)
C6 = cycle(6)
C6_FAMILY = ((1,), (2,), (4,), (5,))


def test_normalization_thresholds():
    g = Graph(10)
    assert absep.normalize_fractional_separator(g, ((0,), (1,), (2,)), [0.03, 0.4, 0.9]) == (0.0, 0.8, 1.0)


def test_threshold_examples():
    res = absep.threshold_round(P3, ((1,),), 1, [1.0], [0], [2])
    assert (res.separator, res.fcov) == ((1,), 1.0)
    c4 = cycle(4)
    res = absep.threshold_round(c4, ((1,), (3,)), 1, [1.0, 1.0], [0], [2])
    assert (res.separator, res.fcov) == ((1, 3), 2.0)


def test_shared_uncovered_endpoint_is_rejected():
    with pytest.raises(PreconditionError):
        absep.threshold_round(P3, ((1,),), 1, [1.0], [0, 2], [2])


def test_ab_round_example():
    res = absep.ab_round(P3, ((1,),), 1, [0], [2], [0.6])
    assert res.separator == (1,) and res.fcov == 1.0
    assert res.fcov <= 12 * math.log2(6) * 0.6


def test_packing_on_two_disjoint_paths():
    res = absep.sample_path_packing(C6, [0], [3], C6_FAMILY, ell=3, seed=4)
    assert res.f_value == pytest.approx(2)
    assert len(res.paths) == 6 and max(res.chi) <= 18
    assert res.recount(C6_FAMILY) == res.chi
    again = absep.sample_path_packing(C6, [0], [3], C6_FAMILY, ell=3, seed=4)
    assert again.paths == res.paths


def test_packing_disconnected():
    g = Graph(4, [(0, 1), (2, 3)])
    res = absep.sample_path_packing(g, [0], [3], ((1,), (2,)), ell=2)
    assert res.paths == () and res.f_value == 0


def test_dichotomy_branches():
    sep = absep.menger_dichotomy(P3, [0], [2], ((1,),), 1, f_target=2, ell=1)
    assert sep.branch == "separator" and sep.separator.separator == (1,)
    pack = absep.menger_dichotomy(C6, [0], [3], C6_FAMILY, 1, f_target=1, ell=3)
    assert pack.branch == "packing" and len(pack.packing.paths) >= 3
    assert all(c["pass"] for c in sep.claims + pack.claims)
    with pytest.raises(InfeasibleLP):
        absep.menger_dichotomy(P3, [0], [2], ((),), 1, f_target=1, ell=1)


def test_uv_separator_on_path():
    res = absep.small_alpha_uv_separator(path(5), 0, 4, ContainerParams(2, 2, 1), f_target=10)
    assert res.branch == "separator" and res.separator_alpha == 1
    assert set(res.separator) <= {1, 2, 3}
    assert all(c["pass"] for c in res.claims)


def test_uv_packing_on_complete_bipartite():
    res = absep.small_alpha_uv_separator(complete_bipartite(4, 4), 0, 1, ContainerParams(1, 3, 1), f_target=1)
    assert res.branch == "packing"
    assert res.witness_omega <= 12 * res.a * res.ell + 1
    assert all(c["pass"] for c in res.claims)


def test_tail_examples():
    assert absep.empirical_tail_check(0.1, 10, 6, 100_000).passed
    assert absep.empirical_tail_check(0.0, 10, 1, 1000).frequency == 0
    assert absep.empirical_tail_check(0.1, 10, 11, 1000).frequency == 0


def _instance(data, max_n=8):
    g = data.draw(graphs(min_n=3, max_n=max_n))
    f = maximal_cliques(g)
    a = data.draw(st.lists(st.integers(0, g.n - 1), min_size=1, max_size=2, unique=True))
    b = data.draw(st.lists(st.integers(0, g.n - 1), min_size=1, max_size=2, unique=True))
    return g, f, a, b


def path_weight_oracle(g, f, y, a):
    """Minimum over every simple path from a to v of the weight of members it meets."""
    out = []
    for v in range(g.n):
        best = math.inf
        for p in all_simple_paths(g, a, [v]):
            best = min(best, sum(w for s, w in zip(f, y) if set(s) & set(p)))
        out.append(best)
    return out


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_induced_distances_match_all_paths(data):
    g, f, a, _ = _instance(data, max_n=7)
    y = data.draw(st.lists(st.floats(0, 1), min_size=len(f), max_size=len(f)))
    state = absep.threshold_state(g, f, y, a)
    assert state.distance == pytest.approx(path_weight_oracle(g, f, y, a))
    state.check(g)


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_rounding_bounds_on_random_instances(data):
    g, f, a, b = _instance(data)
    sol = lp.solve_lp(lp.build_ab_separator_lp(g, a, b, f))
    x = lp.family_weights(sol, f)
    a_bound = max(alpha(g, s) for s in f)
    y = absep.normalize_fractional_separator(g, f, x)
    assert sum(y) <= 2 * sum(x) + 1e-9
    for p in enumerate_induced_paths(g, a, b):
        assert sum(w for s, w in zip(f, y) if set(s) & set(p)) >= 1 - 1e-7
    for mode in ("exact", "vw"):
        res = absep.ab_round(g, f, a_bound, a, b, x, mode=mode)
        assert is_ab_separator(g, res.separator, a, b)
        assert res.fcov <= 12 * absep.log2_2n(g.n) * a_bound * sum(x) + 1e-6
        assert all(c["pass"] for c in res.claims)


@settings(max_examples=40, deadline=None)
@given(st.data(), st.integers(0, 2 ** 32))
def test_packings_recount(data, seed):
    g, f, a, b = _instance(data)
    ell = math.ceil(math.log2(2 * len(f)))
    res = absep.sample_path_packing(g, a, b, f, ell, seed=seed)
    assert res.recount(f) == res.chi
    assert max(res.chi, default=0) <= 6 * ell
    assert len(res.paths) == math.ceil(res.f_value * ell - 1e-9)
    for p in res.paths:
        assert is_induced_path(g, p)
        assert (p[0] in a and p[-1] in b) or (p[-1] in a and p[0] in b)


def test_rng_streams_are_keyed():
    a = absep.rng_stream(5, 0).random(4)
    assert np.array_equal(a, absep.rng_stream(5, 0).random(4))
    assert not np.array_equal(a, absep.rng_stream(5, 1).random(4))
