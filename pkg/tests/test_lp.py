import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import all_simple_paths, brute_alpha, graphs
from twalpha import lp
from twalpha.errors import InfeasibleLP
from twalpha.graph import Graph, complete_bipartite, cycle, gnp, maximal_cliques, path


def vertex_enumeration(c, rows, rhs):
    """Minimum of c·x over {rows·x ≥ rhs, x ≥ 0} by trying every basis; None if infeasible."""
    n = len(c)
    a = np.vstack([rows, np.eye(n)]) if len(rows) else np.eye(n)
    b = np.concatenate([rhs, np.zeros(n)]) if len(rows) else np.zeros(n)
    best = None
    for idx in itertools.combinations(range(len(a)), n):
        sub = a[list(idx)]
        if abs(np.linalg.det(sub)) < 1e-9:
            continue
        x = np.linalg.solve(sub, b[list(idx)])
        if np.all(a @ x >= b - 1e-9):
            val = float(c @ x)
            best = val if best is None else min(best, val)
    return best


def model_from(c, rows, rhs):
    m = lp.LPModel()
    for j, cost in enumerate(c):
        m.add_variable(f"v{j}", cost=cost)
    for i, (row, r) in enumerate(zip(rows, rhs)):
        m.add_constraint({f"v{j}": a for j, a in enumerate(row) if a}, ">=", r, ("row", i))
    return m


def test_single_constraint():
    m = lp.LPModel()
    m.add_variable("x", cost=1)
    m.add_constraint({"x": 1}, ">=", 1, "c")
    for method in ("highs", "simplex", "exact"):
        sol = lp.solve_lp(m, method=method)
        assert sol.objective == 1 and sol.dual("c") == 1


def test_upper_bound_example():
    m = lp.LPModel()
    m.add_variable("x", cost=1, upper=Fraction(1, 2))
    m.add_variable("y", cost=1)
    m.add_constraint({"x": 1, "y": 1}, ">=", 2, "sum")
    assert lp.solve_lp(m, method="exact").objective == 2
    assert vertex_enumeration(np.array([1.0, 1.0]), np.array([[1.0, 1.0], [-1.0, 0.0]]),
                              np.array([2.0, -0.5])) == pytest.approx(2)


def test_infeasible():
    m = lp.LPModel()
    m.add_variable("x", cost=1, upper=0)
    m.add_constraint({"x": 1}, ">=", 1, "c")
    for method in ("highs", "simplex", "exact"):
        assert lp.solve_lp(m, method=method).status == "infeasible"


def test_text_round_trip():
    m = lp.build_balanced_separator_lp(path(5), [0, 2, 4], maximal_cliques(path(5)))
    again = lp.LPModel.from_text(m.to_text())
    assert again.to_text() == m.to_text()
    assert lp.solve_lp(again).objective == pytest.approx(float(lp.solve_lp(m).objective))


TRIANGLE = Graph(3, [(0, 1), (1, 2), (0, 2)])
PAIRS = ((0, 1), (1, 2), (0, 2))


def test_fcov_and_cov_examples():
    assert lp.fcov(TRIANGLE, PAIRS, [0, 1, 2], exact=True)[0] == Fraction(3, 2)
    assert lp.fcov(TRIANGLE, PAIRS, [0, 1], exact=True)[0] == 1
    assert lp.fcov(TRIANGLE, PAIRS, [])[0] == 0
    assert lp.cov(TRIANGLE, PAIRS, [0, 1, 2]) == 2
    assert lp.cov(TRIANGLE, PAIRS, [1]) == 1
    assert lp.cov(TRIANGLE, PAIRS, []) == 0
    with pytest.raises(InfeasibleLP):
        lp.fcov(TRIANGLE, ((0, 1),), [2])


def test_ab_lp_examples():
    p3 = path(3)
    assert lp.solve_lp(lp.build_ab_separator_lp(p3, [0], [2], ((1,),))).objective == pytest.approx(1)
    assert lp.solve_lp(lp.build_ab_separator_lp(p3, [0], [2], ((0,), (2,)))).objective == pytest.approx(1)
    split = Graph(4, [(0, 1), (2, 3)])
    m = lp.build_ab_separator_lp(split, [0], [3], ((1,), (2,)))
    assert m.constraints == [] and lp.solve_lp(m).objective == 0


def test_balanced_lp_golden():
    g = complete_bipartite(3, 3)
    sol = lp.solve_lp(lp.build_balanced_separator_lp(g, [0, 1, 2], maximal_cliques(g)), method="exact")
    assert sol.objective == Fraction(27, 170)
    highs = lp.solve_lp(lp.build_balanced_separator_lp(g, [0, 1, 2], maximal_cliques(g)))
    assert float(highs.objective) == pytest.approx(27 / 170, abs=1e-9)


def test_balanced_lp_single_vertex():
    # the diagonal distance d(u,u) is charged for the lone vertex itself
    g = path(3)
    sol = lp.solve_lp(lp.build_balanced_separator_lp(g, [0], maximal_cliques(g)), method="exact")
    assert sol.objective == Fraction(1, 10)


@settings(max_examples=25, deadline=None)
@given(graphs(min_n=2, max_n=7), st.data())
def test_whole_vertex_set_member_caps_optimum(g, data):
    from twalpha.graph import maximum_independent_set
    i = maximum_independent_set(g)
    sol = lp.solve_lp(lp.build_balanced_separator_lp(g, i, (tuple(range(g.n)),)))
    assert float(sol.objective) <= 1 + 1e-9


def _dual_objective(sol):
    m = sol.model
    return sum(float(sol.duals[c.tag]) * float(c.rhs) for c in m.all_constraints())


@pytest.mark.parametrize("g, i", [(complete_bipartite(3, 3), (0, 1, 2)), (cycle(6), (0, 2, 4)),
                                  (path(7), (0, 2, 4, 6)), (gnp(9, 0.3, seed=5), None)])
def test_balanced_duals(g, i):
    from twalpha.graph import maximum_independent_set
    i = i or maximum_independent_set(g)
    f = maximal_cliques(g)
    for method in ("highs", "simplex"):
        sol = lp.solve_lp(lp.build_balanced_separator_lp(g, i, f), method=method)
        assert _dual_objective(sol) == pytest.approx(float(sol.objective), abs=1e-7)
        dual = lp.extract_balanced_dual(sol, i)
        k = len(i)
        for u in i:
            assert sum(dual.eta[(u, v)] for v in i) <= k / 10 * dual.rho[u] + 1e-7
        assert 10 * dual.lp_opt <= dual.rho_total * k + 1e-7
        if dual.lp_opt > 1e-9:
            assert dual.rho_total > 0


def test_zero_dual_only_at_zero_optimum():
    g = Graph(2, [])
    m = lp.build_ab_separator_lp(g, [0], [1], ((0,), (1,)))
    sol = lp.solve_lp(m)
    assert sol.objective == 0 and all(v == 0 for v in sol.duals.values())
    sol = lp.solve_lp(lp.build_ab_separator_lp(path(3), [0], [2], ((1,),)))
    assert any(v > 0 for v in sol.duals.values())


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_simplex_matches_vertex_enumeration(data):
    n = data.draw(st.integers(1, 6))
    m = data.draw(st.integers(1, 8))
    small = st.integers(-2, 4)
    c = np.array(data.draw(st.lists(st.integers(0, 5), min_size=n, max_size=n)), dtype=float)
    rows = np.array([data.draw(st.lists(small, min_size=n, max_size=n)) for _ in range(m)], dtype=float)
    rhs = np.array(data.draw(st.lists(st.integers(-3, 4), min_size=m, max_size=m)), dtype=float)
    expected = vertex_enumeration(c, rows, rhs)
    for method in ("simplex", "exact", "highs"):
        sol = lp.solve_lp(model_from(c, rows, rhs), method=method)
        if expected is None:
            assert sol.status in ("infeasible", "unbounded")
        elif sol.status == "optimal":
            assert float(sol.objective) == pytest.approx(expected, abs=1e-9)
        else:
            # a vertex exists but the cost can still fall without bound along a ray
            assert sol.status == "unbounded"


@settings(max_examples=40, deadline=None)
@given(graphs(min_n=2, max_n=8), st.data())
def test_fcov_below_cov_and_alpha_bound(g, data):
    f = maximal_cliques(g)
    s = data.draw(st.lists(st.integers(0, g.n - 1), unique=True, max_size=g.n))
    frac = float(lp.fcov(g, f, s)[0])
    assert frac <= lp.cov(g, f, s) + 1e-9
    a = max(brute_alpha(g, m) for m in f)
    assert brute_alpha(g, s) <= a * frac + 1e-9


@settings(max_examples=30, deadline=None)
@given(graphs(min_n=2, max_n=7), st.data())
def test_induced_paths_suffice(g, data):
    a = [data.draw(st.integers(0, g.n - 1))]
    b = [data.draw(st.integers(0, g.n - 1))]
    f = maximal_cliques(g)
    m = lp.build_ab_separator_lp(g, a, b, f)
    base = lp.solve_lp(m)
    owners = [[j for j, s in enumerate(f) if v in s] for v in range(g.n)]
    for k, p in enumerate(sorted(all_simple_paths(g, a, b))):
        m.add_constraint({f"x{j}": 1 for v in p for j in owners[v]}, ">=", 1, ("simple", k))
    assert float(lp.solve_lp(m).objective) == pytest.approx(float(base.objective), abs=1e-9)
