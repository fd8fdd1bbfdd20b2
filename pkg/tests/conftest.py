import itertools

import networkx as nx
from hypothesis import strategies as st

from twalpha.graph import Graph


@st.composite
def graphs(draw, min_n=1, max_n=8):
    n = draw(st.integers(min_n, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph(n, [p for p, keep in zip(pairs, mask) if keep])


def to_nx(g: Graph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges())
    return h


def brute_alpha(g: Graph, s=None) -> int:
    s = list(range(g.n)) if s is None else list(s)
    for size in range(len(s), 0, -1):
        for sub in itertools.combinations(s, size):
            if all(not g.has_edge(u, v) for u, v in itertools.combinations(sub, 2)):
                return size
    return 0


def all_simple_paths(g: Graph, a, b):
    """Every simple path (not only induced ones) from a vertex of a to a vertex of b."""
    h = to_nx(g)
    out = set()
    for u in a:
        for v in b:
            if u == v:
                out.add((u,))
                continue
            for p in nx.all_simple_paths(h, u, v):
                out.add(tuple(p))
    return out


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    if mod is not None and mod.LINES:
        terminalreporter.section("acceptance criteria")
        for line in mod.LINES:
            terminalreporter.write_line(line)
