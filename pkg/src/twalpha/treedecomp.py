"""Tree decompositions: checking, the separator-driven builder, and exact
oracles for treewidth and tree-independence number on tiny graphs.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Callable, Iterable, Sequence

from .errors import InstanceTooLarge, InvariantViolation, PreconditionError, ProviderFailure
from .graph import (Graph, VertexSet, alpha, alpha_mask, alpha_table, bits, component_masks, is_ab_separator,
                    is_balanced_separator, maximum_independent_set, members, to_mask, vertex_set)

Provider = Callable[[Graph, VertexSet], tuple[VertexSet, VertexSet, VertexSet]]


@dataclass(frozen=True)
class TreeDecomposition:
    nodes: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]
    bags: dict

    @classmethod
    def single_bag(cls, vertices: Iterable[int]) -> "TreeDecomposition":
        return cls((0,), (), {0: tuple(sorted(vertices))})

    def to_dict(self) -> dict:
        return {"nodes": list(self.nodes), "edges": [list(e) for e in self.edges],
                "bags": {str(t): list(self.bags[t]) for t in self.nodes}}

    @classmethod
    def from_dict(cls, d: dict) -> "TreeDecomposition":
        nodes = tuple(int(t) for t in d["nodes"])
        bags = {int(t): tuple(sorted(int(v) for v in b)) for t, b in d["bags"].items()}
        return cls(nodes, tuple((int(a), int(b)) for a, b in d["edges"]), bags)

    def bag(self, t: int) -> VertexSet:
        return self.bags.get(t, ())


@dataclass
class TDReport:
    is_tree: bool
    uncovered_edge: tuple[int, int] | None
    missing_vertex: int | None
    disconnected_vertex: int | None
    out_of_range: tuple[int, ...]
    width: int
    passed: bool

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def _is_tree(nodes: Sequence[int], edges: Sequence[tuple[int, int]]) -> bool:
    if not nodes:
        return False
    idx = {t: i for i, t in enumerate(nodes)}
    if len(idx) != len(nodes) or len(edges) != len(nodes) - 1:
        return False
    parent = list(range(len(nodes)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for a, b in edges:
        if a not in idx or b not in idx:
            return False
        ra, rb = find(idx[a]), find(idx[b])
        if ra == rb:
            return False
        parent[ra] = rb
    return True


def verify_td(g: Graph, td: TreeDecomposition) -> TDReport:
    """Check both tree-decomposition axioms and report the first witness of each failure."""
    tree = _is_tree(td.nodes, td.edges)
    masks = {t: to_mask(td.bag(t)) for t in td.nodes}
    bad = tuple(sorted({v for t in td.nodes for v in td.bag(t) if not 0 <= v < g.n}))
    uncovered = next(((u, v) for u, v in g.edges()
                      if not any(m >> u & 1 and m >> v & 1 for m in masks.values())), None)
    missing = disconnected = None
    nbrs = {t: [] for t in td.nodes}
    for a, b in td.edges:
        if a in nbrs and b in nbrs:
            nbrs[a].append(b)
            nbrs[b].append(a)
    for v in range(g.n):
        occ = [t for t in td.nodes if masks[t] >> v & 1]
        if not occ:
            missing = v if missing is None else missing
            continue
        seen, stack = {occ[0]}, [occ[0]]
        while stack:
            t = stack.pop()
            for s in nbrs[t]:
                if s not in seen and masks[s] >> v & 1:
                    seen.add(s)
                    stack.append(s)
        if len(seen) != len(occ) and disconnected is None:
            disconnected = v
    ok = tree and uncovered is None and missing is None and disconnected is None and not bad
    return TDReport(tree, uncovered, missing, disconnected, bad, td_width(g, td), ok)


def td_independence(g: Graph, td: TreeDecomposition) -> int:
    return max((alpha(g, td.bag(t)) for t in td.nodes), default=0)


def td_claims(g: Graph, td: TreeDecomposition, a_target: int) -> list[dict]:
    rep = verify_td(g, td)
    bound = math.ceil(1.5 * a_target)
    ind = td_independence(g, td)
    return [{"name": "valid tree decomposition", "claimed": True, "achieved": rep.passed, "pass": rep.passed},
            {"name": "bag independence ≤ ⌈1.5·a_target⌉", "claimed": bound, "achieved": ind, "pass": ind <= bound}]


def td_width(g: Graph, td: TreeDecomposition) -> int:
    return max((len(td.bag(t)) for t in td.nodes), default=0) - 1


# ---------------------------------------------------------------------------
# builder


@dataclass
class BuildLog:
    """Every provider query made by the builder, in order."""

    queries: list = field(default_factory=list)

    def record(self, W, I, answer) -> None:
        self.queries.append({"W": list(W), "I": list(I),
                             "I1": list(answer[0]), "I2": list(answer[1]), "S": list(answer[2])})


def extend_to_alpha(g: Graph, z: int, w: int, a: int) -> int:
    """Grow ``z`` inside ``w`` in index order, keeping α ≤ a, until α reaches a."""
    cur = alpha_mask(g, z)
    for v in bits(w & ~z):
        if cur >= a:
            break
        nxt = alpha_mask(g, z | 1 << v)
        if nxt <= a:
            z |= 1 << v
            cur = nxt
    return z


def _check_answer(h: Graph, I: VertexSet, ans) -> tuple[VertexSet, VertexSet, VertexSet]:
    i1, i2, s = (vertex_set(h, x) for x in ans)
    iset = set(I)
    problems = []
    if not i1 or not i2:
        problems.append("empty side")
    if not set(i1) <= iset or not set(i2) <= iset or set(i1) & set(i2):
        problems.append("sides are not disjoint subsets of I")
    if set(s) & (set(i1) | set(i2)):
        problems.append("separator meets a side")
    if not is_ab_separator(h, s, i1, i2):
        problems.append("not a separator")
    if not problems and alpha(h, s) > min(len(i1), len(i2)):
        problems.append(f"α(S)={alpha(h, s)} exceeds min side {min(len(i1), len(i2))}")
    if problems:
        raise InvariantViolation("provider broke its contract: " + "; ".join(problems))
    return i1, i2, s


def build_td_small_alpha(g: Graph, a_target: int, provider: Provider, z: Iterable[int] = (),
                         log: BuildLog | None = None) -> TreeDecomposition:
    """Tree decomposition with every bag of independence number ≤ ⌈1.5·a_target⌉.

    ``provider(h, I)`` receives an induced subgraph ``h`` and an independent
    set ``I`` of size ``a_target`` (both in ``h``'s indices) and returns
    ``(I1, I2, S)``, or raises ProviderFailure. The initial set ``z`` ends up
    inside the root bag.
    """
    if a_target < 1:
        raise PreconditionError("a_target must be positive")
    z = to_mask(vertex_set(g, z))
    if alpha_mask(g, z) > a_target:
        raise PreconditionError("initial set already has independence number above a_target")
    bags: dict[int, VertexSet] = {}
    edges: list[tuple[int, int]] = []
    log = log if log is not None else BuildLog()

    def build(w: int, zmask: int) -> int:
        node = len(bags)
        if alpha_mask(g, w) <= a_target:
            bags[node] = members(w)
            return node
        zstar = extend_to_alpha(g, zmask, w, a_target)
        I = maximum_independent_set(g, members(zstar))
        h = g.induced_subgraph(members(w))
        try:
            ans = provider(h, h.localize(I))
        except ProviderFailure as e:
            detail = dict(e.detail)
            detail.setdefault("W", members(w))
            raise ProviderFailure(str(e), I, detail) from e
        i1, i2, s = (h.lift(x) for x in _check_answer(h, h.localize(I), ans))
        log.record(members(w), I, (i1, i2, s))
        smask = to_mask(s)
        bags[node] = members(zstar | smask)
        for c in component_masks(g, g.full_mask & ~w | smask):
            ns = smask & g.neighborhood_mask(c)
            zi = (zstar & c) | ns
            if alpha_mask(g, zi) > a_target:
                raise InvariantViolation("child interface exceeds a_target")
            child = build(c | ns, zi)
            edges.append((node, child))
        return node

    build(g.full_mask, z)
    return TreeDecomposition(tuple(range(len(bags))), tuple(edges), bags)


def _best_split(masses: list[int]) -> tuple[int, int]:
    """Split component masses into two groups maximizing the smaller side.

    Returns (value, bitmask of components in the first group).
    """
    best = (0, 0)
    k = len(masses)
    total = sum(masses)
    for sel in range(1, (1 << k) - 1):
        left = sum(masses[i] for i in range(k) if sel >> i & 1)
        val = min(left, total - left)
        if val > best[0]:
            best = (val, sel)
    return best


def exhaustive_provider(h: Graph, I: VertexSet, cap: int = 14) -> tuple[VertexSet, VertexSet, VertexSet]:
    """Smallest separator (then lexicographically first) that splits ``I`` into two
    nonempty sides each at least as large as its independence number.
    """
    if h.n > cap:
        raise InstanceTooLarge(f"exhaustive provider limited to {cap} vertices, got {h.n}")
    table = alpha_table(h, cap)
    imask = to_mask(I)
    for size in range(h.n + 1):
        for combo in combinations(range(h.n), size):
            s = to_mask(combo)
            comps = [c for c in component_masks(h, s) if c & imask]
            if len(comps) < 2:
                continue
            masses = [bin(c & imask).count("1") for c in comps]
            val, sel = _best_split(masses)
            if val >= max(1, table[s]):
                i1 = [c for j, c in enumerate(comps) if sel >> j & 1]
                i2 = [c for j, c in enumerate(comps) if not sel >> j & 1]
                return members(imask & _union(i1)), members(imask & _union(i2)), combo
    raise ProviderFailure("no separator splits the independent set evenly enough", I)


def _union(masks) -> int:
    out = 0
    for m in masks:
        out |= m
    return out


# ---------------------------------------------------------------------------
# oracles


def _q_masks(g: Graph, s: int, v: int) -> int:
    """Vertices outside ``s ∪ {v}`` reachable from ``v`` through ``s``."""
    inside = s | 1 << v
    seen = 1 << v
    frontier = 1 << v
    out = 0
    while frontier:
        nxt = 0
        for x in bits(frontier):
            nb = g.adj[x]
            out |= nb & ~inside
            nxt |= nb & s & ~seen
        seen |= nxt
        frontier = nxt
    return out


def _elimination_dp(g: Graph, cost: Callable[[int], int]) -> int:
    """min over elimination orders of the max cost of {v} ∪ Q(eliminated, v)."""
    full = g.full_mask
    best = [0] * (1 << g.n)
    best[0] = -1
    for s in range(1, full + 1):
        val = math.inf
        for v in bits(s):
            prev = s & ~(1 << v)
            c = max(best[prev], cost(_q_masks(g, prev, v) | 1 << v))
            if c < val:
                val = c
        best[s] = val
    return best[full]


def brute_tw(g: Graph, cap: int = 10) -> int:
    """Exact treewidth through a subset dynamic program over elimination orders."""
    if g.n > cap:
        raise InstanceTooLarge(f"brute_tw limited to {cap} vertices, got {g.n}")
    if g.n == 0:
        return -1
    return _elimination_dp(g, lambda m: bin(m).count("1") - 1)


def brute_tw_alpha(g: Graph, cap: int = 12) -> int:
    """Exact tree-independence number.

    Bags of the elimination game are contained in the cliques of any chordal
    supergraph ordered compatibly, so minimizing the largest bag independence
    over elimination orders is exact.
    """
    if g.n > cap:
        raise InstanceTooLarge(f"brute_tw_alpha limited to {cap} vertices, got {g.n}")
    if g.n == 0:
        return 0
    table = alpha_table(g, cap)
    return _elimination_dp(g, lambda m: table[m])


def elimination_decomposition(g: Graph, order: Sequence[int]) -> TreeDecomposition:
    """Tree decomposition read off an elimination order."""
    if sorted(order) != list(range(g.n)):
        raise PreconditionError("order must be a permutation of the vertices")
    pos = {v: i for i, v in enumerate(order)}
    done = 0
    bags = {}
    edges = []
    for i, v in enumerate(order):
        q = _q_masks(g, done, v)
        bags[i] = members(q | 1 << v)
        if q:
            nxt = min(bits(q), key=pos.__getitem__)
            edges.append((i, pos[nxt]))
        done |= 1 << v
    # eliminations with empty Q start new trees; chain the roots together
    roots = [i for i, v in enumerate(order) if not _q_masks(g, to_mask(order[:i]), v)]
    edges += list(zip(roots, roots[1:]))
    return TreeDecomposition(tuple(range(g.n)), tuple(edges), bags)


@dataclass
class SeparatorCheck:
    separator: VertexSet | None
    tw_lower_bound: int | None
    brute_tw: int | None

    @property
    def found(self) -> bool:
        return self.separator is not None


def check_tw_balanced_separator(g: Graph, z: Iterable[int], k: int, cap: int = 12,
                                tw_cap: int = 10) -> SeparatorCheck:
    """Search for a (Z, 1/2)-balanced separator of size ≤ k; failing that, the
    absence certifies treewidth ≥ k.

    A graph of treewidth t has such a separator of size ≤ t + 1 (one bag), so
    a missing separator of size ≤ k only rules out t ≤ k - 1. Size ≤ t is not
    enough in general: one 7-vertex graph of treewidth 2 needs three vertices.
    """
    if g.n > cap:
        raise InstanceTooLarge(f"balanced separator search limited to {cap} vertices, got {g.n}")
    if k < 0:
        raise PreconditionError("k must be nonnegative")
    z = vertex_set(g, z)
    half = Fraction(1, 2)
    if k >= g.n:
        return SeparatorCheck(tuple(range(g.n)), None, None)
    for size in range(k + 1):
        for combo in combinations(range(g.n), size):
            if is_balanced_separator(g, combo, z, half):
                return SeparatorCheck(combo, None, None)
    tw = brute_tw(g) if g.n <= tw_cap else None
    if tw is not None and tw + 1 <= k:
        raise InvariantViolation(f"treewidth {tw} yet no balanced separator of size ≤ {k}")
    return SeparatorCheck(None, k, tw)


def min_balanced_separator_size(g: Graph, z: Iterable[int], cap: int = 12) -> int:
    z = vertex_set(g, z)
    for k in range(g.n + 1):
        if check_tw_balanced_separator(g, z, k, cap, tw_cap=-1).found:
            return k
    return g.n
