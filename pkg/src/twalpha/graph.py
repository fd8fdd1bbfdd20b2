"""Immutable graphs on vertices ``0..n-1`` and exact small-scale primitives.

Vertex sets are plain sorted tuples of ints. Internally most routines work on
int bitmasks, where bit ``v`` stands for vertex ``v``.
"""
from __future__ import annotations

import json
import random
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .errors import CapExceeded, InstanceTooLarge, PreconditionError

VertexSet = tuple[int, ...]
Family = tuple[VertexSet, ...]

ALPHA_CAP = 40
CLIQUE_OUTPUT_CAP = 200_000
PATH_CAP = 200_000


def bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def to_mask(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def members(mask: int) -> VertexSet:
    return tuple(bits(mask))


def as_fraction(value) -> Fraction:
    """Exact rational view of a user-facing ratio (floats go through their repr)."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        return Fraction(repr(value))
    return Fraction(value)


class Graph:
    """Simple undirected graph with bitmask adjacency.

    ``origin`` is set on induced subgraphs: ``origin[i]`` is the parent index
    of local vertex ``i``.
    """

    __slots__ = ("n", "adj", "label", "origin", "_alpha_cache")

    def __init__(self, n: int, edges: Iterable[Sequence[int]] = (), label: str | None = None,
                 origin: VertexSet | None = None):
        if n < 0:
            raise PreconditionError("vertex count must be nonnegative")
        adj = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise PreconditionError(f"edge ({u},{v}) out of range for n={n}")
            if u == v:
                raise PreconditionError(f"self-loop at {u}")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        self.n = n
        self.adj: tuple[int, ...] = tuple(adj)
        self.label = label
        self.origin = tuple(origin) if origin is not None else None
        self._alpha_cache: dict[int, int] = {}

    @classmethod
    def from_masks(cls, masks: Sequence[int], label: str | None = None,
                   origin: VertexSet | None = None) -> "Graph":
        g = cls(0, label=label, origin=origin)
        g.n = len(masks)
        g.adj = tuple(masks)
        return g

    # basic queries
    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def neighbors(self, v: int) -> VertexSet:
        return members(self.adj[v])

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in bits(self.adj[u] >> (u + 1) << (u + 1))]

    def edge_count(self) -> int:
        return sum(m.bit_count() for m in self.adj) // 2

    def closed_mask(self, v: int) -> int:
        return self.adj[v] | (1 << v)

    def neighborhood_mask(self, mask: int) -> int:
        out = 0
        for v in bits(mask):
            out |= self.adj[v]
        return out

    # derived graphs
    def complement(self) -> "Graph":
        full = self.full_mask
        return Graph.from_masks([full & ~m & ~(1 << v) for v, m in enumerate(self.adj)],
                                label=f"complement({self.label})" if self.label else None)

    def induced_subgraph(self, vertices: Iterable[int]) -> "Graph":
        keep = sorted(set(vertices))
        index = {v: i for i, v in enumerate(keep)}
        masks = []
        for v in keep:
            m = 0
            for w in bits(self.adj[v] & to_mask(keep)):
                m |= 1 << index[w]
            masks.append(m)
        return Graph.from_masks(masks, label=self.label, origin=tuple(keep))

    def remove(self, vertices: Iterable[int]) -> "Graph":
        gone = set(vertices)
        return self.induced_subgraph(v for v in range(self.n) if v not in gone)

    def lift(self, vertices: Iterable[int]) -> VertexSet:
        """Map local vertex indices of an induced subgraph to parent indices."""
        if self.origin is None:
            return tuple(sorted(vertices))
        return tuple(sorted(self.origin[v] for v in vertices))

    def localize(self, vertices: Iterable[int]) -> VertexSet:
        """Inverse of :meth:`lift`, dropping parent vertices not present here."""
        if self.origin is None:
            return tuple(sorted(vertices))
        index = {v: i for i, v in enumerate(self.origin)}
        return tuple(sorted(index[v] for v in vertices if v in index))

    def __eq__(self, other) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self.adj == other.adj

    def __hash__(self) -> int:
        return hash((self.n, self.adj))

    def __repr__(self) -> str:
        name = f" {self.label!r}" if self.label else ""
        return f"<Graph{name} n={self.n} m={self.edge_count()}>"

    # serialization
    def to_dict(self) -> dict:
        d = {"n": self.n, "edges": [list(e) for e in self.edges()]}
        if self.label is not None:
            d["label"] = self.label
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "Graph":
        return cls(int(d["n"]), [tuple(e) for e in d.get("edges", [])], label=d.get("label"))


def load_graph(path: str) -> Graph:
    with open(path, encoding="utf-8") as fh:
        return Graph.from_dict(json.load(fh))


def save_graph(g: Graph, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(g.to_dict(), fh)


def vertex_set(g: Graph, vertices: Iterable[int]) -> VertexSet:
    out = tuple(sorted(set(vertices)))
    for v in out:
        if not 0 <= v < g.n:
            raise PreconditionError(f"vertex {v} out of range for n={g.n}")
    return out


def normalize_family(g: Graph, sets: Iterable[Iterable[int]]) -> Family:
    """Validate a family and freeze it; order (and therefore indexing) is kept."""
    return tuple(vertex_set(g, s) for s in sets)


def membership_masks(n: int, family: Family) -> list[int]:
    """For each vertex, the bitmask of family indices whose member contains it."""
    out = [0] * n
    for i, s in enumerate(family):
        for v in s:
            out[v] |= 1 << i
    return out


# ---------------------------------------------------------------------------
# independence and clique numbers


def _color_sort(adj: Sequence[int], cand: int) -> tuple[list[int], list[int]]:
    order: list[int] = []
    colors: list[int] = []
    color = 0
    uncolored = cand
    while uncolored:
        color += 1
        q = uncolored
        while q:
            low = q & -q
            v = low.bit_length() - 1
            q &= ~adj[v] & ~low
            uncolored &= ~low
            order.append(v)
            colors.append(color)
    return order, colors


def max_clique_mask(adj: Sequence[int], cand: int) -> int:
    """Maximum clique inside ``cand`` (branch and bound with a coloring bound)."""
    best = [0, 0]  # size, mask

    def expand(clique: int, size: int, p: int) -> None:
        order, colors = _color_sort(adj, p)
        for i in range(len(order) - 1, -1, -1):
            if size + colors[i] <= best[0]:
                return
            v = order[i]
            bit = 1 << v
            sub = p & adj[v]
            if sub:
                expand(clique | bit, size + 1, sub)
            elif size + 1 > best[0]:
                best[0], best[1] = size + 1, clique | bit
            p &= ~bit

    if cand:
        expand(0, 0, cand)
    return best[1]


def _check_cap(size: int, cap: int) -> None:
    if size > cap:
        raise InstanceTooLarge(f"exact search on {size} vertices exceeds cap {cap}")


def _anti_adj(g: Graph, mask: int) -> list[int]:
    full = g.full_mask
    return [(full & ~m & ~(1 << v)) & mask for v, m in enumerate(g.adj)]


def max_independent_mask(g: Graph, mask: int, cap: int = ALPHA_CAP) -> int:
    _check_cap(mask.bit_count(), cap)
    return max_clique_mask(_anti_adj(g, mask), mask)


def alpha_mask(g: Graph, mask: int, cap: int = ALPHA_CAP) -> int:
    hit = g._alpha_cache.get(mask)
    if hit is None:
        hit = max_independent_mask(g, mask, cap).bit_count()
        g._alpha_cache[mask] = hit
    return hit


def alpha(g: Graph, s: Iterable[int] | None = None, cap: int = ALPHA_CAP) -> int:
    """Independence number of ``G[s]`` (whole graph when ``s`` is None)."""
    mask = g.full_mask if s is None else to_mask(vertex_set(g, s))
    return alpha_mask(g, mask, cap)


def omega(g: Graph, s: Iterable[int] | None = None, cap: int = ALPHA_CAP) -> int:
    mask = g.full_mask if s is None else to_mask(vertex_set(g, s))
    _check_cap(mask.bit_count(), cap)
    return max_clique_mask([m & mask for m in g.adj], mask).bit_count()


def maximum_independent_set(g: Graph, s: Iterable[int] | None = None, cap: int = ALPHA_CAP) -> VertexSet:
    mask = g.full_mask if s is None else to_mask(vertex_set(g, s))
    return members(max_independent_mask(g, mask, cap))


def is_independent(g: Graph, s: Iterable[int]) -> bool:
    m = to_mask(s)
    return all(not (g.adj[v] & m) for v in bits(m))


def is_clique(g: Graph, s: Iterable[int]) -> bool:
    m = to_mask(s)
    return all((g.adj[v] | (1 << v)) & m == m for v in bits(m))


def maximal_cliques(g: Graph, cap: int = CLIQUE_OUTPUT_CAP) -> Family:
    """All inclusion-maximal cliques, sorted lexicographically."""
    found: list[int] = []
    adj = g.adj

    def bk(r: int, p: int, x: int) -> None:
        if not p and not x:
            found.append(r)
            if len(found) > cap:
                raise CapExceeded(f"more than {cap} maximal cliques", len(found))
            return
        # pivot maximizing |P ∩ N(u)|
        pivot = max(bits(p | x), key=lambda u: (p & adj[u]).bit_count())
        for v in bits(p & ~adj[pivot]):
            bit = 1 << v
            bk(r | bit, p & adj[v], x & adj[v])
            p &= ~bit
            x |= bit

    if g.n:
        bk(0, g.full_mask, 0)
    return tuple(sorted(members(m) for m in found))


# ---------------------------------------------------------------------------
# paths, components, separators


def iter_induced_paths_from(g: Graph, start: int, allowed: int | None = None) -> Iterator[tuple[int, ...]]:
    """Every induced path that starts at ``start`` and stays inside ``allowed``.

    Includes the single-vertex path. Each path is yielded once, oriented from
    ``start``.
    """
    if allowed is None:
        allowed = g.full_mask
    if not allowed >> start & 1:
        return
    adj = g.adj
    path = [start]

    def rec(last: int, blocked: int) -> Iterator[tuple[int, ...]]:
        yield tuple(path)
        nxt_blocked = blocked | adj[last] | (1 << last)
        for w in bits(adj[last] & allowed & ~blocked):
            path.append(w)
            yield from rec(w, nxt_blocked)
            path.pop()

    yield from rec(start, 1 << start)


def canonical_path(p: Sequence[int]) -> tuple[int, ...]:
    p = tuple(p)
    return p if p[0] <= p[-1] else p[::-1]


def enumerate_induced_paths(g: Graph, a: Iterable[int], b: Iterable[int], cap: int = PATH_CAP,
                            allowed: int | None = None) -> list[tuple[int, ...]]:
    """All induced paths with one end in ``a`` and the other in ``b``.

    A path and its reverse are one object, stored with the smaller endpoint
    first. Output is sorted by (length, vertices).
    """
    a = vertex_set(g, a)
    b = vertex_set(g, b)
    if not a or not b:
        raise PreconditionError("endpoint sets must be nonempty")
    bmask = to_mask(b)
    seen: set[tuple[int, ...]] = set()
    for s in a:
        for p in iter_induced_paths_from(g, s, allowed):
            if bmask >> p[-1] & 1:
                c = canonical_path(p)
                if c not in seen:
                    seen.add(c)
                    if len(seen) > cap:
                        raise CapExceeded(f"more than {cap} induced paths", len(seen))
    return sorted(seen, key=lambda p: (len(p), p))


def is_induced_path(g: Graph, p: Sequence[int]) -> bool:
    if not p or len(set(p)) != len(p):
        return False
    for i, u in enumerate(p):
        for j in range(i + 1, len(p)):
            if g.has_edge(u, p[j]) != (j == i + 1):
                return False
    return True


def reachable_mask(g: Graph, sources: int, allowed: int) -> int:
    seen = sources & allowed
    frontier = seen
    while frontier:
        nxt = 0
        for v in bits(frontier):
            nxt |= g.adj[v]
        nxt &= allowed & ~seen
        seen |= nxt
        frontier = nxt
    return seen


def component_masks(g: Graph, removed: int = 0) -> list[int]:
    """Components of ``G - removed`` as masks, ordered by smallest vertex."""
    rest = g.full_mask & ~removed
    out = []
    while rest:
        low = rest & -rest
        comp = reachable_mask(g, low, rest)
        out.append(comp)
        rest &= ~comp
    return out


def components(g: Graph, removed: Iterable[int] = ()) -> list[VertexSet]:
    return [members(c) for c in component_masks(g, to_mask(removed))]


def is_connected(g: Graph) -> bool:
    return len(component_masks(g)) <= 1


def is_ab_separator(g: Graph, s: Iterable[int], a: Iterable[int], b: Iterable[int]) -> bool:
    """True iff every path from ``a`` to ``b`` meets ``s``.

    A vertex of ``a ∩ b`` outside ``s`` is itself such a path, so it makes the
    answer false.
    """
    smask = to_mask(s)
    allowed = g.full_mask & ~smask
    reach = reachable_mask(g, to_mask(a) & allowed, allowed)
    return not (reach & to_mask(b))


def is_balanced_separator(g: Graph, s: Iterable[int], z: Iterable[int], phi) -> bool:
    phi = as_fraction(phi)
    if not 0 < phi <= 1:
        raise PreconditionError("phi must lie in (0, 1]")
    zmask = to_mask(z)
    limit = phi * zmask.bit_count()
    return all((c & zmask).bit_count() <= limit for c in component_masks(g, to_mask(s)))


def neighborhood_closed(g: Graph, z: Iterable[int]) -> VertexSet:
    zm = to_mask(z)
    return members(zm | g.neighborhood_mask(zm))


# ---------------------------------------------------------------------------
# generators


def complement_kKw(k: int, w: int) -> Graph:
    """Complement of ``k`` disjoint cliques of size ``w``: complete k-partite, parts of size w."""
    if k < 1 or w < 1:
        raise PreconditionError("sizes must be positive")
    part = [v // w for v in range(k * w)]
    edges = [(u, v) for u in range(k * w) for v in range(u + 1, k * w) if part[u] != part[v]]
    return Graph(k * w, edges, label=f"complement_kKw({k},{w})")


def complete_bipartite(s: int, t: int | None = None) -> Graph:
    t = s if t is None else t
    if s < 1 or t < 1:
        raise PreconditionError("sizes must be positive")
    return Graph(s + t, [(u, s + v) for u in range(s) for v in range(t)], label=f"K_{{{s},{t}}}")


def cycle(n: int) -> Graph:
    if n < 3:
        raise PreconditionError("a cycle needs at least 3 vertices")
    return Graph(n, [(i, (i + 1) % n) for i in range(n)], label=f"C_{n}")


def path(n: int) -> Graph:
    if n < 1:
        raise PreconditionError("sizes must be positive")
    return Graph(n, [(i, i + 1) for i in range(n - 1)], label=f"P_{n}")


def complete(n: int) -> Graph:
    if n < 1:
        raise PreconditionError("sizes must be positive")
    return Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n)], label=f"K_{n}")


def gnp(n: int, p: float, seed: int) -> Graph:
    if n < 1 or not 0 <= p <= 1:
        raise PreconditionError("need n ≥ 1 and 0 ≤ p ≤ 1")
    rng = random.Random(seed)
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    return Graph(n, edges, label=f"gnp({n},{p},{seed})")


GENERATORS = {
    "complement_kKw": complement_kKw,
    "complete_bipartite": complete_bipartite,
    "cycle": cycle,
    "path": path,
    "complete": complete,
    "gnp": gnp,
}


def generate(kind: str, **params) -> Graph:
    try:
        fn = GENERATORS[kind]
    except KeyError:
        raise PreconditionError(f"unknown graph kind {kind!r}") from None
    return fn(**params)


def alpha_table(g: Graph, cap: int = 16) -> list[int]:
    """Independence number of every vertex subset, indexed by bitmask."""
    _check_cap(g.n, cap)
    table = [0] * (1 << g.n)
    for s in range(1, 1 << g.n):
        v = (s & -s).bit_length() - 1
        without = s & ~(1 << v)
        table[s] = max(table[without], 1 + table[without & ~g.adj[v]])
    return table


def maximal_sets_with_alpha_at_most(g: Graph, bound: int, table: list[int] | None = None) -> list[int]:
    """Inclusion-maximal vertex sets (as masks) whose independence number is ≤ ``bound``."""
    table = alpha_table(g) if table is None else table
    full = g.full_mask
    out = []
    for s in range(1 << g.n):
        if table[s] <= bound and all(table[s | (1 << v)] > bound for v in bits(full & ~s)):
            out.append(s)
    return out


def family_distances(g: Graph, owners: Sequence[int], weights: Sequence[float], sources: Iterable[int],
                     allowed: int | None = None, cap: int = PATH_CAP) -> list[float]:
    """Minimum, over induced paths from a source to ``v``, of the total weight of
    family members the path meets.

    ``owners[v]`` is the bitmask of member indices containing ``v``. Vertices
    no source reaches get ``inf``.
    """
    if allowed is None:
        allowed = g.full_mask
    inf = float("inf")
    best = [inf] * g.n
    adj = g.adj
    count = 0

    def gain(hit: int, v: int) -> float:
        return sum(weights[j] for j in bits(owners[v] & ~hit))

    for s in sorted(set(sources)):
        if not allowed >> s & 1:
            continue
        stack = [(s, 1 << s, owners[s], gain(0, s))]
        while stack:
            last, blocked, hit, w = stack.pop()
            count += 1
            if count > cap:
                raise CapExceeded(f"more than {cap} induced paths explored", count)
            if w < best[last]:
                best[last] = w
            nxt_blocked = blocked | adj[last] | (1 << last)
            for x in bits(adj[last] & allowed & ~blocked):
                stack.append((x, nxt_blocked, hit | owners[x], w + gain(hit, x)))
    return best
