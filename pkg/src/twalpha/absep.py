"""A–B separators from fractional ones, path packings from the dual, and the
dichotomy between the two.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .containers import ContainerFamily, ContainerParams, build_containers_small_b
from .errors import InfeasibleLP, InvariantViolation, PreconditionError, RetriesExhausted
from .graph import (Family, Graph, PATH_CAP, alpha, bits, family_distances, is_ab_separator,
                    is_induced_path, membership_masks, omega, to_mask, vertex_set)
from .lp import DEFAULT_TOL, build_ab_separator_lp, family_weights, fcov, solve_lp

SLACK = 1e-6


def log2_2n(n: int) -> float:
    return math.log2(2 * max(n, 1))


def rng_stream(seed: int, attempt: int) -> np.random.Generator:
    """Counter-based generator keyed by (seed, attempt)."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, attempt])))


def claim(name: str, claimed, achieved, ok: bool | None = None) -> dict:
    """A (claimed, achieved, pass) record; by default ``achieved ≤ claimed``."""
    if ok is None:
        ok = achieved <= claimed
    return {"name": name, "claimed": _plain(claimed), "achieved": _plain(achieved), "pass": bool(ok)}


def _plain(v):
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    return v


# ---------------------------------------------------------------------------
# rounding


def normalize_fractional_separator(g: Graph, f: Family, x: Sequence[float]) -> tuple[float, ...]:
    """Drop weights below 1/(2n) and double the rest, capped at 1."""
    if len(x) != len(f):
        raise PreconditionError("weight vector length differs from family size")
    if any(v < 0 for v in x):
        raise PreconditionError("weights must be nonnegative")
    cut = 1 / (2 * g.n)
    return tuple(0.0 if v < cut else min(1.0, 2 * float(v)) for v in x)


@dataclass
class ThresholdState:
    distance: list[float]
    weight: list[float]
    breakpoints: list[float]

    def interval(self, v: int) -> tuple[float, float]:
        return self.distance[v] - self.weight[v], self.distance[v]

    def layer(self, r: float) -> tuple[int, ...]:
        return tuple(v for v, d in enumerate(self.distance) if d - self.weight[v] < r <= d)

    def check(self, g: Graph, tol: float = 1e-9) -> None:
        for u, v in g.edges():
            du, dv = self.distance[u], self.distance[v]
            if math.isinf(du) and math.isinf(dv):
                continue
            if dv > du + self.weight[v] + tol or du > dv + self.weight[u] + tol:
                raise InvariantViolation(f"distance labels not edge-Lipschitz on ({u},{v})")


@dataclass
class RoundingResult:
    separator: tuple[int, ...]
    fcov: float
    bound: float
    r: float
    weight_total: float
    mode: str
    distinct_layers: int
    claims: list = field(default_factory=list)

    def __iter__(self):
        return iter((self.separator, self.fcov))


def threshold_state(g: Graph, f: Family, y: Sequence[float], A: Iterable[int], mode: str = "exact",
                    path_cap: int = PATH_CAP) -> ThresholdState:
    owners = membership_masks(g.n, f)
    weight = [sum(y[j] for j in bits(owners[v])) for v in range(g.n)]
    A = vertex_set(g, A)
    if mode == "exact":
        dist = family_distances(g, owners, y, A, cap=path_cap)
    elif mode == "vw":
        dist = _vertex_weight_distances(g, weight, A)
    else:
        raise PreconditionError(f"unknown distance mode {mode!r}")
    ends = {e for v in range(g.n) if not math.isinf(dist[v]) for e in (dist[v] - weight[v], dist[v])}
    return ThresholdState(dist, weight, sorted(ends))


def _vertex_weight_distances(g: Graph, weight: list[float], A) -> list[float]:
    import heapq
    dist = [math.inf] * g.n
    heap = []
    for a in A:
        dist[a] = weight[a]
        heap.append((weight[a], a))
    heapq.heapify(heap)
    while heap:
        d, v = heapq.heappop(heap)
        if d > dist[v]:
            continue
        for w in g.neighbors(v):
            nd = d + weight[w]
            if nd < dist[w]:
                dist[w] = nd
                heapq.heappush(heap, (nd, w))
    return dist


def sweep_points(breakpoints: Iterable[float]) -> list[float]:
    """Every breakpoint in (0,1], plus midpoints between consecutive ones."""
    pts = sorted({0.0, 1.0} | {p for p in breakpoints if 0 < p < 1})
    out = pts[1:]
    out += [(a + b) / 2 for a, b in zip(pts, pts[1:])]
    return sorted(set(out))


def threshold_round(g: Graph, f: Family, a_bound: int, y: Sequence[float], A: Iterable[int],
                    B: Iterable[int], mode: str = "exact", tol: float = 1e-9,
                    path_cap: int = PATH_CAP) -> RoundingResult:
    """Best layer separator over a deterministic sweep of thresholds."""
    A, B = vertex_set(g, A), vertex_set(g, B)
    state = threshold_state(g, f, y, A, mode, path_cap)
    state.check(g)
    if mode == "exact":
        short = [b for b in B if state.distance[b] < 1 - tol]
        if short:
            raise PreconditionError(
                f"weights are not a fractional separator: a path to {short[0]} carries "
                f"{state.distance[short[0]]:.6g} < 1")
    cache: dict[tuple, float | None] = {}
    best = None
    for r in sweep_points(state.breakpoints):
        s = state.layer(r)
        if s not in cache:
            cache[s] = fcov(g, f, s)[0] if is_ab_separator(g, s, A, B) else None
        val = cache[s]
        if val is not None and (best is None or val < best[1] - 1e-12):
            best = (s, val, r)
    if best is None:
        raise PreconditionError("no threshold yields a separator: weights are not a fractional separator")
    total = float(sum(y))
    bound = 6 * log2_2n(g.n) * a_bound * total
    if best[1] > bound + SLACK:
        raise InvariantViolation(f"rounded cover {best[1]} exceeds guaranteed {bound}")
    return RoundingResult(best[0], float(best[1]), bound, best[2], total, mode, len(cache),
                          [claim("layer fcov ≤ 6·log2(2n)·a·Σy", bound, float(best[1]))])


def ab_round(g: Graph, f: Family, a_bound: int, A: Iterable[int], B: Iterable[int], x: Sequence[float],
             mode: str = "exact", path_cap: int = PATH_CAP) -> RoundingResult:
    """Integral A–B separator whose fractional cover is within 12·log2(2n)·a of Σx."""
    y = normalize_fractional_separator(g, f, x)
    res = threshold_round(g, f, a_bound, y, A, B, mode=mode, path_cap=path_cap)
    if not is_ab_separator(g, res.separator, A, B):
        raise InvariantViolation("rounded set does not separate")
    bound = 12 * log2_2n(g.n) * a_bound * float(sum(x))
    if res.fcov > bound + SLACK:
        raise InvariantViolation(f"rounded cover {res.fcov} exceeds guaranteed {bound}")
    res.bound = bound
    res.claims.append(claim("fcov ≤ 12·log2(2n)·a·Σx", bound, res.fcov))
    return res


# ---------------------------------------------------------------------------
# path packings


@dataclass
class PathDistribution:
    """Induced A–B paths weighted by an optimal dual of the separator LP."""

    paths: list[tuple[int, ...]]
    probs: np.ndarray
    f_value: float
    incidence: np.ndarray  # paths × family, boolean
    x: tuple[float, ...]
    A: tuple[int, ...]
    B: tuple[int, ...]

    def draw(self, count: int, rng: np.random.Generator) -> np.ndarray:
        cdf = np.cumsum(self.probs)
        cdf[-1] = 1.0
        return np.minimum(np.searchsorted(cdf, rng.random(count), side="right"), len(self.paths) - 1)

    def packing_size(self, ell: int) -> int:
        return math.ceil(self.f_value * ell - 1e-9)

    def attempt(self, ell: int, seed: int, attempt: int) -> tuple[np.ndarray, np.ndarray]:
        """One draw: sampled path indices and the per-member hit counts."""
        idx = self.draw(self.packing_size(ell), rng_stream(seed, attempt))
        return idx, self.incidence[idx].sum(axis=0)


def path_distribution(g: Graph, A: Iterable[int], B: Iterable[int], f: Family, path_cap: int = PATH_CAP,
                      tol: float = DEFAULT_TOL) -> PathDistribution:
    A, B = vertex_set(g, A), vertex_set(g, B)
    model = build_ab_separator_lp(g, A, B, f, path_cap)
    if model.meta["uncovered_paths"]:
        p = model.meta["uncovered_paths"][0]
        raise InfeasibleLP(f"path {p} meets no family member, so no fractional separator exists", witness=p)
    sol = solve_lp(model, tol=tol)
    if not sol.optimal:
        raise InfeasibleLP(f"A–B separator LP is {sol.status}")
    paths = model.meta["paths"]
    dual = np.array([max(0.0, float(sol.dual(("path", p)))) for p in paths])
    total = dual.sum()
    probs = dual / total if total > 0 else dual
    inc = np.zeros((len(paths), len(f)), dtype=np.int64)
    for r, hm in enumerate(model.meta["hits"]):
        for j in bits(hm):
            inc[r, j] = 1
    return PathDistribution(paths, probs, float(sol.objective), inc, family_weights(sol, f), A, B)


@dataclass
class PathPackingResult:
    paths: tuple[tuple[int, ...], ...]
    chi: tuple[int, ...]
    f_value: float
    ell: int
    attempts: int
    seed: int
    claims: list = field(default_factory=list)

    def recount(self, f: Family) -> tuple[int, ...]:
        masks = [to_mask(s) for s in f]
        return tuple(sum(1 for p in self.paths if to_mask(p) & m) for m in masks)


def _check_ell(ell: int, family_size: int) -> None:
    if family_size < 1:
        raise PreconditionError("family must be nonempty")
    if ell < math.log2(2 * family_size):
        raise PreconditionError(f"ell={ell} is below log2(2|F|)={math.log2(2 * family_size):.3f}")


def sample_path_packing(g: Graph, A: Iterable[int], B: Iterable[int], f: Family, ell: int, seed: int = 0,
                        max_retries: int = 16, dist: PathDistribution | None = None,
                        path_cap: int = PATH_CAP) -> PathPackingResult:
    """⌈f·ℓ⌉ induced A–B paths, each member met by at most 6ℓ of them."""
    _check_ell(ell, len(f))
    if dist is None:
        dist = path_distribution(g, A, B, f, path_cap)
    if dist.f_value <= 0 or not dist.paths:
        return PathPackingResult((), tuple([0] * len(f)), dist.f_value, ell, 0, seed)
    worst = None
    for attempt in range(max_retries):
        idx, chi = dist.attempt(ell, seed, attempt)
        top = int(chi.max()) if len(chi) else 0
        worst = top if worst is None else min(worst, top)
        if top <= 6 * ell:
            paths = tuple(dist.paths[i] for i in idx)
            for p in paths:
                if not is_induced_path(g, p) or not (
                        (p[0] in dist.A and p[-1] in dist.B) or (p[-1] in dist.A and p[0] in dist.B)):
                    raise InvariantViolation(f"sampled object {p} is not an induced A–B path")
            res = PathPackingResult(paths, tuple(int(c) for c in chi), dist.f_value, ell, attempt + 1, seed)
            res.claims = [claim("max member hits ≤ 6ℓ", 6 * ell, top),
                          claim("|Q| = ⌈f·ℓ⌉", dist.packing_size(ell), len(paths),
                                len(paths) == dist.packing_size(ell))]
            return res
    raise RetriesExhausted(f"no packing with member hits ≤ {6 * ell} in {max_retries} attempts", worst)


# ---------------------------------------------------------------------------
# dichotomies


@dataclass
class DichotomyResult:
    branch: str
    lp_opt: float
    separator: RoundingResult | None = None
    packing: PathPackingResult | None = None
    claims: list = field(default_factory=list)


def menger_dichotomy(g: Graph, A: Iterable[int], B: Iterable[int], f: Family, a_bound: int, f_target: float,
                     ell: int, seed: int = 0, mode: str = "exact", max_retries: int = 16,
                     path_cap: int = PATH_CAP) -> DichotomyResult:
    """Either a cheap A–B separator or a packing of many lightly overlapping paths."""
    _check_ell(ell, len(f))
    dist = path_distribution(g, A, B, f, path_cap)
    if dist.f_value <= f_target:
        res = ab_round(g, f, a_bound, dist.A, dist.B, dist.x, mode=mode, path_cap=path_cap)
        target = 12 * a_bound * f_target * log2_2n(g.n)
        out = DichotomyResult("separator", dist.f_value, separator=res)
        out.claims = res.claims + [claim("fcov ≤ 12·a·f·log2(2n)", target, res.fcov)]
        return out
    pack = sample_path_packing(g, dist.A, dist.B, f, ell, seed, max_retries, dist=dist)
    out = DichotomyResult("packing", dist.f_value, packing=pack)
    out.claims = pack.claims + [claim("|Q| ≥ f_target·ℓ", f_target * ell, len(pack.paths),
                                      len(pack.paths) >= f_target * ell - 1e-9)]
    return out


@dataclass
class UVResult:
    branch: str
    a: int
    a_bound: int
    ell: int
    lp_opt: float
    separator: tuple[int, ...] | None = None
    separator_alpha: int | None = None
    separator_fcov: float | None = None
    witness: Graph | None = None
    witness_omega: int | None = None
    witness_member_max: int | None = None
    family_size: int = 0
    claims: list = field(default_factory=list)


def small_alpha_uv_separator(g: Graph, u: int, v: int, container_cfg: ContainerParams | ContainerFamily,
                             f_target: float, ell: int | None = None, seed: int = 0, mode: str = "exact",
                             max_retries: int = 16) -> UVResult:
    """Separate two non-adjacent vertices by a set of small independence number,
    or exhibit an induced subgraph with many u–v paths and small clique number.
    """
    if u == v or g.has_edge(u, v):
        raise PreconditionError("u and v must be distinct and non-adjacent")
    if isinstance(container_cfg, ContainerFamily):
        cf = container_cfg
    else:
        cf = build_containers_small_b(g, ContainerParams(container_cfg.omega, container_cfg.k, 1))
    if cf.b < 1:
        raise PreconditionError("need a family covering every clique (b ≥ 1)")
    a = max([1] + [alpha(g, s) for s in cf.family])
    if ell is None:
        ell = max(1, math.ceil(math.log2(2 * len(cf.family))))
    sub = g.remove([u, v])
    fam = tuple(sub.localize(s) for s in cf.family)
    A, B = sub.localize(g.neighbors(u)), sub.localize(g.neighbors(v))
    out = UVResult("", a, cf.a_bound, ell, 0.0, family_size=len(fam))
    if not A or not B:
        out.branch, out.separator, out.separator_alpha, out.separator_fcov = "separator", (), 0, 0.0
        out.claims = [claim("separates u from v", True, is_ab_separator(g, (), [u], [v]),
                            is_ab_separator(g, (), [u], [v]))]
        return out
    res = menger_dichotomy(sub, A, B, fam, a, f_target, ell, seed, mode, max_retries)
    out.lp_opt = res.lp_opt
    out.claims = list(res.claims)
    if res.branch == "separator":
        X = sub.lift(res.separator.separator)
        sep_ok = is_ab_separator(g, X, [u], [v]) and u not in X and v not in X
        out.branch, out.separator = "separator", X
        out.separator_alpha = alpha(g, X)
        out.separator_fcov = res.separator.fcov
        out.claims += [claim("X separates u from v", True, sep_ok, sep_ok),
                       claim("α(X) ≤ a·fcov(X)", a * res.separator.fcov + SLACK, out.separator_alpha)]
        if not sep_ok:
            raise InvariantViolation("lifted separator does not separate u from v")
    else:
        verts = {u, v}
        for p in res.packing.paths:
            verts.update(sub.lift(p))
        H = g.induced_subgraph(verts)
        out.branch, out.witness = "packing", H
        out.witness_omega = omega(H)
        vmask = to_mask(verts)
        out.witness_member_max = max((bin(to_mask(s) & vmask).count("1") for s in cf.family), default=0)
        # u and v may each add one vertex beyond the path hits
        out.claims += [claim("ω(H) ≤ 12·a·ℓ + 1", 12 * a * ell + 1, out.witness_omega),
                       claim("max member ∩ V(H) ≤ 12·a·ℓ + 2", 12 * a * ell + 2, out.witness_member_max)]
    return out


# ---------------------------------------------------------------------------
# tail bound


@dataclass
class TailReport:
    p: float
    count: int
    R: int
    trials: int
    frequency: float
    bound: float
    sigma: float
    passed: bool


def empirical_tail_check(p: float, count: int, R: int, trials: int, seed: int = 0) -> TailReport:
    """Monte Carlo check that a sum of Bernoulli variables reaches R with probability ≤ 2^-R."""
    if R < 6 * p * count - 1e-9:
        raise PreconditionError(f"R={R} is below 6·E[X]={6 * p * count}")
    if not 0 <= p <= 1 or trials < 1:
        raise PreconditionError("need 0 ≤ p ≤ 1 and trials ≥ 1")
    rng = np.random.default_rng(seed)
    draws = rng.binomial(count, p, size=trials)
    freq = float(np.mean(draws >= R))
    bound = 2.0 ** -R
    sigma = math.sqrt(bound * (1 - bound) / trials)
    return TailReport(p, count, R, trials, freq, bound, sigma, freq <= bound + 3 * sigma)
