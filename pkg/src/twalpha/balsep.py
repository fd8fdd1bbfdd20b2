"""Region-growing rounding of the balanced-separator LP, sampling of hard
subgraphs from its dual, and the driver that combines both with the
separator-based tree-decomposition builder.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .absep import SLACK, ab_round, claim, log2_2n, rng_stream
from .errors import InvariantViolation, PreconditionError, ProviderFailure, RetriesExhausted
from .graph import (PATH_CAP, Family, Graph, VertexSet, alpha, alpha_mask, alpha_table, bits, component_masks,
                    family_distances, is_ab_separator, is_balanced_separator, members,
                    membership_masks, to_mask, vertex_set)
from .lp import (DEFAULT_TOL, BalancedDual, build_balanced_separator_lp, extract_balanced_dual, family_weights,
                 fcov, solve_lp)
from .treedecomp import (BuildLog, TreeDecomposition, brute_tw, build_td_small_alpha, min_balanced_separator_size,
                         td_independence, verify_td)

EPSILON_FACTOR = 1300
CUTOFF_FACTOR = 15600
ROUND_FACTOR = 17000
I_SIZE_FACTOR = 680000
TW_FACTOR = 1020000
HEAVY = Fraction(95, 100)


def mu(g: Graph, f: Family, x: Sequence[float], X: Iterable[int]) -> float:
    """Sum over members of α(member ∩ X) weighted by the member's value."""
    xm = to_mask(X)
    total = 0.0
    for s, w in zip(f, x):
        if w:
            inter = to_mask(s) & xm
            if inter:
                total += alpha_mask(g, inter) * float(w)
    return total


def f_distance(g: Graph, f: Family, x: Sequence[float], u: int, v: int, path_cap: int = PATH_CAP) -> float:
    """Least total weight of members met by an induced u–v path (inf if none)."""
    return family_distances(g, membership_masks(g.n, f), x, [u], cap=path_cap)[v]


def vertex_loads(g: Graph, f: Family, x: Sequence[float]) -> list[float]:
    owners = membership_masks(g.n, f)
    return [sum(float(x[j]) for j in bits(owners[v])) for v in range(g.n)]


def log_term(a: int, lp_opt: float) -> tuple[float, bool]:
    """max(1, log2(a·LP)) and whether the floor at 1 was used."""
    raw = math.log2(a * lp_opt) if a * lp_opt > 0 else -math.inf
    return (raw, False) if raw >= 1 else (1.0, True)


@dataclass(frozen=True)
class RegionGrowingParams:
    epsilon: float
    ell_max: int
    log_term: float
    clamped: bool
    overridden: bool
    z0: VertexSet

    def radius(self, i: int) -> float:
        return (4 * i - 2) * self.epsilon

    def to_dict(self) -> dict:
        return {"epsilon": self.epsilon, "ell_max": self.ell_max, "log_term": self.log_term,
                "clamp_fired": self.clamped, "epsilon_overridden": self.overridden, "Z0": list(self.z0)}


def region_growing_params(g: Graph, f: Family, x: Sequence[float], lp_opt: float, a: int,
                          epsilon: float | None = None) -> RegionGrowingParams:
    """Radii scale and the starting set of heavily covered vertices.

    ``epsilon`` replaces the default 1/(1300·max(1, log2(a·LP))) when given.
    """
    lt, clamped = log_term(a, lp_opt)
    eps = 1 / (EPSILON_FACTOR * lt) if epsilon is None else float(epsilon)
    if not 0 < eps <= 1:
        raise PreconditionError("epsilon must lie in (0, 1]")
    ell_max = math.ceil(2 * lt) + 12
    loads = vertex_loads(g, f, x)
    z0 = tuple(v for v in range(g.n) if loads[v] >= eps)
    return RegionGrowingParams(eps, ell_max, lt, clamped, epsilon is not None, z0)


# ---------------------------------------------------------------------------
# one cutoff step


def _ball(dist: Sequence[float], cmask: int, r: float) -> int:
    return to_mask(v for v in bits(cmask) if dist[v] <= r)


def _shell(dist, cmask, r, eps) -> int:
    return _ball(dist, cmask, r + 3 * eps) & ~_ball(dist, cmask, r + eps)


def _heavy(I: VertexSet, count: int) -> bool:
    return count > HEAVY * len(I)


def _check_region(g, I, params, Z, C, u_bar, lp_opt):
    if lp_opt <= 0:
        raise PreconditionError("region growing needs a positive LP optimum")
    if not set(params.z0) <= set(Z):
        raise PreconditionError("Z must contain every heavily covered vertex")
    cm = to_mask(C)
    if cm & to_mask(Z) or cm not in component_masks(g, to_mask(Z)):
        raise PreconditionError("C must be a component of G - Z")
    if not _heavy(I, len(set(C) & set(I))):
        raise PreconditionError("C must hold more than 95% of I")
    if u_bar not in I or u_bar not in C:
        raise PreconditionError("centre must be a vertex of I inside C")


@dataclass
class LayerChoice:
    ell: int
    ball: VertexSet
    shell: VertexSet
    mu_ball: float
    mu_shell: float
    outside: int


def find_good_layer(g: Graph, I: VertexSet, f: Family, x: Sequence[float], lp_opt: float, a_bound: int,
                    Z: VertexSet, C: VertexSet, u_bar: int, params: RegionGrowingParams | None = None,
                    dist: Sequence[float] | None = None) -> LayerChoice:
    """Smallest layer whose shell weighs no more than the ball it surrounds."""
    params = params or region_growing_params(g, f, x, lp_opt, a_bound)
    _check_region(g, I, params, Z, C, u_bar, lp_opt)
    if dist is None:
        dist = family_distances(g, membership_masks(g.n, f), x, [u_bar])
    cm, eps = to_mask(C), params.epsilon
    for ell in range(1, params.ell_max + 1):
        r = params.radius(ell)
        ball, shell = _ball(dist, cm, r), _shell(dist, cm, r, eps)
        mb, ms = mu(g, f, x, members(ball)), mu(g, f, x, members(shell))
        if ms <= mb:
            outer = _ball(dist, cm, params.radius(ell + 1))
            outside = sum(1 for v in I if not outer >> v & 1)
            if 100 * outside < 5 * len(I):
                raise InvariantViolation(f"layer {ell}: only {outside} vertices of I lie beyond the next radius")
            return LayerChoice(ell, members(ball), members(shell), mb, ms, outside)
    raise InvariantViolation(f"no layer among {params.ell_max} has a light shell")


def layer_fractional_separator(g: Graph, f: Family, x: Sequence[float], C: VertexSet, shell: VertexSet,
                               epsilon: float) -> tuple[float, ...]:
    """Scale by 1/ε the members touching the shell; zero out the rest."""
    sm = to_mask(shell)
    return tuple(float(w) / epsilon if to_mask(s) & sm else 0.0 for s, w in zip(f, x))


@dataclass
class CutoffResult:
    A: VertexSet
    S: VertexSet
    B: VertexSet
    layer: LayerChoice
    fcov: float
    bound: float
    x_prime: tuple[float, ...]
    claims: list = field(default_factory=list)


def cutoff_step(g: Graph, I: VertexSet, f: Family, x: Sequence[float], lp_opt: float, a_bound: int,
                Z: VertexSet, C: VertexSet, params: RegionGrowingParams | None = None,
                mode: str = "exact", path_cap: int = PATH_CAP) -> CutoffResult:
    """Split the heavy component C into A ∪ S ∪ B with S separating A from B."""
    params = params or region_growing_params(g, f, x, lp_opt, a_bound)
    I, C, Z = vertex_set(g, I), vertex_set(g, C), vertex_set(g, Z)
    u_bar = min(set(I) & set(C), default=None)
    if u_bar is None:
        raise PreconditionError("C contains no vertex of I")
    _check_region(g, I, params, Z, C, u_bar, lp_opt)
    owners = membership_masks(g.n, f)
    dist = family_distances(g, owners, x, [u_bar], cap=path_cap)
    layer = find_good_layer(g, I, f, x, lp_opt, a_bound, Z, C, u_bar, params, dist)
    eps, cm = params.epsilon, to_mask(C)
    ball = to_mask(layer.ball)
    a_side = (ball | g.neighborhood_mask(ball)) & cm
    b_side = cm & ~_ball(dist, cm, params.radius(layer.ell + 1))
    xp = layer_fractional_separator(g, f, x, C, layer.shell, eps)
    gc = g.induced_subgraph(C)
    fc = tuple(gc.localize(s) for s in f)
    cover = family_distances(gc, membership_masks(gc.n, fc), xp, gc.localize(members(a_side)), cap=path_cap)
    short = [v for v in gc.localize(members(b_side)) if cover[v] < 1 - 1e-9]
    if short:
        raise InvariantViolation(f"scaled shell weights leave an uncovered path to {gc.lift([short[0]])}")
    rounded = ab_round(gc, fc, a_bound, gc.localize(members(a_side)), gc.localize(members(b_side)), xp,
                       mode=mode, path_cap=path_cap)
    S = gc.lift(rounded.separator)
    smask = to_mask(S)
    reach = 0
    for comp in component_masks(g, g.full_mask & ~cm | smask):
        if comp & b_side:
            reach |= comp
    B = members(reach)
    A = members(cm & ~reach & ~smask)
    n_b = reach | g.neighborhood_mask(reach)
    mu_rest = mu(g, f, x, members(cm & ~n_b))
    bound = 12 * log2_2n(g.n) * a_bound * mu_rest / eps
    value = float(fcov(g, f, S)[0])
    rest = g.remove(Z)
    sep_ok = is_ab_separator(rest, rest.localize(S), rest.localize(A), rest.localize(B))
    a_in_i = len(set(A) & set(I))
    claims = [claim("S separates A from B in G - Z", True, sep_ok, sep_ok),
              claim("B ⊊ C", len(C), len(B), len(B) < len(C)),
              claim("|A ∩ I| ≤ 95|I|/100", float(HEAVY * len(I)), a_in_i, a_in_i <= HEAVY * len(I)),
              claim("fcov(S) ≤ 12·log2(2n)·a·μ(C∖N[B])/ε", bound, value, value <= bound + SLACK)]
    for c in claims:
        if not c["pass"]:
            raise InvariantViolation(f"cutoff step postcondition failed: {c['name']}")
    return CutoffResult(A, S, B, layer, value, bound, xp, claims)


# ---------------------------------------------------------------------------
# full rounding


@dataclass
class BalancedRounding:
    separator: VertexSet
    fcov: float
    lp_opt: float
    a_bound: int
    params: RegionGrowingParams
    iterations: int
    steps: list
    bound: float
    literal_bound: float
    x: tuple[float, ...]
    claims: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c["pass"] for c in self.claims)


def heavy_components(g: Graph, I: VertexSet, removed: int) -> list[int]:
    imask = to_mask(I)
    return [c for c in component_masks(g, removed) if _heavy(I, (c & imask).bit_count())]


def round_with_solution(g: Graph, I: Iterable[int], f: Family, a_bound: int, x: Sequence[float], lp_opt: float,
                        epsilon: float | None = None, mode: str = "exact",
                        path_cap: int = PATH_CAP) -> BalancedRounding:
    """Region-growing loop for a given fractional solution ``x`` with value ``lp_opt``."""
    I = vertex_set(g, I)
    if a_bound < 2:
        raise PreconditionError("a_bound must be at least 2")
    params = region_growing_params(g, f, x, lp_opt, a_bound, epsilon)
    eps = params.epsilon
    Z = to_mask(params.z0)
    heavy = heavy_components(g, I, Z)
    c0 = heavy[0] if heavy else 0
    steps = []
    while heavy:
        if len(heavy) > 1:
            raise InvariantViolation("more than one component holds over 95% of I")
        if len(steps) >= g.n:
            raise InvariantViolation("cutoff loop did not terminate within n steps")
        step = cutoff_step(g, I, f, x, lp_opt, a_bound, members(Z), members(heavy[0]), params, mode, path_cap)
        steps.append(step)
        Z |= to_mask(step.S)
        heavy = heavy_components(g, I, Z)
    S = members(Z)
    value = float(fcov(g, f, S)[0])
    z0_cover = float(fcov(g, f, params.z0)[0])
    log2n = log2_2n(g.n)
    chain = z0_cover + 12 * log2n * a_bound * mu(g, f, x, members(c0)) / eps
    bound = (lp_opt + 12 * log2n * a_bound ** 2 * lp_opt) / eps
    literal = ROUND_FACTOR * log2n * a_bound ** 2 * params.log_term * lp_opt
    balanced = is_balanced_separator(g, S, I, HEAVY)
    claims = [claim("(I, 95/100)-balanced", True, balanced, balanced),
              claim("fcov(Z0) ≤ LP/ε", lp_opt / eps, z0_cover, z0_cover <= lp_opt / eps + SLACK),
              claim("fcov(S) ≤ fcov(Z0) + 12·log2(2n)·a·μ(C0)/ε", chain, value, value <= chain + SLACK),
              claim("fcov(S) ≤ (LP + 12·log2(2n)·a²·LP)/ε", bound, value, value <= bound + SLACK)]
    if not params.overridden:
        claims.append(claim("fcov(S) ≤ 17000·log2(2n)·a²·L·LP", literal, value, value <= literal + SLACK))
    return BalancedRounding(S, value, lp_opt, a_bound, params, len(steps), steps, bound, literal,
                            tuple(float(w) for w in x), claims)


def solve_balanced_lp(g: Graph, I: Iterable[int], f: Family, path_cap: int = PATH_CAP,
                      method: str = "highs", tol: float = DEFAULT_TOL):
    model = build_balanced_separator_lp(g, I, f, path_cap)
    sol = solve_lp(model, tol=tol, method=method)
    if not sol.optimal:
        raise PreconditionError(f"balanced-separator LP is {sol.status}")
    return sol


def round_balanced_separator(g: Graph, I: Iterable[int], f: Family, a_bound: int, epsilon: float | None = None,
                             mode: str = "exact", path_cap: int = PATH_CAP, solution=None) -> BalancedRounding:
    """An (I, 95/100)-balanced separator whose fractional cover is within the
    region-growing guarantee of the LP optimum.
    """
    I = vertex_set(g, I)
    sol = solution or solve_balanced_lp(g, I, f, path_cap)
    res = round_with_solution(g, I, f, a_bound, family_weights(sol, f), float(sol.objective), epsilon, mode,
                              path_cap)
    for c in res.claims:
        if not c["pass"]:
            raise InvariantViolation(f"balanced rounding guarantee failed: {c['name']}")
    return res


# ---------------------------------------------------------------------------
# sampling from the dual


@dataclass(frozen=True)
class SampledTriple:
    u: int
    v: int
    path: tuple[int, ...] | None

    @property
    def empty(self) -> bool:
        return self.path is None


class TripleSampler:
    """Vectorized draws of (u, v, P) from the distribution built on an optimal dual."""

    def __init__(self, dual: BalancedDual):
        if dual.lp_opt <= 0 or dual.rho_total <= 0:
            raise PreconditionError("sampling needs a positive LP optimum and positive total rho")
        self.dual = dual
        I = dual.I
        k = len(I)
        self.I = np.array(I)
        self.u_prob = np.array([dual.rho[u] for u in I]) / dual.rho_total
        self.empty_prob = np.ones((k, k))
        paths, keys, offsets = [], [], np.zeros((k, k), dtype=np.int64)
        counts = np.zeros((k, k), dtype=np.int64)
        by_pair: dict[tuple[int, int], list] = {}
        for (u, v, p), val in dual.gamma.items():
            by_pair.setdefault((u, v), []).append((p, val))
        for a, u in enumerate(I):
            for b, v in enumerate(I):
                eta, gam = dual.eta[(u, v)], dual.gamma_uv[(u, v)]
                if eta + gam <= 0:
                    if dual.rho[u] > 0:
                        raise InvariantViolation(f"rho_{u} > 0 but eta and gamma vanish on ({u},{v})")
                    continue
                self.empty_prob[a, b] = eta / (eta + gam)
                offsets[a, b] = len(paths)
                items = [(p, val) for p, val in sorted(by_pair.get((u, v), []), key=lambda t: (len(t[0]), t[0]))
                         if val > 0]
                counts[a, b] = len(items)
                if items and gam > 0:
                    cdf = np.cumsum([val for _, val in items]) / gam
                    cdf[-1] = 1.0
                    pair_id = a * k + b
                    keys.extend(pair_id + cdf)
                    paths.extend(p for p, _ in items)
        self.paths = paths
        self.keys = np.array(keys)
        self.offsets = offsets
        self.counts = counts
        self.hits = np.array([dual.hits[(p[0], p[-1], p)] for p in paths], dtype=object)

    def draw(self, count: int, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Indices (into I) of u and v, and path indices (-1 for the empty outcome)."""
        k = len(self.I)
        cdf = np.cumsum(self.u_prob)
        cdf[-1] = 1.0
        ui = np.minimum(np.searchsorted(cdf, rng.random(count), side="right"), k - 1)
        vi = rng.integers(0, k, size=count)
        coin = rng.random(count)
        r = rng.random(count)
        empty = coin < self.empty_prob[ui, vi]
        empty |= self.counts[ui, vi] == 0
        pidx = np.full(count, -1, dtype=np.int64)
        live = ~empty
        if live.any():
            target = (ui[live] * k + vi[live]) + r[live]
            pidx[live] = np.searchsorted(self.keys, target, side="right")
            lo = self.offsets[ui[live], vi[live]]
            hi = lo + self.counts[ui[live], vi[live]] - 1
            pidx[live] = np.clip(pidx[live], lo, hi)
        return ui, vi, pidx

    def sample(self, count: int, seed: int, attempt: int = 0) -> list[SampledTriple]:
        ui, vi, pidx = self.draw(count, rng_stream(seed, attempt))
        return [SampledTriple(int(self.I[a]), int(self.I[b]), self.paths[p] if p >= 0 else None)
                for a, b, p in zip(ui, vi, pidx)]

    def member_hit_counts(self, pidx: np.ndarray, family_size: int) -> np.ndarray:
        per_path = np.bincount(pidx[pidx >= 0], minlength=len(self.paths))
        out = np.zeros(family_size, dtype=np.int64)
        for i in np.nonzero(per_path)[0]:
            for j in bits(int(self.hits[i])):
                out[j] += per_path[i]
        return out


def sample_triple(dual: BalancedDual, seed: int, attempt: int = 0) -> SampledTriple:
    return TripleSampler(dual).sample(1, seed, attempt)[0]


@dataclass
class DualSamplingReport:
    draws: int
    empty_rate: float
    empty_sigma: float
    max_hit_rate: float
    hit_sigma: float
    hit_bound: float
    u_marginal_error: float
    u_sigma: float
    passed: bool


def dual_sampling_check(dual: BalancedDual, draws: int = 100_000, seed: int = 0) -> DualSamplingReport:
    """Monte Carlo check of the empty-outcome and per-member hit-rate bounds."""
    sampler = TripleSampler(dual)
    ui, vi, pidx = sampler.draw(draws, rng_stream(seed, 0))
    empty = float(np.mean(pidx < 0))
    e_sigma = math.sqrt(0.1 * 0.9 / draws)
    hits = sampler.member_hit_counts(pidx, dual.family_size) / draws
    bound = 1 / (10 * dual.lp_opt)
    p = min(bound, 1.0)
    h_sigma = math.sqrt(p * (1 - p) / draws)
    freq = np.bincount(ui, minlength=len(dual.I)) / draws
    u_err = float(np.max(np.abs(freq - sampler.u_prob)))
    u_sigma = float(np.max(np.sqrt(sampler.u_prob * (1 - sampler.u_prob) / draws)))
    top = float(hits.max()) if len(hits) else 0.0
    ok = empty <= 0.1 + 3 * e_sigma and top <= bound + 3 * h_sigma and u_err <= 3 * u_sigma + 1e-12
    return DualSamplingReport(draws, empty, e_sigma, top, h_sigma, bound, u_err, u_sigma, ok)


# ---------------------------------------------------------------------------
# partitions of an independent set along a separator


def _mass_order(g: Graph, A: VertexSet, S: VertexSet) -> list[VertexSet]:
    amask = to_mask(A)
    parts = [members(c & amask) for c in component_masks(g, to_mask(S)) if c & amask]
    return sorted(parts, key=lambda p: (-len(p), p))


def bipartition_from_balanced(g: Graph, A: Iterable[int], S: Iterable[int]) -> tuple[VertexSet, VertexSet]:
    """Split A into two parts of at most 2|A|/3 each that S separates."""
    A, S = vertex_set(g, A), vertex_set(g, S)
    if len(A) < 2:
        raise PreconditionError("need at least two vertices to split")
    if not is_balanced_separator(g, S, A, Fraction(1, 2)):
        raise PreconditionError("S is not an (A, 1/2)-balanced separator")
    on_s = tuple(v for v in A if v in set(S))
    if 2 * len(on_s) >= len(A):
        a1 = on_s[:math.ceil(len(A) / 2)]
    else:
        parts = _mass_order(g, A, S)
        if on_s:
            parts = sorted(parts + [on_s], key=lambda p: (-len(p), p))
        acc = []
        for p in parts:
            acc.extend(p)
            if 3 * len(acc) >= len(A):
                break
        a1 = tuple(sorted(acc))
    a2 = tuple(v for v in A if v not in set(a1))
    if 3 * max(len(a1), len(a2)) > 2 * len(A) or not is_ab_separator(g, S, a1, a2):
        raise InvariantViolation("bipartition postconditions failed")
    return a1, a2


def split_for_builder(g: Graph, I: VertexSet, S: VertexSet) -> tuple[VertexSet, VertexSet]:
    """Two sides of I off S, separated by S, from the component masses of G - S."""
    parts = _mass_order(g, I, S)
    if not parts:
        return (), ()
    if 2 * len(parts[0]) >= len(I):
        i1 = parts[0]
        i2 = tuple(sorted(v for p in parts[1:] for v in p))
    else:
        acc = []
        for p in parts:
            acc.extend(p)
            if 3 * len(acc) >= len(I):
                break
        i1 = tuple(sorted(acc))
        taken = set(i1) | set(S)
        i2 = tuple(v for v in I if v not in taken)
    return i1, i2


# ---------------------------------------------------------------------------
# hard subgraphs


def default_ell(lp_opt: float, family_size: int, i_size: int) -> int:
    return math.ceil(7 * (lp_opt * math.log2(4 * family_size) + i_size))


@dataclass
class HardSample:
    H: Graph
    I: VertexSet
    lp_opt: float
    ell: int
    b: int
    triples: list
    member_max: int
    property1_bound: float
    property1_route: str
    property2: str
    attempts: int
    seed: int
    claims: list = field(default_factory=list)


def max_member_overlap(f: Family, verts: Iterable[int]) -> int:
    vm = to_mask(verts)
    return max(((to_mask(s) & vm).bit_count() for s in f), default=0)


def largest_low_alpha_set(H: Graph, b: int, cap: int = 14) -> int:
    table = alpha_table(H, cap)
    return max(bin(s).count("1") for s in range(1 << H.n) if table[s] <= b)


def property2_check(H: Graph, I: VertexSet, f: Family, lp_opt: float) -> dict:
    """Two exhaustive routes to 'no cheap balanced separator of I in H'.

    Route one: for every subfamily of fewer than LP members, its union is not an
    (I, 1/2)-balanced separator. Route two: for every subfamily of at most LP
    members and every split of I with both sides ≤ 2|I|/3, some path between the
    sides avoids the union.
    """
    fam = [to_mask(s) for s in f]
    k = len(I)
    strict = math.ceil(lp_opt - 1e-9) - 1
    loose = math.floor(lp_opt + 1e-9)
    half = Fraction(1, 2)
    route1 = None
    for size in range(0, min(strict, len(fam)) + 1):
        for sub in combinations(range(len(fam)), size):
            u = members(_or(fam[j] for j in sub) & H.full_mask)
            if is_balanced_separator(H, u, I, half):
                route1 = {"subfamily": list(sub), "separator": list(u)}
                break
        if route1:
            break
    route2 = None
    splits = [m for m in range(1 << k) if 3 * max(m.bit_count(), k - m.bit_count()) <= 2 * k]
    for size in range(0, min(loose, len(fam)) + 1):
        for sub in combinations(range(len(fam)), size):
            u = members(_or(fam[j] for j in sub) & H.full_mask)
            for m in splits:
                i1 = [I[j] for j in range(k) if m >> j & 1]
                i2 = [I[j] for j in range(k) if not m >> j & 1]
                if is_ab_separator(H, u, i1, i2):
                    route2 = {"subfamily": list(sub), "I1": i1, "I2": i2}
                    break
            if route2:
                break
        if route2:
            break
    return {"balanced_route": route1 is None, "partition_route": route2 is None,
            "balanced_witness": route1, "partition_witness": route2}


def _or(masks) -> int:
    out = 0
    for m in masks:
        out |= m
    return out


def sample_hard_subgraph(g: Graph, I: Iterable[int], f: Family, b: int, ell: int | None = None, seed: int = 0,
                         max_retries: int = 16, verify_level: str = "basic", solution=None,
                         path_cap: int = PATH_CAP) -> HardSample:
    """Induced subgraph on I and ℓ sampled dual paths, with few vertices in any
    low-independence set and no cheap balanced separator of I.

    ``f`` must be a (b, a)-container family.
    """
    I = vertex_set(g, I)
    if verify_level not in ("basic", "full"):
        raise PreconditionError("verify_level is 'basic' or 'full'")
    sol = solution or solve_balanced_lp(g, I, f, path_cap)
    dual = extract_balanced_dual(sol, I)
    if dual.lp_opt <= 0:
        raise PreconditionError("LP optimum must be positive")
    need = default_ell(dual.lp_opt, len(f), len(I))
    ell = need if ell is None else ell
    if ell < need:
        raise PreconditionError(f"ell={ell} is below 7·(LP·log2(4|F|) + |I|) = {need}")
    if verify_level == "full" and (len(f) > 12 or g.n > 14):
        raise PreconditionError("full verification needs |F| ≤ 12 and n ≤ 14")
    sampler = TripleSampler(dual)
    bound = 3 * b * ell / dual.lp_opt
    last = None
    for attempt in range(max_retries):
        triples = sampler.sample(ell, seed, attempt)
        verts = set(I)
        for t in triples:
            if t.path is not None:
                verts.update(t.path)
        H = g.induced_subgraph(verts)
        top = max_member_overlap(f, verts)
        route = "member recount"
        ok1 = top <= bound
        if not ok1 and H.n <= 14:
            route = "exact low-alpha search"
            ok1 = largest_low_alpha_set(H, b) <= bound
        last = top
        if not ok1:
            continue
        prop2 = "asserted, not checked"
        claims = [claim(f"max |F ∩ V(H)| ≤ 3bℓ/LP ({route})", bound, top, ok1),
                  claim("I ⊆ V(H)", True, set(I) <= verts, set(I) <= verts)]
        if verify_level == "full":
            fh = tuple(H.localize(s) for s in f)
            rep = property2_check(H, H.localize(I), fh, dual.lp_opt)
            if not rep["balanced_route"]:
                continue
            prop2 = "checked exhaustively"
            claims.append(claim("no (I,1/2)-balanced S with cov < LP", True, True, True))
            claims.append(claim("every split of I crossed by a path avoiding ≤ LP members", True,
                                rep["partition_route"], rep["partition_route"]))
        return HardSample(H, H.localize(I), dual.lp_opt, ell, b, triples, top, bound, route, prop2, attempt + 1,
                          seed, claims)
    raise RetriesExhausted(f"no accepted sample in {max_retries} attempts", last)


# ---------------------------------------------------------------------------
# driver


def literal_i_size(n: int, a: int, f_target: float) -> int:
    """Independent-set size used by the driver at full scale (one ceiling over the product)."""
    lg = math.log2(f_target * a) if f_target * a > 1 else 1.0
    return I_SIZE_FACTOR * math.ceil(log2_2n(n) * a ** 3 * lg * f_target)


def balanced_provider(f: Family, a_bound: int, f_target: float, epsilon: float | None = None,
                      mode: str = "exact", path_cap: int = PATH_CAP, record: list | None = None):
    """Separator provider for the tree-decomposition builder backed by LP rounding.

    Fails with detail kind 'lp' when the LP optimum reaches ``f_target``, and
    kind 'split' when the rounded separator cannot be turned into a valid split.
    """

    def provider(h: Graph, I: VertexSet):
        fh = tuple(h.localize(s) for s in f)
        sol = solve_balanced_lp(h, I, fh, path_cap)
        lp = float(sol.objective)
        entry = {"W": list(h.lift(range(h.n))), "I": list(h.lift(I)), "lp_opt": lp}
        if record is not None:
            record.append(entry)
        if lp >= f_target:
            raise ProviderFailure(f"LP optimum {lp:.6g} ≥ f_target {f_target}", I,
                                  {"kind": "lp", "lp_opt": lp, "solution": sol})
        res = round_balanced_separator(h, I, fh, a_bound, epsilon, mode, path_cap, solution=sol)
        i1, i2 = split_for_builder(h, I, res.separator)
        entry.update(S=list(h.lift(res.separator)), fcov=res.fcov)
        need = alpha(h, res.separator)
        if not i1 or not i2 or need > min(len(i1), len(i2)):
            raise ProviderFailure("rounded separator does not split I evenly enough", I,
                                  {"kind": "split", "lp_opt": lp, "alpha_S": need,
                                   "sides": (len(i1), len(i2))})
        return i1, i2, res.separator

    return provider


@dataclass
class ExtractResult:
    branch: str
    i_size: int
    literal_i_size: int
    decomposition: TreeDecomposition | None = None
    hard: HardSample | None = None
    hard_vertices: VertexSet | None = None
    hard_I: VertexSet | None = None
    failure: dict | None = None
    queries: list = field(default_factory=list)
    claims: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c["pass"] for c in self.claims)


def extract_hard_instance(g: Graph, f: Family, a_bound: int, b: int, f_target: float, i_size: int | None = None,
                          epsilon: float | None = None, ell: int | None = None, seed: int = 0,
                          verify_level: str = "basic", mode: str = "exact", tw_cap: int = 10,
                          path_cap: int = PATH_CAP) -> ExtractResult:
    """Either a tree decomposition with small bag independence, or an induced
    subgraph with an independent set that has no cheap balanced separator.

    ``i_size`` and ``epsilon`` are scale knobs; by default the full-scale
    independent-set size and region-growing radius are used.
    """
    full = literal_i_size(g.n, a_bound, f_target)
    a_target = full if i_size is None else i_size
    record: list = []
    provider = balanced_provider(f, a_bound, f_target, epsilon, mode, path_cap, record)
    log = BuildLog()
    out = ExtractResult("", a_target, full, queries=record)
    try:
        td = build_td_small_alpha(g, a_target, provider, log=log)
    except ProviderFailure as e:
        W = e.detail["W"]
        h = g.induced_subgraph(W)
        I_local = h.localize(e.independent_set)
        fh = tuple(h.localize(s) for s in f)
        sol = e.detail.get("solution")
        sample = sample_hard_subgraph(h, I_local, fh, b, ell, seed, verify_level=verify_level, solution=sol,
                                      path_cap=path_cap)
        verts = h.lift(sample.H.origin)
        out.branch, out.hard = "hard", sample
        out.hard_vertices, out.hard_I = verts, e.independent_set
        out.failure = {k: v for k, v in e.detail.items() if k != "solution"}
        out.claims = list(sample.claims)
        if e.detail.get("kind") == "lp":
            out.claims.append(claim("LP optimum ≥ f_target", f_target, sample.lp_opt, sample.lp_opt >= f_target))
        H, IH = sample.H, sample.I
        if H.n <= tw_cap:
            need = min_balanced_separator_size(H, IH)
            tw = brute_tw(H, tw_cap)
            # a bag of an optimal decomposition is itself a balanced separator
            out.claims.append(claim("tw(H) + 1 ≥ min (I,1/2)-balanced separator size", need, tw + 1,
                                    tw + 1 >= need))
        return out
    rep = verify_td(g, td)
    width = td_independence(g, td)
    cap = math.ceil(Fraction(3, 2) * a_target)
    out.branch, out.decomposition = "decomposition", td
    out.claims = [claim("tree decomposition axioms", True, rep.passed, rep.passed),
                  claim("bag independence ≤ ⌈1.5·a⌉", cap, width)]
    return out
