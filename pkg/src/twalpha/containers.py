"""Container families: every vertex set of small independence number sits
inside one of a bounded number of sets of (somewhat larger) independence number.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb, log2

from .errors import BudgetExceeded, CapExceeded, HypothesisViolated, PreconditionError
from .graph import (ALPHA_CAP, Family, Graph, alpha_mask, alpha_table, bits, maximal_cliques,
                    maximal_sets_with_alpha_at_most, members, max_independent_mask, to_mask)
from .lp import exact_set_cover

OMEGA_SEARCH_CAP = 8
HYPOTHESIS_CHECK_CAP = 14
DEFAULT_BUDGET = 200_000


@dataclass(frozen=True)
class ContainerParams:
    omega: int
    k: int
    b: int

    def __post_init__(self):
        if self.omega < 1 or self.k < 1 or self.b < 0:
            raise PreconditionError("need omega ≥ 1, k ≥ 1, b ≥ 0")


@dataclass(frozen=True)
class ContainerFamily:
    family: Family
    b: int
    a_bound: int
    provenance: dict = field(default_factory=dict, compare=False)

    def __len__(self) -> int:
        return len(self.family)

    def to_dict(self) -> dict:
        return {"b": self.b, "a_bound": self.a_bound, "sets": [list(s) for s in self.family],
                "provenance": self.provenance}

    @classmethod
    def from_dict(cls, d: dict) -> "ContainerFamily":
        return cls(tuple(tuple(sorted(s)) for s in d["sets"]), int(d["b"]), int(d["a_bound"]),
                   dict(d.get("provenance", {})))


def clique_family(g: Graph) -> ContainerFamily:
    """Maximal cliques: the canonical (1, 1)-container family."""
    return ContainerFamily(maximal_cliques(g), 1, 1, {"construction": "maximal_cliques"})


# ---------------------------------------------------------------------------
# bound arithmetic (all exact integers or rationals)


def ceil_log2(n: int) -> int:
    return 0 if n <= 1 else (n - 1).bit_length()


def ceil_log_base(n: int, base: Fraction) -> int:
    """Smallest t ≥ 0 with base**t ≥ n."""
    t, power = 0, Fraction(1)
    while power < n:
        power *= base
        t += 1
    return t


def rho(omega: int) -> Fraction:
    return Fraction(2 * omega, 2 * omega - 1)


def small_b_alpha_bound(n: int, omega: int, k: int, b: int) -> int:
    """Integer independence bound for the small-b construction (log rounded up)."""
    return (2 * omega * ceil_log2(n) + k + b) ** (k + b + 1)


def small_b_recurrence_bound(n: int, omega: int, k: int, b: int) -> int:
    """The sharper bound the construction's induction actually proves."""
    if b == 0:
        return 0
    return 2 * omega * comb(ceil_log_base(n, rho(omega)) + k + b, k + b) - omega


def general_alpha_bound(n: int, omega: int, k: int, b: int) -> int:
    if b <= omega:
        return small_b_alpha_bound(n, omega, k, b)
    return (3 * omega * ceil_log2(n) + k) ** (k + omega + 1) * 2 ** k * b ** (omega * k)


def _log2_lower(n: int) -> Fraction:
    if n <= 1:
        return Fraction(0)
    return max(Fraction(0), Fraction(log2(n)) - Fraction(1, 10 ** 9))


def small_b_exponent_lower(n: int, omega: int, k: int, b: int) -> Fraction:
    """A rational lower bound on (2ω·log₂ n + k + b)^(k+b+1) with the real logarithm."""
    return (2 * omega * _log2_lower(n) + k + b) ** (k + b + 1)


def size_within(count: int, base: int, exponent: Fraction) -> bool:
    """Sound test of ``count ≤ base ** exponent`` for base ≥ 2, using the integer part of the exponent."""
    whole = exponent.numerator // exponent.denominator
    if whole >= count.bit_length():
        return True
    return count <= base ** whole


# ---------------------------------------------------------------------------
# hypothesis check


def find_forbidden(g: Graph, omega: int, k: int) -> tuple[int, ...] | None:
    """Induced complement of k disjoint ω-cliques, or None.

    That is: k pairwise disjoint independent sets of size ω, with every edge
    present between different sets.
    """
    blocks = []
    for combo in combinations(range(g.n), omega):
        m = to_mask(combo)
        if all(not (g.adj[v] & m) for v in combo):
            common = g.full_mask
            for v in combo:
                common &= g.adj[v]
            blocks.append((m, common))

    def rec(start: int, allowed: int, chosen: list[int]) -> list[int] | None:
        if len(chosen) == k:
            return chosen
        for idx in range(start, len(blocks)):
            m, common = blocks[idx]
            if m & ~allowed == 0:
                got = rec(idx + 1, allowed & common, chosen + [m])
                if got:
                    return got
        return None

    found = rec(0, g.full_mask, [])
    if found is None:
        return None
    out = 0
    for m in found:
        out |= m
    return members(out)


def _hypothesis(g: Graph, p: ContainerParams, check: bool) -> dict:
    if check and g.n <= HYPOTHESIS_CHECK_CAP:
        witness = find_forbidden(g, p.omega, p.k)
        if witness is not None:
            raise HypothesisViolated(
                f"graph contains the complement of {p.k} disjoint {p.omega}-cliques on {witness}", witness)
        return {"hypothesis": "checked"}
    return {"hypothesis": "trusted"}


# ---------------------------------------------------------------------------
# constructions


def family_product(f1, f2) -> Family:
    """All pairwise unions, deduplicated and sorted."""
    return tuple(sorted({tuple(sorted(set(a) | set(b))) for a in f1 for b in f2}))


def _product(f1: frozenset, f2: frozenset) -> frozenset:
    return frozenset(a | b for a in f1 for b in f2)


class _Builder:
    def __init__(self, g: Graph, budget: int):
        self.g = g
        self.budget = budget
        self.calls = 0

    def tick(self) -> None:
        self.calls += 1
        if self.calls > self.budget:
            raise BudgetExceeded(f"container recursion exceeded {self.budget} calls")

    def alpha(self, mask: int) -> int:
        return alpha_mask(self.g, mask, cap=max(ALPHA_CAP, mask.bit_count()))

    def independent_of_size(self, cand: int, size: int) -> int | None:
        """Lexicographically first independent set of ``size`` inside ``cand``."""
        adj = self.g.adj

        def rec(avail: int, need: int, acc: int) -> int | None:
            if need == 0:
                return acc
            if avail.bit_count() < need:
                return None
            for v in bits(avail):
                got = rec(avail & ~adj[v] & ~((1 << (v + 1)) - 1), need - 1, acc | (1 << v))
                if got is not None:
                    return got
            return None

        return rec(cand, size, 0)

    def small(self, mask: int, omega: int, k: int, b: int, prefix: int) -> frozenset:
        self.tick()
        if b == 0:
            return frozenset({0})
        if self.alpha(mask) <= omega:
            return frozenset({mask})
        adj = self.g.adj
        n = mask.bit_count()
        high = 0
        for v in bits(mask):
            if 2 * omega * (adj[v] & mask).bit_count() >= n * (2 * omega - 1):
                high |= 1 << v
        indep = self.independent_of_size(high, omega)
        if indep is not None:
            if k == 1:
                witness = members(prefix | indep)
                raise HypothesisViolated(
                    f"found the forbidden induced subgraph on {witness}", witness)
            common = mask
            for v in bits(indep):
                common &= adj[v]
            inner = self.small(common, omega, k - 1, b, prefix | indep)
            outer = self.small(mask & ~common, omega, k, b, prefix)
            return _product(inner, outer)
        out: set[int] = set()
        for v in bits(mask & ~high):
            f1 = self.small(mask & adj[v], omega, k, b, prefix)
            f2 = self.small(mask & ~adj[v] & ~(1 << v), omega, k, b - 1, prefix)
            out |= _product(_product(frozenset({1 << v}), f1), f2)
        return _product(frozenset({high}), frozenset(out))

    def general(self, mask: int, omega: int, k: int, b: int, prefix: int) -> frozenset:
        if b <= omega:
            return self.small(mask, omega, k, b, prefix)
        self.tick()
        if self.alpha(mask) <= b:
            return frozenset({mask})
        if k == 1:
            indep = max_independent_mask(self.g, mask, cap=max(ALPHA_CAP, mask.bit_count()))
            witness = members(prefix | to_mask(members(indep)[:omega]))
            raise HypothesisViolated(f"found the forbidden induced subgraph on {witness}", witness)
        adj = self.g.adj
        out: set[int] = set()
        for indep in self.independent_sets_up_to(mask, b):
            fam = frozenset({indep})
            ivs = members(indep)
            for size in range(1, min(len(ivs), omega) + 1):
                for z in combinations(ivs, size):
                    zmask = to_mask(z)
                    if size < omega:
                        part = [v for v in bits(mask) if adj[v] & indep == zmask]
                        sub = self.small(to_mask(part), omega, k, omega, prefix)
                    else:
                        part = [v for v in bits(mask) if adj[v] & zmask == zmask]
                        sub = self.general(to_mask(part), omega, k - 1, b, prefix | zmask)
                    fam = _product(fam, sub)
            out |= fam
        return frozenset(out)

    def independent_sets_up_to(self, mask: int, size: int):
        adj = self.g.adj

        def rec(avail: int, acc: int, depth: int):
            if acc:
                yield acc
            if depth == size:
                return
            for v in bits(avail):
                yield from rec(avail & ~adj[v] & ~((1 << (v + 1)) - 1), acc | (1 << v), depth + 1)

        yield from rec(mask, 0, 0)


def _finish(g: Graph, fam: frozenset, b: int, a_bound: int, provenance: dict) -> ContainerFamily:
    family = tuple(sorted(members(m) for m in fam))
    for s in family:
        if len(s) <= ALPHA_CAP and alpha_mask(g, to_mask(s)) > a_bound:
            raise AssertionError("member exceeds the certified independence bound")
    return ContainerFamily(family, b, a_bound, provenance)


def build_containers_small_b(g: Graph, p: ContainerParams, check_hypothesis: bool = True,
                             budget: int = DEFAULT_BUDGET) -> ContainerFamily:
    """(b, a)-container family for graphs without the complement of k disjoint ω-cliques, b ≤ ω."""
    if p.b > p.omega:
        raise PreconditionError(f"b={p.b} exceeds omega={p.omega}")
    if p.omega > OMEGA_SEARCH_CAP:
        raise PreconditionError(f"omega={p.omega} exceeds the exact-search cap {OMEGA_SEARCH_CAP}")
    prov = {"construction": "small_b", "omega": p.omega, "k": p.k, "b": p.b, "n": g.n}
    prov.update(_hypothesis(g, p, check_hypothesis))
    builder = _Builder(g, budget)
    fam = builder.small(g.full_mask, p.omega, p.k, p.b, 0)
    prov["recursive_calls"] = builder.calls
    return _finish(g, fam, p.b, small_b_alpha_bound(g.n, p.omega, p.k, p.b), prov)


def build_containers(g: Graph, p: ContainerParams, check_hypothesis: bool = True,
                     budget: int = DEFAULT_BUDGET) -> ContainerFamily:
    """Container family for any b; hands off to the small-b construction when b ≤ ω."""
    if p.b <= p.omega:
        return build_containers_small_b(g, p, check_hypothesis, budget)
    if p.omega > OMEGA_SEARCH_CAP:
        raise PreconditionError(f"omega={p.omega} exceeds the exact-search cap {OMEGA_SEARCH_CAP}")
    prov = {"construction": "general", "omega": p.omega, "k": p.k, "b": p.b, "n": g.n}
    prov.update(_hypothesis(g, p, check_hypothesis))
    builder = _Builder(g, budget)
    fam = builder.general(g.full_mask, p.omega, p.k, p.b, 0)
    prov["recursive_calls"] = builder.calls
    return _finish(g, fam, p.b, general_alpha_bound(g.n, p.omega, p.k, p.b), prov)


# ---------------------------------------------------------------------------
# verification and bounds


@dataclass
class ContainerReport:
    family_size: int
    max_alpha: int
    a_bound: int
    uncovered: tuple[int, ...] | None
    coverage_checked: bool
    maximal_targets: int
    size_bound_ok: bool | None
    real_alpha_bound_ok: bool | None
    recurrence_bound: int | None

    @property
    def alpha_ok(self) -> bool:
        return self.max_alpha <= self.a_bound

    @property
    def passed(self) -> bool:
        return (self.alpha_ok and self.coverage_checked and self.uncovered is None
                and self.size_bound_ok is not False and self.real_alpha_bound_ok is not False
                and (self.recurrence_bound is None or self.max_alpha <= self.recurrence_bound))

    def to_dict(self) -> dict:
        d = dict(self.__dict__)
        d["passed"] = self.passed
        return d

    def claims(self) -> list[dict]:
        out = [{"name": "max member α ≤ a_bound", "claimed": self.a_bound, "achieved": self.max_alpha,
                "pass": self.alpha_ok},
               {"name": "every maximal α ≤ b set covered", "claimed": "all", "achieved": self.uncovered or "all",
                "pass": self.coverage_checked and self.uncovered is None}]
        if self.recurrence_bound is not None:
            out.append({"name": "max member α ≤ recurrence bound", "claimed": self.recurrence_bound,
                        "achieved": self.max_alpha, "pass": self.max_alpha <= self.recurrence_bound})
        if self.real_alpha_bound_ok is not None:
            out.append({"name": "max member α ≤ real-log exponent", "claimed": "exponent",
                        "achieved": self.max_alpha, "pass": self.real_alpha_bound_ok})
        if self.size_bound_ok is not None:
            out.append({"name": "family size ≤ (n+1)^exponent", "claimed": "(n+1)^exponent",
                        "achieved": self.family_size, "pass": self.size_bound_ok})
        return out


def verify_container_family(g: Graph, cf: ContainerFamily, cap: int = 12) -> ContainerReport:
    """Exhaustive check: member independence, coverage of every maximal α ≤ b set, size bound."""
    fam_masks = [to_mask(s) for s in cf.family]
    checked = g.n <= cap
    uncovered = None
    targets = 0
    if checked:
        table = alpha_table(g, cap=cap)
        max_alpha = max((table[m] for m in fam_masks), default=0)
        maximal = maximal_sets_with_alpha_at_most(g, cf.b, table)
        targets = len(maximal)
        for s in maximal:
            if not any(s & ~m == 0 for m in fam_masks):
                uncovered = members(s)
                break
    else:
        max_alpha = max((alpha_mask(g, m) for m in fam_masks), default=0)
    prov = cf.provenance
    size_ok = real_ok = None
    recurrence = None
    if prov.get("construction") == "small_b":
        om, k, b = prov["omega"], prov["k"], prov["b"]
        exponent = small_b_exponent_lower(g.n, om, k, b)
        real_ok = max_alpha <= exponent
        size_ok = size_within(len(cf.family), g.n + 1, exponent)
        recurrence = small_b_recurrence_bound(g.n, om, k, b)
    elif prov.get("construction") == "general":
        om, k, b = prov["omega"], prov["k"], prov["b"]
        exponent = Fraction(general_alpha_bound(g.n, om, k, b))
        size_ok = size_within(len(cf.family), g.n + 1, exponent)
    return ContainerReport(len(cf.family), max_alpha, cf.a_bound, uncovered, checked, targets,
                           size_ok, real_ok, recurrence)


def container_lower_bound(omega: int, b: int, a: int, k: int) -> Fraction:
    """Minimum size of any (b, a)-container family of the complement of k disjoint ω-cliques."""
    if not (0 <= b <= a < omega) or k < 1:
        raise PreconditionError("need 0 ≤ b ≤ a < omega and k ≥ 1")
    return Fraction(comb(omega, b) ** k, comb(a, b) ** k)


def minimal_container_bruteforce(g: Graph, b: int, a: int, cap: int = 9) -> int:
    """Exact minimum size of a (b, a)-container family, by set cover."""
    if g.n > cap:
        raise CapExceeded(f"brute-force container search limited to n ≤ {cap}", g.n)
    table = alpha_table(g, cap=cap)
    targets = maximal_sets_with_alpha_at_most(g, b, table)
    candidates = maximal_sets_with_alpha_at_most(g, a, table)
    cover_sets = []
    for c in candidates:
        m = 0
        for i, t in enumerate(targets):
            if t & ~c == 0:
                m |= 1 << i
        cover_sets.append(m)
    size, _ = exact_set_cover((1 << len(targets)) - 1, cover_sets)
    return size
