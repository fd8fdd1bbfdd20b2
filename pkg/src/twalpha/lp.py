"""Linear programs with tagged constraints, certified solves and cover numbers.

Every solve is checked against its own optimality certificate (primal
feasibility, dual feasibility, zero gap) before being returned, whichever
backend produced it.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Iterable

import numpy as np
from scipy import optimize, sparse

from .errors import CapExceeded, InfeasibleLP, InvariantViolation, LPNumericalError, PreconditionError
from .graph import (Family, Graph, PATH_CAP, bits, is_independent, iter_induced_paths_from,
                    membership_masks, enumerate_induced_paths, to_mask, vertex_set)

DEFAULT_TOL = 1e-7
RELATIONS = ("<=", ">=", "=")


@dataclass
class Constraint:
    coeffs: dict[str, object]
    rel: str
    rhs: object
    tag: Hashable


@dataclass
class LPModel:
    """A linear program over nonnegative variables.

    ``upper`` holds optional upper bounds; they are solved as ordinary
    constraints tagged ``("ub", name)``.
    """

    sense: str = "min"
    variables: list[str] = field(default_factory=list)
    objective: dict[str, object] = field(default_factory=dict)
    constraints: list[Constraint] = field(default_factory=list)
    upper: dict[str, object] = field(default_factory=dict)
    meta: dict = field(default_factory=dict)
    _tags: set = field(default_factory=set, repr=False)
    _names: set = field(default_factory=set, repr=False)

    def add_variable(self, name: str, cost=0, upper=None) -> str:
        if name in self._names:
            raise PreconditionError(f"duplicate variable {name!r}")
        self._names.add(name)
        self.variables.append(name)
        if cost:
            self.objective[name] = cost
        if upper is not None:
            self.upper[name] = upper
        return name

    def add_constraint(self, coeffs: dict[str, object], rel: str, rhs, tag: Hashable) -> None:
        if rel not in RELATIONS:
            raise PreconditionError(f"bad relation {rel!r}")
        if tag in self._tags:
            raise PreconditionError(f"duplicate constraint tag {tag!r}")
        for name in coeffs:
            if name not in self._names:
                raise PreconditionError(f"constraint {tag!r} uses undeclared variable {name!r}")
        self._tags.add(tag)
        self.constraints.append(Constraint(dict(coeffs), rel, rhs, tag))

    def all_constraints(self) -> list[Constraint]:
        extra = [Constraint({v: 1}, "<=", ub, ("ub", v)) for v, ub in self.upper.items()]
        return self.constraints + extra

    def validate(self) -> None:
        if self.sense not in ("min", "max"):
            raise PreconditionError(f"bad sense {self.sense!r}")
        for name in self.objective:
            if name not in self._names:
                raise PreconditionError(f"objective uses undeclared variable {name!r}")

    # plain-text round trip
    def to_text(self) -> str:
        lines = [f"sense {self.sense}", "vars " + " ".join(self.variables)]
        lines.append("obj " + " ".join(f"{v} {_fmt(c)}" for v, c in self.objective.items()))
        for v, ub in self.upper.items():
            lines.append(f"ub {v} {_fmt(ub)}")
        for c in self.constraints:
            terms = " ".join(f"{v} {_fmt(a)}" for v, a in c.coeffs.items())
            lines.append(f"con {json.dumps(c.tag, separators=(',', ':'))} | {terms} {c.rel} {_fmt(c.rhs)}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "LPModel":
        m = cls()
        for raw in text.splitlines():
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            head, _, rest = line.partition(" ")
            if head == "sense":
                m.sense = rest.strip()
            elif head == "vars":
                for v in rest.split():
                    m.add_variable(v)
            elif head == "obj":
                toks = rest.split()
                m.objective = {toks[i]: _num(toks[i + 1]) for i in range(0, len(toks), 2)}
            elif head == "ub":
                v, val = rest.split()
                m.upper[v] = _num(val)
            elif head == "con":
                tag_txt, _, body = rest.partition(" | ")
                toks = body.split()
                rel, rhs = toks[-2], _num(toks[-1])
                coeffs = {toks[i]: _num(toks[i + 1]) for i in range(0, len(toks) - 2, 2)}
                m.add_constraint(coeffs, rel, rhs, _tuplify(json.loads(tag_txt)))
            else:
                raise PreconditionError(f"unrecognized LP line: {raw!r}")
        m.validate()
        return m


def _fmt(x) -> str:
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return repr(x)


def _num(tok: str):
    if "/" in tok:
        return Fraction(tok)
    try:
        return int(tok)
    except ValueError:
        return float(tok)


def _tuplify(obj):
    if isinstance(obj, list):
        return tuple(_tuplify(o) for o in obj)
    return obj


@dataclass
class LPSolution:
    status: str
    objective: object = None
    values: dict[str, object] = field(default_factory=dict)
    duals: dict[Hashable, object] = field(default_factory=dict)
    method: str = ""
    residuals: dict[str, float] = field(default_factory=dict)
    model: LPModel | None = field(default=None, repr=False)

    @property
    def optimal(self) -> bool:
        return self.status == "optimal"

    def value(self, name: str):
        return self.values.get(name, 0)

    def dual(self, tag: Hashable):
        return self.duals[tag]


# ---------------------------------------------------------------------------
# solving


def solve_lp(model: LPModel, tol: float = DEFAULT_TOL, method: str = "highs") -> LPSolution:
    """Solve ``model`` and certify the answer.

    ``method`` is ``"highs"`` (scipy's dual simplex), ``"simplex"`` (the
    built-in tableau simplex in floating point) or ``"exact"`` (the same
    simplex over rationals). Duals are reported as the sensitivity of the
    optimum to each right-hand side, in the model's own sense.
    """
    model.validate()
    cons = model.all_constraints()
    index = {v: j for j, v in enumerate(model.variables)}
    if method == "highs":
        status, x, y = _solve_highs(model, cons, index)
    elif method in ("simplex", "exact"):
        status, x, y = _solve_tableau(model, cons, index, exact=method == "exact")
    else:
        raise PreconditionError(f"unknown LP method {method!r}")
    sol = LPSolution(status=status, method=method, model=model)
    if status != "optimal":
        return sol
    sol.values = {v: x[j] for v, j in index.items()}
    sol.duals = {c.tag: y[i] for i, c in enumerate(cons)}
    sol.objective = sum((model.objective.get(v, 0) * x[index[v]] for v in model.objective),
                        Fraction(0) if method == "exact" else 0.0)
    sol.residuals = certify(model, cons, index, x, y, tol)
    return sol


def _solve_highs(model, cons, index):
    nvar, ncon = len(index), len(cons)
    sign = 1.0 if model.sense == "min" else -1.0
    c = np.zeros(nvar)
    for v, a in model.objective.items():
        c[index[v]] = sign * float(a)
    ub_rows, ub_cols, ub_vals, b_ub, ub_map = [], [], [], [], []
    eq_rows, eq_cols, eq_vals, b_eq, eq_map = [], [], [], [], []
    for i, con in enumerate(cons):
        if con.rel == "=":
            r = len(b_eq)
            for v, a in con.coeffs.items():
                eq_rows.append(r); eq_cols.append(index[v]); eq_vals.append(float(a))
            b_eq.append(float(con.rhs)); eq_map.append(i)
        else:
            flip = -1.0 if con.rel == ">=" else 1.0
            r = len(b_ub)
            for v, a in con.coeffs.items():
                ub_rows.append(r); ub_cols.append(index[v]); ub_vals.append(flip * float(a))
            b_ub.append(flip * float(con.rhs)); ub_map.append((i, flip))
    kw = {}
    if b_ub:
        kw["A_ub"] = sparse.csr_matrix((ub_vals, (ub_rows, ub_cols)), shape=(len(b_ub), nvar))
        kw["b_ub"] = np.array(b_ub)
    if b_eq:
        kw["A_eq"] = sparse.csr_matrix((eq_vals, (eq_rows, eq_cols)), shape=(len(b_eq), nvar))
        kw["b_eq"] = np.array(b_eq)
    if nvar == 0:
        # scipy rejects empty problems; feasibility is a direct check
        ok = all(_holds(0.0, con.rel, float(con.rhs), 1e-12) for con in cons)
        return ("optimal" if ok else "infeasible"), [], [0.0] * ncon
    res = optimize.linprog(c, bounds=(0, None), method="highs-ds",
                           options={"primal_feasibility_tolerance": 1e-10,
                                    "dual_feasibility_tolerance": 1e-10, "presolve": False}, **kw)
    if res.status == 2:
        return "infeasible", None, None
    if res.status == 3:
        return "unbounded", None, None
    if res.status != 0:
        raise LPNumericalError(f"HiGHS failed: {res.message}")
    y = [0.0] * ncon
    if b_ub:
        for r, (i, flip) in enumerate(ub_map):
            y[i] = sign * flip * float(res.ineqlin.marginals[r])
    if b_eq:
        for r, i in enumerate(eq_map):
            y[i] = sign * float(res.eqlin.marginals[r])
    return "optimal", [float(v) for v in res.x], y


def _holds(lhs, rel, rhs, tol) -> bool:
    if rel == "<=":
        return lhs <= rhs + tol
    if rel == ">=":
        return lhs >= rhs - tol
    return abs(lhs - rhs) <= tol


def _solve_tableau(model, cons, index, exact: bool):
    """Two-phase dense tableau simplex with Bland's rule."""
    num = Fraction if exact else float
    zero = num(0)
    eps = 0 if exact else 1e-11
    nvar, m = len(index), len(cons)
    sign = 1 if model.sense == "min" else -1
    rows, rels, rhs, flipped = [], [], [], []
    for con in cons:
        row = {index[v]: num(a) for v, a in con.coeffs.items()}
        b = num(con.rhs)
        rel = con.rel
        flip = b < 0
        if flip:
            row = {j: -a for j, a in row.items()}
            b = -b
            rel = {"<=": ">=", ">=": "<=", "=": "="}[rel]
        rows.append(row); rels.append(rel); rhs.append(b); flipped.append(flip)
    # column layout: originals, one slack/surplus per inequality, artificials
    ncol = nvar
    slack_col, art_col = [None] * m, [None] * m
    for i, rel in enumerate(rels):
        if rel != "=":
            slack_col[i] = ncol; ncol += 1
    for i, rel in enumerate(rels):
        if rel != "<=":
            art_col[i] = ncol; ncol += 1
    is_art = [False] * ncol
    for i in range(m):
        if art_col[i] is not None:
            is_art[art_col[i]] = True
    tab = []
    basis = []
    for i in range(m):
        r = [zero] * (ncol + 1)
        for j, a in rows[i].items():
            r[j] += a
        if slack_col[i] is not None:
            r[slack_col[i]] = num(1) if rels[i] == "<=" else num(-1)
        if art_col[i] is not None:
            r[art_col[i]] = num(1)
        r[ncol] = rhs[i]
        tab.append(r)
        basis.append(slack_col[i] if rels[i] == "<=" else art_col[i])
    ident = [slack_col[i] if rels[i] == "<=" else art_col[i] for i in range(m)]

    def pivot(pr: int, pc: int, cost: list) -> None:
        prow = tab[pr]
        pv = prow[pc]
        for j in range(ncol + 1):
            prow[j] = prow[j] / pv
        for i in range(m):
            if i != pr:
                f = tab[i][pc]
                if f != 0:
                    ri = tab[i]
                    for j in range(ncol + 1):
                        if prow[j] != 0:
                            ri[j] -= f * prow[j]
        f = cost[pc]
        if f != 0:
            for j in range(ncol + 1):
                if prow[j] != 0:
                    cost[j] -= f * prow[j]
        basis[pr] = pc

    def run(cost: list, allowed) -> str:
        for _ in range(100_000):
            enter = next((j for j in range(ncol) if allowed[j] and cost[j] < -eps - (0 if exact else 1e-10)), None)
            if enter is None:
                return "optimal"
            best, leave = None, None
            for i in range(m):
                a = tab[i][enter]
                if a > eps:
                    ratio = tab[i][ncol] / a
                    if best is None or ratio < best - (0 if exact else 1e-12) or (
                            (ratio == best if exact else abs(ratio - best) <= 1e-12) and basis[i] < basis[leave]):
                        best, leave = ratio, i
            if leave is None:
                return "unbounded"
            pivot(leave, enter, cost)
        raise LPNumericalError("simplex iteration limit reached")

    def reduced(costs: list) -> list:
        cost = list(costs) + [zero]
        for i, bcol in enumerate(basis):
            cb = costs[bcol]
            if cb != 0:
                for j in range(ncol + 1):
                    cost[j] -= cb * tab[i][j]
        return cost

    if any(is_art):
        c1 = [num(1) if is_art[j] else zero for j in range(ncol)]
        cost = reduced(c1)
        run(cost, [True] * ncol)
        if -cost[ncol] > (0 if exact else 1e-9):
            return "infeasible", None, None
        for i in range(m):
            if is_art[basis[i]]:
                thr = 0 if exact else 1e-9
                j = next((j for j in range(ncol) if not is_art[j] and abs(tab[i][j]) > thr), None)
                if j is not None:
                    pivot(i, j, cost)
    c2 = [zero] * ncol
    for v, a in model.objective.items():
        c2[index[v]] = num(a) * sign
    cost = reduced(c2)
    status = run(cost, [not a for a in is_art])
    if status != "optimal":
        return status, None, None
    x = [zero] * nvar
    for i, bcol in enumerate(basis):
        if bcol < nvar:
            x[bcol] = tab[i][ncol]
    y = []
    for i in range(m):
        yi = -cost[ident[i]]
        if flipped[i]:
            yi = -yi
        y.append(sign * yi + zero)
    return "optimal", x, y


def certify(model: LPModel, cons: list[Constraint], index: dict, x, y, tol: float) -> dict[str, float]:
    """Check primal/dual feasibility and the duality gap; raise when any fails."""
    sign = 1 if model.sense == "min" else -1
    primal = 0.0
    for con in cons:
        lhs = sum(a * x[index[v]] for v, a in con.coeffs.items())
        diff = float(lhs - con.rhs)
        scale = 1.0 + abs(float(con.rhs))
        if con.rel == "<=":
            primal = max(primal, diff / scale)
        elif con.rel == ">=":
            primal = max(primal, -diff / scale)
        else:
            primal = max(primal, abs(diff) / scale)
    primal = max([primal] + [-float(v) for v in x])
    # reduced costs: c_j - sum_i y_i a_ij must be >= 0 (min) or <= 0 (max)
    red = [float(model.objective.get(v, 0)) for v in model.variables]
    for i, con in enumerate(cons):
        yi = float(y[i])
        if yi:
            for v, a in con.coeffs.items():
                red[index[v]] -= yi * float(a)
    dual = max([0.0] + [-sign * r for r in red])
    for i, con in enumerate(cons):
        yi = sign * float(y[i])
        if con.rel == ">=":
            dual = max(dual, -yi)
        elif con.rel == "<=":
            dual = max(dual, yi)
    pobj = float(sum(a * x[index[v]] for v, a in model.objective.items()))
    dobj = float(sum(y[i] * con.rhs for i, con in enumerate(cons)))
    gap = abs(pobj - dobj) / (1.0 + abs(pobj))
    out = {"primal": primal, "dual": dual, "gap": gap}
    if primal > tol or dual > tol or gap > tol:
        raise LPNumericalError(f"LP certificate check failed: {out}")
    return out


# ---------------------------------------------------------------------------
# cover numbers


def _relevant(f: Family, smask: int) -> list[int]:
    return [i for i, s in enumerate(f) if to_mask(s) & smask]


def fcov(g: Graph, f: Family, s: Iterable[int], exact: bool = False,
         tol: float = DEFAULT_TOL, method: str | None = None) -> tuple[object, tuple]:
    """Fractional cover number of ``s`` by ``f`` and a realizing weight vector.

    ``method`` picks the LP backend; by default HiGHS, or rational arithmetic
    when ``exact`` is set.
    """
    s = vertex_set(g, s)
    zero = Fraction(0) if exact else 0.0
    if not s:
        return zero, tuple(zero for _ in f)
    smask = to_mask(s)
    owners = membership_masks(g.n, f)
    for v in s:
        if not owners[v]:
            raise InfeasibleLP(f"uncoverable vertex {v}: no family member contains it", witness=v)
    rel = _relevant(f, smask)
    m = LPModel()
    for i in rel:
        m.add_variable(f"x{i}", cost=1)
    for v in s:
        m.add_constraint({f"x{i}": 1 for i in bits(owners[v])}, ">=", 1, ("cover", v))
    sol = solve_lp(m, tol=tol, method=method or ("exact" if exact else "highs"))
    if not sol.optimal:
        raise LPNumericalError(f"fractional cover LP returned {sol.status}")
    weights = [zero] * len(f)
    for i in rel:
        weights[i] = sol.value(f"x{i}")
    return sol.objective, tuple(weights)


def exact_set_cover(universe: int, sets: list[int], cap: int | None = None) -> tuple[int, tuple[int, ...]]:
    """Minimum number of ``sets`` (bitmasks) whose union contains ``universe``.

    Returns ``(size, chosen indices)``; raises InfeasibleLP when impossible.
    """
    if cap is not None and len(sets) > cap:
        raise CapExceeded(f"exact set cover over {len(sets)} sets exceeds cap {cap}", len(sets))
    if universe & ~_union(sets):
        missing = (universe & ~_union(sets)).bit_length() - 1
        raise InfeasibleLP(f"uncoverable element {missing}", witness=missing)
    containing: dict[int, list[int]] = {}
    for e in bits(universe):
        containing[e] = sorted((i for i, s in enumerate(sets) if s >> e & 1),
                               key=lambda i: -(sets[i] & universe).bit_count())
    biggest = max((s & universe).bit_count() for s in sets) if sets else 0
    best: list = [math.inf, ()]

    def rec(uncovered: int, chosen: list[int]) -> None:
        if not uncovered:
            if len(chosen) < best[0]:
                best[0], best[1] = len(chosen), tuple(chosen)
            return
        if len(chosen) + -(-uncovered.bit_count() // biggest) >= best[0]:
            return
        e = min(bits(uncovered), key=lambda v: len(containing[v]))
        for i in containing[e]:
            chosen.append(i)
            rec(uncovered & ~sets[i], chosen)
            chosen.pop()

    rec(universe, [])
    return best[0], tuple(sorted(best[1]))


def _union(sets: list[int]) -> int:
    out = 0
    for s in sets:
        out |= s
    return out


def cov(g: Graph, f: Family, s: Iterable[int], cap: int = 24) -> int:
    """Integral cover number, by exact search over the members meeting ``s``."""
    s = vertex_set(g, s)
    if not s:
        return 0
    smask = to_mask(s)
    rel = _relevant(f, smask)
    size, _ = exact_set_cover(smask, [to_mask(f[i]) for i in rel], cap=cap)
    return size


# ---------------------------------------------------------------------------
# the two separator LPs


def _hit_mask(path, owners) -> int:
    m = 0
    for v in path:
        m |= owners[v]
    return m


def build_ab_separator_lp(g: Graph, a: Iterable[int], b: Iterable[int], f: Family,
                          path_cap: int = PATH_CAP) -> LPModel:
    """Minimize total weight subject to every induced A–B path being covered once."""
    a, b = vertex_set(g, a), vertex_set(g, b)
    owners = membership_masks(g.n, f)
    paths = enumerate_induced_paths(g, a, b, cap=path_cap) if a and b else []
    m = LPModel()
    for i in range(len(f)):
        m.add_variable(f"x{i}", cost=1)
    uncovered = []
    hits = []
    for p in paths:
        hm = _hit_mask(p, owners)
        hits.append(hm)
        if not hm:
            uncovered.append(p)
        m.add_constraint({f"x{i}": 1 for i in bits(hm)}, ">=", 1, ("path", p))
    m.meta.update(kind="ab", A=a, B=b, family=f, paths=paths, hits=hits, uncovered_paths=uncovered)
    return m


def d_name(u: int, v: int) -> str:
    return f"d{u}_{v}"


def build_balanced_separator_lp(g: Graph, i: Iterable[int], f: Family, path_cap: int = PATH_CAP) -> LPModel:
    """The balanced-separator LP over an independent set ``i``.

    There is one distance variable per ordered pair ``(u, v)`` of ``i``,
    including ``u = v``, whose only path is the single vertex ``u``.
    Constraint tags: ``("rho", u)``, ``("gamma", u, v, P)`` with ``P``
    oriented from ``u`` to ``v``, and ``("eta", u, v)``. All constraints are
    written in ``>=`` form so their duals are nonnegative.
    """
    i = vertex_set(g, i)
    if not i:
        raise PreconditionError("independent set must be nonempty")
    if not is_independent(g, i):
        raise PreconditionError("vertex set is not independent")
    owners = membership_masks(g.n, f)
    imask = to_mask(i)
    paths: dict[tuple[int, int], list[tuple[int, ...]]] = {(u, v): [] for u in i for v in i}
    total = 0
    for u in i:
        for p in iter_induced_paths_from(g, u):
            if imask >> p[-1] & 1:
                paths[(u, p[-1])].append(p)
                total += 1
                if total > path_cap:
                    raise CapExceeded(f"more than {path_cap} induced paths between independent-set vertices", total)
    m = LPModel()
    for j in range(len(f)):
        m.add_variable(f"x{j}", cost=1)
    for u in i:
        for v in i:
            m.add_variable(d_name(u, v))
    quota = Fraction(len(i), 10)
    for u in i:
        m.add_constraint({d_name(u, v): 1 for v in i}, ">=", quota, ("rho", u))
    hits = {}
    for (u, v), plist in paths.items():
        plist.sort(key=lambda p: (len(p), p))
        for p in plist:
            hm = _hit_mask(p, owners)
            hits[(u, v, p)] = hm
            coeffs = {f"x{j}": 1 for j in bits(hm)}
            coeffs[d_name(u, v)] = -1
            m.add_constraint(coeffs, ">=", 0, ("gamma", u, v, p))
    for u in i:
        for v in i:
            m.add_constraint({d_name(u, v): -1}, ">=", -1, ("eta", u, v))
    m.meta.update(kind="balanced", I=i, family=f, paths=paths, hits=hits)
    return m


def family_weights(sol: LPSolution, f: Family) -> tuple:
    return tuple(sol.value(f"x{j}") for j in range(len(f)))


@dataclass
class BalancedDual:
    """Nonnegative dual values of the balanced-separator LP."""

    I: tuple[int, ...]
    rho: dict[int, float]
    eta: dict[tuple[int, int], float]
    gamma: dict[tuple, float]
    gamma_uv: dict[tuple[int, int], float]
    rho_total: float
    lp_opt: float
    hits: dict[tuple, int]
    family_size: int

    def check(self, tol: float = 1e-6) -> dict[str, float]:
        """Residuals of the dual invariants; positive means violated."""
        k = len(self.I)
        part1 = max(sum(self.eta[(u, v)] for v in self.I) - k / 10 * self.rho[u] for u in self.I)
        part2 = 10 * self.lp_opt - self.rho_total * k
        pair = max(self.rho[u] - self.eta[(u, v)] - self.gamma_uv[(u, v)] for u in self.I for v in self.I)
        load = [0.0] * self.family_size
        for key, gval in self.gamma.items():
            if gval:
                for j in bits(self.hits[key]):
                    load[j] += gval
        member = max(load, default=0.0) - 1
        objective = abs(k / 10 * self.rho_total - sum(self.eta.values()) - self.lp_opt)
        out = {"eta_vs_rho": part1, "lp_vs_rho": part2, "pair_feasibility": pair,
               "member_feasibility": member, "objective_gap": objective}
        scaled = {name: val / (1 + self.lp_opt) for name, val in out.items()}
        bad = {name: val for name, val in scaled.items() if val > tol}
        if bad:
            raise InvariantViolation(f"balanced dual invariants fail: {bad}")
        return out


def extract_balanced_dual(sol: LPSolution, i: Iterable[int] | None = None, tol: float = 1e-6) -> BalancedDual:
    if not sol.optimal:
        raise PreconditionError(f"solution status is {sol.status}, not optimal")
    model = sol.model
    if model is None or model.meta.get("kind") != "balanced":
        raise PreconditionError("solution does not come from a balanced-separator LP")
    I = model.meta["I"]
    if i is not None and tuple(sorted(i)) != I:
        raise PreconditionError("independent set does not match the model")

    def clamp(t):
        return max(0.0, float(sol.duals[t]))

    rho = {u: clamp(("rho", u)) for u in I}
    eta = {(u, v): clamp(("eta", u, v)) for u in I for v in I}
    gamma = {}
    gamma_uv = {(u, v): 0.0 for u in I for v in I}
    for (u, v), plist in model.meta["paths"].items():
        for p in plist:
            val = clamp(("gamma", u, v, p))
            gamma[(u, v, p)] = val
            gamma_uv[(u, v)] += val
    dual = BalancedDual(I=I, rho=rho, eta=eta, gamma=gamma, gamma_uv=gamma_uv,
                        rho_total=sum(rho.values()), lp_opt=float(sol.objective),
                        hits=model.meta["hits"], family_size=len(model.meta["family"]))
    dual.check(tol)
    return dual
