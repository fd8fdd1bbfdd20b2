"""Command-line front end.

Every subcommand writes a JSON report carrying the (claimed, achieved, pass)
triples of the library call it wraps. Exit status: 0 when every claim passes,
1 on a verification failure, 2 on bad usage or input.
"""
from __future__ import annotations

import argparse
import dataclasses
import inspect
import json
import math
import os
import platform
import sys
from concurrent.futures import ProcessPoolExecutor
from datetime import datetime, timezone
from fractions import Fraction

import numpy as np
import scipy

from . import __version__, absep, balsep, containers, lp, suite, treedecomp
from .errors import (CapExceeded, HypothesisViolated, InfeasibleLP, InstanceTooLarge, InvariantViolation,
                     LPNumericalError, PreconditionError, ProviderFailure, RetriesExhausted)
from .graph import (GENERATORS, PATH_CAP, Graph, is_ab_separator, is_balanced_separator, load_graph,
                    maximal_cliques, normalize_family)

USAGE_ERRORS = (PreconditionError, InstanceTooLarge, CapExceeded, HypothesisViolated, OSError, ValueError,
                KeyError, json.JSONDecodeError)
VERIFY_ERRORS = (InvariantViolation, RetriesExhausted, ProviderFailure, LPNumericalError, InfeasibleLP)


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# JSON plumbing


def jsonable(obj):
    if isinstance(obj, (Graph, treedecomp.TreeDecomposition, containers.ContainerFamily)):
        return obj.to_dict()
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj) if f.repr}
    if isinstance(obj, dict):
        return {k if isinstance(k, str) else json.dumps(jsonable(k)): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, np.generic):
        return jsonable(obj.item())
    if isinstance(obj, Fraction):
        return str(obj) if obj.denominator != 1 else int(obj)
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    return obj


def dump(obj) -> str:
    return json.dumps(jsonable(obj), ensure_ascii=False, sort_keys=True)


def provenance(args) -> dict:
    return {"command": [args.command, getattr(args, "action", None)], "seed": getattr(args, "seed", None),
            "tol": args.tol, "path_cap": args.path_cap,
            "versions": {"twalpha": __version__, "numpy": np.__version__, "scipy": scipy.__version__,
                         "python": platform.python_version()}}


def metadata() -> dict:
    return {"timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds")}


def emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def report(args, result, claims: list[dict], extra: dict | None = None) -> int:
    passed = all(c["pass"] for c in claims)
    prov = provenance(args)
    prov.update(extra or {})
    body = {"pass": passed, "claims": claims, "result": result, "provenance": prov, "metadata": metadata()}
    emit(dump(body), args.out)
    return 0 if passed else 1


# ---------------------------------------------------------------------------
# argument parsing helpers


def vertex_list(text: str) -> tuple[int, ...]:
    """``"0,2,5-7"`` → (0, 2, 5, 6, 7)."""
    out = set()
    for part in filter(None, (p.strip() for p in text.split(","))):
        lo, sep, hi = part.partition("-")
        if sep:
            out.update(range(int(lo), int(hi) + 1))
        else:
            out.add(int(part))
    return tuple(sorted(out))


def need(args, *names: str) -> None:
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"{args.command} {getattr(args, 'action', '')} needs "
                         + " ".join("--" + n.replace("_", "-") for n in missing))


def read_json(path: str):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def load_family(g: Graph, source: str | None):
    """A family file (array of sets or {"sets": ...}) or the keyword ``cliques``."""
    if source is None or source == "cliques":
        return maximal_cliques(g)
    data = read_json(source)
    sets = data["sets"] if isinstance(data, dict) else data
    return normalize_family(g, sets)


def family_alpha(g: Graph, f) -> int:
    from .graph import alpha
    return max((alpha(g, s) for s in f), default=0)


def env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    return int(raw) if raw else default


# ---------------------------------------------------------------------------
# subcommands


GEN_KINDS = {"star": suite.star, "hub": suite.hub_graph, "chordal": suite.random_chordal}


def cmd_gen(args) -> int:
    fn = GEN_KINDS.get(args.kind) or GENERATORS.get(args.kind)
    if fn is None:
        raise UsageError(f"unknown kind {args.kind!r}; choose from {sorted({*GEN_KINDS, *GENERATORS})}")
    accepted = inspect.signature(fn).parameters
    params = {k: getattr(args, k) for k in ("n", "k", "w", "s", "t", "p", "seed", "leaves", "hubs")
              if getattr(args, k) is not None and k in accepted}
    missing = [k for k, prm in accepted.items() if prm.default is prm.empty and k not in params]
    if missing:
        raise UsageError(f"kind {args.kind!r} needs --{' --'.join(missing)}")
    g = fn(**params)
    emit(dump(g), args.out)
    return 0


def cmd_containers(args) -> int:
    if args.action == "lowerbound":
        need(args, "omega", "b", "a", "k")
        bound = containers.container_lower_bound(args.omega, args.b, args.a, args.k)
        result = {"formula": bound}
        claims = []
        if args.graph:
            brute = containers.minimal_container_bruteforce(load_graph(args.graph), args.b, args.a)
            result["bruteforce"] = brute
            claims.append({"name": "brute-force minimum ≥ formula", "claimed": bound, "achieved": brute,
                           "pass": brute >= bound})
        return report(args, result, claims)
    need(args, "graph")
    g = load_graph(args.graph)
    if args.action == "build":
        need(args, "omega", "k", "b")
        p = containers.ContainerParams(args.omega, args.k, args.b)
        build = containers.build_containers if args.general else containers.build_containers_small_b
        cf = build(g, p, check_hypothesis=not args.trust)
        if args.family_out:
            emit(dump(cf), args.family_out)
    else:
        need(args, "family")
        data = read_json(args.family)
        cf = containers.ContainerFamily.from_dict(data)
    rep = containers.verify_container_family(g, cf, cap=args.n_cap)
    return report(args, {"family": cf, "report": rep.to_dict()}, rep.claims())


def cmd_lp(args) -> int:
    if args.action == "build":
        need(args, "graph")
        if args.I is None:
            need(args, "A", "B")
        g = load_graph(args.graph)
        f = load_family(g, args.family)
        if args.I is not None:
            m = lp.build_balanced_separator_lp(g, args.I, f, path_cap=args.path_cap)
        else:
            m = lp.build_ab_separator_lp(g, args.A, args.B, f, path_cap=args.path_cap)
        emit(m.to_text().rstrip("\n"), args.out)
        return 0
    need(args, "model")
    with open(args.model, encoding="utf-8") as fh:
        m = lp.LPModel.from_text(fh.read())
    sol = lp.solve_lp(m, tol=args.tol, method=args.method)
    claims = [{"name": "certified optimum", "claimed": "optimal", "achieved": sol.status, "pass": sol.optimal}]
    return report(args, sol, claims)


def cmd_absep(args) -> int:
    g = load_graph(args.graph)
    if args.action == "uvsep":
        need(args, "u", "v")
        if not args.containers:
            need(args, "omega", "k", "b")
        if args.containers:
            cfg = containers.ContainerFamily.from_dict(read_json(args.containers))
        else:
            cfg = containers.ContainerParams(args.omega, args.k, args.b)
        res = absep.small_alpha_uv_separator(g, args.u, args.v, cfg, args.f_target, ell=args.ell, seed=args.seed,
                                             mode=args.mode)
        return report(args, res, res.claims)
    need(args, "A", "B")
    f = load_family(g, args.family)
    a_bound = args.a_bound or family_alpha(g, f)
    if args.action == "round":
        sol = lp.solve_lp(lp.build_ab_separator_lp(g, args.A, args.B, f, path_cap=args.path_cap), tol=args.tol)
        x = lp.family_weights(sol, f)
        res = absep.ab_round(g, f, a_bound, args.A, args.B, x, mode=args.mode, path_cap=args.path_cap)
        claims = res.claims + [{"name": "A–B separator", "claimed": True,
                                "achieved": is_ab_separator(g, res.separator, args.A, args.B),
                                "pass": is_ab_separator(g, res.separator, args.A, args.B)}]
        return report(args, res, claims, {"a_bound": a_bound})
    ell = args.ell or max(1, math.ceil(math.log2(2 * len(f))))
    if args.action == "pack":
        res = absep.sample_path_packing(g, args.A, args.B, f, ell, seed=args.seed, max_retries=args.retries,
                                        path_cap=args.path_cap)
        return report(args, res, res.claims)
    res = absep.menger_dichotomy(g, args.A, args.B, f, a_bound, args.f_target, ell, seed=args.seed, mode=args.mode,
                                 max_retries=args.retries, path_cap=args.path_cap)
    return report(args, res, res.claims, {"a_bound": a_bound})


def cmd_balsep(args) -> int:
    if args.action in ("round", "sample"):
        need(args, "I")
    g = load_graph(args.graph)
    f = load_family(g, args.family)
    a_bound = args.a_bound or max(2, family_alpha(g, f))
    if args.action == "round":
        res = balsep.round_balanced_separator(g, args.I, f, a_bound, epsilon=args.scale, mode=args.mode,
                                              path_cap=args.path_cap)
        ok = is_balanced_separator(g, res.separator, args.I, balsep.HEAVY)
        claims = res.claims + [{"name": "(I, 95/100)-balanced", "claimed": True, "achieved": ok, "pass": ok}]
        return report(args, res, claims, {"a_bound": a_bound, "clamped": res.params.clamped,
                                          "epsilon_overridden": res.params.overridden})
    if args.action == "sample":
        res = balsep.sample_hard_subgraph(g, args.I, f, args.b, ell=args.ell, seed=args.seed,
                                          verify_level=args.verify, path_cap=args.path_cap)
        return report(args, res, res.claims)
    res = balsep.extract_hard_instance(g, f, a_bound, args.b, args.f_target, i_size=args.i_size, epsilon=args.scale,
                                       ell=args.ell, seed=args.seed, verify_level=args.verify, mode=args.mode,
                                       path_cap=args.path_cap)
    claims = list(res.claims)
    if res.hard is not None and args.certify:
        H = res.hard.H
        cert = treedecomp.check_tw_balanced_separator(H, range(H.n), args.certify)
        ok = not cert.found
        claims.append({"name": f"no balanced separator of size ≤ {args.certify} in the witness",
                       "claimed": True, "achieved": ok, "pass": ok})
        return report(args, {"extract": res, "certificate": cert}, claims, {"a_bound": a_bound})
    return report(args, res, claims, {"a_bound": a_bound})


def cmd_tdecomp(args) -> int:
    g = load_graph(args.graph)
    if args.action == "build":
        log = treedecomp.BuildLog()
        td = treedecomp.build_td_small_alpha(g, args.a_target, treedecomp.exhaustive_provider, log=log)
        claims = treedecomp.td_claims(g, td, args.a_target)
        return report(args, {"td": td, "queries": log.queries}, claims)
    if args.action == "verify":
        need(args, "td")
        td = treedecomp.TreeDecomposition.from_dict(read_json(args.td))
        rep = treedecomp.verify_td(g, td)
        claims = [{"name": "valid tree decomposition", "claimed": True, "achieved": rep.passed, "pass": rep.passed}]
        result = {"report": rep, "independence": treedecomp.td_independence(g, td) if rep.passed else None}
        return report(args, result, claims)
    if args.action == "brute-tw":
        return report(args, {"tw": treedecomp.brute_tw(g, cap=args.n_cap)}, [])
    return report(args, {"tw_alpha": treedecomp.brute_tw_alpha(g, cap=args.n_cap)}, [])


def _criterion(job: tuple[int, int]) -> dict:
    number, master = job
    res = next(suite.run_acceptance(master, [number]))
    return {"criterion": res.number, "title": res.title, "pass": res.passed, "detail": res.detail,
            "records": res.records, "metadata": {"seconds": round(res.seconds, 3)}}


def cmd_corpus(args) -> int:
    only = list(args.only or suite.CRITERIA)
    jobs = [(n, args.seed) for n in only]
    out = open(args.out, "a", encoding="utf-8") if args.out else sys.stdout
    ok = True
    try:
        if args.jobs > 1:
            pool = ProcessPoolExecutor(args.jobs)
            rows = pool.map(_criterion, jobs)
        else:
            pool = None
            rows = map(_criterion, jobs)
        for row in rows:
            row["provenance"] = provenance(args)
            row["metadata"].update(metadata())
            out.write(dump(row) + "\n")
            out.flush()
            print(f"[{'PASS' if row['pass'] else 'FAIL'}] criterion {row['criterion']}: {row['title']}",
                  file=sys.stderr)
            ok &= row["pass"]
        if pool:
            pool.shutdown()
    finally:
        if args.out:
            out.close()
    return 0 if ok else 1


def cmd_verify(args) -> int:
    g = load_graph(args.graph)
    claims = []
    if args.td:
        rep = treedecomp.verify_td(g, treedecomp.TreeDecomposition.from_dict(read_json(args.td)))
        claims.append({"name": "valid tree decomposition", "claimed": True, "achieved": rep.passed,
                       "pass": rep.passed})
    if args.containers:
        rep = containers.verify_container_family(g, containers.ContainerFamily.from_dict(read_json(args.containers)),
                                                 cap=args.n_cap)
        claims += rep.claims()
    if args.separator is not None:
        if args.A is not None and args.B is not None:
            ok = is_ab_separator(g, args.separator, args.A, args.B)
            claims.append({"name": "A–B separator", "claimed": True, "achieved": ok, "pass": ok})
        if args.I is not None:
            phi = Fraction(args.phi)
            ok = is_balanced_separator(g, args.separator, args.I, phi)
            claims.append({"name": f"(I, {phi})-balanced", "claimed": True, "achieved": ok, "pass": ok})
        if args.family:
            val = lp.fcov(g, load_family(g, args.family), args.separator, method="simplex")[0]
            claims.append({"name": "fcov recomputed", "claimed": None, "achieved": val, "pass": True})
    if not claims:
        raise UsageError("nothing to verify: pass --td, --containers or --separator")
    return report(args, {}, claims)


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--tol", type=float, default=lp.DEFAULT_TOL)
    common.add_argument("--path-cap", type=int, default=env_int("TWALPHA_PATH_CAP", PATH_CAP))
    common.add_argument("--n-cap", type=int, default=env_int("TWALPHA_N_CAP", 12))
    common.add_argument("--out", help="report path (default: stdout)")

    parser = argparse.ArgumentParser(prog="twalpha", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", parents=[common], help="write a graph file")
    gen.add_argument("--kind", required=True)
    for name, typ in (("n", int), ("k", int), ("w", int), ("s", int), ("t", int), ("p", float),
                      ("leaves", int), ("hubs", int)):
        gen.add_argument(f"--{name}", type=typ)
    gen.set_defaults(func=cmd_gen)

    cont = sub.add_parser("containers", parents=[common], help="container families")
    cont.add_argument("action", choices=("build", "verify", "lowerbound"))
    cont.add_argument("--graph")
    cont.add_argument("--family", help="family file to verify")
    cont.add_argument("--family-out", help="where build writes the family")
    cont.add_argument("--omega", type=int)
    cont.add_argument("--k", type=int)
    cont.add_argument("--b", type=int)
    cont.add_argument("--a", type=int)
    cont.add_argument("--general", action="store_true")
    cont.add_argument("--trust", action="store_true", help="skip the forbidden-subgraph search")
    cont.set_defaults(func=cmd_containers)

    lpp = sub.add_parser("lp", parents=[common], help="separator LPs")
    lpp.add_argument("action", choices=("build", "solve"))
    lpp.add_argument("--model")
    lpp.add_argument("--method", choices=("highs", "simplex", "exact"), default="highs")
    lpp.add_argument("--graph")
    lpp.add_argument("--family")
    lpp.add_argument("--A", type=vertex_list)
    lpp.add_argument("--B", type=vertex_list)
    lpp.add_argument("--I", type=vertex_list)
    lpp.set_defaults(func=cmd_lp)

    ab = sub.add_parser("absep", parents=[common], help="A–B separators and path packings")
    ab.add_argument("action", choices=("round", "pack", "dichotomy", "uvsep"))
    ab.add_argument("--graph", required=True)
    ab.add_argument("--family")
    ab.add_argument("--A", type=vertex_list)
    ab.add_argument("--B", type=vertex_list)
    ab.add_argument("--u", type=int)
    ab.add_argument("--v", type=int)
    ab.add_argument("--containers", help="container family file for uvsep")
    ab.add_argument("--omega", type=int)
    ab.add_argument("--k", type=int)
    ab.add_argument("--b", type=int, default=1)
    ab.add_argument("--a-bound", type=int)
    ab.add_argument("--ell", type=int)
    ab.add_argument("--f-target", type=float, default=1.0)
    ab.add_argument("--retries", type=int, default=16)
    ab.add_argument("--mode", choices=("exact", "vw"), default="exact")
    ab.set_defaults(func=cmd_absep)

    bs = sub.add_parser("balsep", parents=[common], help="balanced separators and hard subgraphs")
    bs.add_argument("action", choices=("round", "sample", "extract"))
    bs.add_argument("--graph", required=True)
    bs.add_argument("--family")
    bs.add_argument("--I", type=vertex_list)
    bs.add_argument("--b", type=int, default=1)
    bs.add_argument("--a-bound", type=int)
    bs.add_argument("--ell", type=int)
    bs.add_argument("--f-target", type=float, default=1.0)
    bs.add_argument("--i-size", type=int)
    bs.add_argument("--scale", type=float, help="override the region-growing step size")
    bs.add_argument("--verify", choices=("basic", "full"), default="basic")
    bs.add_argument("--mode", choices=("exact", "vw"), default="exact")
    bs.add_argument("--certify", type=int, default=0,
                    help="on the hard branch, rule out balanced separators of this size in the witness")
    bs.set_defaults(func=cmd_balsep)

    td = sub.add_parser("tdecomp", parents=[common], help="tree decompositions")
    td.add_argument("action", choices=("build", "verify", "brute-tw", "brute-twalpha"))
    td.add_argument("--graph", required=True)
    td.add_argument("--td")
    td.add_argument("--a-target", type=int, default=1)
    td.set_defaults(func=cmd_tdecomp)

    cp = sub.add_parser("corpus", parents=[common], help="run the seeded acceptance corpus (JSON lines)")
    cp.add_argument("--suite", choices=("acceptance",), default="acceptance")
    cp.add_argument("--only", type=int, nargs="*")
    cp.add_argument("--jobs", type=int, default=1)
    cp.set_defaults(func=cmd_corpus)

    ver = sub.add_parser("verify", parents=[common], help="check a decomposition, family or separator")
    ver.add_argument("--graph", required=True)
    ver.add_argument("--td")
    ver.add_argument("--containers")
    ver.add_argument("--separator", type=vertex_list)
    ver.add_argument("--family")
    ver.add_argument("--A", type=vertex_list)
    ver.add_argument("--B", type=vertex_list)
    ver.add_argument("--I", type=vertex_list)
    ver.add_argument("--phi", default="1/2")
    ver.set_defaults(func=cmd_verify)
    return parser


def run_command(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code == 0 else 2
    try:
        return args.func(args)
    except VERIFY_ERRORS as e:
        print(f"verification failed: {type(e).__name__}: {e}", file=sys.stderr)
        return 1
    except (UsageError, *USAGE_ERRORS) as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run_command())
