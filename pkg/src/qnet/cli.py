"""Command-line entry point: ``qnet check|evolve|decompose|edges|normalize``.

Exit codes: 0 pass, 1 check failure, 2 usage or config error,
3 inconclusive, 4 failed precondition.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import checks, laws, suites
from .dynamics import (DYNAMICS_NOTE, binary_chain_universe, block_decompose,
                       block_decompose_no_ancilla, walk_chain_universe)
from .formats import (ParseError, RunConfig, dumps, parse_graph, parse_name, parse_operator,
                      parse_restriction, parse_universe, state_to_json, write_atomic)
from .graphs import Graph, SupportEscape, System, UniverseTooLarge, chain_names, induced_edges
from .hilbert import ket
from .reports import FAIL, INCONCLUSIVE, INTERNAL_DISAGREEMENT, PASS, PreconditionFailed, jsonable
from .restrict import comprehended
from .tensor_trace import dense_partial_trace

EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_INCONCLUSIVE, EXIT_PRECONDITION = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


class NormDrift(Exception):
    pass


def _exit_for(statuses) -> int:
    statuses = list(statuses)
    if any(s in (FAIL, INTERNAL_DISAGREEMENT) for s in statuses):
        return EXIT_FAIL
    if any(s == INCONCLUSIVE for s in statuses):
        return EXIT_INCONCLUSIVE
    return EXIT_PASS


def _emit(payload: dict, out: str | None):
    text = dumps(jsonable(payload))
    if out:
        write_atomic(out, text)
    sys.stdout.write(text)


def _seed(cfg_seed: int) -> int:
    env = os.environ.get("QNET_SEED")
    if env is None:
        return cfg_seed
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"QNET_SEED must be an integer, got {env!r}")


# check ---------------------------------------------------------------------

CHECKERS = {"local", "strictly-local", "causal", "unitary", "name-preserving"}
SUITES = {"equivalence", "causal-dual", "traceout", "pm-support"}


def _config(args) -> RunConfig:
    cfg = RunConfig.load(args.config) if args.config else RunConfig()
    if args.universe:
        cfg.universe = args.universe
    if args.law:
        cfg.laws = [args.law]
    if args.restriction:
        cfg.restrictions = list(args.restriction)
    if args.op:
        cfg.operator = args.op
    if args.seed is not None:
        cfg.seed = args.seed
    if args.tol is not None:
        cfg.tolerance = args.tol
    if args.np_only:
        cfg.np_only = True
    if args.out:
        cfg.out = args.out
    cfg.seed = _seed(cfg.seed)
    return cfg


def _trace_pair(universe, zeta, chi, np_only, tol):
    """The nested-trace identity for one explicit pair of restrictions.
    A failing comprehension yields a density witness."""
    c = comprehended(zeta, chi, universe, np_only=np_only)
    out = {"law": "trace-trace", "mode": "pair", "zeta": str(zeta), "chi": str(chi), "np_only": np_only,
           "comprehension": c.status}
    if c:
        out["status"] = PASS
        return out
    w = c.witness
    if "G" in w:
        g, h = parse_graph(w["G"]), parse_graph(w["H"])
        i, j = universe.idx(g), universe.idx(h)
        rho = np.zeros((len(universe), len(universe)), dtype=complex)
        rho[np.ix_([i, j], [i, j])] = 0.5
    else:
        g = parse_graph(w["graph"])
        i = universe.idx(g)
        rho = np.zeros((len(universe), len(universe)), dtype=complex)
        rho[i, i] = 1.0
    lhs = dense_partial_trace(dense_partial_trace(rho, chi, universe), zeta, universe)
    rhs = dense_partial_trace(rho, zeta, universe)
    d = np.abs(lhs - rhs)
    a, b = np.unravel_index(np.argmax(d), d.shape)
    out["status"] = FAIL if d[a, b] > tol else PASS
    out["witness"] = {"rho": {"support": [str(universe[k]) for k in sorted({i, *([j] if "G" in w else [])})],
                              "form": "uniform superposition" if "G" in w else "basis state"},
                      "entry": [str(universe[a]), str(universe[b])], "nested": lhs[a, b], "direct": rhs[a, b],
                      "max_entry_difference": float(d[a, b]), "comprehension": w}
    return out


def _run_laws(cfg, names, universe, restrictions, timing):
    reports = []
    chain_u = None
    for name in names:
        key = laws.ALIASES.get(name, name)
        u = universe
        if key in laws.CHAIN_LAWS and universe.spec.family != "chain":
            chain_u = chain_u or walk_chain_universe(3)
            u = chain_u
        rep = laws.run_law(key, u, restrictions if u is universe else None, seed=cfg.seed,
                           np_only=cfg.np_only, tol=cfg.tolerance)
        reports.append(rep)
    return {"reports": [r.to_json(timing) for r in reports]}, [r.status for r in reports]


def _run_checker(name, universe, op, chi, zeta, np_only, tol):
    if op is None:
        raise UsageError(f"check {name} needs --op")
    if name == "unitary":
        ok, err = checks.is_unitary_on(op, universe, tol)
        return {"check": name, "status": PASS if ok else FAIL, "counts": {"max_defect": err}}
    if name == "name-preserving":
        ok, w = checks.is_name_preserving(op, universe, tol)
        return {"check": name, "status": PASS if ok else FAIL,
                "witness": None if ok else {"H": str(w[0]), "G": str(w[1]), "amplitude": w[2]}}
    if chi is None:
        raise UsageError(f"check {name} needs --chi")
    if name == "local":
        r = checks.locality_verdict(op, chi, universe, tol)
    elif name == "strictly-local":
        r = checks.is_strictly_local(op, chi, universe, tol)
    else:
        if zeta is None:
            raise UsageError("check causal needs --zeta")
        r = checks.causality_verdict(op, chi, zeta, universe, np_only, tol)
    return r.to_json()


def _run_suite(name, universe, restrictions, seed, n):
    if name == "equivalence":
        reps = suites.locality_suite(universe, restrictions, n, seed)
        return {"suites": [r.to_json() for r in reps.values()]}, [r.status for r in reps.values()]
    if name == "causal-dual":
        r = suites.causality_suite(universe, restrictions, n, seed)
    elif name == "traceout":
        r = suites.traceout_suite(universe, restrictions, n, seed)
    else:
        r = suites.pm_support_suite(universe, seed)
    return {"suites": [r.to_json()]}, [r.status]


def cmd_check(args) -> int:
    cfg = _config(args)
    universe = parse_universe(cfg.universe)
    restrictions = [parse_restriction(t) for t in cfg.restrictions] or None
    chi = parse_restriction(args.chi) if args.chi else None
    zeta = parse_restriction(args.zeta) if args.zeta else None
    op = parse_operator(cfg.operator) if cfg.operator else None
    names = cfg.laws or ["all"]
    head = {"universe": universe.describe(), "seed": cfg.seed, "tolerance": cfg.tolerance, "np_only": cfg.np_only}
    statuses = []
    body = {}
    for name in names:
        key = laws.ALIASES.get(name, name)
        if key == "L8" and chi is not None and zeta is not None:
            res = _trace_pair(universe, zeta, chi, cfg.np_only, cfg.tolerance)
            body.setdefault("reports", []).append(res)
            statuses.append(res["status"])
        elif name == "all" or key in laws.LAWS:
            pick = laws.GRAPH_LAWS + laws.CHAIN_LAWS if name == "all" else [key]
            extra = [r for r in (chi, zeta) if r is not None]
            res, st = _run_laws(cfg, pick, universe, (restrictions or []) + extra or None, args.timing)
            body.setdefault("reports", []).extend(res["reports"])
            statuses += st
        elif name in CHECKERS:
            res = _run_checker(name, universe, op, chi, zeta, cfg.np_only, cfg.tolerance)
            body.setdefault("checks", []).append(res)
            statuses.append(res["status"])
        elif name in SUITES:
            rs = restrictions or laws.default_restrictions(universe)
            res, st = _run_suite(name, universe, rs, cfg.seed, args.samples)
            body.setdefault("suites", []).extend(res["suites"])
            statuses += st
        else:
            raise UsageError(f"unknown law or check {name!r}")
    code = _exit_for(statuses)
    _emit({**head, **body, "exit": code}, cfg.out)
    if args.save_config:
        write_atomic(args.save_config, dumps(cfg.to_json()))
    return code


# evolve --------------------------------------------------------------------

def _initial_state(text: str):
    text = text.strip()
    if text.startswith("["):
        states = [s.strip() for s in text.strip("[]").split(",")]
        names = chain_names(len(states))
        g = Graph(System(a, u) for a, u in zip(states, names) if a not in ("", "_", "-"))
        return ket(g)
    if text.startswith("{"):
        return ket(parse_graph(text))
    with open(text) as f:
        from .formats import state_from_json
        return state_from_json(json.load(f))


def cmd_evolve(args) -> int:
    op = parse_operator(args.op)
    psi = _initial_state(args.init)
    universe = parse_universe(args.universe) if args.universe else None
    traj = []
    for t in range(args.steps + 1):
        if universe is not None:
            for g in psi.amps:
                if g not in universe:
                    raise SupportEscape(g, f" (step {t})")
        norm = psi.norm()
        traj.append({"t": t, "norm": norm, **state_to_json(psi)})
        if abs(norm - 1) > args.norm_tol:
            _emit({"operator": args.op, "status": FAIL, "error": "NormDrift", "trajectory": traj}, args.out)
            return EXIT_FAIL
        if t < args.steps:
            psi = op.apply(psi)
    _emit({"operator": args.op, "dynamics": DYNAMICS_NOTE, "steps": args.steps, "status": PASS,
           "trajectory": traj}, args.out)
    return EXIT_PASS


# decompose -----------------------------------------------------------------

def cmd_decompose(args) -> int:
    op = parse_operator(args.op)
    if args.ancilla == args.no_ancilla:
        raise UsageError("choose exactly one of --ancilla / --no-ancilla")
    if args.ancilla:
        universe = walk_chain_universe(args.chain)
        cover = sorted({v for g in universe.graphs for v in g.names})
        res = block_decompose(op, universe, cover, tol=args.tol)
    else:
        universe, xs = binary_chain_universe(args.chain)
        res = block_decompose_no_ancilla(op, universe, xs, tol=args.tol)
    # certificates are reported but do not decide the exit code
    ok = (res.residual <= args.residual_tol and res.commutator_max <= args.commutator_tol
          and res.toggle_commutator_max <= args.commutator_tol)
    payload = {"operator": args.op, "dynamics": DYNAMICS_NOTE, "chain": args.chain, "status": PASS if ok else FAIL,
               **res.to_json(timing=args.timing)}
    _emit(payload, args.out)
    return EXIT_PASS if ok else EXIT_FAIL


# edges / normalize ---------------------------------------------------------

def cmd_edges(args) -> int:
    g = parse_graph(args.graph)
    es = induced_edges(g, oriented=not args.unoriented)
    if args.unoriented:
        rows = sorted(sorted(str(u) for u in e) for e in es)
    else:
        rows = sorted([str(a), str(b)] for a, b in es)
    _emit({"graph": g.text, "oriented": not args.unoriented, "edges": rows}, args.out)
    return EXIT_PASS


def cmd_normalize(args) -> int:
    for text in args.terms:
        t = text.strip()
        print(parse_graph(t).text if t.startswith("{") else str(parse_name(t)))
    return EXIT_PASS


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qnet", description="Quantum causal graph dynamics toolkit.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="run laws, checkers or agreement suites")
    c.add_argument("law", nargs="?", help="law id or alias, 'all', a checker or a suite name")
    c.add_argument("--universe")
    c.add_argument("--config")
    c.add_argument("--restriction", action="append")
    c.add_argument("--chi")
    c.add_argument("--zeta")
    c.add_argument("--op")
    c.add_argument("--seed", type=int)
    c.add_argument("--tol", type=float)
    c.add_argument("--np-only", action="store_true")
    c.add_argument("--samples", type=int, default=200)
    c.add_argument("--timing", action="store_true")
    c.add_argument("--out")
    c.add_argument("--save-config")
    c.set_defaults(fn=cmd_check)

    e = sub.add_parser("evolve", help="apply an operator repeatedly to a state")
    e.add_argument("--op", required=True)
    e.add_argument("--init", required=True, help="'[R,e,e]' chain shorthand, a graph literal, or a state JSON file")
    e.add_argument("--steps", type=int, default=1)
    e.add_argument("--universe")
    e.add_argument("--norm-tol", type=float, default=1e-9)
    e.add_argument("--out")
    e.set_defaults(fn=cmd_evolve)

    d = sub.add_parser("decompose", help="block-decompose a causal unitary on a chain")
    d.add_argument("--op", required=True)
    d.add_argument("--chain", type=int, default=2)
    d.add_argument("--ancilla", action="store_true")
    d.add_argument("--no-ancilla", action="store_true")
    d.add_argument("--tol", type=float, default=1e-10)
    d.add_argument("--residual-tol", type=float, default=1e-9)
    d.add_argument("--commutator-tol", type=float, default=1e-12)
    d.add_argument("--timing", action="store_true")
    d.add_argument("--out")
    d.set_defaults(fn=cmd_decompose)

    g = sub.add_parser("edges", help="list the edges a graph's names induce")
    g.add_argument("graph")
    g.add_argument("--unoriented", action="store_true")
    g.add_argument("--out")
    g.set_defaults(fn=cmd_edges)

    n = sub.add_parser("normalize", help="print canonical forms of names or graphs")
    n.add_argument("terms", nargs="+")
    n.set_defaults(fn=cmd_normalize)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_PASS
    try:
        return args.fn(args)
    except ParseError as e:
        print(dumps({"error": "ParseError", "message": str(e), "line": e.line, "column": e.column,
                     "expected": sorted(e.expected)}), file=sys.stderr)
        return EXIT_USAGE
    except (UsageError, UniverseTooLarge, ValueError, OSError, KeyError) as e:
        if isinstance(e, SupportEscape):
            print(dumps({"error": "SupportEscape", "message": str(e)}), file=sys.stderr)
            return EXIT_PRECONDITION
        if isinstance(e, PreconditionFailed):
            print(dumps({"error": "PreconditionFailed", "what": e.what, "detail": jsonable(e.detail)}),
                  file=sys.stderr)
            return EXIT_PRECONDITION
        print(dumps({"error": type(e).__name__, "message": str(e)}), file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
