"""Command line entry point.

Every invocation prints exactly one JSON run record (``solve`` without
``--json`` prints a one-line summary instead) and appends it to
``--run-log`` when given. Exit codes: 0 success or Unknown, 1 usage error,
2 contract violation, 3 internal error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path
from typing import Any, Sequence

from . import bench, io
from .construction import (DEFAULT_CAP, build_construction, construction_stats,
                           extract_star_family)
from .decomposition import (Split, build_quotient_instance, quotient_split, star_split,
                            threshold_split)
from .exhaustive import (Budget, Status, find_qary_tree, multigraph_fingerprint,
                         solve_adapted_exact, solve_adapted_portfolio)
from .graphs import (EdgeColoredMultigraph, cooperative_violations, family_to_adapted)
from .solvers import (SolverParams, greedy_solve, lll_solve, partition_solve_generic,
                      sample_random_double_star_family, sample_random_family,
                      sample_random_star_family, star_partition_solve)

EXIT_OK, EXIT_USAGE, EXIT_CONTRACT, EXIT_INTERNAL = 0, 1, 2, 3
RANDOMIZED = {"gen-random", "solve"}


class UsageError(Exception):
    pass


class ContractViolation(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="coopcolor", description="Cooperative colorings of graph families.")
    p.add_argument("--config", help="JSON file with option defaults; command line flags win")
    p.add_argument("--run-log", help="append the run record to this JSONL file")
    p.add_argument("--ci", action="store_true", help="CI mode: randomized commands need --seed")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    g = sub.add_parser("gen-construction", help="build the recursive non-colorable construction")
    g.add_argument("--t", type=int)
    g.add_argument("--family", action="store_true", help="also write the extracted star family")
    g.add_argument("--dot", help="write a DOT rendering of the construction here")
    g.add_argument("--stats-only", action="store_true")
    g.add_argument("--witness-claim", action="store_true", help="emit the lower-bound claim")
    g.add_argument("--certify", action="store_true", help="certify non-colorability by exact search")
    g.add_argument("--cap", type=int, default=DEFAULT_CAP)
    g.add_argument("--out-dir", default=".")

    r = sub.add_parser("gen-random", help="random instance generator")
    r.add_argument("--n", type=int)
    r.add_argument("--k", type=int)
    r.add_argument("--d", type=int, default=3)
    r.add_argument("--p", type=float, default=0.3, help="edge probability for --kind er")
    r.add_argument("--kind", choices=["star", "double-star", "er", "er-list"], default="star")
    r.add_argument("--seed", type=int)
    r.add_argument("--out")

    s = sub.add_parser("solve", help="solve a cooperative coloring instance")
    s.add_argument("--instance")
    s.add_argument("--solver", choices=["greedy", "lll", "star-partition", "partition", "exact"],
                   default="lll")
    s.add_argument("--seed", type=int)
    s.add_argument("--epsilon", type=float, default=0.5)
    s.add_argument("--cap", type=int, default=10 ** 6, help="resample cap")
    s.add_argument("--inventory-size", type=int, default=1)
    s.add_argument("--splitter", choices=["star", "threshold"], default="star")
    s.add_argument("--q", type=int, default=2)
    s.add_argument("--h", type=int, default=2)
    s.add_argument("--budget-nodes", type=int)
    s.add_argument("--budget-seconds", type=float)
    s.add_argument("--witness-out", help="write the coloring here on Sat")
    s.add_argument("--json", action="store_true")

    v = sub.add_parser("verify", help="check a coloring against an instance")
    v.add_argument("--instance")
    v.add_argument("--coloring")

    c = sub.add_parser("certify-unsat", help="exact search with a certificate record")
    c.add_argument("--instance")
    c.add_argument("--budget-nodes", type=int)
    c.add_argument("--budget-seconds", type=float)
    c.add_argument("--portfolio", type=int, default=1)
    c.add_argument("--out", help="write the certificate here")

    d = sub.add_parser("decompose", help="split every member into (A, B)")
    d.add_argument("--instance")
    d.add_argument("--method", choices=["star", "threshold", "quotient"], default="star")
    d.add_argument("--q", type=int, default=2)
    d.add_argument("--h", type=int, default=2)
    d.add_argument("--parts", help="JSON list of label lists; default singleton parts")
    d.add_argument("--audit-tree-free", action="store_true")
    d.add_argument("--out")

    e = sub.add_parser("export-dot", help="DOT rendering of an instance")
    e.add_argument("--instance")
    e.add_argument("--coloring")
    e.add_argument("--out")

    b = sub.add_parser("bench", help="run a benchmark suite")
    b.add_argument("--suite", choices=sorted(bench.SUITES))
    b.add_argument("--seeds", default="0-9")
    b.add_argument("--output", default="bench-out")
    b.add_argument("--jobs", type=int, default=1)
    b.add_argument("--n", type=int, help="override the suite's vertex count")
    b.add_argument("--no-plot", action="store_true")
    return p


def _need(args, *names):
    for n in names:
        if getattr(args, n.replace("-", "_"), None) is None:
            raise UsageError(f"--{n} is required for {args.command}")


def _load(path: str) -> io.Instance:
    try:
        return io.load_instance(path)
    except FileNotFoundError:
        raise UsageError(f"no such instance file: {path}") from None


def _split_record(split: Split, labels: Sequence[str]) -> dict:
    return {"A": [labels[v] for v in sorted(split.A)], "B": [labels[v] for v in sorted(split.B)],
            "neighbor_bound": split.neighbor_bound}


def cmd_gen_construction(args) -> dict:
    _need(args, "t")
    stats = construction_stats(args.t)
    rec: dict[str, Any] = {"stats": stats.as_dict(), "artifacts": []}
    if args.witness_claim:
        rec["claim"] = f"m_S({stats.max_mono_degree}) >= {args.t + 1}"
    if args.stats_only:
        return rec
    try:
        c = build_construction(args.t, cap=args.cap)
    except ValueError as exc:
        raise ContractViolation(str(exc)) from None
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    path = out / f"construction_t{args.t}.json"
    path.write_text(json.dumps(io.multigraph_to_dict(c.multigraph), indent=1) + "\n", encoding="utf-8")
    rec["artifacts"].append(str(path))
    rec["apex"] = c.apex
    fam = extract_star_family(c)
    if args.family:
        fpath = out / f"family_t{args.t}.json"
        io.save_instance(fpath, fam)
        rec["artifacts"].append(str(fpath))
        rec["family"] = {"members": fam.k, "vertices": len(fam.universal_vertices),
                         "max_degree": fam.max_degree()}
    if args.witness_claim:
        cpath = out / f"claim_t{args.t}.json"
        cpath.write_text(json.dumps({"t": args.t, "claim": rec["claim"],
                                     "instance": f"family_t{args.t}.json"}, indent=1) + "\n",
                         encoding="utf-8")
        rec["artifacts"].append(str(cpath))
    if args.certify:
        o = solve_adapted_exact(c.multigraph, range(1, args.t + 1))
        rec["certificate"] = {"status": o.status.value, "nodes": o.stats["nodes"]}
    if args.dot:
        Path(args.dot).write_text(io.family_to_dot(fam, name=f"G_{args.t}"), encoding="utf-8")
        rec["artifacts"].append(args.dot)
    return rec


def cmd_gen_random(args) -> dict:
    _need(args, "n", "k")
    seed = args.seed or 0
    if args.kind == "star":
        fam = sample_random_star_family(args.n, args.k, args.d, seed)
    elif args.kind == "double-star":
        fam = sample_random_double_star_family(args.n, args.k, args.d, seed)
    else:
        fam = sample_random_family(args.n, args.k, args.p, seed, list_mode=args.kind == "er-list")
    text = io.dumps_instance(fam)
    rec: dict[str, Any] = {"members": fam.k, "vertices": len(fam.universal_vertices),
                           "max_degree": fam.max_degree(), "artifacts": []}
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        rec["artifacts"].append(args.out)
    else:
        rec["instance"] = json.loads(text)
    return rec


def cmd_solve(args) -> dict:
    _need(args, "instance")
    inst = _load(args.instance)
    fam = inst.family
    params = SolverParams(epsilon=args.epsilon, inventory_size=args.inventory_size,
                          resample_cap=args.cap, seed=args.seed or 0)
    if args.solver == "greedy":
        out = greedy_solve(fam, params)
    elif args.solver == "lll":
        out = lll_solve(fam, params)
    elif args.solver == "star-partition":
        out = star_partition_solve(fam, params)
    elif args.solver == "partition":
        if args.splitter == "star":
            splitter = star_split
        else:
            def splitter(g):
                return threshold_split(g, args.q, args.h)
        out = partition_solve_generic(fam, splitter, params=params)
    else:
        from .exhaustive import solve_cooperative_exact
        out = solve_cooperative_exact(fam, Budget(args.budget_nodes, args.budget_seconds))
    rec: dict[str, Any] = {"solver": args.solver, "status": out.status.value,
                           "stats": out.stats, "artifacts": []}
    if out.is_sat and args.witness_out:
        io.save_coloring(args.witness_out, out.witness, inst.labels)
        rec["artifacts"].append(args.witness_out)
        rec["witness_path"] = args.witness_out
    return rec


def cmd_verify(args) -> dict:
    _need(args, "instance", "coloring")
    inst = _load(args.instance)
    col = io.load_coloring(args.coloring, inst)
    problems = cooperative_violations(inst.family, col)
    rec = {"valid": not problems, "problems": problems[:50]}
    if problems:
        raise ContractViolation(json.dumps(rec))
    return rec


def _certificate(m: EdgeColoredMultigraph, palette, out) -> dict:
    stats = {k: v for k, v in out.stats.items() if k != "wall_time"}
    return {"status": out.status.value, "stats": stats,
            "fingerprint": multigraph_fingerprint(m, palette, stats.get("order", ""))}


def cmd_certify_unsat(args) -> dict:
    _need(args, "instance")
    fam = _load(args.instance).family
    m = family_to_adapted(fam)
    m = EdgeColoredMultigraph(m.vertices, m.colored_edges, m.palette_size,
                              {v: frozenset(ix) for v, ix in fam.memberships.items()})
    palette = range(1, fam.k + 1)
    budget = Budget(args.budget_nodes, args.budget_seconds)
    if args.portfolio > 1:
        out = solve_adapted_portfolio(m, palette, budget, args.portfolio)
    else:
        out = solve_adapted_exact(m, palette, budget)
    cert = _certificate(m, palette, out)
    rec = dict(cert, artifacts=[])
    if args.out:
        Path(args.out).write_text(json.dumps(cert, indent=1, sort_keys=True) + "\n", encoding="utf-8")
        rec["artifacts"].append(args.out)
    rec["wall_time"] = out.stats.get("wall_time")
    return rec


def cmd_decompose(args) -> dict:
    _need(args, "instance")
    inst = _load(args.instance)
    fam, labels = inst.family, inst.labels
    ident = inst.index
    parts_doc = None
    if args.parts:
        parts_doc = json.loads(Path(args.parts).read_text(encoding="utf-8"))
    splits = []
    for i, g in enumerate(fam.members, start=1):
        entry: dict[str, Any] = {"member": fam.member_name(i)}
        if args.method == "star":
            split = star_split(g)
        elif args.method == "threshold":
            split = threshold_split(g, args.q, args.h)
            if args.audit_tree_free:
                o = find_qary_tree(g, args.q, args.h)
                entry["tree_free"] = o.status.value
                if o.status is Status.SAT:
                    entry["tree_embedding"] = [labels[x] for x in o.witness.mapping]
        else:
            if parts_doc is None:
                parts = [{v} for v in sorted(g.vertices)]
            else:
                parts = [{ident[str(x)] for x in p} & g.vertices for p in parts_doc]
                parts = [p for p in parts if p]
            qi = build_quotient_instance(g, parts, args.h)
            split, rest = quotient_split(qi)
            entry["forest_height"] = qi.height
            entry["a_side_forest_height"] = rest.height()
        entry.update(_split_record(split, labels))
        splits.append(entry)
    rec: dict[str, Any] = {"method": args.method, "splits": splits, "artifacts": []}
    if args.out:
        Path(args.out).write_text(json.dumps({"method": args.method, "splits": splits}, indent=1) + "\n",
                                  encoding="utf-8")
        rec["artifacts"].append(args.out)
        del rec["splits"]
    return rec


def cmd_export_dot(args) -> dict:
    _need(args, "instance", "out")
    inst = _load(args.instance)
    col = io.load_coloring(args.coloring, inst) if args.coloring else None
    Path(args.out).write_text(io.family_to_dot(inst.family, inst.labels, col), encoding="utf-8")
    return {"artifacts": [args.out]}


def cmd_bench(args) -> dict:
    _need(args, "suite")
    seeds = bench.parse_seeds(args.seeds)
    if not seeds:
        raise UsageError("the seed list is empty")
    return bench.cmd_bench(args.suite, seeds, args.output, args.jobs, args.n, not args.no_plot)


COMMANDS = {
    "gen-construction": cmd_gen_construction,
    "gen-random": cmd_gen_random,
    "solve": cmd_solve,
    "verify": cmd_verify,
    "certify-unsat": cmd_certify_unsat,
    "decompose": cmd_decompose,
    "export-dot": cmd_export_dot,
    "bench": cmd_bench,
}


def _parse(argv: Sequence[str]) -> argparse.Namespace:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config and args.command:
        try:
            cfg = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            parser.error(f"cannot read config {args.config}: {exc}")
        # {"solve": {...}} sections apply to one command, top-level keys to all
        flat = {k: v for k, v in cfg.items() if not isinstance(v, dict)}
        flat.update(cfg.get(args.command, {}) if args.command else {})
        sub = parser._subparsers._group_actions[0].choices[args.command]
        known = {a.dest for a in sub._actions}
        sub.set_defaults(**{k.replace("-", "_"): v for k, v in flat.items()
                            if k.replace("-", "_") in known})
        args = parser.parse_args(argv)
    return args


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = _parse(argv)
    if args.command is None:
        build_parser().print_help(sys.stderr)
        return EXIT_USAGE
    t0 = time.perf_counter()
    record: dict[str, Any] = {"command": ["coopcolor", *argv],
                              "config": {k: v for k, v in vars(args).items()},
                              "seed": getattr(args, "seed", None)}
    code = EXIT_OK
    try:
        ci = args.ci or bool(os.environ.get("CI"))
        if ci and args.command in RANDOMIZED and args.seed is None:
            raise UsageError(f"{args.command} needs an explicit --seed in CI mode")
        outcome = COMMANDS[args.command](args)
        record["outcome"] = outcome
        record["artifacts"] = outcome.pop("artifacts", [])
    except UsageError as exc:
        record["error"] = {"kind": "usage", "message": str(exc)}
        code = EXIT_USAGE
    except (ContractViolation, ValueError, KeyError) as exc:
        record["error"] = {"kind": "contract", "message": str(exc)}
        code = EXIT_CONTRACT
    except Exception as exc:  # noqa: BLE001
        record["error"] = {"kind": "internal", "message": f"{type(exc).__name__}: {exc}"}
        code = EXIT_INTERNAL
    record["exit_code"] = code
    record["wall_time"] = time.perf_counter() - t0
    line = json.dumps(record, default=str)
    if args.command == "solve" and not args.json and code == EXIT_OK:
        o = record["outcome"]
        print(f"{o['solver']}: {o['status']} ({o['stats'].get('resamples', o['stats'].get('nodes', 0))} "
              f"steps, {record['wall_time']:.3f}s)")
    else:
        print(line)
    if args.run_log:
        with open(args.run_log, "a", encoding="utf-8") as fh:
            fh.write(line + "\n")
    if "error" in record:
        print(f"coopcolor: {record['error']['message']}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
