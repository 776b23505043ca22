"""Command-line entry point.

Subcommands: gen, tau, sigma, lp, solve, solve-sp, embed, exact, bench.
Global flags (before the subcommand): --seed, --json, --quiet.
Exit codes: 0 success, 2 input error, 3 resource/budget error, 4 convergence
error. Every subcommand has a --json mode; schemas are frozen in README.md.
"""

import argparse
import json
import math
import sys

from . import bench as bench_mod
from .errors import InputError, ReqcutError
from .exact import OracleBudget, exact_solve
from .gen import gen_bounded_fes, gen_setcover_star, gen_short_cycles, gen_sp_depth
from .io import load_instance, save_instance
from .metriclp import solve_relaxed_lp
from .rounding import RoundingConfig, solve_requirement_cut, solve_stats
from .spembed import (SpInstance, dump_sp_expression, estimate_distortion,
                      find_sp_terminals, parse_sp_expression, recognize_sp,
                      solve_sp_pipeline, stretch_bound)
from .steiner import (enumerate_minimal_steiner_trees,
                      exact_sigma_by_enumeration, sigma_upper_bound)
from .treecount import (count_spanning_trees_exact, feedback_edge_number,
                        log_spanning_trees)

TAU_PRINT_BITS = bench_mod.TAU_PRINT_BITS


class _Out:
    def __init__(self, as_json, quiet):
        self.as_json = as_json
        self.quiet = quiet

    def emit(self, doc, human_lines):
        if self.as_json:
            print(json.dumps(doc, sort_keys=True, indent=2))
        else:
            for line in human_lines:
                print(line)

    def note(self, msg):
        if not self.quiet:
            print(msg, file=sys.stderr)


def _cut_doc(solution):
    return {"cut": sorted(solution.cut), "cost": solution.cost,
            "cost_exact": str(solution.cost_exact),
            "components": solution.components, "feasible": solution.feasible}


# ----- subcommand handlers -----

def cmd_gen(args, out):
    if args.family == "setcover-star":
        memberships = json.loads(args.memberships)
        inst = gen_setcover_star(args.num_sets, memberships)
    elif args.family == "short-cycles":
        inst = gen_short_cycles(args.num_cycles, args.cycle_len)
    elif args.family == "bounded-fes":
        inst = gen_bounded_fes(args.n, args.k, seed=args.seed,
                               num_groups=args.num_groups)
    else:  # sp-depth
        sp, inst = gen_sp_depth(args.depth, args.fanout, args.path_len,
                                seed=args.seed, num_groups=args.num_groups)
        if args.expr_out:
            with open(args.expr_out, "w") as fh:
                fh.write(dump_sp_expression(sp) + "\n")
            out.note(f"wrote expression to {args.expr_out}")
    save_instance(inst, args.output, fmt=args.format)
    g = inst.graph
    out.emit({"output": args.output, "n": g.n, "m": g.m, "g": inst.num_groups},
             [f"wrote {args.output}: n={g.n} m={g.m} groups={inst.num_groups}"])
    return 0


def cmd_tau(args, out):
    inst = load_instance(args.instance)
    g = inst.graph
    tau = count_spanning_trees_exact(g)
    log_tau = log_spanning_trees(g)
    fes = feedback_edge_number(g)
    doc = {"log_tau": log_tau, "feedback_edges": fes,
           "tau": str(tau) if tau.bit_length() <= TAU_PRINT_BITS else None}
    lines = [f"log tau = {log_tau!r}", f"feedback edges = {fes}"]
    if doc["tau"] is not None:
        lines.insert(0, f"tau = {tau}")
    else:
        lines.insert(0, f"tau has {tau.bit_length()} bits, printing log only")
    out.emit(doc, lines)
    return 0


def cmd_sigma(args, out):
    inst = load_instance(args.instance)
    log_bound, bound = sigma_upper_bound(inst)
    doc = {"log_sigma_bound": log_bound, "sigma_bound": str(bound),
           "sigma_exact": None, "per_group": None}
    lines = [f"sigma upper bound g*tau = {bound}",
             f"log sigma bound = {log_bound!r}"]
    if args.exact:
        per_group = [len(enumerate_minimal_steiner_trees(inst, i))
                     for i in range(inst.num_groups)]
        sigma = exact_sigma_by_enumeration(inst)
        doc["sigma_exact"] = str(sigma)
        doc["per_group"] = per_group
        lines.append(f"sigma exact = {sigma} (per group: {per_group})")
    out.emit(doc, lines)
    return 0


def cmd_lp(args, out):
    inst = load_instance(args.instance)
    res = solve_relaxed_lp(inst, tolerance=args.tol)
    doc = {"lp_opt": res.objective, "iterations": res.iterations,
           "tree_cuts": len(res.active_constraints), "metric": None}
    lines = [f"LP_opt = {res.objective!r}",
             f"iterations = {res.iterations}, "
             f"tree cuts = {len(res.active_constraints)}"]
    if args.metric:
        n = inst.graph.n
        doc["metric"] = {f"{u},{v}": float(res.metric.values[u, v])
                         for u in range(n) for v in range(u + 1, n)}
        for key in sorted(doc["metric"]):
            lines.append(f"  d({key}) = {doc['metric'][key]!r}")
    out.emit(doc, lines)
    return 0


def _rounding_config(args):
    return RoundingConfig(c=args.c, trials=args.trials, master_seed=args.seed,
                          sigma_source=args.sigma_source)


def cmd_solve(args, out):
    inst = load_instance(args.instance)
    config = _rounding_config(args)
    stats = solve_stats(inst, config)
    solution, reports, lp = solve_requirement_cut(inst, config)
    doc = _cut_doc(solution)
    doc.update({"lp_opt": lp.objective, "alpha": stats.alpha,
                "log_sigma": stats.log_sigma, "trials": stats.trials,
                "trial_table": [{"trial": r.trial, "cost": r.cost,
                                 "feasible": r.feasible,
                                 "cut_size": len(r.cut)} for r in reports]})
    wins = sum(1 for r in reports if r.feasible)
    lines = [f"cost = {solution.cost!r} (exact {solution.cost_exact})",
             f"cut = {sorted(solution.cut)}",
             f"feasible = {solution.feasible}",
             f"LP_opt = {lp.objective!r}  alpha = {stats.alpha!r}  "
             f"log sigma = {stats.log_sigma!r}  trials = {stats.trials}",
             f"feasible trials: {wins}/{len(reports)}"]
    out.emit(doc, lines)
    return 0


def cmd_solve_sp(args, out):
    inst = load_instance(args.instance)
    config = _rounding_config(args)
    solution, sp = solve_sp_pipeline(inst, config, embed_trials=args.embed_trials)
    depth = sp.trace.depth
    doc = _cut_doc(solution)
    doc.update({"terminals": [sp.x, sp.y], "depth": depth,
                "stretch_bound": stretch_bound(depth)})
    out.emit(doc, [f"cost = {solution.cost!r} (exact {solution.cost_exact})",
                   f"cut = {sorted(solution.cut)}",
                   f"feasible = {solution.feasible}",
                   f"terminals = ({sp.x}, {sp.y}), depth = {depth}, "
                   f"expected stretch bound = {stretch_bound(depth)}"])
    return 0


def _load_sp(path, terminals=None):
    with open(path) as fh:
        text = fh.read()
    stripped = text.lstrip()
    if stripped.startswith(("S(", "P(", "edge(", "s(", "p(")):
        return parse_sp_expression(text)
    inst = load_instance(path)
    if terminals is not None:
        x, y = terminals
        trace = recognize_sp(inst.graph, x, y)
        if trace is None:
            raise InputError(f"graph is not series-parallel between {x} and {y}")
        return SpInstance(graph=inst.graph, trace=trace, x=x, y=y)
    sp = find_sp_terminals(inst.graph)
    if sp is None:
        raise InputError("graph is not two-terminal series-parallel")
    return sp


def cmd_embed(args, out):
    terminals = None
    if args.terminals:
        parts = args.terminals.split(",")
        if len(parts) != 2:
            raise InputError(f"--terminals wants 'x,y', got {args.terminals!r}")
        terminals = (int(parts[0]), int(parts[1]))
    sp = _load_sp(args.path, terminals)
    per_edge = estimate_distortion(sp, samples=args.samples, seed=args.seed)
    depth = sp.trace.depth
    bound = stretch_bound(depth)
    worst = max(per_edge, key=lambda e: per_edge[e][0])
    doc = {"terminals": [sp.x, sp.y], "depth": depth, "samples": args.samples,
           "stretch_bound": bound,
           "per_edge": {str(e): {"mean": m, "se": s}
                        for e, (m, s) in sorted(per_edge.items())}}
    lines = [f"terminals = ({sp.x}, {sp.y}), depth = {depth}, "
             f"expected stretch bound = {bound}",
             f"worst edge {worst}: mean stretch {per_edge[worst][0]!r} "
             f"(se {per_edge[worst][1]!r})"]
    for e in sorted(per_edge):
        m, s = per_edge[e]
        lines.append(f"  edge {e}: mean {m!r} se {s!r}")
    out.emit(doc, lines)
    return 0


def cmd_exact(args, out):
    inst = load_instance(args.instance)
    budget = OracleBudget(max_edges=args.max_edges, time_limit=args.time_limit)
    solution = exact_solve(inst, budget)
    doc = _cut_doc(solution)
    out.emit(doc, [f"optimum cost = {solution.cost!r} (exact {solution.cost_exact})",
                   f"cut = {sorted(solution.cut)}"])
    return 0


def cmd_bench(args, out):
    plan = bench_mod.load_plan(args.plan)
    rows, timings, any_error = bench_mod.run_bench(plan, threads=args.threads)
    csv_path, json_path = bench_mod.write_reports(rows, args.output)
    if args.timings:
        with open(args.timings, "w") as fh:
            for row, dt in zip(rows, timings):
                fh.write(f"{row['name']}\t{dt:.6f}\n")
    out.note(f"wrote {csv_path} and {json_path}")
    if not out.quiet:
        for row, dt in zip(rows, timings):
            out.note(f"  {row['name']}: {row['status']} in {dt:.3f}s")
        out.note(f"total wall time {math.fsum(timings):.3f}s")
    errors = [r["name"] for r in rows if r["status"] == "error"]
    if errors:
        out.note(f"rows with errors: {', '.join(errors)}")
        return 1
    return 0


# ----- parser -----

def build_parser():
    parser = argparse.ArgumentParser(
        prog="reqcut",
        description="Requirement cuts: LP relaxation with spanning-tree "
                    "separation, threshold rounding, tree counting, and "
                    "series-parallel embeddings.")
    parser.add_argument("--seed", type=int, default=0, help="master RNG seed")
    parser.add_argument("--json", action="store_true", dest="as_json",
                        help="machine-readable output")
    parser.add_argument("--quiet", action="store_true",
                        help="suppress informational stderr output")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate an instance file")
    fam = p.add_subparsers(dest="family", required=True)
    f = fam.add_parser("setcover-star", help="star whose min cut is a set cover")
    f.add_argument("--num-sets", type=int, required=True)
    f.add_argument("--memberships", required=True,
                   help='JSON like "[[0,1],[1],[0,2]]": sets containing each element')
    f = fam.add_parser("short-cycles", help="cycle chain with tau = len^count")
    f.add_argument("--num-cycles", type=int, required=True)
    f.add_argument("--cycle-len", type=int, required=True)
    f = fam.add_parser("bounded-fes", help="random tree plus k chords")
    f.add_argument("--n", type=int, required=True)
    f.add_argument("--k", type=int, required=True)
    f.add_argument("--num-groups", type=int, default=2)
    f = fam.add_parser("sp-depth", help="series-parallel instance of given depth")
    f.add_argument("--depth", type=int, required=True)
    f.add_argument("--fanout", type=int, default=2)
    f.add_argument("--path-len", type=int, default=2)
    f.add_argument("--num-groups", type=int, default=2)
    f.add_argument("--expr-out", help="also write the composition expression")
    for f in fam.choices.values():
        f.add_argument("-o", "--output", required=True)
        f.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("tau", help="count spanning trees")
    p.add_argument("instance")

    p = sub.add_parser("sigma", help="minimal Steiner tree count bound")
    p.add_argument("instance")
    p.add_argument("--exact", action="store_true",
                   help="enumerate instead of bounding (small m only)")

    p = sub.add_parser("lp", help="solve the relaxed metric LP")
    p.add_argument("instance")
    p.add_argument("--tol", type=float, default=1e-7,
                   help="separation tolerance")
    p.add_argument("--metric", action="store_true",
                   help="also print the full optimal metric")

    for name, with_embed in (("solve", False), ("solve-sp", True)):
        p = sub.add_parser(name, help="LP + rounding pipeline" if not with_embed
                           else "tree embedding + rounding pipeline")
        p.add_argument("instance")
        p.add_argument("--c", type=float, default=4.0,
                       help="rounding constant, alpha = 1/(c max(1, ln sigma))")
        p.add_argument("--trials", type=int, default=None)
        p.add_argument("--sigma-source", choices=("upper_bound", "exact"),
                       default="upper_bound")
        if with_embed:
            p.add_argument("--embed-trials", type=int, default=8)

    p = sub.add_parser("embed", help="sample random spanning-tree embeddings")
    p.add_argument("path", help="instance file or composition expression file")
    p.add_argument("--samples", type=int, default=10000)
    p.add_argument("--terminals", help="force terminals as 'x,y'")

    p = sub.add_parser("exact", help="branch-and-bound optimum (small m)")
    p.add_argument("instance")
    p.add_argument("--max-edges", type=int, default=OracleBudget().max_edges)
    p.add_argument("--time-limit", type=float, default=None)

    p = sub.add_parser("bench", help="run a plan of instances and solvers")
    p.add_argument("plan")
    p.add_argument("-o", "--output", required=True,
                   help="report base path, writes .csv and .json")
    p.add_argument("--threads", type=int, default=None,
                   help="worker cap, default REQCUT_THREADS or 1")
    p.add_argument("--timings", help="write per-row wall times to this file")

    return parser


HANDLERS = {"gen": cmd_gen, "tau": cmd_tau, "sigma": cmd_sigma, "lp": cmd_lp,
            "solve": cmd_solve, "solve-sp": cmd_solve_sp, "embed": cmd_embed,
            "exact": cmd_exact, "bench": cmd_bench}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    out = _Out(args.as_json, args.quiet)
    try:
        return HANDLERS[args.command](args, out)
    except ReqcutError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
