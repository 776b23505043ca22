"""Batch runs over instances and solvers with machine-readable reports.

Reports must be byte-identical for identical (plan, seed) across runs and
thread counts, so the canonical CSV/JSON carry only deterministic fields;
wall times are returned separately (CLI: stderr summary and --timings file).

Plan file:

    {"seed": 1,
     "rows": [
       {"name": "tri", "instance": "tri.rc", "solver": "lp-round",
        "config": {"c": 4, "trials": 16}},
       {"name": "star", "gen": {"family": "setcover_star", "num_sets": 3,
                                "memberships": [[0], [1], [2]]},
        "solver": "exact"}]}
"""

import concurrent.futures
import csv
import io as _io
import json
import os
import time
from dataclasses import dataclass

from .errors import InputError, ReqcutError
from .exact import OracleBudget, exact_solve
from .gen import gen_bounded_fes, gen_setcover_star, gen_short_cycles, gen_sp_depth
from .io import load_instance
from .kernels import derive_seed
from .metriclp import solve_relaxed_lp
from .rounding import RoundingConfig, solve_requirement_cut
from .spembed import solve_sp_pipeline
from .steiner import sigma_upper_bound
from .treecount import count_spanning_trees_exact, log_spanning_trees

SOLVERS = ("lp-round", "sp-pipeline", "exact")
TAU_PRINT_BITS = 512

CSV_FIELDS = ["name", "solver", "status", "n", "m", "g", "tau", "log_tau",
              "log_sigma", "lp_opt", "cost", "feasible", "exact_opt",
              "ratio_lp", "ratio_exact", "error"]


@dataclass(frozen=True)
class BenchRow:
    name: str
    solver: str
    source: str          # "file" or "gen"
    path: str = ""
    gen_spec: dict = None
    config: dict = None


@dataclass(frozen=True)
class BenchPlan:
    seed: int
    rows: tuple


def load_plan(path):
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read plan {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"bad plan JSON: {exc}") from None
    if not isinstance(doc, dict) or "rows" not in doc:
        raise InputError("plan must be an object with a rows list")
    base = os.path.dirname(os.path.abspath(path))
    rows = []
    for i, row in enumerate(doc["rows"]):
        name = str(row.get("name", f"row{i}"))
        solver = row.get("solver", "lp-round")
        if solver not in SOLVERS:
            raise InputError(f"row {name}: unknown solver {solver!r}")
        config = row.get("config", {})
        if "instance" in row:
            p = row["instance"]
            if not os.path.isabs(p):
                p = os.path.join(base, p)
            # every referenced instance must resolve before any run starts
            if not os.path.exists(p):
                raise InputError(f"row {name}: instance file {p} not found")
            rows.append(BenchRow(name=name, solver=solver, source="file", path=p,
                                 config=config))
        elif "gen" in row:
            spec = row["gen"]
            if "family" not in spec:
                raise InputError(f"row {name}: gen spec without a family")
            rows.append(BenchRow(name=name, solver=solver, source="gen",
                                 gen_spec=spec, config=config))
        else:
            raise InputError(f"row {name}: needs instance or gen")
    return BenchPlan(seed=int(doc.get("seed", 0)), rows=tuple(rows))


def _generate(spec, default_seed):
    spec = dict(spec)
    family = spec.pop("family")
    seed = spec.pop("seed", default_seed)
    if family == "setcover_star":
        return gen_setcover_star(spec["num_sets"], spec["memberships"])
    if family == "short_cycles":
        return gen_short_cycles(spec["num_cycles"], spec["cycle_len"],
                                spec.get("groups_spec"))
    if family == "bounded_fes":
        return gen_bounded_fes(spec["n"], spec["k"], seed=seed,
                               num_groups=spec.get("num_groups", 2))
    if family == "sp_depth":
        _, inst = gen_sp_depth(spec["depth"], spec.get("fanout", 2),
                               spec.get("path_len", 2), seed=seed,
                               num_groups=spec.get("num_groups", 2))
        return inst
    raise InputError(f"unknown generator family {family!r}")


def _fmt(x):
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return repr(x)
    return str(x)


def run_row(row, row_seed):
    inst = load_instance(row.path) if row.source == "file" \
        else _generate(row.gen_spec, row_seed)
    cfg = row.config or {}
    g = inst.graph
    out = {"name": row.name, "solver": row.solver, "status": "ok",
           "n": g.n, "m": g.m, "g": inst.num_groups, "error": None,
           "tau": None, "log_tau": None, "log_sigma": None, "lp_opt": None,
           "cost": None, "feasible": None, "exact_opt": None,
           "ratio_lp": None, "ratio_exact": None}
    tau = count_spanning_trees_exact(g)
    out["tau"] = str(tau) if tau.bit_length() <= TAU_PRINT_BITS else None
    out["log_tau"] = log_spanning_trees(g)
    out["log_sigma"] = sigma_upper_bound(inst)[0]

    max_edges = int(cfg.get("max_edges", OracleBudget().max_edges))
    exact_opt = None
    if g.m <= max_edges:
        exact_opt = exact_solve(inst, OracleBudget(max_edges=max_edges))
        out["exact_opt"] = exact_opt.cost

    seed = int(cfg.get("seed", row_seed))
    rcfg = RoundingConfig(c=float(cfg.get("c", 4.0)),
                          trials=cfg.get("trials"),
                          master_seed=seed,
                          sigma_source=cfg.get("sigma", "upper_bound"))
    if row.solver == "exact":
        if exact_opt is None:
            raise InputError(
                f"row {row.name}: exact solver needs m <= {max_edges}, got {g.m}")
        out["cost"] = exact_opt.cost
        out["feasible"] = True
        lp = solve_relaxed_lp(inst)
        out["lp_opt"] = lp.objective
        solution_cost = exact_opt.cost
    elif row.solver == "lp-round":
        solution, _, lp = solve_requirement_cut(inst, rcfg)
        out["lp_opt"] = lp.objective
        out["cost"] = solution.cost
        out["feasible"] = solution.feasible
        solution_cost = solution.cost
    else:  # sp-pipeline
        solution, _ = solve_sp_pipeline(inst, rcfg,
                                        embed_trials=int(cfg.get("embed_trials", 8)))
        lp = solve_relaxed_lp(inst)
        out["lp_opt"] = lp.objective
        out["cost"] = solution.cost
        out["feasible"] = solution.feasible
        solution_cost = solution.cost

    if out["lp_opt"] and out["lp_opt"] > 0:
        out["ratio_lp"] = solution_cost / out["lp_opt"]
    if exact_opt is not None and exact_opt.cost > 0:
        out["ratio_exact"] = solution_cost / exact_opt.cost
    return out


def _error_row(row, exc):
    return {"name": row.name, "solver": row.solver, "status": "error",
            "n": None, "m": None, "g": None, "tau": None, "log_tau": None,
            "log_sigma": None, "lp_opt": None, "cost": None, "feasible": None,
            "exact_opt": None, "ratio_lp": None, "ratio_exact": None,
            "error": f"{type(exc).__name__}: {exc}"}


def thread_cap(default=1):
    raw = os.environ.get("REQCUT_THREADS", "")
    if not raw:
        return default
    try:
        cap = int(raw)
    except ValueError:
        raise InputError(f"REQCUT_THREADS must be an integer, got {raw!r}") from None
    if cap < 1:
        raise InputError(f"REQCUT_THREADS must be >= 1, got {cap}")
    return cap


def run_bench(plan, threads=None):
    """Execute all rows. Returns (rows in plan order, wall times, any_error).

    Row seeds derive from (plan seed, row index), so results do not depend on
    scheduling; rows may run on a thread pool.
    """
    threads = threads or thread_cap()
    results = [None] * len(plan.rows)
    timings = [None] * len(plan.rows)

    def work(i):
        row = plan.rows[i]
        t0 = time.monotonic()
        try:
            res = run_row(row, derive_seed(plan.seed, i))
        except ReqcutError as exc:
            res = _error_row(row, exc)
        return i, res, time.monotonic() - t0

    if threads == 1 or len(plan.rows) <= 1:
        done = map(work, range(len(plan.rows)))
        for i, res, dt in done:
            results[i] = res
            timings[i] = dt
    else:
        with concurrent.futures.ThreadPoolExecutor(max_workers=threads) as pool:
            for i, res, dt in pool.map(work, range(len(plan.rows))):
                results[i] = res
                timings[i] = dt
    any_error = any(r["status"] == "error" for r in results)
    return results, timings, any_error


def render_csv(rows):
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_FIELDS)
    for r in rows:
        writer.writerow([_fmt(r[f]) for f in CSV_FIELDS])
    return buf.getvalue()


def render_json(rows):
    return json.dumps({"rows": rows}, sort_keys=True, indent=2) + "\n"


def write_reports(rows, out_base):
    csv_path = out_base + ".csv"
    json_path = out_base + ".json"
    with open(csv_path, "w") as fh:
        fh.write(render_csv(rows))
    with open(json_path, "w") as fh:
        fh.write(render_json(rows))
    return csv_path, json_path
