"""Metric LP relaxation solved by cutting planes.

Variables are d(u, v) in [0, 1] for every unordered vertex pair. For each
group the augmented graph adds zero-cost clique edges between nonadjacent
group members; the constraint family says every spanning tree of that
augmented graph has d-length at least r - 1. Those rows are separated by a
minimum spanning tree under the current d (minimality certifies there is no
shorter tree), triangle inequalities are separated by a full scan. The
objective charges each real edge its cost times its pair's d.
"""

import itertools
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

from .errors import ConvergenceError, InputError, ResourceError
from .graph import Graph, components_per_group, minimum_spanning_tree, require_valid
from .steiner import minimal_steiner_edge_sets

DEFAULT_TOLERANCE = 1e-7
LP_CORE_TOLERANCE = 1e-9
MAX_CUTS = 10000
_TRIANGLE_BATCH = 200
EQUIV_EDGE_BUDGET = 20


class Metric:
    """Symmetric pairwise distances in [0, 1] with zero diagonal."""

    __slots__ = ("n", "values")

    def __init__(self, values):
        values = np.asarray(values, dtype=np.float64)
        if values.ndim != 2 or values.shape[0] != values.shape[1]:
            raise InputError("metric wants a square matrix")
        self.n = values.shape[0]
        self.values = values

    def value(self, u, v):
        return float(self.values[u, v])

    def check(self, tolerance=DEFAULT_TOLERANCE):
        """All violations of symmetry, range, diagonal and triangle inequality."""
        d = self.values
        problems = []
        if np.abs(np.diagonal(d)).max(initial=0.0) > tolerance:
            problems.append("nonzero diagonal")
        if np.abs(d - d.T).max(initial=0.0) > tolerance:
            problems.append("not symmetric")
        if d.min(initial=0.0) < -tolerance or d.max(initial=0.0) > 1 + tolerance:
            problems.append("values outside [0, 1]")
        # worst triangle violation d[u,w] - d[u,v] - d[v,w]
        t = d[:, None, :] - d[:, :, None] - d[None, :, :]
        worst = float(t.max(initial=0.0))
        if worst > tolerance:
            u, v, w = np.unravel_index(int(t.argmax()), t.shape)
            problems.append(f"triangle violation {worst:.3e} at ({u},{v},{w})")
        return problems


@dataclass(frozen=True)
class AugmentedEdge:
    eid: int
    u: int
    v: int
    synthetic: bool


@dataclass(frozen=True)
class AugmentedGraph:
    """Base graph plus zero-cost clique edges inside one group.

    Synthetic edge ids continue after the base ids, ordered by (u, v).
    """

    base: Graph
    group_index: int
    edges: tuple

    @property
    def num_synthetic(self):
        return len(self.edges) - self.base.m


def build_augmented(instance, group_index):
    if not (0 <= group_index < instance.num_groups):
        raise InputError(f"group index {group_index} out of range")
    g = instance.graph
    rows = [AugmentedEdge(eid, u, v, False) for eid, u, v, _ in g.edges]
    present = {frozenset((u, v)) for _, u, v, _ in g.edges}
    nxt = g.m
    for u, v in itertools.combinations(sorted(instance.groups[group_index]), 2):
        if frozenset((u, v)) not in present:
            rows.append(AugmentedEdge(nxt, u, v, True))
            nxt += 1
    return AugmentedGraph(base=g, group_index=group_index, edges=tuple(rows))


@dataclass(frozen=True)
class ViolatedTree:
    edges: tuple  # augmented edge ids
    length: float


def separation_oracle(aug, metric_values, requirement, tolerance=DEFAULT_TOLERANCE):
    """Most violated spanning tree constraint of one augmented graph, or None.

    metric_values: (n, n) array of current d. The MST under d is the shortest
    spanning tree; if even it reaches r - 1 - tolerance, no tree is violated.
    """
    tree_graph = Graph(aug.base.n, [(e.u, e.v, 0) for e in aug.edges])
    weights = [float(metric_values[e.u, e.v]) for e in aug.edges]
    tree, total = minimum_spanning_tree(tree_graph, weights)
    if total < requirement - 1 - tolerance:
        return ViolatedTree(edges=tuple(sorted(tree)), length=float(total))
    return None


@dataclass(frozen=True)
class LpResult:
    metric: Metric
    objective: float
    active_constraints: tuple  # (group_index, augmented-edge-id tuple) rows
    iterations: int


def _pair_index(n):
    idx = {}
    for u in range(n):
        for v in range(u + 1, n):
            idx[(u, v)] = len(idx)
    return idx


def solve_relaxed_lp(instance, tolerance=DEFAULT_TOLERANCE, max_cuts=MAX_CUTS,
                     lp_tolerance=LP_CORE_TOLERANCE):
    """Cutting-plane solve of the relaxation. Raises ConvergenceError past
    max_cuts added rows."""
    require_valid(instance)
    g = instance.graph
    n = g.n
    pairs = _pair_index(n)
    num_vars = len(pairs)

    obj = np.zeros(num_vars)
    for _, u, v, cost in g.edges:
        a, b = (u, v) if u < v else (v, u)
        obj[pairs[(a, b)]] += float(cost)

    augs = [build_augmented(instance, gi) for gi in range(instance.num_groups)]

    def var_of(u, v):
        return pairs[(u, v) if u < v else (v, u)]

    rows = []      # (coeff array, rhs) meaning coeff . x <= rhs
    row_keys = set()
    tree_rows = []  # (group_index, augmented edge ids)
    tri_tol = tolerance / 2

    d_mat = np.zeros((n, n))
    x = np.zeros(num_vars)
    iterations = 0
    options = {
        "primal_feasibility_tolerance": lp_tolerance,
        "dual_feasibility_tolerance": lp_tolerance,
    }
    while True:
        iterations += 1
        if rows:
            a_ub = np.vstack([r[0] for r in rows])
            b_ub = np.array([r[1] for r in rows])
        else:
            a_ub, b_ub = None, None
        res = linprog(obj, A_ub=a_ub, b_ub=b_ub, bounds=(0.0, 1.0),
                      method="highs", options=options)
        if res.status != 0:
            raise ConvergenceError(f"LP core failed: {res.message}",
                                   last_objective=float(obj @ x))
        x = res.x
        for (u, v), k in pairs.items():
            d_mat[u, v] = d_mat[v, u] = x[k]

        added = 0
        # triangle rows: worst first, capped per round
        t = d_mat[:, None, :] - d_mat[:, :, None] - d_mat[None, :, :]
        viol_idx = np.argwhere(t > tri_tol)
        if len(viol_idx):
            strength = t[tuple(viol_idx.T)]
            order = np.lexsort((viol_idx[:, 2], viol_idx[:, 1], viol_idx[:, 0], -strength))
            for flat in order[:_TRIANGLE_BATCH]:
                u, v, w = (int(z) for z in viol_idx[flat])
                if u == v or v == w or u == w:
                    continue
                key = ("tri", var_of(u, w), var_of(u, v), var_of(v, w))
                if key in row_keys:
                    continue
                row_keys.add(key)
                coeff = np.zeros(num_vars)
                coeff[var_of(u, w)] += 1.0
                coeff[var_of(u, v)] -= 1.0
                coeff[var_of(v, w)] -= 1.0
                rows.append((coeff, 0.0))
                added += 1
        # spanning tree rows, one per violated group
        for gi, aug in enumerate(augs):
            hit = separation_oracle(aug, d_mat, instance.requirements[gi], tolerance)
            if hit is None:
                continue
            key = ("tree", gi, hit.edges)
            if key in row_keys:
                continue
            row_keys.add(key)
            coeff = np.zeros(num_vars)
            for aeid in hit.edges:
                e = aug.edges[aeid]
                coeff[var_of(e.u, e.v)] -= 1.0
            rows.append((coeff, -(instance.requirements[gi] - 1)))
            tree_rows.append((gi, hit.edges))
            added += 1

        if added == 0:
            break
        if len(rows) > max_cuts:
            raise ConvergenceError(
                f"cutting planes did not converge within {max_cuts} rows",
                last_objective=float(obj @ x))

    metric = Metric(d_mat.copy())
    return LpResult(metric=metric, objective=float(obj @ x),
                    active_constraints=tuple((gi, tuple(e)) for gi, e in tree_rows),
                    iterations=iterations)


def scale_metric(metric):
    """d -> min(2 d, 1). Keeps the triangle inequality; after this every
    group's minimal Steiner tree has length at least r - 1."""
    return Metric(np.minimum(2.0 * metric.values, 1.0))


def check_cut_equivalence(instance, group_index, cut):
    """(components_ok, all_trees_cut) for one group and an integral cut.

    components_ok: the group occupies at least r components of graph - cut.
    all_trees_cut: every minimal Steiner tree of the augmented graph carries
    at least r - 1 cut edges, where a synthetic clique edge counts as cut
    iff its endpoints land in different components of graph - cut. The two
    agree for every cut (the cheapest such tree carries exactly
    #terminal-components - 1 cut edges).
    """
    require_valid(instance)
    if not (0 <= group_index < instance.num_groups):
        raise InputError(f"group index {group_index} out of range")
    g = instance.graph
    cut = frozenset(int(e) for e in cut)
    for eid in cut:
        if not (0 <= eid < g.m):
            raise InputError(f"unknown edge id {eid} in cut")
    r = instance.requirements[group_index]

    counts = components_per_group(instance, cut)
    components_ok = counts[group_index] >= r

    aug = build_augmented(instance, group_index)
    if len(aug.edges) > EQUIV_EDGE_BUDGET:
        raise ResourceError(
            f"equivalence check over {len(aug.edges)} augmented edges exceeds "
            f"the {EQUIV_EDGE_BUDGET}-edge budget")
    labels = g.component_labels(cut)
    aug_graph = Graph(g.n, [(e.u, e.v, 0) for e in aug.edges])

    def cut_count(edge_set):
        c = 0
        for aeid in edge_set:
            e = aug.edges[aeid]
            if e.synthetic:
                c += labels[e.u] != labels[e.v]
            else:
                c += e.eid in cut
        return c

    all_trees_cut = True
    for tree in minimal_steiner_edge_sets(aug_graph, instance.groups[group_index],
                                          max_edges=EQUIV_EDGE_BUDGET):
        if cut_count(tree) < r - 1:
            all_trees_cut = False
            break
    return components_ok, all_trees_cut


def certify_lp_result(instance, result, tolerance=DEFAULT_TOLERANCE, samples=10000,
                      seed=0):
    """Fresh separation pass after convergence: all groups plus sampled
    triples. Returns list of violation strings (empty = certified)."""
    from . import kernels

    problems = list(result.metric.check(tolerance))
    d = result.metric.values
    for gi in range(instance.num_groups):
        aug = build_augmented(instance, gi)
        hit = separation_oracle(aug, d, instance.requirements[gi], tolerance)
        if hit is not None:
            problems.append(
                f"group {gi} tree of length {hit.length:.6f} below "
                f"{instance.requirements[gi] - 1}")
    n = result.metric.n
    for i in range(samples):
        z = kernels.stream_value(seed, i)
        u = z % n
        v = (z >> 16) % n
        w = (z >> 32) % n
        if u == v or v == w or u == w:
            continue
        if d[u, w] - d[u, v] - d[v, w] > tolerance:
            problems.append(f"sampled triangle violation at ({u},{v},{w})")
    return problems


def lp_lower_bound_holds(instance, result, budget=None, slack=1e-6):
    """LP objective <= exact optimum + slack (sanity harness for tests)."""
    from .exact import exact_solve

    opt = exact_solve(instance, budget)
    return result.objective <= opt.cost + slack, opt
