"""Exhaustive ground truth at desk scale.

Everything here is deliberately self-contained pure Python (own union-find,
own connectivity checks) so it cannot share a bug with the production path
it is used to judge.
"""

import time
from dataclasses import dataclass
from fractions import Fraction

from .errors import InputError, ResourceError
from .graph import CutSolution, require_valid


@dataclass(frozen=True)
class OracleBudget:
    max_edges: int = 20
    time_limit: float | None = None  # seconds, None = no limit

    def __post_init__(self):
        if not (1 <= self.max_edges <= 26):
            raise InputError(f"max_edges must be in [1, 26], got {self.max_edges}")
        if self.time_limit is not None and self.time_limit <= 0:
            raise InputError(f"time_limit must be positive, got {self.time_limit}")


class _DSU:
    __slots__ = ("parent",)

    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, u, v):
        ru, rv = self.find(u), self.find(v)
        if ru == rv:
            return False
        self.parent[ru] = rv
        return True


def _group_components(n, edges, kept_ids, groups):
    dsu = _DSU(n)
    for eid in kept_ids:
        _, u, v, _ = edges[eid]
        dsu.union(u, v)
    return [len({dsu.find(v) for v in s}) for s in groups]


def spanning_tree_edge_sets(graph, max_edges=24):
    """Every spanning tree edge set, by include/exclude branching in id order.

    Budget is on the edge count. For the public n <= 9 contract see
    enumerate_spanning_trees.
    """
    n, m = graph.n, graph.m
    if m > max_edges:
        raise ResourceError(
            f"spanning tree enumeration over {m} edges exceeds the {max_edges}-edge budget")
    if n == 0:
        return
    if n == 1:
        yield frozenset()
        return
    edges = graph.edges
    need = n - 1

    def rec(idx, chosen, dsu):
        remaining = m - idx
        missing = need - len(chosen)
        if missing == 0:
            yield frozenset(chosen)
            return
        if remaining < missing:
            return
        eid, u, v, _ = edges[idx]
        ru, rv = dsu.find(u), dsu.find(v)
        if ru != rv:
            child = _DSU(0)
            child.parent = dsu.parent[:]
            child.parent[ru] = rv
            chosen.append(eid)
            yield from rec(idx + 1, chosen, child)
            chosen.pop()
        yield from rec(idx + 1, chosen, dsu)

    yield from rec(0, [], _DSU(n))


def enumerate_spanning_trees(graph):
    """All spanning trees as frozensets of edge ids. Hard n <= 9 limit."""
    if graph.n > 9:
        raise ResourceError(
            f"spanning tree enumeration capped at 9 vertices, got {graph.n}")
    return list(spanning_tree_edge_sets(graph, max_edges=graph.m))


def exact_solve(instance, budget=None):
    """Minimum-cost requirement cut by branch and bound over edge subsets.

    Deterministic tie-break: among equal-cost optima, the cut whose sorted
    edge id tuple is lexicographically smallest.
    """
    require_valid(instance)
    budget = budget or OracleBudget()
    g = instance.graph
    if g.m > budget.max_edges:
        raise ResourceError(
            f"exact solve over {g.m} edges exceeds the {budget.max_edges}-edge budget")
    deadline = None if budget.time_limit is None else time.monotonic() + budget.time_limit

    n, m = g.n, g.m
    edges = g.edges
    groups = [sorted(s) for s in instance.groups]
    reqs = list(instance.requirements)

    def satisfied(cut_set):
        kept = [e for e in range(m) if e not in cut_set]
        counts = _group_components(n, edges, kept, groups)
        return all(c >= r for c, r in zip(counts, reqs))

    best_cost = None
    best_cut = None
    node_counter = 0

    def rec(idx, cut, cut_set, cut_cost, kept):
        # cut/kept: decided edge ids below idx; everything >= idx is open.
        nonlocal best_cost, best_cut, node_counter
        node_counter += 1
        if deadline is not None and node_counter % 512 == 0:
            if time.monotonic() > deadline:
                raise ResourceError("exact solve hit its time limit")
        if best_cost is not None and cut_cost > best_cost:
            return
        # even cutting every open edge keeps exactly `kept`; if that is
        # already short of some requirement, no completion can work
        counts = _group_components(n, edges, kept, groups)
        if any(c < r for c, r in zip(counts, reqs)):
            return
        if satisfied(cut_set):
            cand = tuple(sorted(cut))
            if best_cost is None or cut_cost < best_cost or (
                    cut_cost == best_cost and cand < best_cut):
                best_cost = cut_cost
                best_cut = cand
            return  # supersets cost more and sort later
        if idx == m:
            return
        eid, _u, _v, cost = edges[idx]
        cut.append(eid)
        cut_set.add(eid)
        rec(idx + 1, cut, cut_set, cut_cost + cost, kept)
        cut.pop()
        cut_set.discard(eid)
        kept.append(eid)
        rec(idx + 1, cut, cut_set, cut_cost, kept)
        kept.pop()

    rec(0, [], set(), Fraction(0), [])
    if best_cut is None:
        raise InputError("no feasible cut exists (validation should have caught this)")
    exact = g.cut_cost(best_cut)
    kept = [e for e in range(m) if e not in set(best_cut)]
    counts = _group_components(n, edges, kept, groups)
    return CutSolution(cut=frozenset(best_cut), cost=float(exact), cost_exact=exact,
                       components=tuple(counts), feasible=True)


def approximation_ratio(instance, solution, budget=None):
    """solution.cost / exact optimum. Raises on an infeasible solution."""
    if not solution.feasible:
        raise InputError("approximation_ratio needs a feasible solution")
    opt = exact_solve(instance, budget)
    if opt.cost_exact == 0:
        return 1.0 if solution.cost_exact == 0 else float("inf")
    return float(solution.cost_exact / opt.cost_exact)


def lp_gap(solution, lp_result):
    """solution.cost / LP objective, the certificate-free quality measure."""
    if lp_result.objective <= 0:
        return 1.0 if solution.cost == 0 else float("inf")
    return solution.cost / lp_result.objective
