"""Undirected multigraph, problem instance, and cut bookkeeping.

Edge ids are dense 0..m-1 in input order. Costs are exact rationals
(Fraction) so that cut costs and the exhaustive solver never accumulate
float error; float views are cached for the LP and the rounding loop.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import kernels
from .errors import GraphStructureError, InputError


def to_cost(value):
    """Coerce a cost literal to an exact Fraction.

    Floats go through repr so 0.1 means the decimal 1/10, not its binary
    expansion. Strings accept "3", "0.25" and "3/2".
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise InputError(f"bad cost {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(repr(value))
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"bad cost {value!r}: {exc}") from None
    raise InputError(f"bad cost {value!r}")


class Graph:
    """Multigraph on vertices 0..n-1. Parallel edges allowed, self-loops not
    (validate() reports them; operations assume a validated graph)."""

    __slots__ = ("n", "edges", "eu", "ev", "cost_float", "_keep_all")

    def __init__(self, vertex_count, edges):
        if vertex_count < 0:
            raise InputError(f"vertex_count must be >= 0, got {vertex_count}")
        self.n = int(vertex_count)
        rows = []
        for eid, (u, v, cost) in enumerate(edges):
            u, v = int(u), int(v)
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise InputError(f"edge {eid} endpoint out of range: ({u}, {v})")
            rows.append((eid, u, v, to_cost(cost)))
        self.edges = tuple(rows)
        self.eu = np.array([e[1] for e in rows], dtype=np.int64)
        self.ev = np.array([e[2] for e in rows], dtype=np.int64)
        self.cost_float = np.array([float(e[3]) for e in rows], dtype=np.float64)
        self._keep_all = np.ones(len(rows), dtype=np.uint8)

    @property
    def m(self):
        return len(self.edges)

    def cost(self, eid):
        return self.edges[eid][3]

    def endpoints(self, eid):
        e = self.edges[eid]
        return e[1], e[2]

    def cut_cost(self, edge_ids):
        """Exact total cost of an edge set."""
        total = Fraction(0)
        for eid in edge_ids:
            total += self.edges[eid][3]
        return total

    def component_labels(self, removed=()):
        keep = self._keep_all
        if removed:
            keep = keep.copy()
            for eid in removed:
                if not (0 <= eid < self.m):
                    raise InputError(f"unknown edge id {eid}")
                keep[eid] = 0
        return kernels.component_labels(self.n, self.eu, self.ev, keep)

    def is_connected(self):
        if self.n <= 1:
            return True
        labels = self.component_labels()
        return int(labels.max()) == 0

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


@dataclass(frozen=True)
class Instance:
    """A requirement cut instance: graph, terminal groups, requirements."""

    graph: Graph
    groups: tuple
    requirements: tuple

    def __post_init__(self):
        object.__setattr__(self, "groups", tuple(frozenset(int(v) for v in s) for s in self.groups))
        object.__setattr__(self, "requirements", tuple(int(r) for r in self.requirements))
        if len(self.groups) != len(self.requirements):
            raise InputError(
                f"{len(self.groups)} groups but {len(self.requirements)} requirements")

    @property
    def num_groups(self):
        return len(self.groups)


def validate(instance):
    """Every invariant violation, not just the first. Empty list = valid."""
    g = instance.graph
    problems = []
    for eid, u, v, cost in g.edges:
        if u == v:
            problems.append(f"edge {eid} is a self-loop at vertex {u}")
        if cost < 0:
            problems.append(f"edge {eid} has negative cost {cost}")
    if instance.num_groups == 0:
        problems.append("instance has no groups")
    for i, (members, r) in enumerate(zip(instance.groups, instance.requirements)):
        bad = [v for v in members if not (0 <= v < g.n)]
        if bad:
            problems.append(f"group {i} has out-of-range vertices {sorted(bad)}")
            continue
        if len(members) < 2:
            problems.append(f"group {i} has {len(members)} members, need at least 2")
        elif not (2 <= r <= len(members)):
            problems.append(
                f"group {i} requirement {r} outside [2, {len(members)}]")
    if g.n == 0:
        problems.append("graph has no vertices")
    elif not g.is_connected():
        problems.append("graph is not connected")
    return problems


def require_valid(instance):
    problems = validate(instance)
    if problems:
        raise InputError("invalid instance: " + "; ".join(problems))


def components_per_group(instance, cut):
    """Number of components each group occupies after removing the cut."""
    g = instance.graph
    cut = sorted(set(int(e) for e in cut))
    for eid in cut:
        if not (0 <= eid < g.m):
            raise InputError(f"unknown edge id {eid} in cut")
    labels = g.component_labels(cut)
    members = []
    offsets = [0]
    for s in instance.groups:
        members.extend(sorted(s))
        offsets.append(len(members))
    counts = kernels.count_group_components(
        labels, np.array(members, dtype=np.int64), np.array(offsets, dtype=np.int64))
    return [int(c) for c in counts]


def is_feasible_cut(instance, cut):
    counts = components_per_group(instance, cut)
    return all(c >= r for c, r in zip(counts, instance.requirements))


@dataclass(frozen=True)
class CutSolution:
    """A cut with its exact cost and the per-group component counts."""

    cut: frozenset
    cost: float
    cost_exact: Fraction
    components: tuple
    feasible: bool


def make_cut_solution(instance, cut):
    cut = frozenset(int(e) for e in cut)
    counts = components_per_group(instance, cut)
    feasible = all(c >= r for c, r in zip(counts, instance.requirements))
    exact = instance.graph.cut_cost(cut)
    return CutSolution(cut=cut, cost=float(exact), cost_exact=exact,
                       components=tuple(counts), feasible=feasible)


def minimum_spanning_tree(graph, weights):
    """Kruskal with ties broken toward the smaller edge id.

    weights: anything indexable by edge id. Returns (frozenset of edge ids,
    total weight). Raises GraphStructureError when the graph is disconnected.
    """
    order = sorted(range(graph.m), key=lambda e: (weights[e], e))
    parent = list(range(graph.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    tree = []
    total = 0
    for eid in order:
        u, v = graph.endpoints(eid)
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
            tree.append(eid)
            total = total + weights[eid]
            if len(tree) == graph.n - 1:
                break
    if len(tree) != graph.n - 1:
        raise GraphStructureError("graph is not connected, no spanning tree exists")
    return frozenset(tree), total


def edge_subgraph(graph, edge_ids):
    """Same vertex set, only the listed edges. Returns (Graph, id map) where
    id map[new_eid] = old edge id."""
    ids = sorted(set(int(e) for e in edge_ids))
    for eid in ids:
        if not (0 <= eid < graph.m):
            raise InputError(f"unknown edge id {eid}")
    sub = Graph(graph.n, [(graph.edges[e][1], graph.edges[e][2], graph.edges[e][3])
                          for e in ids])
    return sub, tuple(ids)
