"""Minimal Steiner tree enumeration and the sigma upper bound.

A minimal Steiner tree for a terminal set is a subtree spanning every
terminal in which every leaf is a terminal. Enumeration prunes non-terminal
leaves off every spanning tree and dedupes; every minimal Steiner tree
extends to a spanning tree, so nothing is missed. sigma (the total number of
minimal Steiner trees over all groups) is what calibrates the rounding
threshold; it is bounded by g * tau, which is the cheap route.
"""

import math
from dataclasses import dataclass

from .errors import InputError, ResourceError
from .exact import spanning_tree_edge_sets
from .graph import require_valid
from .treecount import count_spanning_trees_exact, log_spanning_trees

ENUM_EDGE_BUDGET = 24


@dataclass(frozen=True)
class SteinerTree:
    edges: frozenset
    vertices: frozenset


def prune_to_minimal(graph, tree_edges, terminals):
    """Drop non-terminal leaves until every leaf is a terminal."""
    cur = set(tree_edges)
    incident = {}
    for eid in cur:
        u, v = graph.endpoints(eid)
        incident.setdefault(u, set()).add(eid)
        incident.setdefault(v, set()).add(eid)
    leaves = [v for v, inc in incident.items() if len(inc) == 1 and v not in terminals]
    while leaves:
        v = leaves.pop()
        inc = incident.get(v)
        if inc is None or len(inc) != 1:
            continue
        eid = next(iter(inc))
        cur.discard(eid)
        del incident[v]
        a, b = graph.endpoints(eid)
        w = b if a == v else a
        incident[w].discard(eid)
        if len(incident[w]) == 1 and w not in terminals:
            leaves.append(w)
    return frozenset(cur)


def minimal_steiner_edge_sets(graph, terminals, max_edges=ENUM_EDGE_BUDGET):
    """All minimal Steiner trees for the terminal set, as edge id frozensets."""
    terminals = frozenset(int(v) for v in terminals)
    if len(terminals) < 2:
        raise InputError("need at least two terminals")
    for v in terminals:
        if not (0 <= v < graph.n):
            raise InputError(f"terminal {v} out of range")
    if graph.m > max_edges:
        raise ResourceError(
            f"steiner enumeration over {graph.m} edges exceeds the {max_edges}-edge "
            "budget; use sigma_upper_bound instead")
    seen = set()
    for tree in spanning_tree_edge_sets(graph, max_edges=max_edges):
        seen.add(prune_to_minimal(graph, tree, terminals))
    return sorted(seen, key=sorted)


def enumerate_minimal_steiner_trees(instance, group_index):
    """Minimal Steiner trees of one group, with their vertex sets."""
    require_valid(instance)
    if not (0 <= group_index < instance.num_groups):
        raise InputError(f"group index {group_index} out of range")
    g = instance.graph
    terminals = instance.groups[group_index]
    out = []
    for edge_set in minimal_steiner_edge_sets(g, terminals):
        verts = set(terminals)
        for eid in edge_set:
            u, v = g.endpoints(eid)
            verts.add(u)
            verts.add(v)
        out.append(SteinerTree(edges=edge_set, vertices=frozenset(verts)))
    return out


def exact_sigma_by_enumeration(instance):
    """sigma(G, S) itself: total minimal Steiner trees over all groups."""
    require_valid(instance)
    total = 0
    for gi in range(instance.num_groups):
        total += len(minimal_steiner_edge_sets(instance.graph, instance.groups[gi]))
    return total


def sigma_upper_bound(instance):
    """(log_sigma, exact_sigma) for sigma_hat = g * tau.

    log_sigma = ln g + ln tau via the float determinant route; exact_sigma is
    the exact integer (arbitrary precision, so always available here).
    """
    require_valid(instance)
    g = instance.num_groups
    log_sigma = math.log(g) + log_spanning_trees(instance.graph)
    exact_sigma = g * count_spanning_trees_exact(instance.graph)
    return log_sigma, exact_sigma
