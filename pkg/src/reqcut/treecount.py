"""Spanning tree counts via the Laplacian (Kirchhoff).

Two routes on purpose: count_spanning_trees_exact does fraction-free integer
elimination (Bareiss) on the Laplacian minor and is exact at any size the
determinant fits in memory; log_spanning_trees goes through float slogdet for
graphs whose count overflows anything printable.
"""

import math

import numpy as np

from .errors import GraphStructureError, InputError


def laplacian_minor(graph):
    """Integer Laplacian of the multigraph with row/column 0 deleted.

    Multiplicity of parallel edges goes into the off-diagonal entries.
    """
    n = graph.n
    if n == 0:
        raise InputError("graph has no vertices")
    lap = [[0] * n for _ in range(n)]
    for _, u, v, _cost in graph.edges:
        if u == v:
            continue  # self-loops do not touch the Laplacian
        lap[u][u] += 1
        lap[v][v] += 1
        lap[u][v] -= 1
        lap[v][u] -= 1
    for row in lap:
        if sum(row) != 0:
            raise InputError("Laplacian row sums are not zero")
    return [row[1:] for row in lap[1:]]


def _bareiss_det(mat):
    """Exact integer determinant, fraction-free elimination."""
    a = [row[:] for row in mat]
    k = len(a)
    if k == 0:
        return 1
    sign = 1
    prev = 1
    for col in range(k - 1):
        if a[col][col] == 0:
            swap = next((r for r in range(col + 1, k) if a[r][col] != 0), None)
            if swap is None:
                return 0
            a[col], a[swap] = a[swap], a[col]
            sign = -sign
        pivot = a[col][col]
        for i in range(col + 1, k):
            for j in range(col + 1, k):
                a[i][j] = (a[i][j] * pivot - a[i][col] * a[col][j]) // prev
            a[i][col] = 0
        prev = pivot
    return sign * a[k - 1][k - 1]


def count_spanning_trees_exact(graph):
    if not graph.is_connected():
        raise GraphStructureError("spanning tree count needs a connected graph")
    if graph.n <= 1:
        return 1
    return _bareiss_det(laplacian_minor(graph))


def log_spanning_trees(graph):
    """Natural log of the spanning tree count, float route."""
    if not graph.is_connected():
        raise GraphStructureError("spanning tree count needs a connected graph")
    if graph.n <= 1:
        return 0.0
    minor = np.array(laplacian_minor(graph), dtype=np.float64)
    sign, logdet = np.linalg.slogdet(minor)
    if sign <= 0:
        raise InputError("Laplacian minor is not positive definite")
    return float(logdet)


def feedback_edge_number(graph):
    """m - n + 1 for a connected graph (cycle space dimension)."""
    if not graph.is_connected():
        raise GraphStructureError("feedback edge number needs a connected graph")
    return graph.m - graph.n + 1


def log_tree_count_upper_bound(graph):
    """ln binom(n - 1 + k, k) with k the feedback edge number.

    Cheap sanity ceiling for log_spanning_trees on sparse graphs.
    """
    k = feedback_edge_number(graph)
    return math.lgamma(graph.n + k) - math.lgamma(graph.n) - math.lgamma(k + 1)


def spanning_tree_count_is_one(graph):
    """True iff the graph is a tree (m = n - 1 and connected)."""
    return feedback_edge_number(graph) == 0


__all__ = [
    "laplacian_minor",
    "count_spanning_trees_exact",
    "log_spanning_trees",
    "feedback_edge_number",
    "log_tree_count_upper_bound",
    "spanning_tree_count_is_one",
]
