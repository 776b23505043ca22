"""Two-terminal series-parallel graphs: recognition, random spanning-tree
embeddings, and the tree-based solve pipeline.

A composition trace is the alternating series/parallel expression tree with
edges at the leaves; same-kind chains are merged, so depth is well defined
(single edge 0, path 1, parallel bundle of paths 2, ...). The embedding keeps
the child with the shortest terminal-to-terminal path at every parallel node
and deletes one uniformly random path edge from each other child; with unit
lengths the expected tree distance of any edge is at most 2*depth + 2.
"""

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import kernels
from .errors import InputError, ParseError
from .graph import Graph, Instance, make_cut_solution, require_valid, to_cost

SERIES = "S"
PARALLEL = "P"
EDGE = "edge"


@dataclass(frozen=True)
class TraceNode:
    kind: str
    terminals: tuple  # (x, y), oriented
    children: tuple = ()
    edge_id: int = -1

    def reversed(self):
        x, y = self.terminals
        if self.kind == EDGE:
            return TraceNode(EDGE, (y, x), edge_id=self.edge_id)
        kids = tuple(c.reversed() for c in self.children)
        if self.kind == SERIES:
            kids = tuple(reversed(kids))
        return TraceNode(self.kind, (y, x), children=kids)


def _splice(kind, children):
    """Merge same-kind children so no node has a child of its own kind."""
    out = []
    for c in children:
        if c.kind == kind:
            out.extend(c.children)
        else:
            out.append(c)
    return tuple(out)


def _depth(node):
    if node.kind == EDGE:
        return 0
    return 1 + max(_depth(c) for c in node.children)


def _leaf_ids(node, acc):
    if node.kind == EDGE:
        acc.append(node.edge_id)
    else:
        for c in node.children:
            _leaf_ids(c, acc)


@dataclass(frozen=True)
class CompositionTrace:
    root: TraceNode

    @property
    def depth(self):
        return _depth(self.root)

    @property
    def leaf_edge_ids(self):
        acc = []
        _leaf_ids(self.root, acc)
        return tuple(acc)

    def check(self):
        """Structure violations: kind chains, child counts, bad leaves."""
        problems = []

        def walk(node):
            if node.kind == EDGE:
                if node.children:
                    problems.append("edge leaf with children")
                if node.edge_id < 0:
                    problems.append("edge leaf without an id")
                return
            if node.kind not in (SERIES, PARALLEL):
                problems.append(f"unknown node kind {node.kind!r}")
                return
            if len(node.children) < 2:
                problems.append(f"{node.kind} node with {len(node.children)} children")
            for c in node.children:
                if c.kind == node.kind:
                    problems.append(f"{node.kind} node has a child of its own kind")
                walk(c)

        walk(self.root)
        ids = self.leaf_edge_ids
        if len(ids) != len(set(ids)):
            problems.append("duplicate edge ids at the leaves")
        return problems


@dataclass
class SpInstance:
    graph: Graph
    trace: CompositionTrace
    x: int
    y: int


# ----- expression files: E := edge(cost) | S(E, E, ...) | P(E, E, ...) -----

def _lex(text):
    toks = []
    for raw in text.splitlines():
        hash_at = raw.find("#")
        if hash_at >= 0:
            raw = raw[:hash_at]
        i = 0
        while i < len(raw):
            ch = raw[i]
            if ch.isspace():
                i += 1
            elif ch in "(),":
                toks.append(ch)
                i += 1
            else:
                j = i
                while j < len(raw) and not raw[j].isspace() and raw[j] not in "(),":
                    j += 1
                toks.append(raw[i:j])
                i = j
    return toks


def parse_sp_expression(text):
    """One expression per file. Builds the graph with terminals 0 and 1,
    internal vertices and edge ids numbered in traversal order."""
    toks = _lex(text)
    if not toks:
        raise ParseError("empty series-parallel expression")
    pos = 0

    def peek():
        return toks[pos] if pos < len(toks) else None

    def take(expected=None):
        nonlocal pos
        if pos >= len(toks):
            raise ParseError(f"unexpected end of expression, wanted {expected}", pos)
        tok = toks[pos]
        if expected is not None and tok != expected:
            raise ParseError(f"expected {expected!r}, got {tok!r}", pos)
        pos += 1
        return tok

    def parse_node():
        head = take()
        if head in (SERIES, PARALLEL):
            take("(")
            kids = [parse_node()]
            while peek() == ",":
                take(",")
                kids.append(parse_node())
            take(")")
            if len(kids) < 2:
                raise ParseError(f"{head} needs at least 2 children", pos)
            return (head, kids)
        if head == EDGE:
            take("(")
            cost_tok = take()
            take(")")
            try:
                cost = Fraction(cost_tok)
            except (ValueError, ZeroDivisionError):
                raise ParseError(f"bad edge cost {cost_tok!r}", pos - 2) from None
            if cost < 0:
                raise ParseError(f"negative edge cost {cost_tok}", pos - 2)
            return (EDGE, cost)
        raise ParseError(f"expected S, P or edge, got {head!r}", pos - 1)

    ast = parse_node()
    if pos != len(toks):
        raise ParseError(f"{len(toks) - pos} trailing tokens", pos)

    edges = []
    next_vertex = [2]

    def build(node, x, y):
        kind, payload = node
        if kind == EDGE:
            eid = len(edges)
            edges.append((x, y, payload))
            return TraceNode(EDGE, (x, y), edge_id=eid)
        if kind == SERIES:
            cuts = [x]
            for _ in range(len(payload) - 1):
                cuts.append(next_vertex[0])
                next_vertex[0] += 1
            cuts.append(y)
            kids = tuple(build(c, cuts[i], cuts[i + 1]) for i, c in enumerate(payload))
        else:
            kids = tuple(build(c, x, y) for c in payload)
        return TraceNode(kind, (x, y), children=_splice(kind, kids))

    root = build(ast, 0, 1)
    graph = Graph(next_vertex[0], edges)
    trace = CompositionTrace(root=root)
    problems = trace.check()
    if problems:
        raise ParseError("bad composition trace: " + "; ".join(problems))
    return SpInstance(graph=graph, trace=trace, x=0, y=1)


def dump_sp_expression(sp):
    def emit(node):
        if node.kind == EDGE:
            cost = sp.graph.cost(node.edge_id)
            s = str(cost.numerator) if cost.denominator == 1 else \
                f"{cost.numerator}/{cost.denominator}"
            return f"edge({s})"
        return f"{node.kind}(" + ", ".join(emit(c) for c in node.children) + ")"

    return emit(sp.trace.root) + "\n"


# ----- recognition by series/parallel reduction -----

def recognize_sp(graph, x, y):
    """Composition trace of the graph as a two-terminal series-parallel graph
    with terminals (x, y), or None when it is not one."""
    if not (0 <= x < graph.n and 0 <= y < graph.n) or x == y:
        raise InputError(f"bad terminals ({x}, {y})")
    if graph.m == 0:
        return None
    # super-edges: oriented (u, v, node with terminals (u, v))
    super_edges = [(u, v, TraceNode(EDGE, (u, v), edge_id=eid))
                   for eid, u, v, _ in graph.edges]

    def parallel_pass():
        # merge one bundle per call; indices go stale once the list mutates
        groups = {}
        for i, (u, v, _) in enumerate(super_edges):
            groups.setdefault(frozenset((u, v)), []).append(i)
        mergeable = [idxs for idxs in groups.values() if len(idxs) >= 2]
        if not mergeable:
            return False
        idxs = min(mergeable, key=min)
        u, v, _ = super_edges[idxs[0]]
        kids = []
        for i in idxs:
            a, b, node = super_edges[i]
            kids.append(node if (a, b) == (u, v) else node.reversed())
        kids.sort(key=lambda nd: min(_collect_ids(nd)))
        node = TraceNode(PARALLEL, (u, v), children=_splice(PARALLEL, tuple(kids)))
        for i in sorted(idxs, reverse=True):
            del super_edges[i]
        super_edges.append((u, v, node))
        return True

    def series_step():
        deg = {}
        for u, v, _ in super_edges:
            deg[u] = deg.get(u, 0) + 1
            deg[v] = deg.get(v, 0) + 1
        for w in sorted(deg):
            if w in (x, y) or deg[w] != 2:
                continue
            idxs = [i for i, (u, v, _) in enumerate(super_edges) if w in (u, v)]
            if len(idxs) != 2:
                continue  # one super-edge touching w twice would be a loop
            i1, i2 = idxs
            u1, v1, n1 = super_edges[i1]
            u2, v2, n2 = super_edges[i2]
            a = v1 if u1 == w else u1
            b = v2 if u2 == w else u2
            if a == b:
                # both halves run between the same pair; the parallel pass
                # must fire first, a series merge here would make a loop
                continue
            left = n1 if (u1, v1) == (a, w) else n1.reversed()
            right = n2 if (u2, v2) == (w, b) else n2.reversed()
            node = TraceNode(SERIES, (a, b),
                             children=_splice(SERIES, (left, right)))
            for i in sorted((i1, i2), reverse=True):
                del super_edges[i]
            super_edges.append((a, b, node))
            return True
        return False

    while True:
        while parallel_pass():
            pass
        if len(super_edges) == 1:
            u, v, node = super_edges[0]
            if frozenset((u, v)) != frozenset((x, y)):
                return None
            if (u, v) != (x, y):
                node = node.reversed()
            trace = CompositionTrace(root=node)
            if set(trace.leaf_edge_ids) != set(range(graph.m)):
                return None
            return trace
        if not series_step():
            return None


def _collect_ids(node):
    acc = []
    _leaf_ids(node, acc)
    return acc


# ----- the embedding -----

def construct_tree(sp, seed):
    """Random spanning tree of a unit-length series-parallel graph.

    Recursion over the trace: series glues child trees; parallel keeps the
    child with the shortest terminal path (first on ties) and removes one
    uniformly random path edge from every other child. Returns edge ids.
    """
    for _, _, _, cost in sp.graph.edges:
        if cost != 1:
            raise InputError(
                "construct_tree wants unit edge lengths; subdivide integer costs first")
    counter = [0]

    def draw_index(k):
        z = kernels.stream_value(seed, counter[0])
        counter[0] += 1
        return z % k

    def build(node):
        # returns (tree edge ids, terminal path edge ids in order)
        if node.kind == EDGE:
            return [node.edge_id], [node.edge_id]
        if node.kind == SERIES:
            tree, path = [], []
            for c in node.children:
                t, p = build(c)
                tree.extend(t)
                path.extend(p)
            return tree, path
        built = [build(c) for c in node.children]
        k_star = min(range(len(built)), key=lambda i: len(built[i][1]))
        tree, path = list(built[k_star][0]), list(built[k_star][1])
        for j, (t, p) in enumerate(built):
            if j == k_star:
                continue
            drop = p[draw_index(len(p))]
            tree.extend(e for e in t if e != drop)
        return tree, path

    tree, _ = build(sp.trace.root)
    return frozenset(tree)


def tree_distances(graph, tree_edges, queries):
    """Hop distances inside the tree for (u, v) query pairs."""
    ids = sorted(tree_edges)
    eu = graph.eu[ids]
    ev = graph.ev[ids]
    qu = np.array([q[0] for q in queries], dtype=np.int64)
    qv = np.array([q[1] for q in queries], dtype=np.int64)
    return kernels.pair_distances_unweighted(graph.n, eu, ev, qu, qv)


def estimate_distortion(sp, samples=10000, seed=0):
    """Per-edge mean stretch and standard error over sampled embeddings.

    Returns {edge_id: (mean, se)}. Stretch of edge e is tree distance of its
    endpoints over its graph distance (1 on unit graphs).
    """
    if samples < 100:
        raise InputError(f"need at least 100 samples, got {samples}")
    g = sp.graph
    queries = [(u, v) for _, u, v, _ in g.edges]
    base = kernels.pair_distances_unweighted(
        g.n, g.eu, g.ev,
        np.array([q[0] for q in queries], dtype=np.int64),
        np.array([q[1] for q in queries], dtype=np.int64)).astype(np.float64)
    if (base <= 0).any():
        raise InputError("degenerate graph distance (self-loop?)")
    total = np.zeros(g.m)
    total_sq = np.zeros(g.m)
    for s in range(samples):
        tree = construct_tree(sp, kernels.derive_seed(seed, s))
        dist = tree_distances(g, tree, queries).astype(np.float64)
        stretch = dist / base
        total += stretch
        total_sq += stretch * stretch
    mean = total / samples
    var = np.maximum(total_sq - samples * mean * mean, 0.0) / (samples - 1)
    se = np.sqrt(var / samples)
    return {eid: (float(mean[eid]), float(se[eid])) for eid in range(g.m)}


def stretch_bound(depth):
    """Expected stretch guarantee for a depth-m trace with unit lengths."""
    return 2.0 * depth + 2.0


# ----- solve pipeline over tree embeddings -----

def find_sp_terminals(graph):
    """First (x, y) pair, ascending, that the reduction accepts."""
    for x in range(graph.n):
        for y in range(x + 1, graph.n):
            trace = recognize_sp(graph, x, y)
            if trace is not None:
                return SpInstance(graph=graph, trace=trace, x=x, y=y)
    return None


def subdivide_integer_costs(graph):
    """Split each integer-cost edge into that many unit edges.

    Returns (unit graph, piece map) with piece map[orig eid] = list of unit
    edge ids; original vertices keep their ids.
    """
    edges = []
    piece_map = []
    next_vertex = graph.n
    for eid, u, v, cost in graph.edges:
        if cost.denominator != 1 or cost <= 0:
            raise InputError(
                f"edge {eid} cost {cost} is not a positive integer, cannot subdivide")
        k = cost.numerator
        pieces = []
        prev = u
        for step in range(k - 1):
            edges.append((prev, next_vertex, Fraction(1)))
            pieces.append(len(edges) - 1)
            prev = next_vertex
            next_vertex += 1
        edges.append((prev, v, Fraction(1)))
        pieces.append(len(edges) - 1)
        piece_map.append(pieces)
    return Graph(next_vertex, edges), piece_map


def solve_sp_pipeline(instance, config=None, embed_trials=8):
    """Embed into random spanning trees, solve the requirement cut on each
    tree (sigma_hat = g there), lift the best cut back to the graph.

    Unit costs embed directly; positive integer costs go through subdivision.
    Returns (CutSolution, SpInstance).
    """
    from .rounding import EMBED_STREAM, RoundingConfig, repair_cut, solve_requirement_cut

    require_valid(instance)
    config = config or RoundingConfig()
    if embed_trials < 1:
        raise InputError(f"embed_trials must be >= 1, got {embed_trials}")

    g = instance.graph
    sp = find_sp_terminals(g)
    if sp is None:
        raise InputError("graph is not two-terminal series-parallel")

    unit = all(cost == 1 for _, _, _, cost in g.edges)
    if unit:
        unit_sp, piece_map = sp, [[eid] for eid in range(g.m)]
    else:
        unit_graph, piece_map = subdivide_integer_costs(g)
        unit_sp = find_sp_terminals(unit_graph)
        if unit_sp is None:
            raise InputError("subdivided graph failed series-parallel recognition")

    best = None
    for t in range(embed_trials):
        tree = construct_tree(unit_sp, kernels.derive_seed(config.master_seed,
                                                           EMBED_STREAM, t))
        # an original edge survives iff every one of its pieces is in the tree
        kept = [eid for eid, pieces in enumerate(piece_map)
                if all(p in tree for p in pieces)]
        tree_graph = Graph(g.n, [(g.edges[e][1], g.edges[e][2], g.edges[e][3])
                                 for e in kept])
        tree_instance = Instance(graph=tree_graph, groups=instance.groups,
                                 requirements=instance.requirements)
        sub_config = RoundingConfig(
            c=config.c, trials=config.trials,
            master_seed=kernels.derive_seed(config.master_seed, EMBED_STREAM, t, 1),
            sigma_source="upper_bound")
        tree_solution, _, tree_lp = solve_requirement_cut(tree_instance, sub_config)
        cut = set(kept[e] for e in tree_solution.cut)
        candidate = make_cut_solution(instance, cut)
        if not candidate.feasible:
            scaled = tree_lp.metric.values  # pairs cover all original vertices
            order = {eid: float(min(2.0 * scaled[u, v], 1.0))
                     for eid, u, v, _ in g.edges}
            candidate = make_cut_solution(instance, repair_cut(instance, cut, order))
        if best is None or (candidate.cost_exact, t) < best[:2]:
            best = (candidate.cost_exact, t, candidate)
    return best[2], sp
