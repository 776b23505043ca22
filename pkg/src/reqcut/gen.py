"""Seeded instance families.

Same seed, same instance, on any platform (random.Random is specified to be
stable). Each family states which quantity it pins down: stars pin the exact
optimum to a set cover, short cycle chains pin tau to the product of cycle
lengths, bounded-fes graphs pin the feedback edge number, sp-depth pins the
trace depth.
"""

import random

from .errors import InputError
from .graph import Graph, Instance, require_valid
from .spembed import PARALLEL, SERIES, parse_sp_expression


def gen_setcover_star(num_sets, memberships):
    """Star with one leaf per set; element j becomes the group
    {center} + {leaves of the sets containing j}, r = 2. Unit costs, so the
    optimal requirement cut is exactly a minimum set cover.
    """
    if num_sets < 1:
        raise InputError(f"num_sets must be >= 1, got {num_sets}")
    if not memberships:
        raise InputError("need at least one element")
    edges = [(0, 1 + s, 1) for s in range(num_sets)]
    groups = []
    for j, sets in enumerate(memberships):
        sets = sorted(set(int(s) for s in sets))
        if not sets:
            raise InputError(f"element {j} is in no set")
        if sets[0] < 0 or sets[-1] >= num_sets:
            raise InputError(f"element {j} references a set out of range")
        groups.append(tuple([0] + [1 + s for s in sets]))
    inst = Instance(graph=Graph(1 + num_sets, edges), groups=tuple(groups),
                    requirements=tuple(2 for _ in groups))
    require_valid(inst)
    return inst


def gen_short_cycles(num_cycles, cycle_len, groups_spec=None):
    """Chain of edge-disjoint cycles sharing single vertices, so
    tau = cycle_len ** num_cycles. groups_spec: list of (r, members);
    default one group over everything with r = 2. Unit costs."""
    if num_cycles < 1 or cycle_len < 3:
        raise InputError(
            f"need num_cycles >= 1 and cycle_len >= 3, got {num_cycles}, {cycle_len}")
    edges = []
    anchor = 0
    n = 1
    for _ in range(num_cycles):
        ring = [anchor] + list(range(n, n + cycle_len - 1))
        n += cycle_len - 1
        for i in range(cycle_len):
            edges.append((ring[i], ring[(i + 1) % cycle_len], 1))
        anchor = ring[-1]
    if groups_spec is None:
        groups_spec = [(2, tuple(range(n)))]
    groups = tuple(tuple(members) for _, members in groups_spec)
    reqs = tuple(r for r, _ in groups_spec)
    inst = Instance(graph=Graph(n, edges), groups=groups, requirements=reqs)
    require_valid(inst)
    return inst


def gen_bounded_fes(n, k, seed=0, num_groups=2):
    """Random spanning tree plus k random chords (feedback edge number k),
    integer costs 1..10, seeded random groups of size 2..4."""
    if n < 3:
        raise InputError(f"need n >= 3, got {n}")
    if k < 0:
        raise InputError(f"need k >= 0, got {k}")
    if num_groups < 1:
        raise InputError(f"need num_groups >= 1, got {num_groups}")
    rng = random.Random(seed)
    edges = []
    for v in range(1, n):
        edges.append((rng.randrange(v), v, rng.randint(1, 10)))
    for _ in range(k):
        u = rng.randrange(n)
        v = rng.randrange(n)
        while v == u:
            v = rng.randrange(n)
        edges.append((u, v, rng.randint(1, 10)))
    groups = []
    reqs = []
    for _ in range(num_groups):
        size = rng.randint(2, min(4, n))
        members = tuple(sorted(rng.sample(range(n), size)))
        groups.append(members)
        reqs.append(rng.randint(2, size))
    inst = Instance(graph=Graph(n, edges), groups=tuple(groups),
                    requirements=tuple(reqs))
    require_valid(inst)
    return inst


def _sp_expression(depth, fanout, path_len, rng):
    if depth == 0:
        return "edge(1)"
    # alternate kinds so the trace depth is exactly `depth`
    kind = SERIES if depth % 2 == 1 else PARALLEL
    width = path_len if kind == SERIES else fanout
    width = rng.randint(2, max(2, width))
    kids = ", ".join(_sp_expression(depth - 1, fanout, path_len, rng)
                     for _ in range(width))
    return f"{kind}({kids})"


def gen_sp_depth(depth, fanout=2, path_len=2, seed=0, num_groups=2):
    """Series-parallel instance of exactly this trace depth, unit costs.

    Groups are sampled from sub-block terminals (vertices where composition
    glues), r = 2 each. Returns (SpInstance, Instance).
    """
    if depth < 0:
        raise InputError(f"depth must be >= 0, got {depth}")
    if fanout < 2 or path_len < 2:
        raise InputError("fanout and path_len must be >= 2")
    if num_groups < 1:
        raise InputError(f"need num_groups >= 1, got {num_groups}")
    rng = random.Random(seed)
    sp = parse_sp_expression(_sp_expression(depth, fanout, path_len, rng))
    if sp.trace.depth != depth:
        raise InputError(f"generator built depth {sp.trace.depth}, wanted {depth}")

    pool = set()

    def walk(node):
        pool.add(node.terminals[0])
        pool.add(node.terminals[1])
        for c in node.children:
            walk(c)

    walk(sp.trace.root)
    pool = sorted(pool)
    groups = []
    for _ in range(num_groups):
        size = rng.randint(2, min(4, len(pool)))
        groups.append(tuple(sorted(rng.sample(pool, size))))
    inst = Instance(graph=sp.graph, groups=tuple(groups),
                    requirements=tuple(2 for _ in groups))
    require_valid(inst)
    return sp, inst
