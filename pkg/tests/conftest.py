import random

import pytest

from reqcut import Graph, Instance
from reqcut.gen import gen_bounded_fes, gen_setcover_star, gen_short_cycles


def make_instance(n, edges, groups, requirements):
    return Instance(graph=Graph(n, edges),
                    groups=tuple(frozenset(s) for s in groups),
                    requirements=tuple(requirements))


@pytest.fixture
def triangle():
    """Unit triangle, one group of all three vertices, r = 2."""
    return make_instance(3, [(0, 1, 1), (1, 2, 1), (0, 2, 1)], [{0, 1, 2}], [2])


@pytest.fixture
def triangle_r3():
    return make_instance(3, [(0, 1, 1), (1, 2, 1), (0, 2, 1)], [{0, 1, 2}], [3])


@pytest.fixture
def single_edge():
    return make_instance(2, [(0, 1, 7)], [{0, 1}], [2])


@pytest.fixture
def star3():
    """Star whose min requirement cut is a 3-set set cover (all leaves)."""
    return gen_setcover_star(3, [[0], [1], [2], [0, 1, 2]])


def random_connected_instance(rng, n_max=8, m_extra_max=4, cost_max=10,
                              group_count=None):
    """Random connected graph (tree + extra edges, no duplicate pairs) with
    random groups. Drives the exact-versus-LP and equivalence sweeps."""
    n = rng.randint(3, n_max)
    edges = []
    seen = set()
    for v in range(1, n):
        u = rng.randrange(v)
        edges.append((u, v, rng.randint(1, cost_max)))
        seen.add((u, v))
    extras = rng.randint(0, m_extra_max)
    for _ in range(extras * 3):
        if len(edges) - (n - 1) >= extras:
            break
        u, v = rng.randrange(n), rng.randrange(n)
        if u == v:
            continue
        key = (min(u, v), max(u, v))
        if key in seen:
            continue
        seen.add(key)
        edges.append((key[0], key[1], rng.randint(1, cost_max)))
    groups, reqs = [], []
    for _ in range(group_count if group_count is not None else rng.randint(1, 3)):
        size = rng.randint(2, min(4, n))
        members = frozenset(rng.sample(range(n), size))
        groups.append(members)
        reqs.append(rng.randint(2, len(members)))
    return make_instance(n, edges, groups, reqs)


def _handmade_suite():
    rows = [
        make_instance(3, [(0, 1, 1), (1, 2, 1), (0, 2, 1)], [{0, 1, 2}], [2]),
        make_instance(3, [(0, 1, 1), (1, 2, 1), (0, 2, 1)], [{0, 1, 2}], [3]),
        make_instance(3, [(0, 1, 3), (1, 2, 4), (0, 2, 5)], [{0, 1, 2}], [2]),
        make_instance(2, [(0, 1, 7)], [{0, 1}], [2]),
        make_instance(4, [(0, 1, 1), (1, 2, 1), (2, 3, 1), (0, 3, 1)],
                      [{0, 1, 2, 3}], [4]),
        make_instance(4, [(0, 1, 1), (1, 2, 1), (2, 3, 1), (0, 3, 1)],
                      [{0, 2}], [2]),
        gen_setcover_star(2, [[0], [1], [0, 1]]),
        gen_setcover_star(4, [[0, 1], [1, 2], [2, 3], [3, 0]]),
        gen_short_cycles(2, 4),
        gen_short_cycles(3, 3),
    ]
    return rows


def build_oracle_suite(min_size=100):
    """Deterministic pool of small instances (m <= 16) whose exact optimum is
    affordable. Handcrafted shapes, seeded generator output, random mixes."""
    suite = _handmade_suite()
    for seed in range(20):
        suite.append(gen_bounded_fes(n=5 + seed % 4, k=seed % 3, seed=seed))
    # a few rows near the edge budget so the sweeps see non-toy sizes
    suite.append(gen_short_cycles(4, 4))
    suite.append(gen_short_cycles(2, 5))
    suite.append(gen_bounded_fes(10, 3, seed=77))
    suite.append(gen_bounded_fes(12, 4, seed=78))
    rng = random.Random(20260814)
    while len(suite) < min_size:
        inst = random_connected_instance(rng, n_max=7, m_extra_max=3)
        if inst.graph.m <= 16:
            suite.append(inst)
    return suite


@pytest.fixture(scope="session")
def oracle_suite():
    return build_oracle_suite()
