import random

import numpy as np
import pytest

from reqcut import (Metric, check_cut_equivalence, scale_metric,
                    separation_oracle, solve_relaxed_lp)
from reqcut.errors import InputError, ResourceError
from reqcut.exact import exact_solve
from reqcut.metriclp import (build_augmented, certify_lp_result,
                             lp_lower_bound_holds)

from conftest import make_instance, random_connected_instance


def metric_from(n, entries):
    vals = np.zeros((n, n))
    for (u, v), d in entries.items():
        vals[u, v] = vals[v, u] = d
    return Metric(vals)


class TestMetric:
    def test_check_accepts_valid(self):
        m = metric_from(3, {(0, 1): 0.5, (1, 2): 0.5, (0, 2): 1.0})
        assert m.check() == []

    def test_check_flags_violations(self):
        bad = metric_from(3, {(0, 1): 0.1, (1, 2): 0.1, (0, 2): 1.0})
        assert any("triangle" in p for p in bad.check())
        neg = metric_from(2, {(0, 1): -0.2})
        assert any("range" in p or "[0, 1]" in p for p in neg.check())


class TestAugmented:
    def test_clique_completion(self):
        # path 0-1-2-3 with group {0,3}: one synthetic zero-cost pair
        inst = make_instance(4, [(0, 1, 1), (1, 2, 1), (2, 3, 1)], [{0, 3}], [2])
        aug = build_augmented(inst, 0)
        kinds = [(e.u, e.v, e.synthetic) for e in aug.edges]
        assert (0, 3, True) in kinds
        assert sum(1 for k in kinds if k[2]) == 1
        assert len(aug.edges) == 4

    def test_adjacent_pairs_not_duplicated(self, triangle):
        aug = build_augmented(triangle, 0)
        assert all(not e.synthetic for e in aug.edges)
        assert len(aug.edges) == 3


class TestSeparation:
    def test_uniform_metric_satisfied(self, triangle):
        aug = build_augmented(triangle, 0)
        d = np.ones((3, 3)) - np.eye(3)
        assert separation_oracle(aug, d, 2) is None

    def test_zero_metric_violated(self, triangle):
        aug = build_augmented(triangle, 0)
        d = np.zeros((3, 3))
        hit = separation_oracle(aug, d, 2)
        assert hit is not None
        assert hit.length == 0.0
        assert len(hit.edges) == 2

    def test_mixed_metric_uses_cheap_pairs(self, triangle_r3):
        # d = 1 on pair {0,1}, 0 elsewhere: MST takes the two zero pairs
        aug = build_augmented(triangle_r3, 0)
        d = np.zeros((3, 3))
        d[0, 1] = d[1, 0] = 1.0
        hit = separation_oracle(aug, d, 3)
        assert hit is not None
        assert hit.length == 0.0
        used = {frozenset((aug.edges[a].u, aug.edges[a].v)) for a in hit.edges}
        assert used == {frozenset({1, 2}), frozenset({0, 2})}


class TestSolveLp:
    def test_single_edge(self, single_edge):
        res = solve_relaxed_lp(single_edge)
        assert res.objective == pytest.approx(7.0, abs=1e-6)
        assert res.metric.values[0, 1] == pytest.approx(1.0, abs=1e-6)

    def test_triangle_r3(self, triangle_r3):
        res = solve_relaxed_lp(triangle_r3)
        assert res.objective == pytest.approx(3.0, abs=1e-6)
        for u, v in ((0, 1), (1, 2), (0, 2)):
            assert res.metric.values[u, v] == pytest.approx(1.0, abs=1e-6)

    def test_triangle_r2(self, triangle):
        res = solve_relaxed_lp(triangle)
        assert res.objective == pytest.approx(1.5, abs=1e-6)

    def test_star_lower_bound(self, star3):
        res = solve_relaxed_lp(star3)
        assert res.objective == pytest.approx(1.0, abs=1e-6)

    def test_metric_is_certified(self, triangle):
        res = solve_relaxed_lp(triangle)
        assert certify_lp_result(triangle, res) == []

    def test_objective_below_exact_on_random_instances(self):
        rng = random.Random(11)
        for _ in range(15):
            inst = random_connected_instance(rng, n_max=6, m_extra_max=3)
            res = solve_relaxed_lp(inst)
            assert lp_lower_bound_holds(inst, res)
            opt = exact_solve(inst)
            assert res.objective <= float(opt.cost_exact) + 1e-6

    def test_invalid_instance_rejected(self):
        inst = make_instance(3, [(0, 1, 1)], [{0, 1}], [2])  # disconnected
        with pytest.raises(InputError):
            solve_relaxed_lp(inst)


class TestScale:
    def test_pointwise_formula(self):
        m = metric_from(3, {(0, 1): 0.2, (1, 2): 0.6, (0, 2): 0.5})
        s = scale_metric(m)
        assert s.values[0, 1] == pytest.approx(0.4)
        assert s.values[1, 2] == pytest.approx(1.0)
        assert s.values[0, 2] == pytest.approx(1.0)

    def test_zero_fixed_point(self):
        m = metric_from(2, {(0, 1): 0.0})
        assert scale_metric(m).values[0, 1] == 0.0

    def test_scaled_is_still_metric(self):
        rng = random.Random(12)
        for _ in range(20):
            inst = random_connected_instance(rng, n_max=6, m_extra_max=3)
            res = solve_relaxed_lp(inst)
            assert scale_metric(res.metric).check() == []

    def test_min_steiner_length_after_scaling_full_groups(self):
        # when a group covers every vertex, Steiner trees coincide with
        # spanning trees, and the scaled metric keeps them at length >= r - 1
        from reqcut.steiner import minimal_steiner_edge_sets
        from reqcut.graph import Graph
        rng = random.Random(13)
        for _ in range(12):
            base = random_connected_instance(rng, n_max=6, m_extra_max=2)
            n = base.graph.n
            inst = make_instance(
                n, [(u, v, c) for _, u, v, c in base.graph.edges],
                [set(range(n))], [rng.randint(2, n)])
            res = solve_relaxed_lp(inst)
            d = scale_metric(res.metric).values
            aug = build_augmented(inst, 0)
            aug_graph = Graph(n, [(e.u, e.v, 0) for e in aug.edges])
            best = min(
                sum(d[aug.edges[a].u, aug.edges[a].v] for a in tree)
                for tree in minimal_steiner_edge_sets(aug_graph, set(range(n))))
            assert best >= inst.requirements[0] - 1 - 1e-6

    def test_scaled_steiner_length_can_trail_requirement(self):
        # known gap: with constraints over spanning trees of the whole
        # augmented graph, attaching far-away non-terminal vertices absorbs
        # constraint mass, so the min Steiner tree over the terminals alone
        # may stay short even after doubling. Frozen counterexample.
        from reqcut.steiner import minimal_steiner_edge_sets
        from reqcut.graph import Graph
        inst = make_instance(5, [(0, 1, 3), (0, 2, 3), (0, 3, 3), (1, 4, 2),
                                 (1, 2, 1), (1, 3, 10)], [{0, 1, 4}], [3])
        res = solve_relaxed_lp(inst)
        assert certify_lp_result(inst, res) == []
        d = scale_metric(res.metric).values
        aug = build_augmented(inst, 0)
        aug_graph = Graph(5, [(e.u, e.v, 0) for e in aug.edges])
        best = min(sum(d[aug.edges[a].u, aug.edges[a].v] for a in tree)
                   for tree in minimal_steiner_edge_sets(aug_graph, {0, 1, 4}))
        assert best == pytest.approx(1.0, abs=1e-6)  # r - 1 would be 2


class TestEquivalence:
    def test_triangle_examples(self, triangle_r3):
        assert check_cut_equivalence(triangle_r3, 0, {0, 1, 2}) == (True, True)
        assert check_cut_equivalence(triangle_r3, 0, {0}) == (False, False)

    def test_path_with_detour_pair(self):
        inst = make_instance(4, [(0, 1, 1), (1, 2, 1), (2, 3, 1)], [{0, 3}], [2])
        assert check_cut_equivalence(inst, 0, {1}) == (True, True)

    def test_cycle_cut_once_not_separated(self):
        inst = make_instance(5, [(1, 4, 1), (0, 1, 1), (0, 2, 1), (3, 4, 1),
                                 (1, 2, 1)], [{0, 2}], [2])
        # removing {0,2,3} leaves 0 and 2 connected through vertex 1
        assert check_cut_equivalence(inst, 0, {0, 2, 3}) == (False, False)

    def test_bad_input(self, triangle):
        with pytest.raises(InputError):
            check_cut_equivalence(triangle, 5, set())
        with pytest.raises(InputError):
            check_cut_equivalence(triangle, 0, {99})

    def test_budget(self):
        g_edges = [(u, v, 1) for u in range(7) for v in range(u + 1, 7)]
        inst = make_instance(7, g_edges, [{0, 1, 2}], [2])
        with pytest.raises(ResourceError):
            check_cut_equivalence(inst, 0, {0})

    def test_random_pairs_agree(self):
        rng = random.Random(14)
        checked = 0
        while checked < 120:
            inst = random_connected_instance(rng, n_max=6, m_extra_max=3)
            if inst.graph.m + 6 > 20:
                continue
            cut = frozenset(e for e in range(inst.graph.m)
                            if rng.random() < 0.4)
            for gi in range(inst.num_groups):
                a, b = check_cut_equivalence(inst, gi, cut)
                assert a == b
                checked += 1
