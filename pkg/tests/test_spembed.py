"""Series-parallel recognition, expression files, random tree embeddings."""

import pytest

from reqcut import (
    InputError,
    ParseError,
    construct_tree,
    dump_sp_expression,
    estimate_distortion,
    find_sp_terminals,
    parse_sp_expression,
    recognize_sp,
    solve_sp_pipeline,
    stretch_bound,
    subdivide_integer_costs,
    tree_distances,
)
from reqcut.graph import Graph, Instance, make_cut_solution
from reqcut.rounding import RoundingConfig
from reqcut.spembed import EDGE, PARALLEL, SERIES, CompositionTrace, TraceNode

from conftest import make_instance

SQUARE = "P(S(edge(1), edge(1)), S(edge(1), edge(1)))"
TWO_VS_THREE = "P(S(edge(1), edge(1)), S(edge(1), edge(1), edge(1)))"
THREE_VS_THREE = "P(S(edge(1), edge(1), edge(1)), S(edge(1), edge(1), edge(1)))"


class TestExpressionFiles:
    def test_parse_square(self):
        sp = parse_sp_expression(SQUARE)
        assert sp.graph.n == 4
        assert sp.graph.m == 4
        assert (sp.x, sp.y) == (0, 1)
        assert sp.trace.depth == 2
        assert sorted(sp.trace.leaf_edge_ids) == [0, 1, 2, 3]
        assert sp.trace.check() == []

    def test_single_edge_depth_zero(self):
        sp = parse_sp_expression("edge(5)")
        assert sp.graph.n == 2
        assert sp.graph.cost(0) == 5
        assert sp.trace.depth == 0

    def test_path_depth_one(self):
        sp = parse_sp_expression("S(edge(1), edge(1), edge(1))")
        assert sp.graph.n == 4
        assert sp.trace.depth == 1
        assert sp.trace.root.kind == SERIES
        assert len(sp.trace.root.children) == 3

    def test_nested_same_kind_is_merged(self):
        # S inside S flattens, so the trace stays alternating
        sp = parse_sp_expression("S(S(edge(1), edge(1)), edge(1))")
        assert sp.trace.depth == 1
        assert len(sp.trace.root.children) == 3
        assert sp.trace.check() == []

    def test_comments_and_whitespace(self):
        text = """
        # a square, two parallel 2-paths
        P(
          S(edge(1), edge(1)),   # upper
          S(edge(1), edge(1))    # lower
        )
        """
        sp = parse_sp_expression(text)
        assert sp.graph.m == 4

    def test_fraction_costs(self):
        sp = parse_sp_expression("S(edge(1/2), edge(3))")
        assert sp.graph.cost(0).numerator == 1
        assert sp.graph.cost(0).denominator == 2
        assert sp.graph.cost(1) == 3

    def test_dump_round_trip(self):
        for text in (SQUARE, TWO_VS_THREE, "edge(7)", "S(edge(1/2), edge(3))"):
            sp = parse_sp_expression(text)
            dumped = dump_sp_expression(sp)
            again = parse_sp_expression(dumped)
            assert dump_sp_expression(again) == dumped
            assert again.graph.edges == sp.graph.edges
            assert again.trace == sp.trace

    @pytest.mark.parametrize("text,fragment", [
        ("", "empty"),
        ("   # only a comment\n", "empty"),
        ("S(edge(1))", "at least 2 children"),
        ("edge(x)", "bad edge cost"),
        ("edge(1/0)", "bad edge cost"),
        ("edge(-2)", "negative edge cost"),
        ("Q(edge(1), edge(1))", "expected S, P or edge"),
        ("S(edge(1), edge(1)) edge(2)", "trailing"),
        ("S(edge(1), edge(1)", "unexpected end"),
        ("edge 1)", "expected '('"),
    ])
    def test_parse_errors(self, text, fragment):
        with pytest.raises(ParseError) as info:
            parse_sp_expression(text)
        assert fragment in str(info.value)


class TestTraceCheck:
    def test_reports_underfull_and_nested_nodes(self):
        inner = TraceNode(SERIES, (0, 2),
                          children=(TraceNode(EDGE, (0, 2), edge_id=0),))
        root = TraceNode(SERIES, (0, 1),
                         children=(inner, TraceNode(EDGE, (2, 1), edge_id=0)))
        problems = CompositionTrace(root=root).check()
        assert any("1 children" in p for p in problems)
        assert any("child of its own kind" in p for p in problems)
        assert any("duplicate edge ids" in p for p in problems)

    def test_reversed_keeps_leaves_and_depth(self):
        sp = parse_sp_expression(TWO_VS_THREE)
        rev = CompositionTrace(root=sp.trace.root.reversed())
        assert rev.check() == []
        assert rev.depth == sp.trace.depth
        assert sorted(rev.leaf_edge_ids) == sorted(sp.trace.leaf_edge_ids)
        assert rev.root.terminals == (1, 0)


class TestRecognition:
    def test_triangle_between_adjacent_terminals(self):
        g = Graph(3, [(0, 1, 1), (0, 2, 1), (1, 2, 1)])
        trace = recognize_sp(g, 0, 1)
        assert trace is not None
        assert trace.root.kind == PARALLEL
        assert trace.depth == 2
        assert sorted(trace.leaf_edge_ids) == [0, 1, 2]
        assert trace.check() == []

    def test_square_both_orientations(self):
        sp = parse_sp_expression(SQUARE)
        fwd = recognize_sp(sp.graph, 0, 1)
        rev = recognize_sp(sp.graph, 1, 0)
        assert fwd is not None and rev is not None
        assert fwd.depth == rev.depth == 2
        assert rev.root.terminals == (1, 0)

    def test_path_with_interior_terminal_fails(self):
        g = Graph(3, [(0, 2, 1), (2, 1, 1)])
        assert recognize_sp(g, 0, 2) is None
        assert recognize_sp(g, 0, 1) is not None

    def test_k4_is_not_series_parallel(self):
        g = Graph(4, [(u, v, 1) for u in range(4) for v in range(u + 1, 4)])
        for x in range(4):
            for y in range(x + 1, 4):
                assert recognize_sp(g, x, y) is None

    def test_parallel_bundle_with_multi_edges(self):
        g = Graph(2, [(0, 1, 1), (0, 1, 1), (0, 1, 1)])
        trace = recognize_sp(g, 0, 1)
        assert trace.root.kind == PARALLEL
        assert trace.depth == 1
        assert len(trace.root.children) == 3

    def test_bad_terminals_rejected(self):
        g = Graph(2, [(0, 1, 1)])
        with pytest.raises(InputError):
            recognize_sp(g, 0, 0)
        with pytest.raises(InputError):
            recognize_sp(g, 0, 5)

    def test_find_sp_terminals_picks_first_pair(self):
        sp = parse_sp_expression(SQUARE)
        found = find_sp_terminals(sp.graph)
        assert (found.x, found.y) == (0, 1)
        k4 = Graph(4, [(u, v, 1) for u in range(4) for v in range(u + 1, 4)])
        assert find_sp_terminals(k4) is None


class TestConstructTree:
    def test_spanning_tree_properties(self):
        sp = parse_sp_expression(THREE_VS_THREE)
        g = sp.graph
        for seed in range(40):
            tree = construct_tree(sp, seed)
            assert len(tree) == g.n - 1
            labels = g.component_labels(set(range(g.m)) - set(tree))
            assert len(set(labels)) == 1

    def test_deterministic_per_seed(self):
        sp = parse_sp_expression(TWO_VS_THREE)
        assert construct_tree(sp, 9) == construct_tree(sp, 9)
        trees = {construct_tree(sp, s) for s in range(60)}
        # the 2-path is always kept, the 3-path loses one of its 3 edges
        assert len(trees) == 3
        for tree in trees:
            assert {0, 1} <= tree

    def test_unit_costs_required(self):
        sp = parse_sp_expression("S(edge(2), edge(1))")
        with pytest.raises(InputError):
            construct_tree(sp, 0)

    def test_tree_distances_on_known_tree(self):
        sp = parse_sp_expression(SQUARE)  # 0-2-1 and 0-3-1
        tree = frozenset({0, 1, 2})  # drop edge 3 = (3, 1)
        dist = tree_distances(sp.graph, tree, [(3, 1), (0, 1), (0, 3)])
        assert list(dist) == [3, 2, 1]


class TestDistortion:
    def test_kept_branch_is_exact(self):
        sp = parse_sp_expression(TWO_VS_THREE)
        report = estimate_distortion(sp, samples=400, seed=1)
        # edges 0 and 1 form the kept 2-path, never stretched
        for eid in (0, 1):
            mean, se = report[eid]
            assert mean == 1.0
            assert se == 0.0

    @pytest.mark.parametrize("text,eids,oracle", [
        # broken 3-path beside a 2-path: removed w.p. 1/3 at detour 4
        (TWO_VS_THREE, (2, 3, 4), (4 + 1 + 1) / 3),
        # broken 3-path beside a 3-path: detour 5
        (THREE_VS_THREE, (3, 4, 5), (5 + 1 + 1) / 3),
        # square: each broken 2-path edge detours at 3
        (SQUARE, (2, 3), (3 + 1) / 2),
    ])
    def test_broken_branch_means(self, text, eids, oracle):
        sp = parse_sp_expression(text)
        report = estimate_distortion(sp, samples=3000, seed=5)
        for eid in eids:
            mean, se = report[eid]
            assert se > 0
            assert abs(mean - oracle) <= 4 * se

    def test_means_stay_under_guarantee(self):
        for text in (SQUARE, TWO_VS_THREE, THREE_VS_THREE):
            sp = parse_sp_expression(text)
            bound = stretch_bound(sp.trace.depth)
            report = estimate_distortion(sp, samples=1500, seed=3)
            for mean, se in report.values():
                assert mean <= bound + 3 * se

    def test_sample_floor(self):
        sp = parse_sp_expression(SQUARE)
        with pytest.raises(InputError):
            estimate_distortion(sp, samples=99)

    def test_stretch_bound_values(self):
        assert stretch_bound(0) == 2.0
        assert stretch_bound(1) == 4.0
        assert stretch_bound(2) == 6.0
        assert stretch_bound(5) == 12.0


class TestSubdivision:
    def test_piece_map_and_structure(self):
        g = Graph(3, [(0, 1, 2), (1, 2, 1), (0, 2, 3)])
        unit, piece_map = subdivide_integer_costs(g)
        assert piece_map == [[0, 1], [2], [3, 4, 5]]
        assert unit.m == 6
        assert unit.n == 3 + 1 + 0 + 2
        assert all(cost == 1 for _, _, _, cost in unit.edges)
        # each chain really connects the original endpoints
        labels = unit.component_labels(set())
        assert len(set(labels)) == 1

    def test_rejects_fractional_cost(self):
        g = Graph(2, [(0, 1, "1/2")])
        with pytest.raises(InputError):
            subdivide_integer_costs(g)

    def test_rejects_zero_cost(self):
        g = Graph(2, [(0, 1, 0)])
        with pytest.raises(InputError):
            subdivide_integer_costs(g)


class TestPipeline:
    def square_instance(self):
        sp = parse_sp_expression(SQUARE)
        return Instance(graph=sp.graph, groups=[[0, 1]], requirements=[2])

    def test_square_solution(self):
        inst = self.square_instance()
        solution, sp = solve_sp_pipeline(inst, RoundingConfig(master_seed=7))
        assert solution.feasible
        assert solution.cost_exact == 2
        assert (sp.x, sp.y) == (0, 1)

    def test_deterministic(self):
        inst = self.square_instance()
        a, _ = solve_sp_pipeline(inst, RoundingConfig(master_seed=11))
        b, _ = solve_sp_pipeline(inst, RoundingConfig(master_seed=11))
        assert a.cut == b.cut
        assert a.cost_exact == b.cost_exact

    def test_integer_costs_go_through_subdivision(self):
        inst = make_instance(3, [(0, 2, 2), (2, 1, 1)], [[0, 1]], [2])
        solution, _ = solve_sp_pipeline(inst, RoundingConfig(master_seed=3))
        assert solution.feasible
        assert solution.cut == frozenset({1})
        assert solution.cost_exact == 1

    def test_non_sp_graph_rejected(self):
        k4 = make_instance(4, [(u, v, 1) for u in range(4)
                               for v in range(u + 1, 4)], [[0, 1]], [2])
        with pytest.raises(InputError):
            solve_sp_pipeline(k4)

    def test_embed_trials_floor(self):
        with pytest.raises(InputError):
            solve_sp_pipeline(self.square_instance(), embed_trials=0)

    def test_lifted_cut_is_checked_on_the_graph(self):
        inst = self.square_instance()
        solution, _ = solve_sp_pipeline(inst, RoundingConfig(master_seed=5))
        again = make_cut_solution(inst, solution.cut)
        assert again.feasible
        assert again.cost_exact == solution.cost_exact
