import math
import random

import pytest

from reqcut import (Graph, count_spanning_trees_exact, enumerate_spanning_trees,
                    feedback_edge_number, log_spanning_trees)
from reqcut.errors import GraphStructureError
from reqcut.treecount import (_bareiss_det, laplacian_minor,
                              log_tree_count_upper_bound,
                              spanning_tree_count_is_one)

from conftest import random_connected_instance


def complete_graph(n):
    return Graph(n, [(u, v, 1) for u in range(n) for v in range(u + 1, n)])


def cycle_graph(n):
    return Graph(n, [(i, (i + 1) % n, 1) for i in range(n)])


class TestExactCount:
    def test_known_small_counts(self):
        # Cayley: tau(K_n) = n^(n-2)
        assert count_spanning_trees_exact(complete_graph(3)) == 3
        assert count_spanning_trees_exact(complete_graph(4)) == 16
        assert count_spanning_trees_exact(complete_graph(5)) == 125
        # a cycle has one tree per removable edge
        assert count_spanning_trees_exact(cycle_graph(5)) == 5
        # trees have exactly one
        assert count_spanning_trees_exact(Graph(4, [(0, 1, 1), (1, 2, 1), (1, 3, 1)])) == 1
        # trivial sizes
        assert count_spanning_trees_exact(Graph(1, [])) == 1

    def test_parallel_edges_multiply(self):
        g = Graph(2, [(0, 1, 1), (0, 1, 1), (0, 1, 1)])
        assert count_spanning_trees_exact(g) == 3

    def test_self_loops_ignored(self):
        g = Graph(3, [(0, 1, 1), (1, 2, 1), (0, 2, 1), (1, 1, 1)])
        assert count_spanning_trees_exact(g) == 3

    def test_disconnected_raises(self):
        g = Graph(4, [(0, 1, 1), (2, 3, 1)])
        with pytest.raises(GraphStructureError):
            count_spanning_trees_exact(g)
        with pytest.raises(GraphStructureError):
            log_spanning_trees(g)

    def test_matches_enumeration_on_random_graphs(self):
        rng = random.Random(5)
        for _ in range(30):
            g = random_connected_instance(rng, n_max=7, m_extra_max=4).graph
            count = count_spanning_trees_exact(g)
            assert count == len(enumerate_spanning_trees(g))

    def test_big_count_stays_exact(self):
        # K9 has 9^7 = 4782969 spanning trees, past float-safe naive products
        assert count_spanning_trees_exact(complete_graph(9)) == 9 ** 7


class TestLogCount:
    def test_matches_exact_route(self):
        rng = random.Random(6)
        for _ in range(20):
            g = random_connected_instance(rng, n_max=8, m_extra_max=5).graph
            exact = count_spanning_trees_exact(g)
            assert log_spanning_trees(g) == pytest.approx(math.log(exact), abs=1e-9)

    def test_upper_bound_holds(self):
        rng = random.Random(7)
        for _ in range(20):
            g = random_connected_instance(rng, n_max=8, m_extra_max=5).graph
            assert log_spanning_trees(g) <= log_tree_count_upper_bound(g) + 1e-9


class TestStructure:
    def test_feedback_edge_number(self):
        assert feedback_edge_number(cycle_graph(4)) == 1
        assert feedback_edge_number(complete_graph(4)) == 3
        assert feedback_edge_number(Graph(3, [(0, 1, 1), (1, 2, 1)])) == 0
        with pytest.raises(GraphStructureError):
            feedback_edge_number(Graph(3, [(0, 1, 1)]))

    def test_tree_predicate(self):
        assert spanning_tree_count_is_one(Graph(3, [(0, 1, 1), (1, 2, 1)]))
        assert not spanning_tree_count_is_one(cycle_graph(3))

    def test_laplacian_minor_shape(self):
        minor = laplacian_minor(cycle_graph(3))
        assert minor == [[2, -1], [-1, 2]]

    def test_bareiss_matches_textbook_cases(self):
        assert _bareiss_det([]) == 1
        assert _bareiss_det([[5]]) == 5
        assert _bareiss_det([[1, 2], [3, 4]]) == -2
        assert _bareiss_det([[0, 1], [1, 0]]) == -1  # needs the row swap
        assert _bareiss_det([[1, 2], [2, 4]]) == 0
