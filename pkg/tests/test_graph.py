"""Core instance type, evaluation, and the sign-flip composition primitives."""

from __future__ import annotations

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from maxqp import (
    Assignment,
    ValidationError,
    WeightedGraph,
    brute_force,
    combine_disjoint,
    evaluate,
    evaluate_partial,
    extend_from_induced,
    induced_subgraph,
    load_graph,
    normalize_nonneg,
    solution,
    stats,
)
from maxqp.graph import degeneracy_order

from util import random_graph, sample_small


class TestConstruction:
    def test_rejects_self_loop(self):
        with pytest.raises(ValidationError):
            WeightedGraph(4, [(3, 3, 5.0)])

    def test_rejects_duplicate_edge(self):
        with pytest.raises(ValidationError):
            WeightedGraph(3, [(0, 1, 1.0), (1, 0, 2.0)])

    def test_rejects_zero_weight_and_nan(self):
        with pytest.raises(ValidationError):
            WeightedGraph(2, [(0, 1, 0.0)])
        with pytest.raises(ValidationError):
            WeightedGraph(2, [(0, 1, math.nan)])

    def test_rejects_out_of_range_vertex(self):
        with pytest.raises(ValidationError):
            WeightedGraph(2, [(0, 2, 1.0)])

    def test_unit_flag(self):
        assert WeightedGraph(2, [(0, 1, -1.0)]).unit
        assert not WeightedGraph(2, [(0, 1, 0.5)]).unit

    def test_edges_stored_canonically(self):
        G = WeightedGraph(3, [(2, 0, 1.0), (2, 1, -1.0)])
        assert G.edges == [(0, 2, 1.0), (1, 2, -1.0)]
        assert G.weight(2, 0) == 1.0
        assert G.has_edge(1, 2) and not G.has_edge(0, 1)


class TestLoadGraph:
    def test_symmetric_entries_merge_to_one_edge(self):
        G = load_graph(3, [(0, 1, 1.0), (1, 0, 1.0)])
        assert G.edges == [(0, 1, 1.0)]

    def test_opposite_entries_average_to_zero_and_drop(self):
        G = load_graph(3, [(0, 1, 1.0), (1, 0, -1.0)])
        assert G.m == 0

    def test_asymmetric_entries_average(self):
        G = load_graph(2, [(0, 1, 3.0), (1, 0, 1.0)])
        assert G.edges == [(0, 1, 2.0)]

    def test_self_loop_rejected(self):
        with pytest.raises(ValidationError):
            load_graph(4, [(3, 3, 5.0)])


class TestEvaluate:
    def test_single_positive_edge(self):
        G = WeightedGraph(2, [(0, 1, 1.0)])
        assert evaluate(G, [1, 1]) == 1.0

    def test_unit_triangle_all_plus(self):
        G = WeightedGraph(3, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)])
        assert evaluate(G, [1, 1, 1]) == 3.0

    def test_negative_four_cycle_alternating(self):
        # all-(-1) C4 with alternating signs: every edge contributes +1,
        # total 4 = 2 * (max cut 4) - (total weight 4)
        G = WeightedGraph(4, [(0, 1, -1.0), (1, 2, -1.0), (2, 3, -1.0), (0, 3, -1.0)])
        assert evaluate(G, [1, -1, 1, -1]) == 4.0

    def test_length_mismatch(self):
        with pytest.raises(ValidationError):
            evaluate(WeightedGraph(2, [(0, 1, 1.0)]), [1])

    @settings(max_examples=60, deadline=None)
    @given(seed=st.integers(0, 10**6))
    def test_sign_flip_symmetry(self, seed):
        G = sample_small(seed)
        rng_vals = [1 if (seed >> i) & 1 else -1 for i in range(G.n)]
        assert evaluate(G, rng_vals) == pytest.approx(
            evaluate(G, [-s for s in rng_vals]), abs=1e-9
        )

    @settings(max_examples=60, deadline=None)
    @given(seed=st.integers(0, 10**6), v=st.integers(0, 30))
    def test_single_flip_local_move_identity(self, seed, v):
        G = sample_small(seed)
        v %= G.n
        x = [1 if (seed >> i) & 1 else -1 for i in range(G.n)]
        before = evaluate(G, x)
        delta = 2.0 * sum(w * x[u] * x[v] for u, w in G.adjacency[v])
        x[v] = -x[v]
        assert evaluate(G, x) == pytest.approx(before - delta, abs=1e-9)


class TestAssignment:
    def test_entries_must_be_signs(self):
        with pytest.raises(ValidationError):
            Assignment((1, 0), 0.0)

    def test_solution_caches_value(self):
        G = WeightedGraph(2, [(0, 1, -2.0)])
        a = solution(G, [1, -1])
        assert a.value == 2.0


class TestNormalizeNonneg:
    def test_single_negative_edge_flips_second_vertex(self):
        G = WeightedGraph(2, [(0, 1, -1.0)])
        a = normalize_nonneg(G)
        assert a.values == (1, -1)
        assert a.value == 1.0

    def test_empty_graph(self):
        a = normalize_nonneg(WeightedGraph(3, []))
        assert a.value == 0.0

    def test_all_negative_clique_nonnegative(self):
        edges = [(u, v, -1.0) for u in range(6) for v in range(u + 1, 6)]
        assert normalize_nonneg(WeightedGraph(6, edges)).value >= 0.0

    @settings(max_examples=100, deadline=None)
    @given(seed=st.integers(0, 10**6))
    def test_value_always_nonnegative(self, seed):
        G = sample_small(seed)
        a = normalize_nonneg(G)
        assert a.value >= -1e-12
        assert a.value == pytest.approx(evaluate(G, a.values), abs=1e-9)


class TestCombineDisjoint:
    def test_no_cross_edges_adds_values(self):
        G = WeightedGraph(4, [(0, 1, 1.0), (2, 3, 1.0)])
        _, val = combine_disjoint(G, {0: 1, 1: 1}, {2: 1, 3: 1})
        assert val == 2.0

    def test_positive_cross_edge_kept_unflipped(self):
        G = WeightedGraph(4, [(0, 1, 1.0), (2, 3, 1.0), (1, 2, 1.0)])
        signs, val = combine_disjoint(G, {0: 1, 1: 1}, {2: 1, 3: 1})
        assert val == 3.0
        assert signs == {0: 1, 1: 1, 2: 1, 3: 1}

    def test_negative_cross_contribution_flips_first(self):
        G = WeightedGraph(4, [(0, 1, 1.0), (2, 3, 1.0), (1, 2, -1.0)])
        signs, val = combine_disjoint(G, {0: 1, 1: 1}, {2: 1, 3: 1})
        assert val == 3.0
        assert signs[0] == signs[1] == -1

    def test_overlap_rejected(self):
        G = WeightedGraph(2, [(0, 1, 1.0)])
        with pytest.raises(ValidationError):
            combine_disjoint(G, {0: 1}, {0: 1, 1: 1})

    @settings(max_examples=100, deadline=None)
    @given(seed=st.integers(0, 10**6))
    def test_never_loses_value_on_random_splits(self, seed):
        G = sample_small(seed)
        left = {v: 1 for v in range(G.n) if (seed >> v) & 1}
        right = {v: -1 if v % 2 else 1 for v in range(G.n) if v not in left}
        z1 = evaluate_partial(G, left)
        z2 = evaluate_partial(G, right)
        _, val = combine_disjoint(G, left, right)
        assert val >= z1 + z2 - 1e-9


class TestExtendFromInduced:
    def test_full_vertex_set_is_identity(self):
        G = WeightedGraph(3, [(0, 1, 1.0), (1, 2, -1.0)])
        a = extend_from_induced(G, {0: 1, 1: 1, 2: -1})
        assert a.values == (1, 1, -1)

    def test_path_completion_keeps_edge_value(self):
        G = WeightedGraph(3, [(0, 1, 1.0), (1, 2, 1.0)])
        a = extend_from_induced(G, {0: 1, 1: 1})
        assert a.value >= 1.0

    @settings(max_examples=100, deadline=None)
    @given(seed=st.integers(0, 10**6))
    def test_never_below_induced_value(self, seed):
        G = sample_small(seed)
        sub = {v: -1 if (seed >> v) & 2 else 1 for v in range(G.n) if (seed >> v) & 1}
        sub_val = evaluate_partial(G, sub)
        a = extend_from_induced(G, sub)
        assert a.value >= sub_val - 1e-9


class TestStats:
    def test_unit_triangle(self):
        G = WeightedGraph(3, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, -1.0)])
        st_ = stats(G)
        assert st_.max_degree == 2
        assert st_.degeneracy == 2
        assert st_.density == Fraction(1)
        assert st_.abs_weight == 3.0

    def test_star(self):
        G = WeightedGraph(6, [(0, i, 1.0) for i in range(1, 6)])
        st_ = stats(G)
        assert st_.max_degree == 5
        assert st_.degeneracy == 1
        assert st_.density == Fraction(5, 6)

    def test_grid_degeneracy_two(self):
        edges = []
        for r in range(4):
            for c in range(4):
                v = 4 * r + c
                if c < 3:
                    edges.append((v, v + 1, 1.0))
                if r < 3:
                    edges.append((v, v + 4, 1.0))
        d, order = degeneracy_order(WeightedGraph(16, edges))
        assert d == 2
        assert sorted(order) == list(range(16))

    def test_bounds_between_quantities(self):
        for seed in range(30):
            G = sample_small(seed)
            st_ = stats(G)
            assert st_.degeneracy <= st_.max_degree
            assert st_.density <= st_.max_degree


class TestOptimumBounds:
    def test_opt_nonnegative_and_below_abs_weight(self):
        for seed in range(40):
            G = sample_small(seed, max_n=10)
            opt = brute_force(G).value
            assert opt >= -1e-12
            assert opt <= stats(G).abs_weight + 1e-9


class TestInducedSubgraph:
    def test_relabeling_round_trip(self):
        G = WeightedGraph(5, [(0, 2, 1.0), (2, 4, -2.0), (1, 3, 1.0)])
        H, old_of = induced_subgraph(G, [0, 2, 4])
        assert old_of == [0, 2, 4]
        assert H.edges == [(0, 1, 1.0), (1, 2, -2.0)]
