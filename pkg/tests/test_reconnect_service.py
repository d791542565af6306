"""
Tests for bad edges, surcharges and the reconnection LP.
"""
from fractions import Fraction

import pytest

from stpath.models.reconnect import BadEdgeIndex
from stpath.services.errors import InputError
from stpath.services.reconnect_service import (
    bad_edges, bad_edges_basic_only, check_bad_edge_lonely_mass, check_kh_condition, check_residual_cover,
    check_subset_condition, components_of, doubled_mst, modified_costs, solve_reconnection_lp, surcharge, surcharge_bound
)
from stpath.services.join_service import build_yf
from tests.fixtures import edges

F = Fraction

LONELY_COSTS = {
    (0, 1): F(1), (1, 2): F(2), (2, 4): F(3), (4, 5): F(4), (5, 6): F(5), (6, 7): F(6)
}


class TestBadEdges:
    """Test cases for bad_edges."""

    def test_bad_edges_of_group_zero_tree(self, fractional_xstar, fractional_layers, hand_layered):
        """Test B(S) collects support edges lying in two or more lonely cuts."""
        combination, _ = hand_layered
        index = bad_edges(combination[0], fractional_xstar, fractional_layers.chain)

        assert index.bad_edges == edges('03', '13', '25', '27', '36')
        assert index.cuts_of_edge[(0, 3)] == frozenset({0, 1, 2})

    def test_residuals(self, fractional_xstar, fractional_layers, hand_layered):
        """Test r_Q = 1 - x*(Q minus B(S))."""
        combination, _ = hand_layered
        index = bad_edges(combination[0], fractional_xstar, fractional_layers.chain)

        assert index.residuals == {
            0: F(1, 3), 1: F(0), 2: F(2, 3), 3: F(1, 3), 4: F(0), 5: F(1, 3)
        }

    def test_group_one_trees_have_no_bad_edges(self, fractional_xstar, fractional_layers, hand_layered):
        """Test disjoint lonely cuts leave B(S) empty."""
        combination, _ = hand_layered
        for tree in combination.trees[1:]:
            assert bad_edges(tree, fractional_xstar, fractional_layers.chain).bad_edges == frozenset()


class TestReconnectionLp:
    """Test cases for the reconnection LP and its conditions."""

    def test_plan_is_feasible(self, fractional_xstar, fractional_layers, hand_layered):
        """Test the reconnection LP has a solution for the group-0 tree."""
        combination, _ = hand_layered
        index = bad_edges(combination[0], fractional_xstar, fractional_layers.chain)
        plan = solve_reconnection_lp(index, fractional_xstar)

        assert plan.feasible
        assert check_residual_cover(index, fractional_xstar, fractional_layers.chain, plan) == []
        for b in index.bad_edges:
            assert sum(plan.get(b, q) for q in index.cuts_of_edge[b]) <= 1

    def test_subset_condition(self, fractional_xstar, fractional_layers, hand_layered):
        """Test the subset conditions hold for every subset of lonely cuts."""
        combination, _ = hand_layered
        index = bad_edges(combination[0], fractional_xstar, fractional_layers.chain)
        report = check_subset_condition(index, fractional_xstar, fractional_layers.chain)

        assert report.holds
        assert report.complete
        assert report.subsets_checked == 2 ** 6 - 1

    def test_subset_condition_above_cap(self, fractional_xstar, fractional_layers, hand_layered):
        """Test only singletons and pairs are checked above the cap."""
        combination, _ = hand_layered
        index = bad_edges(combination[0], fractional_xstar, fractional_layers.chain)
        report = check_subset_condition(index, fractional_xstar, fractional_layers.chain, cap=3)

        assert not report.complete
        assert report.subsets_checked == 6 + 15

    def test_kh_condition_name(self, fractional_xstar, fractional_layers, hand_layered):
        """Test the operation is reachable under its interface name with the same report."""
        combination, _ = hand_layered
        index = bad_edges(combination[0], fractional_xstar, fractional_layers.chain)
        report = check_kh_condition(index, fractional_xstar, fractional_layers.chain)

        assert check_kh_condition is check_subset_condition
        assert report.holds
        assert report.subsets_checked == 2 ** 6 - 1

    def test_infeasible_without_bad_edges(self):
        """Test a positive residual with nothing to drop is infeasible."""
        index = BadEdgeIndex(lonely={0: (0, 1)}, cuts_of_edge={}, bad_edges=frozenset(), residuals={0: F(1, 3)})
        plan = solve_reconnection_lp(index, None)

        assert not plan.feasible
        assert plan.farkas == {0: F(1)}

    def test_bad_edges_carry_no_completion(self, fractional_xstar, fractional_layers, hand_layered):
        """Test completions of y_F vanish on bad edges and x^Q of non-lonely cuts avoids them."""
        combination, stats = hand_layered
        for position, tree in enumerate(combination):
            index = bad_edges(tree, fractional_xstar, fractional_layers.chain)
            y = build_yf(fractional_xstar, fractional_layers.chain, stats, tree, stats.paths[position], F(1, 16))

            assert bad_edges_basic_only(index, y)
            assert check_bad_edge_lonely_mass(index, tree, stats) == []


class TestSurcharge:
    """Test cases for surcharges and modified costs."""

    def test_max_and_leftmost_drop(self, fractional_layers, hand_layered):
        """Test the dropped lonely edge is the most expensive or the leftmost one."""
        combination, _ = hand_layered
        tree = combination[0]

        assert surcharge((0, 2), tree, fractional_layers.chain, LONELY_COSTS, 'max') == 2
        assert surcharge((0, 2), tree, fractional_layers.chain, LONELY_COSTS, 'leftmost') == 4

    def test_single_cut_has_no_surcharge(self, fractional_layers, hand_layered):
        """Test pairs crossing at most one lonely cut keep their cost."""
        combination, _ = hand_layered
        assert surcharge((0, 1), combination[0], fractional_layers.chain, LONELY_COSTS) == 0

    def test_unknown_drop_mode(self, fractional_layers, hand_layered):
        """Test an unknown drop mode raises InputError."""
        combination, _ = hand_layered
        with pytest.raises(InputError):
            surcharge((0, 2), combination[0], fractional_layers.chain, LONELY_COSTS, 'random')

    def test_modified_costs_on_unit_metric(self, fractional_metric, fractional_layers, hand_layered):
        """Test c'(0,7) adds twice five lonely edges of cost 1."""
        combination, _ = hand_layered
        costs = modified_costs(fractional_metric, combination[0], fractional_layers.chain)

        assert costs[(0, 7)] == fractional_metric.cost(0, 7) + 10
        assert costs[(3, 4)] == fractional_metric.cost(3, 4)

    def test_surcharge_bound(self, fractional_xstar, fractional_metric, fractional_layers, hand_layered):
        """Test the weighted surcharge on bad edges stays below sum (x*(Q) - 1) c(e_S^Q)."""
        combination, stats = hand_layered
        tree = combination[0]
        index = bad_edges(tree, fractional_xstar, fractional_layers.chain)
        y = build_yf(fractional_xstar, fractional_layers.chain, stats, tree, stats.paths[0], F(1, 16))
        lhs, rhs = surcharge_bound(index, tree, fractional_layers.chain, y, fractional_metric.costs)

        assert rhs == 4 * F(2, 3)
        assert lhs <= rhs


class TestDoubledMst:
    """Test cases for component reconnection."""

    def test_components_of(self):
        """Test components are ordered by smallest vertex."""
        assert components_of(4, [(2, 3)]) == [frozenset({0}), frozenset({1}), frozenset({2, 3})]

    def test_doubled_mst_on_a_line(self, instance_factory):
        """Test the cheapest representative pairs are doubled."""
        instance = instance_factory.line([0, 10, 3, 7])
        doubled = doubled_mst(instance, components_of(4, [(2, 3)]))
        assert doubled == ((0, 2), (0, 2), (1, 3), (1, 3))

    def test_connected_needs_nothing(self, triangle):
        """Test a single component needs no reconnection."""
        assert doubled_mst(triangle, [frozenset(range(3))]) == ()
