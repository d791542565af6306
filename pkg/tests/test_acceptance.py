"""
Acceptance suites over seeded random instances.

The default run uses a short seed list; the full suites are marked slow
(deselect with -m "not slow").
"""
import random
from fractions import Fraction
from math import lcm

import pytest

from stpath.models.joins import ParitySet
from stpath.services.join_service import min_tjoin
from stpath.services.ratlp import solve_lp
from stpath.services.subtour_service import SubtourService, all_sides, build_subtour_model
from tests.fixtures import path_mixture, swap_positions, swapped

F = Fraction
GUARANTEE = F(26, 17)

QUICK_SEEDS = list(range(4))
FULL_SEEDS = list(range(200))
SMALL_FULL_SEEDS = [seed for seed in FULL_SEEDS if 5 + seed % 8 <= 8]
MIXTURE_SEEDS = [seed if seed < 3 else pytest.param(seed, marks=pytest.mark.slow) for seed in range(20)]


def suite_instance(instance_service, seed):
    """n in [5, 12], euclidean and graph-metric alternating."""
    kind = ('euclidean', 'graph-metric')[seed % 2]
    return instance_service.gen_random_metric(5 + seed % 8, seed, kind)


def assert_certified(service, instance):
    result = service.run_bomd(instance)
    certificate = result.certificate

    assert certificate.valid
    assert len(result.context.combination) <= len(result.context.xstar.x)
    assert certificate.tour.path_cost <= GUARANTEE * certificate.lp_cost
    assert certificate.tour.path_cost <= GUARANTEE * certificate.opt
    for run in result.runs:
        assert run.odd_cut is None
        assert run.plan.feasible
        assert run.lonely_mass_failures == ()
        if run.subsets.complete:
            assert run.subsets.holds
        lhs, rhs = run.surcharge
        assert lhs <= rhs
    return result


def random_tjoin_case(seed, instance_service):
    """Connected random graph with 12 to 18 edges and an even T."""
    rng = random.Random(seed)
    instance = instance_service.gen_random_metric(7, seed, 'graph-metric')
    order = list(instance.vertices)
    rng.shuffle(order)
    edges = {tuple(sorted((order[i], rng.choice(order[:i])))) for i in range(1, len(order))}
    others = [pair for pair in instance.pairs() if pair not in edges]
    edges |= set(rng.sample(others, rng.randint(12, 18) - len(edges)))
    size = rng.choice([2, 4, 6])
    terminals = frozenset(rng.sample(order, size))
    return instance, sorted(edges), ParitySet(terminals)


def enumerate_tjoin(instance, edges, parity):
    """Cheapest edge subset with odd vertices T, walking every subset in Gray-code order."""
    costs = [instance.costs[e] for e in edges]
    scale = lcm(*(c.denominator for c in costs))
    weights = [int(c * scale) for c in costs]
    masks = [(1 << u) | (1 << v) for u, v in edges]
    target = sum(1 << v for v in parity.vertices)

    chosen = odd = cost = 0
    best = 0 if target == 0 else None
    for step in range(1, 1 << len(edges)):
        bit = (step & -step).bit_length() - 1
        chosen ^= 1 << bit
        odd ^= masks[bit]
        cost += weights[bit] if chosen >> bit & 1 else -weights[bit]
        if odd == target and (best is None or cost < best):
            best = cost
    return F(best, scale)


def disjoint_cut_case(instance_service, seed):
    """
    x* = (P + P')/2 where P' swaps adjacent middle vertices of P at positions
    at least three apart. Prefixes of P at swapped positions have size 2;
    the others are narrow cuts of size 1 with pairwise disjoint edge sets.
    """
    rng = random.Random(seed)
    n = 8 + seed % 3
    instance = instance_service.gen_random_metric(n, seed, 'euclidean')
    middle = [v for v in instance.vertices if v not in (instance.s, instance.t)]
    rng.shuffle(middle)
    order = [instance.s] + middle + [instance.t]
    xstar = path_mixture(n, [(F(1, 2), order), (F(1, 2), swapped(order, swap_positions(rng, n)))])
    return instance, xstar


def two_cuts_per_edge_case(instance_service, seed):
    """
    x* = P/2 + P'/4 + P''/4 with P', P'' swapping at disjoint position
    sets. Every prefix of P is a narrow cut of size 1 or 3/2 and every
    support edge lies in at most two of them.
    """
    rng = random.Random(seed)
    n = 8 + seed % 3
    instance = instance_service.gen_random_metric(n, seed, 'euclidean')
    middle = [v for v in instance.vertices if v not in (instance.s, instance.t)]
    rng.shuffle(middle)
    order = [instance.s] + middle + [instance.t]
    first = swap_positions(rng, n)
    second = swap_positions(rng, n, taken=first)
    xstar = path_mixture(n, [
        (F(1, 2), order),
        (F(1, 4), swapped(order, first)),
        (F(1, 4), swapped(order, second)),
    ])
    return instance, xstar


def reconnection_rows(certificate):
    return [check for check in certificate.checks if check.name == 'alternating_reconnection']


class TestGuaranteeSuite:
    """Test cases for the per-instance guarantee and ledger on seeded suites."""

    @pytest.mark.parametrize('seed', QUICK_SEEDS)
    def test_quick_suite(self, bomd_service, instance_service, seed):
        """Test the certified ratio on a short seed list."""
        assert_certified(bomd_service, suite_instance(instance_service, seed))

    @pytest.mark.slow
    @pytest.mark.parametrize('seed', FULL_SEEDS)
    def test_full_suite(self, bomd_service, instance_service, seed):
        """Test the certified ratio on the full seed list."""
        assert_certified(bomd_service, suite_instance(instance_service, seed))

    @pytest.mark.parametrize('seed', range(3))
    def test_collinear_suite(self, bomd_service, instance_service, seed):
        """Test collinear instances take the disjoint and alternating certificates."""
        result = assert_certified(bomd_service, instance_service.gen_random_metric(5 + seed, seed, 'collinear'))
        names = {check.name for check in result.certificate.checks}
        assert {'small_forest_ledger', 'alternating_ledger'} <= names

    @pytest.mark.slow
    @pytest.mark.parametrize('seed', range(50))
    def test_without_deletion(self, bomd_service, instance_service, seed):
        """Test the 8/5 check without deletion."""
        instance = suite_instance(instance_service, seed)
        report = bomd_service.run_bomc_85(instance, bomd_service.solve_lp(instance))
        assert report.valid


class TestSpecialCaseFamilies:
    """Test cases for the 3/2 certificates on path mixtures with structured narrow cuts."""

    @pytest.mark.parametrize('seed', MIXTURE_SEEDS)
    def test_disjoint_narrow_cuts(self, bomd_service, instance_service, seed):
        """Test pairwise-disjoint narrow cuts need no reconnection and take the small-forest ledger."""
        instance, xstar = disjoint_cut_case(instance_service, seed)
        result = bomd_service.run_from_solution(instance, xstar)
        certificate = result.certificate

        assert any(value != 1 for value in xstar.x.values())
        assert certificate.valid
        assert certificate.flags.disjoint
        assert certificate.flags.two_per_edge
        assert all(cut.size == 1 for cut in result.context.chain)
        assert len(result.context.combination) <= len(xstar.x)
        for run in result.runs:
            assert run.bad.bad_edges == frozenset()
            assert run.plan.feasible
            assert run.plan.values == {}
        names = {check.name for check in certificate.checks}
        assert {'small_forest_ledger', 'small_forest_tours', 'alternating_ledger'} <= names
        rows = reconnection_rows(certificate)
        assert len(rows) == 2 * len(result.context.combination)
        assert all(row.lhs == 0 for row in rows)

    @pytest.mark.parametrize('seed', MIXTURE_SEEDS)
    def test_two_narrow_cuts_per_edge(self, bomd_service, instance_service, seed):
        """Test overlapping narrow cuts with at most two per edge take the alternating ledger."""
        instance, xstar = two_cuts_per_edge_case(instance_service, seed)
        result = bomd_service.run_from_solution(instance, xstar)
        certificate = result.certificate

        assert certificate.valid
        assert certificate.flags.two_per_edge
        assert not certificate.flags.disjoint
        assert certificate.flags.all_small
        assert len(result.context.chain) == instance.n - 1
        assert {cut.size for cut in result.context.chain} == {F(1), F(3, 2)}
        assert len(result.context.combination) <= len(xstar.x)
        names = {check.name for check in certificate.checks}
        assert {'alternating_ledger', 'alternating_tours', 'small_forest_ledger', 'small_intersection'} <= names
        rows = reconnection_rows(certificate)
        assert len(rows) == 2 * len(result.context.combination)
        assert all(row.lhs == 0 for row in rows)
        for check in certificate.checks:
            if check.name in ('alternating_ledger', 'small_forest_ledger'):
                assert check.lhs <= F(3, 2) * certificate.lp_cost


class TestOracles:
    """Test cases comparing fast routines with exhaustive ones."""

    @pytest.mark.parametrize('seed', range(3))
    def test_subtour_lp_matches_exhaustive_model(self, instance_service, seed):
        """Test the cutting-plane value equals the LP over every cut row."""
        instance = instance_service.gen_random_metric(5, seed, ('euclidean', 'graph-metric')[seed % 2])
        solution = SubtourService().solve_subtour_lp(instance)
        outcome = solve_lp(build_subtour_model(instance, all_sides(instance.n, instance.s)))

        assert outcome.is_optimal
        assert outcome.objective_value == solution.value

    @pytest.mark.slow
    @pytest.mark.parametrize('seed', SMALL_FULL_SEEDS)
    def test_subtour_lp_matches_exhaustive_model_on_suite(self, instance_service, seed):
        """Test the cutting-plane value on every suite instance with at most eight vertices."""
        instance = suite_instance(instance_service, seed)
        solution = SubtourService().solve_subtour_lp(instance)
        outcome = solve_lp(build_subtour_model(instance, all_sides(instance.n, instance.s)))
        assert outcome.objective_value == solution.value

    @pytest.mark.parametrize('seed', range(30))
    def test_tjoin_matches_enumeration(self, instance_service, seed):
        """Test min_tjoin on a sparse graph against every edge subset."""
        instance, edges, parity = random_tjoin_case(seed, instance_service)
        assert 12 <= len(edges) <= 18
        join = min_tjoin(instance, parity, edges=edges)

        assert join.cost == enumerate_tjoin(instance, edges, parity)
        assert set(join.edges) <= set(edges)
