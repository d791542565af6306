"""
Test fixtures and factories for consistent test data generation.

This module provides reusable instances, fractional LP solutions and tree
families so every test module works from the same data.
"""
from fractions import Fraction
from itertools import combinations
from typing import Dict, Iterable, List, Tuple

import pytest

from stpath.models.combination import TreeCombination, TreeEntry
from stpath.models.edges import edge_key
from stpath.models.instance import Instance
from stpath.models.solution import LpSolution
from stpath.services.cut_service import build_layers, find_narrow_cuts
from stpath.services.instance_service import InstanceService, metric_closure
from stpath.services.treedecomp_service import combination_stats, lonely_by_equality

F = Fraction

# Eight-vertex fractional solution: s = 0, t = 7, support of 12 edges with
# narrow cuts {0}, {0,1}, {0,1,2}, {0,..,4}, {0,..,5} and V - {7}.
FRACTIONAL_N = 8
FRACTIONAL_X = {
    (0, 1): F(2, 3), (4, 5): F(2, 3), (6, 7): F(2, 3),
    (0, 3): F(1, 3), (1, 3): F(1, 3), (2, 5): F(1, 3),
    (2, 7): F(1, 3), (3, 6): F(1, 3), (2, 4): F(1, 3),
    (1, 2): F(1), (5, 6): F(1), (3, 4): F(1),
}
FRACTIONAL_SIDES = [
    frozenset({0}),
    frozenset({0, 1}),
    frozenset({0, 1, 2}),
    frozenset({0, 1, 2, 3, 4}),
    frozenset({0, 1, 2, 3, 4, 5}),
    frozenset(range(7)),
]
FRACTIONAL_SIZES = [F(1), F(5, 3), F(5, 3), F(5, 3), F(5, 3), F(1)]


def edges(*pairs: str) -> frozenset:
    """Edge set from two-digit strings such as '01', '67'."""
    return frozenset(edge_key(int(p[0]), int(p[1])) for p in pairs)


# Trees meeting every narrow cut once (group of the largest layer) and a
# family of trees that are not layered.
LAYERED_TREES = [
    edges('01', '12', '24', '34', '45', '56', '67'),
    edges('12', '34', '56', '67', '03', '25', '36'),
    edges('01', '12', '34', '45', '56', '13', '27'),
]
NON_LAYERED_TREES = [
    edges('01', '12', '34', '45', '56', '67', '25'),
    edges('12', '24', '34', '45', '56', '67', '03'),
    edges('01', '12', '34', '56', '13', '27', '36'),
]


class InstanceFactory:
    """Factory for creating instance test data."""

    @staticmethod
    def uniform(n: int, cost=1, s: int = 0, t: int = 1, name: str = 'uniform') -> Instance:
        """Instance with every pair at the same cost."""
        costs = {(u, v): F(cost) for u, v in combinations(range(n), 2)}
        return Instance(n=n, s=s, t=t, costs=costs, name=name)

    @staticmethod
    def from_support(n: int, support: Iterable[Tuple[int, int]], s: int, t: int,
                     weights: Dict[Tuple[int, int], Fraction] = None, name: str = 'support') -> Instance:
        """Shortest-path metric of a weighted support graph (unit weights by default)."""
        weights = weights or {}
        raw = {edge_key(u, v): F(weights.get(edge_key(u, v), 1)) for u, v in support}
        return Instance(n=n, s=s, t=t, costs=metric_closure(n, raw), name=name)

    @staticmethod
    def line(positions: List[int], s: int = 0, t: int = 1, name: str = 'line') -> Instance:
        """Points on a line at the given integer positions."""
        n = len(positions)
        costs = {(u, v): F(abs(positions[u] - positions[v])) for u, v in combinations(range(n), 2)}
        return Instance(n=n, s=s, t=t, costs=costs, name=name)

    @staticmethod
    def build_instance_data(**kwargs) -> dict:
        """JSON instance payload with default values."""
        defaults = {
            'name': 'triangle',
            'n': 3,
            's': 0,
            't': 1,
            'costs': [[0, 1, '2'], [0, 2, '1'], [1, 2, '1']]
        }
        defaults.update(kwargs)
        return defaults


def fractional_solution() -> LpSolution:
    return LpSolution(n=FRACTIONAL_N, s=0, t=7, x=dict(FRACTIONAL_X))


def fractional_instance() -> Instance:
    return InstanceFactory.from_support(FRACTIONAL_N, FRACTIONAL_X, 0, 7, name='fractional')


def swap_positions(rng, n: int, taken: Iterable[int] = ()) -> List[int]:
    """
    Nonempty random set of positions in [1, n-3], pairwise at least three
    apart and avoiding ``taken``. Swapping order[i] with order[i+1] at each
    position keeps s and t at the ends.
    """
    taken = set(taken)
    candidates = [i for i in range(1, n - 2) if i not in taken]
    rng.shuffle(candidates)
    positions: List[int] = []
    for i in candidates:
        if all(abs(i - j) >= 3 for j in positions):
            positions.append(i)
    return sorted(positions[:rng.randint(1, len(positions))])


def swapped(order: List[int], positions: Iterable[int]) -> List[int]:
    order = list(order)
    for i in positions:
        order[i], order[i + 1] = order[i + 1], order[i]
    return order


def path_mixture(n: int, paths: Iterable[Tuple[Fraction, List[int]]]) -> LpSolution:
    """Convex combination of Hamiltonian s-t paths given as (weight, vertex order)."""
    paths = list(paths)
    x: Dict[Tuple[int, int], Fraction] = {}
    for weight, order in paths:
        for u, v in zip(order, order[1:]):
            x[edge_key(u, v)] = x.get(edge_key(u, v), F(0)) + weight
    first = paths[0][1]
    return LpSolution(n=n, s=first[0], t=first[-1], x=x)


@pytest.fixture
def instance_factory():
    """Provide the instance factory."""
    return InstanceFactory


@pytest.fixture
def instance_service():
    return InstanceService()


@pytest.fixture
def fractional_xstar():
    """The eight-vertex fractional solution."""
    return fractional_solution()


@pytest.fixture
def fractional_metric():
    """Unit-weight shortest-path metric on the support of the fractional solution."""
    return fractional_instance()


@pytest.fixture
def triangle():
    """Three vertices with c(s,t) = 2 and a middle vertex at distance 1 from both."""
    return InstanceFactory.line([0, 2, 1], name='triangle')


@pytest.fixture
def collinear_instance(instance_service):
    """Seeded collinear instance: s and t at the extremes of a line."""
    return instance_service.gen_random_metric(6, 3, 'collinear')


@pytest.fixture
def euclidean_instance(instance_service):
    return instance_service.gen_random_metric(6, 1, 'euclidean')


@pytest.fixture
def graph_metric_instance(instance_service):
    return instance_service.gen_random_metric(6, 2, 'graph-metric')


def layered_combination(chain) -> TreeCombination:
    """x* = (S1 + S2 + S3)/3 with S1 in group 0 and S2, S3 in group 1."""
    groups = (0, 1, 1)
    trees = []
    for edges_, group in zip(LAYERED_TREES, groups):
        indices = range(len(chain)) if group == 0 else (0, len(chain) - 1)
        trees.append(TreeEntry(edges_, F(1, 3), group, lonely_by_equality(edges_, chain, indices)))
    return TreeCombination(tuple(trees), layered=True)


def non_layered_combination(chain) -> TreeCombination:
    """x* = (T1 + T2 + T3)/3, a combination that is not layered."""
    trees = tuple(TreeEntry(edges_, F(1, 3), 0, lonely_by_equality(edges_, chain)) for edges_ in NON_LAYERED_TREES)
    return TreeCombination(trees, layered=False)


@pytest.fixture
def fractional_layers(fractional_xstar):
    """Chain and layers of the eight-vertex solution."""
    return build_layers(find_narrow_cuts(fractional_xstar))


@pytest.fixture
def hand_layered(fractional_xstar, fractional_layers):
    """Hand-built layered combination with its statistics."""
    combination = layered_combination(fractional_layers.chain)
    return combination, combination_stats(fractional_xstar, fractional_layers.chain, combination)
