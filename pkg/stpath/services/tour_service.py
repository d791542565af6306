"""
{s,t}-tour construction: forest-based tours with reconnection,
Christofides-type tours, shortcutting and the per-tree work item of the
pipeline.
"""
import logging
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import networkx as nx

from stpath.models.combination import CombinationStats, TreeCombination, TreeEntry
from stpath.models.cuts import LayerStructure, NarrowCutChain
from stpath.models.edges import ZERO, Edge, dot
from stpath.models.instance import Instance
from stpath.models.joins import Join, ParityCorrectionVector
from stpath.models.reconnect import BadEdgeIndex, ReconnectionPlan
from stpath.models.solution import LpSolution
from stpath.models.tour import StTour
from stpath.services.errors import InternalError, ParityError
from stpath.services.join_service import (
    DEFAULT_MATCHING_CAP, build_alternating_vector, build_yf, check_tjoin_polyhedron, min_tjoin, odd_vertices
)
from stpath.services.reconnect_service import (
    DEFAULT_ENUMERATION_CAP, SubsetReport, bad_edges, bad_edges_basic_only, check_bad_edge_lonely_mass,
    check_residual_cover, check_subset_condition, components_of, doubled_mst, modified_costs, solve_reconnection_lp, surcharge_bound
)

logger = logging.getLogger(__name__)


def audit_st_tour(n: int, edges: Sequence[Edge], s: int, t: int):
    """
    Raises:
        ParityError: Unless the multigraph is connected with odd degrees exactly at s and t
    """
    odd = odd_vertices(edges).vertices
    if odd != {s, t}:
        raise ParityError(f"Odd-degree vertices {sorted(odd)} differ from {{s, t}} = {sorted({s, t})}")
    if len(components_of(n, edges)) != 1:
        raise ParityError("Multigraph is not connected")


def shortcut(edges: Sequence[Edge], s: int, t: int, instance: Instance) -> Tuple[int, ...]:
    """
    Hamiltonian s-t path from an Eulerian s-t walk (Hierholzer, lowest
    neighbour first) keeping first occurrences; t is kept for the end.

    Raises:
        ParityError: If the multigraph is not a connected {s,t}-tour
    """
    audit_st_tour(instance.n, edges, s, t)
    adjacency: Dict[int, Counter] = {v: Counter() for v in instance.vertices}
    for u, v in edges:
        adjacency[u][v] += 1
        adjacency[v][u] += 1

    stack, walk = [s], []
    while stack:
        v = stack[-1]
        neighbours = [u for u, count in adjacency[v].items() if count]
        if neighbours:
            u = min(neighbours)
            adjacency[v][u] -= 1
            adjacency[u][v] -= 1
            stack.append(u)
        else:
            walk.append(stack.pop())
    walk.reverse()
    if len(walk) != len(edges) + 1 or walk[-1] != t:
        raise ParityError("Eulerian walk does not use every edge from s to t")

    seen = set()
    path = []
    for v in walk:
        if v not in seen and v != t:
            seen.add(v)
            path.append(v)
    path.append(t)

    if instance.path_cost(path) > instance.path_cost(walk):
        raise InternalError("Shortcutting increased the cost")
    return tuple(path)


def make_tour(instance: Instance, edges: Iterable[Edge], kind: str, tree_index: Optional[int] = None) -> StTour:
    edges = tuple(sorted(edges))
    path = shortcut(edges, instance.s, instance.t, instance)
    return StTour(
        edges=edges,
        path=path,
        multigraph_cost=instance.cost_of(edges),
        path_cost=instance.path_cost(path),
        kind=kind,
        tree_index=tree_index
    )


def christofides_tour(instance: Instance, tree_edges: Iterable[Edge], tree_index: Optional[int] = None,
                      matching_cap: int = DEFAULT_MATCHING_CAP) -> Tuple[StTour, Join]:
    """S + J_S with J_S a minimum T_S xor {s,t}-join under c."""
    tree_edges = tuple(sorted(tree_edges))
    parity = odd_vertices(tree_edges).symmetric_difference({instance.s, instance.t})
    join = min_tjoin(instance, parity, matching_cap=matching_cap)
    return make_tour(instance, tree_edges + join.edges, 'christofides', tree_index), join


def forest_tour(instance: Instance, tree: TreeEntry, chain: NarrowCutChain, drop: str = 'max',
                tree_index: Optional[int] = None, matching_cap: int = DEFAULT_MATCHING_CAP
                ) -> Tuple[StTour, Join, Tuple[Edge, ...], Dict[Edge, Fraction]]:
    """
    F + J*_F + 2D: J*_F is a minimum T_F xor {s,t}-join under the modified
    costs, 2D a doubled MST over the components of F + J*_F.

    Returns:
        (tour, J*_F, 2D, c')
    """
    forest = tuple(sorted(tree.forest))
    parity = odd_vertices(forest).symmetric_difference({instance.s, instance.t})
    costs = modified_costs(instance, tree, chain, drop)
    join = min_tjoin(instance, parity, costs, matching_cap)
    doubled = doubled_mst(instance, components_of(instance.n, forest + join.edges))
    tour = make_tour(instance, forest + join.edges + doubled, 'forest', tree_index)
    return tour, join, doubled, costs


def hoogeveen_baseline(instance: Instance, matching_cap: int = DEFAULT_MATCHING_CAP) -> StTour:
    """Minimum spanning tree plus a minimum parity-fixing join."""
    graph = nx.Graph()
    for u, v in instance.pairs():
        graph.add_edge(u, v, weight=instance.costs[(u, v)])
    mst = sorted(
        (min(u, v), max(u, v)) for u, v in nx.minimum_spanning_edges(graph, algorithm='kruskal', data=False)
    )
    tour, _ = christofides_tour(instance, mst, matching_cap=matching_cap)
    return StTour(tour.edges, tour.path, tour.multigraph_cost, tour.path_cost, 'baseline')


@dataclass(frozen=True)
class PipelineContext:
    """Immutable state shared by every per-tree work item."""
    instance: Instance
    xstar: LpSolution
    chain: NarrowCutChain
    layers: Optional[LayerStructure]
    combination: TreeCombination
    stats: CombinationStats
    gamma: Fraction
    matching_cap: int = DEFAULT_MATCHING_CAP
    enumeration_cap: int = DEFAULT_ENUMERATION_CAP


@dataclass(frozen=True)
class TreeRun:
    """Everything the ledger needs from one tree."""
    index: int
    tree: TreeEntry
    path: FrozenSet[Edge]
    forest_tour: StTour
    forest_join: Join
    doubled: Tuple[Edge, ...]
    tree_tour: StTour
    tree_join: Join
    y: ParityCorrectionVector
    odd_cut: Optional[Tuple[FrozenSet[int], Fraction]]
    y_cost: Fraction
    y_modified_cost: Fraction
    join_modified_cost: Fraction
    bad: BadEdgeIndex
    plan: ReconnectionPlan
    subsets: SubsetReport
    residual_cover_failures: Tuple[int, ...]
    lonely_mass_failures: Tuple[int, ...]
    basic_only: bool
    surcharge: Tuple[Fraction, Fraction]
    forest_cost: Fraction
    doubled_cost: Fraction


def run_tree(context: PipelineContext, index: int, drop: str = 'max') -> TreeRun:
    """Build P_1(S), P_2(S), y_F and the reconnection artifacts of tree ``index``."""
    instance, xstar, chain, stats = context.instance, context.xstar, context.chain, context.stats
    tree = context.combination[index]
    path = stats.paths[index]

    tour, join, doubled, costs = forest_tour(instance, tree, chain, drop, index, context.matching_cap)
    tree_tour, tree_join = christofides_tour(instance, tree.edges, index, context.matching_cap)

    y = build_yf(xstar, chain, stats, tree, path, context.gamma)
    parity = odd_vertices(tree.forest).symmetric_difference({instance.s, instance.t})
    odd_cut = check_tjoin_polyhedron(y.y, parity, instance.n)

    index_bad = bad_edges(tree, xstar, chain)
    plan = solve_reconnection_lp(index_bad, xstar)
    subsets = check_subset_condition(index_bad, xstar, chain, context.enumeration_cap)
    cover_failures = check_residual_cover(index_bad, xstar, chain, plan) if plan.feasible else list(index_bad.lonely_cuts)

    run = TreeRun(
        index=index,
        tree=tree,
        path=path,
        forest_tour=tour,
        forest_join=join,
        doubled=doubled,
        tree_tour=tree_tour,
        tree_join=tree_join,
        y=y,
        odd_cut=odd_cut,
        y_cost=dot(y.y, instance.costs),
        y_modified_cost=dot(y.y, costs),
        join_modified_cost=sum((costs[e] for e in join.edges), ZERO),
        bad=index_bad,
        plan=plan,
        subsets=subsets,
        residual_cover_failures=tuple(cover_failures),
        lonely_mass_failures=tuple(check_bad_edge_lonely_mass(index_bad, tree, stats)),
        basic_only=bad_edges_basic_only(index_bad, y),
        surcharge=surcharge_bound(index_bad, tree, chain, y, instance.costs),
        forest_cost=instance.cost_of(tree.forest),
        doubled_cost=instance.cost_of(doubled)
    )
    logger.debug("Tree %d: P1 %s, P2 %s", index, tour.multigraph_cost, tree_tour.multigraph_cost)
    return run


@dataclass(frozen=True)
class AlternatingRun:
    """One deletion branch of one tree: lonely edges removed from odd- or even-numbered cuts only."""
    index: int
    parity_class: int
    forest_cost: Fraction
    tour: StTour
    join: Join
    doubled: Tuple[Edge, ...]
    y_cost: Fraction
    odd_cut: Optional[Tuple[FrozenSet[int], Fraction]]


def run_alternating(context: PipelineContext, index: int, parity_class: int) -> AlternatingRun:
    """
    Forest tour deleting only lonely edges of narrow cuts whose 1-based
    chain position has the given parity; the join stays inside the support.
    """
    instance, xstar, chain, stats = context.instance, context.xstar, context.chain, context.stats
    tree = context.combination[index]
    deleted = frozenset(e for q, e in tree.lonely.items() if (q + 1) % 2 == parity_class)
    forest = tuple(sorted(tree.edges - deleted))
    parity = odd_vertices(forest).symmetric_difference({instance.s, instance.t})
    join = min_tjoin(instance, parity, matching_cap=context.matching_cap, edges=xstar.x)
    doubled = doubled_mst(instance, components_of(instance.n, forest + join.edges))
    y = build_alternating_vector(xstar, chain, stats, frozenset(forest))
    return AlternatingRun(
        index=index,
        parity_class=parity_class,
        forest_cost=instance.cost_of(forest),
        tour=make_tour(instance, forest + join.edges + doubled, 'forest', index),
        join=join,
        doubled=doubled,
        y_cost=dot(y.y, instance.costs),
        odd_cut=check_tjoin_polyhedron(y.y, parity, instance.n)
    )


def tree_cost_bound(instance: Instance, tree_edges: Iterable[Edge], path: FrozenSet[Edge]) -> Fraction:
    """c(S) + c(S minus S(s,t)): the off-path part of S is itself a valid join."""
    tree_edges = frozenset(tree_edges)
    return instance.cost_of(tree_edges) + instance.cost_of(tree_edges - path)


def best_tour(runs: List[TreeRun]) -> StTour:
    """Cheapest shortcut path among all P_1 and P_2; ties keep the first (tree order, P_1 first)."""
    best = None
    for run in runs:
        for tour in (run.forest_tour, run.tree_tour):
            if best is None or tour.path_cost < best.path_cost:
                best = tour
    if best is None:
        raise InternalError("No tree produced a tour")
    return best
