"""
Bad edges, modified costs, doubled-MST reconnection and the reconnection
LP with its subset conditions.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, List, Mapping, Sequence, Tuple

import networkx as nx

from stpath.models.combination import CombinationStats, TreeEntry
from stpath.models.cuts import NarrowCutChain
from stpath.models.edges import ONE, ZERO, Edge, crosses, vector_value
from stpath.models.instance import Instance
from stpath.models.joins import ParityCorrectionVector
from stpath.models.lp import LpModel, Relation, Sense
from stpath.models.reconnect import BadEdgeIndex, ReconnectionPlan
from stpath.models.solution import LpSolution
from stpath.services.errors import InputError
from stpath.services.ratlp import solve_lp

logger = logging.getLogger(__name__)

DROP_MODES = ('max', 'leftmost')
DEFAULT_ENUMERATION_CAP = 20


def lonely_cuts_crossed(pair: Edge, lonely: Mapping[int, Edge], chain: NarrowCutChain) -> Tuple[int, ...]:
    """Lonely cuts of a tree crossed by a vertex pair, in chain order."""
    return tuple(q for q in sorted(lonely) if crosses(pair, chain[q].side))


def bad_edges(tree: TreeEntry, xstar: LpSolution, chain: NarrowCutChain) -> BadEdgeIndex:
    """
    B(S): support edges in two or more lonely cuts of S, with the lonely cuts
    of every support edge and the residuals r_Q = 1 - x*(Q minus B(S)).
    """
    cuts_of_edge: Dict[Edge, FrozenSet[int]] = {}
    for e in xstar.x:
        crossed = lonely_cuts_crossed(e, tree.lonely, chain)
        if crossed:
            cuts_of_edge[e] = frozenset(crossed)
    bad = frozenset(e for e, cuts in cuts_of_edge.items() if len(cuts) >= 2)
    residuals = {
        q: ONE - vector_value(xstar.x, chain[q].edges - bad)
        for q in sorted(tree.lonely)
    }
    return BadEdgeIndex(lonely=dict(tree.lonely), cuts_of_edge=cuts_of_edge, bad_edges=bad, residuals=residuals)


def surcharge(pair: Edge, tree: TreeEntry, chain: NarrowCutChain, costs: Mapping[Edge, Fraction],
              drop: str = 'max') -> Fraction:
    """
    Reconnection surcharge of a pair crossing two or more lonely cuts:
    twice the lonely-edge costs of those cuts except the dropped one (the
    most expensive, or the leftmost).
    """
    crossed = lonely_cuts_crossed(pair, tree.lonely, chain)
    if len(crossed) < 2:
        return ZERO
    doubled = [2 * costs[tree.lonely[q]] for q in crossed]
    if drop == 'max':
        return sum(doubled, ZERO) - max(doubled)
    if drop == 'leftmost':
        return sum(doubled, ZERO) - doubled[0]
    raise InputError(f"Drop mode must be one of: {', '.join(DROP_MODES)}")


def modified_costs(instance: Instance, tree: TreeEntry, chain: NarrowCutChain,
                   drop: str = 'max') -> Dict[Edge, Fraction]:
    """c' on every vertex pair: c plus the surcharge for pairs in two or more lonely cuts."""
    return {
        pair: instance.costs[pair] + surcharge(pair, tree, chain, instance.costs, drop)
        for pair in instance.pairs()
    }


def components_of(n: int, edges: Iterable[Edge]) -> List[FrozenSet[int]]:
    """Connected components of (V, edges), ordered by smallest vertex."""
    graph = nx.MultiGraph()
    graph.add_nodes_from(range(n))
    graph.add_edges_from(edges)
    return sorted((frozenset(c) for c in nx.connected_components(graph)), key=min)


def doubled_mst(instance: Instance, components: Sequence[FrozenSet[int]]) -> Tuple[Edge, ...]:
    """
    Two copies of each edge of a minimum spanning tree of the contracted
    complete graph; the cheapest pair represents each component pair.
    """
    if len(components) <= 1:
        return ()
    contracted = nx.Graph()
    contracted.add_nodes_from(range(len(components)))
    for a, b in combinations(range(len(components)), 2):
        cheapest = min(
            ((instance.cost(u, v), min(u, v), max(u, v)) for u in components[a] for v in components[b])
        )
        contracted.add_edge(a, b, weight=cheapest[0], pair=(cheapest[1], cheapest[2]))
    chosen = sorted(
        data['pair'] for _, _, data in nx.minimum_spanning_edges(contracted, algorithm='kruskal', data=True)
    )
    return tuple(e for pair in chosen for e in (pair, pair))


def solve_reconnection_lp(index: BadEdgeIndex, xstar: LpSolution) -> ReconnectionPlan:
    """
    A point of x(b,Q) >= 0, sum_Q x(b,Q) <= 1 per bad edge,
    sum_b x*(b) x(b,Q) >= r_Q per lonely cut, found by phase-1 simplex.
    """
    variables = [
        (b, q) for b in sorted(index.bad_edges) for q in sorted(index.cuts_of_edge[b])
    ]
    if not variables:
        failing = [row for row, q in enumerate(index.lonely_cuts) if index.residuals[q] > 0]
        if failing:
            return ReconnectionPlan(status='infeasible', farkas={failing[0]: ONE})
        return ReconnectionPlan()

    model = LpModel(variables=list(variables))
    for b in sorted(index.bad_edges):
        model.add_constraint({(b, q): ONE for q in index.cuts_of_edge[b]}, Relation.LE, ONE, name=f"drop{list(b)}")
    for q in index.lonely_cuts:
        model.add_constraint(
            {(b, q): xstar.x[b] for b in index.bad_edges if q in index.cuts_of_edge[b]},
            Relation.GE,
            index.residuals[q],
            name=f"cover[{q}]"
        )
    model.set_objective({}, Sense.MIN)
    outcome = solve_lp(model)
    if not outcome.is_optimal:
        logger.error("Reconnection LP infeasible; Farkas multipliers %s", outcome.farkas)
        return ReconnectionPlan(status='infeasible', farkas=outcome.farkas)
    return ReconnectionPlan(values={key: value for key, value in outcome.values.items() if value})


def check_residual_cover(index: BadEdgeIndex, xstar: LpSolution, chain: NarrowCutChain,
                         plan: ReconnectionPlan) -> List[int]:
    """Lonely cuts where sum_b (x*(b)/2)(1 - x(b,Q)) exceeds (x*(Q) - 1)/2."""
    failing = []
    for q in index.lonely_cuts:
        lhs = sum(
            (xstar.x[b] / 2 * (ONE - plan.get(b, q)) for b in index.bad_edges if b in chain[q].edges),
            ZERO
        )
        if lhs > (chain[q].size - ONE) / 2:
            failing.append(q)
    return failing


@dataclass
class SubsetReport:
    """Outcome of the subset enumeration over lonely cuts."""
    subsets_checked: int = 0
    complete: bool = True
    failures: List[Tuple[str, Tuple[int, ...]]] = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return not self.failures


def check_subset_condition(index: BadEdgeIndex, xstar: LpSolution, chain: NarrowCutChain,
                           cap: int = DEFAULT_ENUMERATION_CAP) -> SubsetReport:
    """
    For every nonempty subset Q' of lonely cuts:
    sum r_Q <= x*(union of Q & B(S)) and x*(union of Q) >= |Q'|.

    Above the cap only singletons and pairs are enumerated and the report is
    marked incomplete. Also exported as check_kh_condition.
    """
    cuts = index.lonely_cuts
    report = SubsetReport(complete=len(cuts) <= cap)
    sizes = range(1, len(cuts) + 1) if report.complete else range(1, min(2, len(cuts)) + 1)
    for size in sizes:
        for subset in combinations(cuts, size):
            report.subsets_checked += 1
            union = frozenset().union(*(chain[q].edges for q in subset))
            covered = vector_value(xstar.x, union & index.bad_edges)
            if sum((index.residuals[q] for q in subset), ZERO) > covered:
                report.failures.append(('residual', subset))
            if vector_value(xstar.x, union) < len(subset):
                report.failures.append(('union', subset))
    if not report.complete:
        logger.warning("%d lonely cuts exceed the enumeration cap; checked singletons and pairs only", len(cuts))
    return report


# Operation name used by callers of the original interface.
check_kh_condition = check_subset_condition


def check_bad_edge_lonely_mass(index: BadEdgeIndex, tree: TreeEntry, stats: CombinationStats) -> List[int]:
    """Narrow cuts Q not lonely in S with x^Q(B(S)) != 0."""
    return [
        q for q, vector in sorted(stats.x_q.items())
        if q not in tree.lonely and vector_value(vector, index.bad_edges) != 0
    ]


def bad_edges_basic_only(index: BadEdgeIndex, y: ParityCorrectionVector) -> bool:
    """Completion parts of y vanish on every bad edge."""
    return all(
        not y.empty_completion.get(b) and not y.even_completion.get(b)
        for b in index.bad_edges
    )


def surcharge_bound(index: BadEdgeIndex, tree: TreeEntry, chain: NarrowCutChain, y: ParityCorrectionVector,
                    costs: Mapping[Edge, Fraction]) -> Tuple[Fraction, Fraction]:
    """
    (sum over bad b of y(b) times its max-drop surcharge,
     sum over lonely Q of (x*(Q) - 1) c(e_S^Q)).
    """
    lhs = sum(
        (y.y.get(b, ZERO) * surcharge(b, tree, chain, costs, 'max') for b in sorted(index.bad_edges)),
        ZERO
    )
    rhs = sum(((chain[q].size - ONE) * costs[e] for q, e in sorted(tree.lonely.items())), ZERO)
    return lhs, rhs

