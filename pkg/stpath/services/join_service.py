"""
Exact minimum-cost T-joins, the fractional parity-correction vectors and
T-join polyhedron membership.
"""
import logging
from collections import Counter
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, Mapping, Optional, Tuple

import networkx as nx

from stpath.models.combination import CombinationStats, TreeEntry
from stpath.models.cuts import NarrowCutChain
from stpath.models.edges import ONE, TWO, ZERO, Edge, EdgeVector, add_into, crosses, edge_key, indicator
from stpath.models.instance import Instance
from stpath.models.joins import Join, ParityCorrectionVector, ParitySet
from stpath.models.solution import LpSolution
from stpath.services.errors import CapExceededError, InputError, InternalError
from stpath.services.flows import capacity_graph, fundamental_cuts, gomory_hu_tree

logger = logging.getLogger(__name__)

DEFAULT_MATCHING_CAP = 20


def odd_vertices(edges: Iterable[Edge]) -> ParitySet:
    """Vertices of odd degree in an edge multiset."""
    degree = Counter()
    for u, v in edges:
        degree[u] += 1
        degree[v] += 1
    return ParitySet(frozenset(v for v, d in degree.items() if d % 2))


def min_tjoin(instance: Instance, parity: ParitySet, costs: Optional[Mapping[Edge, Fraction]] = None,
              matching_cap: int = DEFAULT_MATCHING_CAP, edges: Optional[Iterable[Edge]] = None) -> Join:
    """
    Minimum-cost T-join.

    All-pairs shortest paths (Floyd-Warshall) under ``costs``, an exact
    minimum perfect matching on T by subset dynamic programming, path
    expansion and mod-2 reduction.

    Args:
        instance: Instance providing the vertex set
        parity: The set T
        costs: Nonnegative pair costs; defaults to the instance costs
        matching_cap: Largest |T| accepted
        edges: Restrict the join to these pairs (default: all pairs)

    Raises:
        CapExceededError: If |T| exceeds the matching cap
    """
    if len(parity) > matching_cap:
        raise CapExceededError(f"|T| = {len(parity)} exceeds the matching cap {matching_cap}")
    costs = instance.costs if costs is None else costs
    if not len(parity):
        return Join(edges=(), cost=ZERO)

    graph = nx.Graph()
    graph.add_nodes_from(instance.vertices)
    for e in (instance.pairs() if edges is None else sorted(edges)):
        if costs[e] < 0:
            raise InputError(f"Negative join cost on {e}")
        graph.add_edge(*e, weight=costs[e])
    predecessors, distance = nx.floyd_warshall_predecessor_and_distance(graph, weight='weight')

    terminals = list(parity)
    m = len(terminals)
    best: Dict[int, Fraction] = {0: ZERO}
    choice: Dict[int, Tuple[int, int, int]] = {}
    for mask in range(1 << m):
        if mask not in best:
            continue
        i = next((b for b in range(m) if not mask >> b & 1), None)
        if i is None:
            continue
        for j in range(i + 1, m):
            if mask >> j & 1:
                continue
            length = distance[terminals[i]][terminals[j]]
            if length == float('inf'):
                raise InternalError(f"Terminals {terminals[i]} and {terminals[j]} are disconnected")
            merged = mask | (1 << i) | (1 << j)
            value = best[mask] + length
            if merged not in best or value < best[merged]:
                best[merged] = value
                choice[merged] = (mask, i, j)

    multiplicity = Counter()
    mask = (1 << m) - 1
    while mask:
        mask, i, j = choice[mask]
        path = nx.reconstruct_path(terminals[i], terminals[j], predecessors)
        for a, b in zip(path, path[1:]):
            multiplicity[edge_key(a, b)] += 1

    reduced = tuple(sorted(e for e, count in multiplicity.items() if count % 2))
    join = Join(edges=reduced, cost=sum((costs[e] for e in reduced), ZERO))
    if odd_vertices(reduced).vertices != parity.vertices:
        raise InternalError("Reduced join has the wrong odd-degree set")
    return join


def _threshold_coefficient(size: Fraction, gamma: Fraction) -> Fraction:
    """1 - x/2 - gamma, the completion weight of a cut of size x."""
    return ONE - size / 2 - gamma


def build_yf(xstar: LpSolution, chain: NarrowCutChain, stats: CombinationStats, tree: TreeEntry,
             path: FrozenSet[Edge], gamma: Fraction, forest: Optional[FrozenSet[Edge]] = None) -> ParityCorrectionVector:
    """
    y_F = x*/2 + gamma S(s,t) + empty-cut completions on lonely edges +
    even-cut completions scaled from x^Q, for cuts with x*(Q) <= 2 - 2 gamma.
    """
    forest = tree.forest if forest is None else forest
    basic = add_into({e: value / 2 for e, value in xstar.x.items()}, indicator(path), gamma)
    empty: EdgeVector = {}
    even: EdgeVector = {}
    for index, cut in enumerate(chain):
        if cut.size > TWO - 2 * gamma:
            continue
        weight = _threshold_coefficient(cut.size, gamma)
        crossing = len(forest & cut.edges)
        if index in tree.lonely and not crossing:
            add_into(empty, {tree.lonely[index]: ONE}, weight)
        elif crossing >= 2 and crossing % 2 == 0:
            add_into(even, stats.x_q[index], weight / (TWO - cut.size))

    total = add_into(add_into(dict(basic), empty), even)
    return ParityCorrectionVector(y=total, basic=basic, empty_completion=empty, even_completion=even)


def bomc_coefficient(size: Fraction, gamma: Fraction) -> Fraction:
    """(1 - gamma - x/2)/(2 - x): even-cut weight of x^Q without deletion."""
    return (ONE - gamma - size / 2) / (TWO - size)


def build_tree_parity_vector(xstar: LpSolution, chain: NarrowCutChain, stats: CombinationStats,
                             tree_edges: FrozenSet[Edge], path: FrozenSet[Edge],
                             gamma: Fraction = Fraction(1, 8)) -> ParityCorrectionVector:
    """
    Parity vector for the whole tree S (no deletion): x*/2 + gamma S(s,t)
    plus the even-cut weight times x^Q for every narrow cut met an even
    number of times with x*(Q) < 2 - 2 gamma.
    """
    basic = add_into({e: value / 2 for e, value in xstar.x.items()}, indicator(path), gamma)
    even: EdgeVector = {}
    for index, cut in enumerate(chain):
        if cut.size >= TWO - 2 * gamma:
            continue
        if len(tree_edges & cut.edges) % 2 == 0:
            add_into(even, stats.x_q[index], bomc_coefficient(cut.size, gamma))
    return ParityCorrectionVector(y=add_into(dict(basic), even), basic=basic, even_completion=even)


def build_alternating_vector(xstar: LpSolution, chain: NarrowCutChain, stats: CombinationStats,
                             forest: FrozenSet[Edge]) -> ParityCorrectionVector:
    """x*/2 plus x^Q/2 for every narrow cut met an even number of times by the forest."""
    basic = {e: value / 2 for e, value in xstar.x.items()}
    even: EdgeVector = {}
    for index, cut in enumerate(chain):
        if len(forest & cut.edges) % 2 == 0:
            add_into(even, stats.x_q[index], Fraction(1, 2))
    return ParityCorrectionVector(y=add_into(dict(basic), even), basic=basic, even_completion=even)


def check_tjoin_polyhedron(y: Mapping[Edge, Fraction], parity: ParitySet,
                           n: int) -> Optional[Tuple[FrozenSet[int], Fraction]]:
    """
    Minimum T-odd cut of y via the fundamental cuts of a Gomory-Hu tree.

    Returns:
        (side, y(delta(side))) of the lightest odd cut when it weighs less
        than 1, otherwise None. Ties go to the lexicographically smallest side.
    """
    if not len(parity):
        return None
    graph = capacity_graph(n, y)
    best = None
    for _, side, _ in fundamental_cuts(gomory_hu_tree(graph)):
        if len(side & parity.vertices) % 2 == 0:
            continue
        weight = sum((value for e, value in y.items() if crosses(e, side)), ZERO)
        key = (weight, tuple(sorted(side)))
        if best is None or key < best[0]:
            best = (key, side)
    if best is None:
        raise InternalError("Gomory-Hu tree has no odd fundamental cut for a nonempty T")
    (weight, _), side = best
    if weight < ONE:
        logger.debug("Odd cut %s has weight %s", sorted(side), weight)
        return side, weight
    return None
