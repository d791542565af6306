"""
Layered convex combinations of spanning trees via capacitated matroid
partition over the layer matroids M_i, plus the statistics derived from a
combination (x^Q, p*, q*).
"""
import logging
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import lcm
from typing import Callable, Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple

import networkx as nx

from stpath.models.combination import CombinationStats, PartitionResult, TreeCombination, TreeEntry
from stpath.models.cuts import LayerStructure, NarrowCutChain
from stpath.models.edges import ONE, TWO, ZERO, Edge, EdgeVector, add_into, indicator
from stpath.models.solution import LpSolution
from stpath.services.errors import CapExceededError, InputError, InternalError, PartitionInfeasibleError

logger = logging.getLogger(__name__)

FREE = -1
DEFAULT_K_CAP = 2 ** 16
EXCHANGE_GROUND_CAP = 12


class LayerMatroid:
    """
    M_i: the direct sum of the graphic matroid of G_i = E minus the edges of
    Q_i and a partition matroid allowing one L_i edge per cut of Q_i. Edges
    lying in two or more cuts of Q_i are loops.

    With no cuts this is the graphic matroid of the ground set.
    """

    def __init__(self, n: int, ground: Iterable[Edge], cut_edges: Sequence[FrozenSet[Edge]] = (), layer: int = 0):
        self.n = n
        self.layer = layer
        self.ground = tuple(sorted(ground))
        owners: Dict[Edge, List[int]] = {}
        for index, edges in enumerate(cut_edges):
            for e in edges:
                owners.setdefault(e, []).append(index)
        self.cut_of: Dict[Edge, int] = {e: idx[0] for e, idx in owners.items() if len(idx) == 1}
        self.loops: FrozenSet[Edge] = frozenset(e for e, idx in owners.items() if len(idx) > 1)
        self.cut_count = len(cut_edges)

    @classmethod
    def for_layer(cls, xstar: LpSolution, layers: LayerStructure, layer: int) -> 'LayerMatroid':
        cut_edges = [layers.chain[index].edges for index in layers.families[layer]]
        return cls(xstar.n, xstar.x, cut_edges, layer)

    def is_graphic(self, e: Edge) -> bool:
        return e not in self.cut_of and e not in self.loops

    def rank(self, edges: Iterable[Edge]) -> int:
        """n - comp(X on G_i) + number of cuts met by X within L_i."""
        graph = nx.Graph()
        graph.add_nodes_from(range(self.n))
        met = set()
        for e in edges:
            if self.is_graphic(e):
                graph.add_edge(*e)
            elif e in self.cut_of:
                met.add(self.cut_of[e])
        return self.n - nx.number_connected_components(graph) + len(met)

    def full_rank(self) -> int:
        return self.rank(self.ground)


class _Slot:
    """Independent set of one target basis with its circuit oracle."""

    def __init__(self, matroid: LayerMatroid):
        self.matroid = matroid
        self.edges = set()
        self.forest = nx.Graph()
        self.forest.add_nodes_from(range(matroid.n))
        self.cut_owner: Dict[int, Edge] = {}

    def circuit(self, e: Edge) -> Optional[List[Edge]]:
        """None when edges + e is independent, else the circuit minus e (sorted)."""
        if e in self.matroid.cut_of:
            owner = self.cut_owner.get(self.matroid.cut_of[e])
            return None if owner is None else [owner]
        u, v = e
        if not nx.has_path(self.forest, u, v):
            return None
        path = nx.shortest_path(self.forest, u, v)
        return sorted((a, b) if a < b else (b, a) for a, b in zip(path, path[1:]))

    def add(self, e: Edge):
        self.edges.add(e)
        if e in self.matroid.cut_of:
            self.cut_owner[self.matroid.cut_of[e]] = e
        else:
            self.forest.add_edge(*e)

    def remove(self, e: Edge):
        self.edges.discard(e)
        if e in self.matroid.cut_of:
            del self.cut_owner[self.matroid.cut_of[e]]
        else:
            self.forest.remove_edge(*e)


def matroid_partition(matroids: Sequence[LayerMatroid], capacities: Mapping[Edge, int],
                      targets: Sequence[int]) -> PartitionResult:
    """
    Partition the capacitated ground multiset into targets[g] bases of
    matroids[g] for every g.

    Greedy fill, then shortest augmenting paths in the exchange graph whose
    nodes are (edge, slot) for placed copies and (edge, FREE) for unplaced
    ones. Ties: lowest edge first, then lowest slot.

    Returns:
        PartitionResult with bases per matroid, or the violating set
        (edges unreachable from free copies) when no augmenting path exists
    """
    slots: List[_Slot] = []
    owner: List[int] = []
    for g, (matroid, count) in enumerate(zip(matroids, targets)):
        for _ in range(count):
            slots.append(_Slot(matroid))
            owner.append(g)
    free = {e: int(c) for e, c in sorted(capacities.items()) if c > 0}
    ground = sorted(free)
    goal = sum(m.full_rank() * count for m, count in zip(matroids, targets))
    placed = 0

    for slot in slots:
        for e in ground:
            if free[e] and e not in slot.matroid.loops and e not in slot.edges and slot.circuit(e) is None:
                slot.add(e)
                free[e] -= 1
                placed += 1
    augmentations = 0

    while placed < goal:
        sources = [(e, FREE) for e in ground if free[e] > 0]
        if not sources:
            raise InternalError(f"Capacities exhausted with {goal - placed} basis elements missing")
        parent: Dict[Tuple[Edge, int], Optional[Tuple[Tuple[Edge, int], int]]] = {node: None for node in sources}
        queue = deque(sources)
        sink = None
        while queue and sink is None:
            node = queue.popleft()
            e, current = node
            for j, slot in enumerate(slots):
                if j == current or e in slot.edges or e in slot.matroid.loops:
                    continue
                circuit = slot.circuit(e)
                if circuit is None:
                    sink = (node, j)
                    break
                for z in circuit:
                    nxt = (z, j)
                    if nxt not in parent:
                        parent[nxt] = (node, j)
                        queue.append(nxt)

        if sink is None:
            reached = {e for e, _ in parent}
            violating = frozenset(e for e in ground if e not in reached)
            logger.error("Matroid partition infeasible; violating set %s", sorted(violating))
            return PartitionResult(violating_set=violating)

        # walk back: each node's edge enters the slot of the arc leaving it
        node, j = sink
        moves = [(node, j)]
        while parent[node] is not None:
            previous, slot_index = parent[node]
            moves.append((previous, slot_index))
            node = previous
        for (e, origin), target in moves:
            if origin != FREE:
                slots[origin].remove(e)
        for (e, origin), target in moves:
            slots[target].add(e)
        start_edge = moves[-1][0][0]
        free[start_edge] -= 1
        placed += 1
        augmentations += 1

    logger.debug("Matroid partition finished after %d augmentations", augmentations)
    bases = []
    index = 0
    for count in targets:
        bases.append(tuple(frozenset(slots[index + r].edges) for r in range(count)))
        index += count
    return PartitionResult(bases=tuple(bases))


def rank_oracle(layers: LayerStructure, layer: int, edges: Iterable[Edge], ground: Iterable[Edge] = None) -> int:
    """r_i(X) for layer ``layer`` (0-based)."""
    cut_edges = [layers.chain[index].edges for index in layers.families[layer]]
    if ground is None:
        ground = set().union(*(cut.edges for cut in layers.chain)) | set(edges)
    return LayerMatroid(layers.chain.n, ground, cut_edges, layer).rank(edges)


def tree_path(n: int, edges: Iterable[Edge], s: int, t: int) -> FrozenSet[Edge]:
    """Edges of the s-t path of a spanning tree."""
    graph = nx.Graph()
    graph.add_nodes_from(range(n))
    graph.add_edges_from(edges)
    path = nx.shortest_path(graph, s, t)
    return frozenset((a, b) if a < b else (b, a) for a, b in zip(path, path[1:]))


def _assert_spanning_tree(n: int, edges: FrozenSet[Edge]):
    graph = nx.Graph()
    graph.add_nodes_from(range(n))
    graph.add_edges_from(edges)
    if not nx.is_tree(graph):
        raise InternalError(f"Basis {sorted(edges)} is not a spanning tree")


def _rref_kernel(columns: List[Dict[object, Fraction]]) -> Optional[List[Fraction]]:
    """A nonzero kernel vector of the matrix with the given sparse columns, or None."""
    rows = sorted(set().union(*columns), key=repr) if columns else []
    matrix = [[col.get(r, ZERO) for col in columns] for r in rows]
    width = len(columns)
    pivots: List[int] = []
    row = 0
    for col in range(width):
        pivot = next((i for i in range(row, len(matrix)) if matrix[i][col] != 0), None)
        if pivot is None:
            # col is free: express it through the pivot columns
            vector = [ZERO] * width
            vector[col] = ONE
            for r, pivot_col in enumerate(pivots):
                vector[pivot_col] = -matrix[r][col]
            return vector
        matrix[row], matrix[pivot] = matrix[pivot], matrix[row]
        scale = matrix[row][col]
        matrix[row] = [value / scale for value in matrix[row]]
        for i in range(len(matrix)):
            if i != row and matrix[i][col] != 0:
                factor = matrix[i][col]
                matrix[i] = [a - factor * b for a, b in zip(matrix[i], matrix[row])]
        pivots.append(col)
        row += 1
    return None


def reduce_combination(trees: List[TreeEntry]) -> List[TreeEntry]:
    """
    Caratheodory reduction over vectors (S, group indicator): removes trees
    until the vectors are linearly independent, preserving the weighted sum
    of trees and the mass of every group.
    """
    trees = list(trees)
    while True:
        columns = []
        for tree in trees:
            column: Dict[object, Fraction] = {e: ONE for e in tree.edges}
            column[('group', tree.group)] = ONE
            columns.append(column)
        kernel = _rref_kernel(columns)
        if kernel is None:
            return trees
        if not any(mu > 0 for mu in kernel):
            kernel = [-mu for mu in kernel]
        theta = min(tree.coefficient / mu for tree, mu in zip(trees, kernel) if mu > 0)
        reduced = []
        for tree, mu in zip(trees, kernel):
            coefficient = tree.coefficient - theta * mu
            if coefficient > 0:
                reduced.append(TreeEntry(tree.edges, coefficient, tree.group, tree.lonely))
        trees = reduced


def lonely_by_equality(edges: FrozenSet[Edge], chain: NarrowCutChain,
                       indices: Optional[Iterable[int]] = None) -> Dict[int, Edge]:
    """Every narrow cut (optionally among ``indices``) meeting the tree in exactly one edge."""
    lonely = {}
    for index in (range(len(chain)) if indices is None else indices):
        crossing = edges & chain[index].edges
        if len(crossing) == 1:
            lonely[index] = next(iter(crossing))
    return lonely


def combination_stats(xstar: LpSolution, chain: NarrowCutChain, combination: TreeCombination) -> CombinationStats:
    """x^Q per narrow cut, p* (mean s-t path) and q* = x* - p*."""
    x_q: Dict[int, EdgeVector] = {index: {} for index in range(len(chain))}
    p_star: EdgeVector = {}
    paths = []
    for tree in combination:
        path = tree_path(xstar.n, tree.edges, xstar.s, xstar.t)
        paths.append(path)
        add_into(p_star, indicator(path), tree.coefficient)
        for index, e in tree.lonely.items():
            add_into(x_q[index], {e: ONE}, tree.coefficient)
    q_star = add_into(dict(xstar.x), p_star, -ONE)
    return CombinationStats(x_q=x_q, p_star=p_star, q_star=q_star, paths=tuple(paths))


def is_layered(combination: TreeCombination, chain: NarrowCutChain) -> Optional[Tuple[int, int, int]]:
    """
    First layeredness violation (tree, lonely cut Q, smaller-or-equal cut Q'
    that is not lonely), or None.
    """
    for position, tree in enumerate(combination):
        for q in sorted(tree.lonely):
            for other in range(len(chain)):
                if chain[other].size <= chain[q].size and other not in tree.lonely:
                    return (position, q, other)
    return None


@dataclass
class PackingReport:
    """Per layer: mass of groups 1..i and whether they pack bases of M_i under x*."""
    masses: List[Fraction] = field(default_factory=list)
    holds: bool = True
    failures: List[str] = field(default_factory=list)


class TreeDecompositionService:
    """Service class writing x* as convex combinations of spanning trees."""

    def __init__(self, k_cap: int = DEFAULT_K_CAP):
        self.k_cap = k_cap

    def _scale(self, xstar: LpSolution, zetas: Iterable[Fraction] = ()) -> int:
        scale = lcm(xstar.denominator, *(z.denominator for z in zetas))
        if scale > self.k_cap:
            raise CapExceededError(f"Scale K={scale} exceeds the configured cap {self.k_cap}")
        return scale

    def _partition(self, matroids, capacities, targets):
        result = matroid_partition(matroids, capacities, targets)
        if not result.feasible:
            raise PartitionInfeasibleError(result.violating_set)
        return result

    def decompose_layered(self, xstar: LpSolution, layers: LayerStructure) -> Tuple[TreeCombination, CombinationStats]:
        """
        Layered convex combination: K*zeta_i bases of M_i per layer, merged,
        reduced, with lonely edges S & L_i and lonely cuts Q_i.
        """
        scale = self._scale(xstar, layers.zetas)
        matroids = [LayerMatroid.for_layer(xstar, layers, i) for i in range(layers.k)]
        for matroid in matroids:
            if matroid.full_rank() != xstar.n - 1:
                raise InternalError(f"Layer matroid {matroid.layer} has rank {matroid.full_rank()}, not n-1")
        capacities = {e: int(value * scale) for e, value in xstar.x.items()}
        targets = [int(z * scale) for z in layers.zetas]
        result = self._partition(matroids, capacities, targets)

        trees: List[TreeEntry] = []
        for group, bases in enumerate(result.bases):
            counts: Dict[FrozenSet[Edge], int] = {}
            for basis in bases:
                _assert_spanning_tree(xstar.n, basis)
                counts[basis] = counts.get(basis, 0) + 1
            for basis, count in counts.items():
                lonely = {}
                for index in layers.families[group]:
                    crossing = basis & layers.chain[index].edges
                    if len(crossing) != 1:
                        raise InternalError(f"Group {group} tree meets narrow cut {index} in {len(crossing)} edges")
                    lonely[index] = next(iter(crossing))
                trees.append(TreeEntry(basis, Fraction(count, scale), group, lonely))

        trees = reduce_combination(trees)
        if len(trees) > len(xstar.x):
            logger.error("Reduced combination has %d trees on a support of %d edges", len(trees), len(xstar.x))
            raise InternalError(f"Reduced combination has {len(trees)} trees, more than the {len(xstar.x)} support edges")
        combination = TreeCombination(tuple(trees), layered=True)
        stats = combination_stats(xstar, layers.chain, combination)
        self.check_combination(xstar, layers.chain, combination, stats, layers)
        logger.info("Layered decomposition: %d trees in %d groups (K=%d)", len(trees), layers.k, scale)
        return combination, stats

    def decompose_generic(self, xstar: LpSolution, chain: NarrowCutChain) -> Tuple[TreeCombination, CombinationStats]:
        """
        Plain convex combination of spanning trees of the support; lonely
        cuts are those met once, trimmed tree by tree (splitting the
        boundary tree) so that x^Q(Q) = 2 - x*(Q).
        """
        scale = self._scale(xstar)
        matroid = LayerMatroid(xstar.n, xstar.x)
        capacities = {e: int(value * scale) for e, value in xstar.x.items()}
        result = self._partition([matroid], capacities, [scale])

        counts: Dict[FrozenSet[Edge], int] = {}
        for basis in result.bases[0]:
            _assert_spanning_tree(xstar.n, basis)
            counts[basis] = counts.get(basis, 0) + 1
        trees = [TreeEntry(basis, Fraction(count, scale), 0) for basis, count in counts.items()]
        trees = reduce_combination(trees)
        trees = [TreeEntry(t.edges, t.coefficient, 0, lonely_by_equality(t.edges, chain)) for t in trees]

        for index, cut in enumerate(chain):
            remaining = TWO - cut.size
            trimmed: List[TreeEntry] = []
            for tree in trees:
                if index not in tree.lonely:
                    trimmed.append(tree)
                    continue
                keep = min(remaining, tree.coefficient)
                remaining -= keep
                dropped = {q: e for q, e in tree.lonely.items() if q != index}
                if keep == tree.coefficient:
                    trimmed.append(tree)
                elif keep == 0:
                    trimmed.append(TreeEntry(tree.edges, tree.coefficient, 0, dropped))
                else:
                    trimmed.append(TreeEntry(tree.edges, keep, 0, dict(tree.lonely)))
                    trimmed.append(TreeEntry(tree.edges, tree.coefficient - keep, 0, dropped))
            if remaining:
                raise InternalError(f"Narrow cut {index} is lonely with mass below 2 - x*(Q)")
            trees = trimmed

        combination = TreeCombination(tuple(trees), layered=False)
        stats = combination_stats(xstar, chain, combination)
        self.check_combination(xstar, chain, combination, stats)
        logger.info("Generic decomposition: %d trees (K=%d)", len(trees), scale)
        return combination, stats

    def check_combination(self, xstar: LpSolution, chain: NarrowCutChain, combination: TreeCombination,
                          stats: CombinationStats, layers: Optional[LayerStructure] = None):
        """
        Assert reconstruction, lonely-edge accounting and (for layered
        combinations) the group structure.

        Raises:
            InternalError: On the first failing property
        """
        if sum((tree.coefficient for tree in combination), ZERO) != ONE:
            raise InternalError("Tree coefficients do not sum to 1")
        total: EdgeVector = {}
        for tree in combination:
            if not tree.edges <= set(xstar.x):
                raise InternalError("Tree uses an edge outside the support")
            _assert_spanning_tree(xstar.n, tree.edges)
            for q, e in tree.lonely.items():
                if tree.edges & chain[q].edges != {e}:
                    raise InternalError(f"Lonely edge {e} is not the unique tree edge of cut {q}")
            add_into(total, indicator(tree.edges), tree.coefficient)
        if total != dict(xstar.x):
            raise InternalError("Weighted trees do not reconstruct x*")

        summed: EdgeVector = {}
        for index, cut in enumerate(chain):
            mass = sum(stats.x_q[index].values(), ZERO)
            if mass != TWO - cut.size:
                raise InternalError(f"x^Q(Q) = {mass} differs from 2 - x*(Q) = {TWO - cut.size} for cut {index}")
            add_into(summed, stats.x_q[index])
        for e, value in summed.items():
            if value > stats.p_star.get(e, ZERO):
                raise InternalError(f"Sum of x^Q exceeds p* on {e}")
        if add_into(dict(stats.p_star), stats.q_star) != dict(xstar.x):
            raise InternalError("p* + q* differs from x*")

        if layers is None:
            return
        if is_layered(combination, chain) is not None:
            raise InternalError(f"Combination is not layered: {is_layered(combination, chain)}")
        cumulative = ZERO
        for group in range(layers.k):
            members = [tree for tree in combination if tree.group == group]
            cumulative += sum((tree.coefficient for tree in members), ZERO)
            if cumulative != sum(layers.zetas[:group + 1], ZERO):
                raise InternalError(f"Groups up to {group} carry mass {cumulative}")
            for tree in members:
                if set(tree.lonely) != set(layers.families[group]):
                    raise InternalError(f"Tree of group {group} has lonely cuts {sorted(tree.lonely)}")
                if tree.lonely_edges != tree.edges & layers.layer_edges[group]:
                    raise InternalError(f"Lonely edges of a group {group} tree differ from S & L_i")

    def verify_basis_packing(self, xstar: LpSolution, layers: LayerStructure,
                             combination: TreeCombination) -> PackingReport:
        """
        For each layer i the trees of groups 1..i are bases of M_i whose
        weighted sum stays below x* and whose mass is zeta_1 + ... + zeta_i.
        """
        report = PackingReport()
        for i in range(layers.k):
            matroid = LayerMatroid.for_layer(xstar, layers, i)
            members = [tree for tree in combination if tree.group <= i]
            mass = sum((tree.coefficient for tree in members), ZERO)
            report.masses.append(mass)
            if mass != sum(layers.zetas[:i + 1], ZERO):
                report.holds = False
                report.failures.append(f"layer {i}: mass {mass}")
            load: EdgeVector = {}
            for tree in members:
                if len(tree.edges) != xstar.n - 1 or matroid.rank(tree.edges) != xstar.n - 1:
                    report.holds = False
                    report.failures.append(f"layer {i}: a tree is not a basis")
                add_into(load, indicator(tree.edges), tree.coefficient)
            if any(value > xstar.x.get(e, ZERO) for e, value in load.items()):
                report.holds = False
                report.failures.append(f"layer {i}: packing exceeds x*")
        return report


def matroid_bases(ground: Sequence[Edge], rank: Callable[[Iterable[Edge]], int]) -> List[FrozenSet[Edge]]:
    """All bases of a small matroid given by its rank function."""
    if len(ground) > EXCHANGE_GROUND_CAP:
        raise CapExceededError(f"Ground set of {len(ground)} elements exceeds {EXCHANGE_GROUND_CAP}")
    full = rank(ground)
    return [frozenset(subset) for subset in combinations(sorted(ground), full) if rank(subset) == full]


@dataclass(frozen=True)
class ExchangeReport:
    """Outcome of the basis-exchange check on a cut-restricted basis family."""
    holds: bool
    restricted_count: int
    failure: Optional[Tuple[FrozenSet[Edge], FrozenSet[Edge], Edge]] = None


def verify_cut_restricted_matroid(ground: Sequence[Edge], bases: Iterable[FrozenSet[Edge]],
                                  cuts: Iterable[FrozenSet[Edge]]) -> ExchangeReport:
    """
    Check the basis-exchange axiom for B_C = {B : |B & C| <= 1 for all C}.

    Raises:
        CapExceededError: If the ground set has more than 12 elements
        InputError: If B_C is empty
    """
    if len(ground) > EXCHANGE_GROUND_CAP:
        raise CapExceededError(f"Ground set of {len(ground)} elements exceeds {EXCHANGE_GROUND_CAP}")
    cuts = [frozenset(c) for c in cuts]
    restricted = [frozenset(b) for b in bases if all(len(frozenset(b) & c) <= 1 for c in cuts)]
    if not restricted:
        raise InputError("No basis meets every cut at most once")
    members = set(restricted)
    for first in restricted:
        for second in restricted:
            for x in sorted(first - second):
                if not any((first - {x}) | {y} in members for y in second - first):
                    return ExchangeReport(False, len(restricted), (first, second, x))
    return ExchangeReport(True, len(restricted))
