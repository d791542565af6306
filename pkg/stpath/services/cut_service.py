"""
Narrow cuts of x*, the chain they form, and the layer structure built on
their distinct sizes.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import AbstractSet, Dict, List, Tuple

import networkx as nx

from stpath.models.cuts import LayerStructure, NarrowCut, NarrowCutChain
from stpath.models.edges import ONE, TWO, ZERO, crosses
from stpath.models.solution import LpSolution
from stpath.services.errors import ChainViolationError, InputError, InternalError
from stpath.services.flows import capacity_graph, fundamental_cuts, gomory_hu_tree, set_min_cut

logger = logging.getLogger(__name__)


def make_cut(xstar: LpSolution, side: AbstractSet[int]) -> NarrowCut:
    side = frozenset(side)
    edges = frozenset(e for e in xstar.x if crosses(e, side))
    return NarrowCut(side=side, edges=edges, size=sum((xstar.x[e] for e in edges), ZERO))


def _check_chain(sides: List[frozenset]):
    for smaller, larger in zip(sides, sides[1:]):
        if not smaller < larger:
            raise ChainViolationError(
                f"Narrow cuts {sorted(smaller)} and {sorted(larger)} cross",
                {'sides': [sorted(smaller), sorted(larger)]}
            )


def find_narrow_cuts(xstar: LpSolution) -> NarrowCutChain:
    """
    All cuts with x*(Q) < 2, ordered along the chain.

    Candidates come from a Gomory-Hu tree of the support; completeness is
    certified per gap between consecutive sides A < B by a minimum cut from
    A + v to (V - B) + w for every ordered pair v != w of B - A. A value
    below 2 reveals a missing cut, which is inserted before continuing.

    Raises:
        ChainViolationError: If two narrow cuts cross
    """
    n, s, t = xstar.n, xstar.s, xstar.t
    everything = frozenset(range(n))
    graph = capacity_graph(n, xstar.x)

    sides = {frozenset({s}), everything - {t}}
    for _, side, _ in fundamental_cuts(gomory_hu_tree(graph)):
        side = side if s in side else everything - side
        if t in side:
            continue
        if xstar.cut(side) < TWO:
            sides.add(side)

    ordered = sorted(sides, key=lambda side: (len(side), sorted(side)))
    _check_chain(ordered)

    flows = 0
    gap = 0
    while gap < len(ordered) - 1:
        lower, upper = ordered[gap], ordered[gap + 1]
        between = sorted(upper - lower)
        found = None
        if len(between) >= 2:
            outside = everything - upper
            for v in between:
                for w in between:
                    if v == w:
                        continue
                    flows += 1
                    value, side = set_min_cut(graph, lower | {v}, outside | {w})
                    if value < TWO:
                        found = side
                        break
                if found is not None:
                    break
        if found is None:
            gap += 1
            continue
        if not lower < found < upper:
            raise ChainViolationError(f"Gap cut {sorted(found)} is not nested between its gap ends")
        ordered.insert(gap + 1, found)

    cuts = tuple(make_cut(xstar, side) for side in ordered)
    for cut in cuts:
        if not ONE <= cut.size < TWO:
            raise InternalError(f"Narrow cut {sorted(cut.side)} has size {cut.size} outside [1, 2)")
    logger.info("Found %d narrow cuts (%d gap flows)", len(cuts), flows)
    return NarrowCutChain(cuts=cuts, n=n, s=s, t=t)


def build_layers(chain: NarrowCutChain) -> LayerStructure:
    """
    Layer weights, nested cut families, layer edges and level sets.

    With distinct sizes d_1 > ... > d_k = 1: zeta_1 = 2 - d_1,
    zeta_i = d_(i-1) - d_i and Q_i holds the cuts of size <= d_i.
    """
    if not len(chain):
        raise InputError("Cannot build layers from an empty chain")
    distinct = sorted(set(chain.sizes), reverse=True)
    zetas = []
    previous = TWO
    for size in distinct:
        zetas.append(previous - size)
        previous = size

    families, layer_edges, level_sets = [], [], []
    everything = frozenset(range(chain.n))
    for threshold in distinct:
        family = tuple(i for i, cut in enumerate(chain) if cut.size <= threshold)
        families.append(family)

        counts: Dict[tuple, int] = {}
        for index in family:
            for e in chain[index].edges:
                counts[e] = counts.get(e, 0) + 1
        layer_edges.append(frozenset(e for e, count in counts.items() if count == 1))

        levels = []
        previous_side = frozenset()
        for index in family:
            levels.append(chain[index].side - previous_side)
            previous_side = chain[index].side
        levels.append(everything - previous_side)
        level_sets.append(tuple(levels))

    layers = LayerStructure(
        chain=chain,
        zetas=tuple(zetas),
        thresholds=tuple(distinct),
        families=tuple(families),
        layer_edges=tuple(layer_edges),
        level_sets=tuple(level_sets)
    )
    logger.info("Built %d layers with zetas %s", layers.k, [str(z) for z in layers.zetas])
    return layers


def check_layers(xstar: LpSolution, layers: LayerStructure) -> LayerStructure:
    """
    Assert the layer invariants: zetas sum to 1, every L_i meets every cut of
    Q_i, and each level set induces a connected subgraph of the support.

    Raises:
        InternalError: Naming the failing layer
    """
    if sum(layers.zetas, ZERO) != ONE:
        raise InternalError(f"Layer weights sum to {sum(layers.zetas, ZERO)}, not 1")
    support = nx.Graph()
    support.add_nodes_from(range(xstar.n))
    support.add_edges_from(xstar.x)
    for i, family in enumerate(layers.families):
        for index in family:
            if not layers.layer_edges[i] & layers.chain[index].edges:
                raise InternalError(f"Layer {i} edges miss narrow cut {index}")
        for level in layers.level_sets[i]:
            if not level or not nx.is_connected(support.subgraph(level)):
                raise InternalError(f"Level set {sorted(level)} of layer {i} is not connected")
    return layers


@dataclass(frozen=True)
class IdentityReport:
    """Both sides of the submodular identity and whether they agree."""
    lhs: Fraction
    rhs: Fraction

    @property
    def holds(self) -> bool:
        return self.lhs == self.rhs


def check_submodular_identity(xstar: LpSolution, a: AbstractSet[int], b: AbstractSet[int]) -> IdentityReport:
    """
    x(d(A)) + x(d(B)) = x(d(A & B)) + x(d(A | B)) + 2 x(A - B, B - A).
    """
    a, b = frozenset(a), frozenset(b)
    only_a, only_b = a - b, b - a
    between = sum(
        (value for (u, v), value in xstar.x.items()
         if (u in only_a and v in only_b) or (u in only_b and v in only_a)),
        ZERO
    )
    lhs = xstar.cut(a) + xstar.cut(b)
    rhs = xstar.cut(a & b) + xstar.cut(a | b) + 2 * between
    return IdentityReport(lhs, rhs)


def intersection_bound(xstar: LpSolution, first: NarrowCut, second: NarrowCut) -> Tuple[Fraction, Fraction]:
    """
    (x*(Q1 & Q2), (x*(Q1) + x*(Q2))/2 - 1) for two distinct narrow cuts.

    Raises:
        InputError: If both cuts are the same
    """
    if first.side == second.side:
        raise InputError("intersection_bound needs two distinct cuts")
    lhs = sum((xstar.x[e] for e in first.edges & second.edges), ZERO)
    rhs = (first.size + second.size) / 2 - ONE
    return lhs, rhs
