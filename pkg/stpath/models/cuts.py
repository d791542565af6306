"""
Narrow-cut chain and layer structure models.
"""
from dataclasses import dataclass
from fractions import Fraction
from typing import FrozenSet, Tuple

from stpath.models.edges import Edge, format_rational


@dataclass(frozen=True)
class NarrowCut:
    """
    An s-t cut delta(side) with x*(delta(side)) < 2.

    Attributes:
        side: Vertex side U containing s
        edges: Support edges crossing the cut
        size: x*(Q)
    """
    side: FrozenSet[int]
    edges: FrozenSet[Edge]
    size: Fraction

    def to_dict(self) -> dict:
        return {
            'side': sorted(self.side),
            'edges': [list(e) for e in sorted(self.edges)],
            'size': format_rational(self.size)
        }


@dataclass(frozen=True)
class NarrowCutChain:
    """Narrow cuts ordered by strict inclusion of their sides."""
    cuts: Tuple[NarrowCut, ...]
    n: int
    s: int
    t: int

    def __len__(self) -> int:
        return len(self.cuts)

    def __getitem__(self, index: int) -> NarrowCut:
        return self.cuts[index]

    def __iter__(self):
        return iter(self.cuts)

    @property
    def sizes(self) -> Tuple[Fraction, ...]:
        return tuple(cut.size for cut in self.cuts)

    def cuts_containing(self, edge: Edge) -> Tuple[int, ...]:
        """Chain indices of the cuts that contain ``edge``."""
        return tuple(i for i, cut in enumerate(self.cuts) if edge in cut.edges)

    def to_dict(self) -> dict:
        return {'cuts': [cut.to_dict() for cut in self.cuts]}


@dataclass(frozen=True)
class LayerStructure:
    """
    Layers derived from the distinct narrow-cut sizes.

    Attributes:
        chain: The narrow-cut chain the layers refer to
        zetas: Layer weights zeta_1..zeta_k, summing to 1
        thresholds: 2 - zeta_1 - ... - zeta_i per layer
        families: Chain indices of Q_i per layer (Q_1 contains Q_2 ...)
        layer_edges: L_i per layer, edges in exactly one cut of Q_i
        level_sets: Per layer, the vertex slabs between consecutive Q_i cuts
    """
    chain: NarrowCutChain
    zetas: Tuple[Fraction, ...]
    thresholds: Tuple[Fraction, ...]
    families: Tuple[Tuple[int, ...], ...]
    layer_edges: Tuple[FrozenSet[Edge], ...]
    level_sets: Tuple[Tuple[FrozenSet[int], ...], ...]

    @property
    def k(self) -> int:
        return len(self.zetas)

    def family_edges(self, layer: int) -> FrozenSet[Edge]:
        """Union of the edge sets of Q_layer (layers are 0-based)."""
        edges = set()
        for index in self.families[layer]:
            edges |= self.chain[index].edges
        return frozenset(edges)

    def to_dict(self) -> dict:
        return {
            'zetas': [format_rational(z) for z in self.zetas],
            'families': [list(family) for family in self.families],
            'layer_edges': [[list(e) for e in sorted(edges)] for edges in self.layer_edges],
            'level_sets': [[sorted(level) for level in levels] for levels in self.level_sets]
        }
