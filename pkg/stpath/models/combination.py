"""
Convex combinations of spanning trees and the vectors derived from them.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, Mapping, Optional, Tuple

from stpath.models.edges import Edge, EdgeVector, format_rational


@dataclass(frozen=True)
class TreeEntry:
    """
    One spanning tree S of a convex combination.

    Attributes:
        edges: Edge set of S
        coefficient: lambda_S
        group: Layer index i(S) (0-based); 0 for non-layered combinations
        lonely: Lonely cut (chain index) -> its lonely edge e_S^Q
    """
    edges: FrozenSet[Edge]
    coefficient: Fraction
    group: int = 0
    lonely: Mapping[int, Edge] = field(default_factory=dict)

    @property
    def lonely_edges(self) -> FrozenSet[Edge]:
        """L(S)."""
        return frozenset(self.lonely.values())

    @property
    def lonely_cuts(self) -> FrozenSet[int]:
        """Q(S) as chain indices."""
        return frozenset(self.lonely)

    @property
    def forest(self) -> FrozenSet[Edge]:
        """F = S minus L(S)."""
        return self.edges - self.lonely_edges

    def to_dict(self) -> dict:
        return {
            'edges': [list(e) for e in sorted(self.edges)],
            'coefficient': format_rational(self.coefficient),
            'group': self.group,
            'lonely': [[index, list(e)] for index, e in sorted(self.lonely.items())]
        }


@dataclass(frozen=True)
class TreeCombination:
    """
    Ordered trees with coefficients; layered combinations keep groups
    in ascending order so group boundaries m_1 <= ... <= m_k are implicit.
    """
    trees: Tuple[TreeEntry, ...]
    layered: bool = True

    def __len__(self) -> int:
        return len(self.trees)

    def __iter__(self):
        return iter(self.trees)

    def __getitem__(self, index: int) -> TreeEntry:
        return self.trees[index]

    @property
    def group_boundaries(self) -> Tuple[int, ...]:
        """m_i: number of trees in groups 0..i."""
        if not self.trees:
            return ()
        last = max(tree.group for tree in self.trees)
        return tuple(
            sum(1 for tree in self.trees if tree.group <= i)
            for i in range(last + 1)
        )

    def to_dict(self) -> dict:
        return {
            'layered': self.layered,
            'trees': [tree.to_dict() for tree in self.trees]
        }


@dataclass(frozen=True)
class CombinationStats:
    """
    Vectors derived from a combination.

    Attributes:
        x_q: Chain index -> x^Q (lonely-edge mass per edge)
        p_star: Mean of the trees' s-t paths
        q_star: x* - p*
        paths: Per tree, the edges of its s-t path
    """
    x_q: Dict[int, EdgeVector]
    p_star: EdgeVector
    q_star: EdgeVector
    paths: Tuple[FrozenSet[Edge], ...] = ()

    def to_dict(self) -> dict:
        return {
            'x_q': {
                str(index): [[u, v, format_rational(value)] for (u, v), value in sorted(vector.items())]
                for index, vector in sorted(self.x_q.items())
            },
            'p_star': [[u, v, format_rational(value)] for (u, v), value in sorted(self.p_star.items())],
            'q_star': [[u, v, format_rational(value)] for (u, v), value in sorted(self.q_star.items())]
        }


@dataclass(frozen=True)
class PartitionResult:
    """
    Outcome of the capacitated matroid partition.

    Exactly one of ``bases`` and ``violating_set`` is set.
    """
    bases: Optional[Tuple[Tuple[FrozenSet[Edge], ...], ...]] = None
    violating_set: Optional[FrozenSet[Edge]] = None
    scale: int = 1

    @property
    def feasible(self) -> bool:
        return self.bases is not None
