"""
Parity sets, joins and fractional parity-correction vectors.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from typing import FrozenSet, Iterable, Tuple

from stpath.models.edges import Edge, EdgeVector, format_rational


@dataclass(frozen=True)
class ParitySet:
    """A vertex set T of even cardinality."""
    vertices: FrozenSet[int]

    def __post_init__(self):
        object.__setattr__(self, 'vertices', frozenset(self.vertices))
        if len(self.vertices) % 2:
            raise ValueError(f"Parity set must have even size, got {len(self.vertices)}")

    def __len__(self) -> int:
        return len(self.vertices)

    def __iter__(self):
        return iter(sorted(self.vertices))

    def symmetric_difference(self, other: Iterable[int]) -> 'ParitySet':
        return ParitySet(self.vertices ^ frozenset(other))


@dataclass(frozen=True)
class Join:
    """
    A T-join after mod-2 reduction.

    Attributes:
        edges: Sorted edges, each used once
        cost: Cost under the cost mapping it was computed with
    """
    edges: Tuple[Edge, ...]
    cost: Fraction


@dataclass(frozen=True)
class ParityCorrectionVector:
    """
    y_F split by provenance.

    Attributes:
        y: Total vector
        basic: Half x* plus gamma times the tree's s-t path
        empty_completion: Lonely-edge terms for lonely cuts
        even_completion: x^Q terms for even cuts of the forest
    """
    y: EdgeVector
    basic: EdgeVector = field(default_factory=dict)
    empty_completion: EdgeVector = field(default_factory=dict)
    even_completion: EdgeVector = field(default_factory=dict)

    def to_dict(self) -> dict:
        def rows(vector):
            return [[u, v, format_rational(value)] for (u, v), value in sorted(vector.items())]
        return {
            'y': rows(self.y),
            'basic': rows(self.basic),
            'empty_completion': rows(self.empty_completion),
            'even_completion': rows(self.even_completion)
        }
