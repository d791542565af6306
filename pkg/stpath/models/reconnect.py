"""
Bad-edge index and reconnection plan models.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, Mapping, Optional, Tuple

from stpath.models.edges import Edge, format_rational


@dataclass(frozen=True)
class BadEdgeIndex:
    """
    Bad edges of one tree.

    Attributes:
        lonely: Lonely cut (chain index) -> lonely edge of the tree
        cuts_of_edge: Support edge -> lonely cuts containing it (only edges in at least one)
        bad_edges: B(S), support edges lying in two or more lonely cuts
        residuals: r_Q = 1 - x*(Q minus B(S)) per lonely cut
    """
    lonely: Mapping[int, Edge]
    cuts_of_edge: Mapping[Edge, FrozenSet[int]]
    bad_edges: FrozenSet[Edge]
    residuals: Mapping[int, Fraction]

    @property
    def lonely_cuts(self) -> Tuple[int, ...]:
        return tuple(sorted(self.lonely))

    def to_dict(self) -> dict:
        return {
            'bad_edges': [list(e) for e in sorted(self.bad_edges)],
            'residuals': {str(q): format_rational(r) for q, r in sorted(self.residuals.items())}
        }


@dataclass(frozen=True)
class ReconnectionPlan:
    """
    Conditional drop probabilities x(b, Q).

    Attributes:
        values: (bad edge, lonely cut) -> probability
        status: 'feasible' or 'infeasible'
        farkas: Row multipliers certifying infeasibility
    """
    values: Dict[Tuple[Edge, int], Fraction] = field(default_factory=dict)
    status: str = 'feasible'
    farkas: Optional[Dict[int, Fraction]] = None

    @property
    def feasible(self) -> bool:
        return self.status == 'feasible'

    def get(self, edge: Edge, cut: int) -> Fraction:
        return self.values.get((edge, cut), Fraction(0))

    def to_dict(self) -> dict:
        return {
            'status': self.status,
            'values': [
                [list(edge), cut, format_rational(value)]
                for (edge, cut), value in sorted(self.values.items())
            ]
        }
