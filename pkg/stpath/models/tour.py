"""
{s,t}-tour model.
"""
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

from stpath.models.edges import Edge, format_rational


@dataclass(frozen=True)
class StTour:
    """
    Connected multigraph with odd degrees exactly at s and t, plus its shortcut.

    Attributes:
        edges: Edge multiset, sorted, repeated edges listed repeatedly
        path: Hamiltonian s-t vertex sequence obtained by shortcutting
        multigraph_cost: Cost of the multigraph
        path_cost: Cost of the shortcut path
        kind: 'forest', 'christofides', 'baseline' or 'path'
        tree_index: Index of the source tree in the combination, if any
    """
    edges: Tuple[Edge, ...]
    path: Tuple[int, ...]
    multigraph_cost: Fraction
    path_cost: Fraction
    kind: str = 'path'
    tree_index: Optional[int] = None

    def to_dict(self) -> dict:
        return {
            'kind': self.kind,
            'tree_index': self.tree_index,
            'path': list(self.path),
            'edges': [list(e) for e in self.edges],
            'multigraph_cost': format_rational(self.multigraph_cost),
            'path_cost': format_rational(self.path_cost)
        }
