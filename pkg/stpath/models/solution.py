"""
Subtour LP solution model.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import AbstractSet, Dict, List, Mapping, Tuple

from stpath.models.edges import Edge, cut_value, edge_key, format_rational


@dataclass(frozen=True)
class LpSolution:
    """
    Feasible (usually optimal) point x* of the subtour elimination LP.

    Attributes:
        n: Vertex count
        s: Start vertex
        t: End vertex
        x: Positive edge values; zero entries are never stored
        value: Objective value c(x*)
        rounds: Cutting-plane rounds used to reach the point (0 when supplied)
    """
    n: int
    s: int
    t: int
    x: Mapping[Edge, Fraction]
    value: Fraction = Fraction(0)
    rounds: int = 0
    cuts: Tuple[Tuple[int, ...], ...] = field(default=(), compare=False)

    def __post_init__(self):
        cleaned: Dict[Edge, Fraction] = {}
        for (u, v), value in self.x.items():
            value = Fraction(value)
            if value < 0:
                raise ValueError(f"Negative LP value on {(u, v)}")
            if value:
                cleaned[edge_key(u, v)] = value
        object.__setattr__(self, 'x', dict(sorted(cleaned.items())))

    @property
    def support(self) -> List[Edge]:
        """Support edge set E, sorted."""
        return list(self.x)

    @property
    def denominator(self) -> int:
        """Least common denominator K of all x(e)."""
        return lcm(*(value.denominator for value in self.x.values())) if self.x else 1

    def cut(self, side: AbstractSet[int]) -> Fraction:
        """x*(delta(side))."""
        return cut_value(self.x, side)

    def demand(self, side: AbstractSet[int]) -> int:
        """f(U): 1 when U separates s and t, else 2."""
        return 1 if (self.s in side) != (self.t in side) else 2

    def degree_target(self, vertex: int) -> int:
        return 1 if vertex in (self.s, self.t) else 2

    def is_integral(self) -> bool:
        return all(value.denominator == 1 for value in self.x.values())

    def to_rows(self) -> List[list]:
        """LP dump layout [[u, v, "p/q"], ...]."""
        return [[u, v, format_rational(value)] for (u, v), value in self.x.items()]
