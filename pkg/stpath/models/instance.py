"""
Instance model for the metric s-t path TSP.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterator, List, Mapping, Optional, Tuple

from stpath.models.edges import Edge, edge_key, format_rational


@dataclass(frozen=True, eq=True)
class Instance:
    """
    Complete cost function on n vertices with designated endpoints s and t.

    Attributes:
        n: Vertex count (vertices are 0..n-1)
        s: Start vertex
        t: End vertex
        costs: Exact nonnegative cost per unordered pair
        name: Optional instance name
        coordinates: Optional integer points the costs were derived from

    Instances are immutable after construction and may be shared across
    worker threads.
    """
    n: int
    s: int
    t: int
    costs: Mapping[Edge, Fraction] = field(repr=False)
    name: str = ''
    coordinates: Optional[Tuple[Tuple[int, int], ...]] = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 2:
            raise ValueError("Instance needs at least 2 vertices")
        for label, vertex in (('s', self.s), ('t', self.t)):
            if not 0 <= vertex < self.n:
                raise ValueError(f"Endpoint {label}={vertex} outside 0..{self.n - 1}")
        if self.s == self.t:
            raise ValueError("Endpoints s and t must be distinct")

        normalized: Dict[Edge, Fraction] = {}
        for (u, v), value in self.costs.items():
            key = edge_key(u, v)
            value = Fraction(value)
            if value < 0:
                raise ValueError(f"Cost of {key} is negative")
            if key in normalized and normalized[key] != value:
                raise ValueError(f"Conflicting costs given for {key}")
            normalized[key] = value

        missing = [p for p in self.pairs() if p not in normalized]
        if missing:
            raise ValueError(f"Missing cost for pair {missing[0]}")
        object.__setattr__(self, 'costs', normalized)

    @property
    def vertices(self) -> range:
        return range(self.n)

    def pairs(self) -> Iterator[Edge]:
        """All unordered vertex pairs in lexicographic order."""
        for u in range(self.n):
            for v in range(u + 1, self.n):
                yield (u, v)

    def cost(self, u: int, v: int) -> Fraction:
        """Cost of the pair {u, v}."""
        return self.costs[edge_key(u, v)]

    def cost_of(self, edges) -> Fraction:
        """Total cost of an edge multiset."""
        return sum((self.costs[e] for e in edges), Fraction(0))

    def path_cost(self, path) -> Fraction:
        """Cost of a vertex sequence walked in order."""
        return sum((self.cost(a, b) for a, b in zip(path, path[1:])), Fraction(0))

    def to_dict(self) -> dict:
        """Convert instance to the JSON instance layout."""
        return {
            'name': self.name,
            'n': self.n,
            's': self.s,
            't': self.t,
            'costs': [
                [u, v, format_rational(self.costs[(u, v)])]
                for u, v in self.pairs()
            ]
        }

    def cost_rows(self) -> List[List[Fraction]]:
        """Dense symmetric cost matrix with zero diagonal."""
        rows = [[Fraction(0)] * self.n for _ in range(self.n)]
        for (u, v), value in self.costs.items():
            rows[u][v] = value
            rows[v][u] = value
        return rows
