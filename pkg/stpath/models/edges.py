"""
Edge and edge-vector helpers shared by every model.

An edge is a sorted vertex pair ``(u, v)`` with ``u < v``; an edge vector is
a mapping from edges to exact rationals.
"""
from fractions import Fraction
from typing import AbstractSet, Dict, Iterable, Mapping, Tuple

Edge = Tuple[int, int]
EdgeVector = Dict[Edge, Fraction]

ZERO = Fraction(0)
ONE = Fraction(1)
TWO = Fraction(2)


def edge_key(u: int, v: int) -> Edge:
    """Return the canonical sorted key of the pair {u, v}."""
    if u == v:
        raise ValueError(f"Loop edge ({u},{v}) is not allowed")
    return (u, v) if u < v else (v, u)


def crosses(edge: Edge, side: AbstractSet[int]) -> bool:
    """True when exactly one endpoint of ``edge`` lies in ``side``."""
    return (edge[0] in side) != (edge[1] in side)


def cut_edges(edges: Iterable[Edge], side: AbstractSet[int]) -> Tuple[Edge, ...]:
    """Edges of ``edges`` in the cut delta(side), sorted."""
    return tuple(sorted(e for e in edges if crosses(e, side)))


def vector_value(vector: Mapping[Edge, Fraction], edges: Iterable[Edge]) -> Fraction:
    """Sum of ``vector`` over ``edges``."""
    return sum((vector.get(e, ZERO) for e in edges), ZERO)


def cut_value(vector: Mapping[Edge, Fraction], side: AbstractSet[int]) -> Fraction:
    """x(delta(side)) for an edge vector x."""
    return sum((value for e, value in vector.items() if crosses(e, side)), ZERO)


def add_into(target: EdgeVector, source: Mapping[Edge, Fraction], scale: Fraction = ONE) -> EdgeVector:
    """target += scale * source, dropping exact zeros."""
    for e, value in source.items():
        updated = target.get(e, ZERO) + scale * value
        if updated:
            target[e] = updated
        else:
            target.pop(e, None)
    return target


def indicator(edges: Iterable[Edge]) -> EdgeVector:
    """Incidence vector of an edge set."""
    return {e: ONE for e in edges}


def dot(vector: Mapping[Edge, Fraction], costs: Mapping[Edge, Fraction]) -> Fraction:
    """Sum over edges of vector(e) * costs(e)."""
    return sum((value * costs[e] for e, value in vector.items()), ZERO)


def format_rational(value: Fraction) -> str:
    """Serialize a rational as a 'p/q' string."""
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"
