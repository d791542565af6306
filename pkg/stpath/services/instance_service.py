"""
Instance service: loading, metric validation, metric closure and seeded
instance generation.
"""
import json
import logging
import random
from fractions import Fraction
from itertools import combinations
from math import isqrt
from typing import Dict, List, Mapping, Optional, Tuple

import networkx as nx
from marshmallow import ValidationError as MarshmallowValidationError

from stpath.models.edges import Edge, edge_key
from stpath.models.instance import Instance
from stpath.schemas.instance_schema import InstanceSchema
from stpath.services.errors import DisconnectedError, InputError, MetricViolationError, ParseError

logger = logging.getLogger(__name__)

FORMATS = ('json', 'tsplib')
KINDS = ('euclidean', 'graph-metric', 'collinear')

# Euclidean generation: grid side and the scale distances are rounded at
GRID_SIDE = 100
EUCLIDEAN_SCALE = 1000


def find_metric_violation(n: int, costs: Mapping[Edge, Fraction]) -> Optional[Tuple[int, int, int]]:
    """
    First triple (u, v, w) with c(u,w) > c(u,v) + c(v,w), scanning u < w then v.
    """
    for u in range(n):
        for w in range(u + 1, n):
            direct = costs[(u, w)]
            for v in range(n):
                if v == u or v == w:
                    continue
                if direct > costs[edge_key(u, v)] + costs[edge_key(v, w)]:
                    return (u, v, w)
    return None


def validate_metric(instance: Instance) -> Instance:
    """
    Full O(n^3) triangle-inequality scan.

    Raises:
        MetricViolationError: Naming the first violating triple
    """
    triple = find_metric_violation(instance.n, instance.costs)
    if triple is not None:
        raise MetricViolationError(triple)
    return instance


def metric_closure(n: int, raw: Mapping[Edge, Fraction]) -> Dict[Edge, Fraction]:
    """
    All-pairs shortest-path distances of the weighted support graph.

    Args:
        n: Vertex count
        raw: Nonnegative costs on some of the pairs

    Returns:
        Complete cost mapping satisfying the triangle inequality

    Raises:
        DisconnectedError: If the support does not connect all vertices
    """
    graph = nx.Graph()
    graph.add_nodes_from(range(n))
    for (u, v), cost in raw.items():
        graph.add_edge(u, v, weight=Fraction(cost))
    if n > 1 and not nx.is_connected(graph):
        raise DisconnectedError(f"Cost support has {nx.number_connected_components(graph)} components")

    distances = nx.floyd_warshall(graph, weight='weight')
    return {
        (u, v): Fraction(distances[u][v])
        for u in range(n) for v in range(u + 1, n)
    }


def tsplib_nint(squared: Fraction) -> int:
    """
    TSPLIB nint(sqrt(squared)) computed exactly: the largest k >= 0 with
    k - 1/2 <= sqrt(squared).
    """
    k = isqrt(squared.numerator // squared.denominator) + 1
    while k > 0 and (2 * k - 1) ** 2 > 4 * squared:
        k -= 1
    return k


class InstanceService:
    """
    Service class for instance IO and generation.

    Parsing is delegated to marshmallow schemas for JSON and to a small
    section reader for the supported TSPLIB subset.
    """

    def __init__(self):
        self.schema = InstanceSchema()

    def load_instance(self, stream: bytes, fmt: str = 'json', closure: bool = False,
                      s: Optional[int] = None, t: Optional[int] = None) -> Instance:
        """
        Load and validate an instance.

        Args:
            stream: Raw file content
            fmt: 'json' or 'tsplib'
            closure: Apply metric_closure before validation
            s: Override start vertex
            t: Override end vertex

        Returns:
            Metric Instance

        Raises:
            ParseError: If the content is malformed
            MetricViolationError: If the costs are not metric and closure is off
        """
        if fmt not in FORMATS:
            raise InputError(f"Format must be one of: {', '.join(FORMATS)}")
        text = stream.decode('utf-8') if isinstance(stream, (bytes, bytearray)) else stream

        if fmt == 'json':
            data = self._parse_json(text)
        else:
            data = self._parse_tsplib(text)

        if s is not None:
            data['s'] = s
        if t is not None:
            data['t'] = t

        n = data['n']
        costs = data['costs']
        if closure:
            costs = metric_closure(n, costs)
        try:
            instance = Instance(n=n, s=data['s'], t=data['t'], costs=costs,
                                name=data.get('name', ''), coordinates=data.get('coordinates'))
        except ValueError as e:
            raise ParseError(str(e))

        validate_metric(instance)
        logger.info("Loaded instance %r with n=%d (s=%d, t=%d)", instance.name, instance.n, instance.s, instance.t)
        return instance

    def _parse_json(self, text: str) -> dict:
        try:
            payload = json.loads(text)
        except json.JSONDecodeError as e:
            raise ParseError(f"Invalid JSON: {e}")
        try:
            return self.schema.load(payload)
        except MarshmallowValidationError as e:
            raise ParseError(f"Validation failed: {e.messages}")

    def _parse_tsplib(self, text: str) -> dict:
        """Read NAME, TYPE, DIMENSION, EDGE_WEIGHT_TYPE and the coordinate/weight sections."""
        header: Dict[str, str] = {}
        coordinates: List[Tuple[Fraction, Fraction]] = []
        weights: List[Fraction] = []
        section = None

        for raw_line in text.splitlines():
            line = raw_line.strip()
            if not line:
                continue
            if line == 'EOF':
                break
            if line in ('NODE_COORD_SECTION', 'EDGE_WEIGHT_SECTION'):
                section = line
                continue
            if ':' in line and section is None:
                key, value = line.split(':', 1)
                header[key.strip().upper()] = value.strip()
                continue
            try:
                if section == 'NODE_COORD_SECTION':
                    _, x, y = line.split()
                    coordinates.append((Fraction(x), Fraction(y)))
                elif section == 'EDGE_WEIGHT_SECTION':
                    weights.extend(Fraction(token) for token in line.split())
                else:
                    raise ParseError(f"Unexpected line outside any section: {line!r}")
            except ValueError:
                raise ParseError(f"Malformed section line: {line!r}")

        try:
            n = int(header['DIMENSION'])
        except (KeyError, ValueError):
            raise ParseError("TSPLIB file needs an integer DIMENSION")
        weight_type = header.get('EDGE_WEIGHT_TYPE', '').upper()
        costs: Dict[Edge, Fraction] = {}

        if weight_type == 'EUC_2D':
            if len(coordinates) != n:
                raise ParseError(f"Expected {n} coordinates, found {len(coordinates)}")
            for u, v in combinations(range(n), 2):
                dx = coordinates[u][0] - coordinates[v][0]
                dy = coordinates[u][1] - coordinates[v][1]
                costs[(u, v)] = Fraction(tsplib_nint(dx * dx + dy * dy))
        elif weight_type == 'EXPLICIT':
            weight_format = header.get('EDGE_WEIGHT_FORMAT', 'FULL_MATRIX').upper()
            if weight_format != 'FULL_MATRIX':
                raise ParseError(f"Unsupported EDGE_WEIGHT_FORMAT {weight_format}")
            if len(weights) != n * n:
                raise ParseError(f"Expected {n * n} weights, found {len(weights)}")
            for u, v in combinations(range(n), 2):
                if weights[u * n + v] != weights[v * n + u]:
                    raise ParseError(f"Weight matrix is not symmetric at ({u},{v})")
                costs[(u, v)] = weights[u * n + v]
        else:
            raise ParseError(f"Unsupported EDGE_WEIGHT_TYPE {weight_type or '(missing)'}")

        # TSPLIB nodes are 1-based; s and t default to nodes 1 and 2
        return {
            'name': header.get('NAME', ''),
            'n': n,
            's': 0,
            't': 1,
            'costs': costs
        }

    def gen_random_metric(self, n: int, seed: int, kind: str = 'euclidean') -> Instance:
        """
        Deterministic random metric instance.

        Args:
            n: Vertex count (at least 3)
            seed: Random seed
            kind: 'euclidean', 'graph-metric' or 'collinear'

        Returns:
            Metric Instance with s=0 and t=1
        """
        if n < 3:
            raise InputError("Generated instances need n >= 3")
        if kind not in KINDS:
            raise InputError(f"Kind must be one of: {', '.join(KINDS)}")
        rng = random.Random(f"{kind}:{n}:{seed}")

        if kind == 'euclidean':
            instance = self._gen_euclidean(n, seed, rng)
        elif kind == 'graph-metric':
            instance = self._gen_graph_metric(n, seed, rng)
        else:
            instance = self._gen_collinear(n, seed, rng)
        return validate_metric(instance)

    def _gen_euclidean(self, n: int, seed: int, rng: random.Random) -> Instance:
        points = []
        while len(points) < n:
            point = (rng.randint(0, GRID_SIDE), rng.randint(0, GRID_SIDE))
            if point not in points:
                points.append(point)
        raw = {}
        for u, v in combinations(range(n), 2):
            dx = points[u][0] - points[v][0]
            dy = points[u][1] - points[v][1]
            scaled = Fraction((dx * dx + dy * dy) * EUCLIDEAN_SCALE * EUCLIDEAN_SCALE)
            raw[(u, v)] = Fraction(tsplib_nint(scaled), EUCLIDEAN_SCALE)
        # rounding can break the triangle inequality by a rounding unit; repair by closure
        costs = metric_closure(n, raw)
        return Instance(n=n, s=0, t=1, costs=costs, name=f"euclidean-{n}-{seed}",
                        coordinates=tuple(points))

    def _gen_graph_metric(self, n: int, seed: int, rng: random.Random) -> Instance:
        raw = {}
        order = list(range(n))
        rng.shuffle(order)
        for i in range(1, n):
            parent = order[rng.randrange(i)]
            raw[edge_key(order[i], parent)] = Fraction(rng.randint(1, 4))
        for u, v in combinations(range(n), 2):
            if (u, v) not in raw and rng.random() < 0.3:
                raw[(u, v)] = Fraction(rng.randint(1, 4))
        costs = metric_closure(n, raw)
        return Instance(n=n, s=0, t=1, costs=costs, name=f"graph-metric-{n}-{seed}")

    def _gen_collinear(self, n: int, seed: int, rng: random.Random) -> Instance:
        inner = sorted(rng.sample(range(1, 10 * n), n - 2))
        positions = [0, 10 * n] + inner
        costs = {
            (u, v): Fraction(abs(positions[u] - positions[v]))
            for u, v in combinations(range(n), 2)
        }
        return Instance(n=n, s=0, t=1, costs=costs, name=f"collinear-{n}-{seed}",
                        coordinates=tuple((p, 0) for p in positions))

    def dump_instance(self, instance: Instance) -> dict:
        """JSON payload of an instance; loading it back yields an equal Instance."""
        return instance.to_dict()
