"""
Tests for instance loading, metric validation and generation.
"""
import json
from fractions import Fraction

import pytest

from stpath.models.instance import Instance
from stpath.services.errors import DisconnectedError, InputError, MetricViolationError, ParseError
from stpath.services.instance_service import (
    InstanceService, find_metric_violation, metric_closure, tsplib_nint, validate_metric
)

EUC_TSPLIB = """NAME: tiny
TYPE: TSP
DIMENSION: 3
EDGE_WEIGHT_TYPE: EUC_2D
NODE_COORD_SECTION
1 0 0
2 3 4
3 0 1
EOF
"""

EXPLICIT_TSPLIB = """NAME: matrix
TYPE: TSP
DIMENSION: 3
EDGE_WEIGHT_TYPE: EXPLICIT
EDGE_WEIGHT_FORMAT: FULL_MATRIX
EDGE_WEIGHT_SECTION
0 2 1
2 0 1
1 1 0
EOF
"""


def as_bytes(payload) -> bytes:
    return json.dumps(payload).encode('utf-8')


class TestLoadInstance:
    """Test cases for InstanceService.load_instance."""

    def test_load_json(self, instance_service, instance_factory):
        """Test a valid JSON instance loads with exact costs."""
        instance = instance_service.load_instance(as_bytes(instance_factory.build_instance_data()))

        assert instance.n == 3
        assert (instance.s, instance.t) == (0, 1)
        assert instance.cost(0, 1) == 2
        assert instance.cost(2, 0) == 1
        assert instance.name == 'triangle'

    def test_metric_violation_names_triple(self, instance_service, instance_factory):
        """Test a triangle-inequality violation is reported with its triple."""
        data = instance_factory.build_instance_data(costs=[[0, 1, '5'], [0, 2, '1'], [1, 2, '1']])

        with pytest.raises(MetricViolationError) as exc_info:
            instance_service.load_instance(as_bytes(data))

        assert exc_info.value.triple == (0, 2, 1)
        assert exc_info.value.context == {'triple': [0, 2, 1]}

    def test_closure_repairs_violation(self, instance_service, instance_factory):
        """Test --closure replaces costs by shortest-path distances."""
        data = instance_factory.build_instance_data(costs=[[0, 1, '5'], [0, 2, '1'], [1, 2, '1']])
        instance = instance_service.load_instance(as_bytes(data), closure=True)
        assert instance.cost(0, 1) == 2

    def test_missing_pair_without_closure(self, instance_service, instance_factory):
        """Test an incomplete cost table is a parse error."""
        data = instance_factory.build_instance_data(costs=[[0, 1, '1'], [1, 2, '1']])
        with pytest.raises(ParseError):
            instance_service.load_instance(as_bytes(data))

    def test_missing_pair_with_closure(self, instance_service, instance_factory):
        """Test the closure completes a connected partial table."""
        data = instance_factory.build_instance_data(costs=[[0, 1, '1'], [1, 2, '1/2']])
        instance = instance_service.load_instance(as_bytes(data), closure=True)
        assert instance.cost(0, 2) == Fraction(3, 2)

    def test_invalid_json(self, instance_service):
        """Test malformed JSON raises ParseError."""
        with pytest.raises(ParseError):
            instance_service.load_instance(b'{"n": 3,')

    def test_float_cost_rejected(self, instance_service, instance_factory):
        """Test float costs are rejected as inexact."""
        data = instance_factory.build_instance_data(costs=[[0, 1, 2.5], [0, 2, '1'], [1, 2, '1']])
        with pytest.raises(ParseError):
            instance_service.load_instance(as_bytes(data))

    def test_equal_endpoints_rejected(self, instance_service, instance_factory):
        """Test s = t is rejected."""
        data = instance_factory.build_instance_data(s=1, t=1)
        with pytest.raises(ParseError):
            instance_service.load_instance(as_bytes(data))

    def test_endpoint_override(self, instance_service, instance_factory):
        """Test s and t can be overridden at load time."""
        instance = instance_service.load_instance(as_bytes(instance_factory.build_instance_data()), s=2, t=0)
        assert (instance.s, instance.t) == (2, 0)

    def test_unknown_format(self, instance_service):
        """Test an unknown format raises InputError."""
        with pytest.raises(InputError):
            instance_service.load_instance(b'{}', fmt='csv')

    def test_tsplib_euclidean(self, instance_service):
        """Test EUC_2D distances are rounded to the nearest integer exactly."""
        instance = instance_service.load_instance(EUC_TSPLIB.encode('utf-8'), fmt='tsplib')

        assert instance.name == 'tiny'
        assert instance.cost(0, 1) == 5
        assert instance.cost(0, 2) == 1
        assert instance.cost(1, 2) == 4

    def test_tsplib_explicit_matrix(self, instance_service):
        """Test a FULL_MATRIX section is read symmetrically."""
        instance = instance_service.load_instance(EXPLICIT_TSPLIB.encode('utf-8'), fmt='tsplib')
        assert instance.cost(0, 1) == 2
        assert instance.cost(1, 2) == 1

    def test_tsplib_unsupported_type(self, instance_service):
        """Test an unsupported EDGE_WEIGHT_TYPE raises ParseError."""
        text = EUC_TSPLIB.replace('EUC_2D', 'GEO')
        with pytest.raises(ParseError):
            instance_service.load_instance(text.encode('utf-8'), fmt='tsplib')

    def test_dump_and_reload(self, instance_service, euclidean_instance):
        """Test a dumped instance loads back to an equal instance."""
        payload = instance_service.dump_instance(euclidean_instance)
        assert instance_service.load_instance(as_bytes(payload)) == euclidean_instance


class TestMetricHelpers:
    """Test cases for metric validation and closure."""

    def test_find_metric_violation_none(self, triangle):
        """Test a line metric has no violation."""
        assert find_metric_violation(triangle.n, triangle.costs) is None
        assert validate_metric(triangle) is triangle

    def test_metric_closure_disconnected(self):
        """Test a disconnected support raises DisconnectedError."""
        with pytest.raises(DisconnectedError):
            metric_closure(4, {(0, 1): Fraction(1), (2, 3): Fraction(1)})

    def test_metric_closure_distances(self):
        """Test the closure of a path support is its path metric."""
        costs = metric_closure(3, {(0, 1): Fraction(1), (1, 2): Fraction(2)})
        assert costs == {(0, 1): 1, (0, 2): 3, (1, 2): 2}

    @pytest.mark.parametrize('squared,expected', [
        (Fraction(2), 1),
        (Fraction(9, 4), 2),
        (Fraction(18), 4),
        (Fraction(25), 5),
        (Fraction(0), 0),
    ])
    def test_tsplib_nint(self, squared, expected):
        """Test nint(sqrt(.)) is computed exactly, halves rounding up."""
        assert tsplib_nint(squared) == expected


class TestInstanceModel:
    """Test cases for the Instance model."""

    def test_negative_cost_rejected(self):
        """Test negative costs raise ValueError."""
        with pytest.raises(ValueError):
            Instance(n=2, s=0, t=1, costs={(0, 1): Fraction(-1)})

    def test_pairs_are_sorted(self):
        """Test reversed keys are normalized."""
        instance = Instance(n=2, s=1, t=0, costs={(1, 0): Fraction(3)})
        assert instance.costs == {(0, 1): Fraction(3)}

    def test_path_cost(self, triangle):
        """Test a vertex sequence is priced pairwise."""
        assert triangle.path_cost([0, 2, 1]) == 2
        assert triangle.path_cost([0, 1, 2]) == 3


class TestGenRandomMetric:
    """Test cases for seeded generation."""

    @pytest.mark.parametrize('kind', ['euclidean', 'graph-metric', 'collinear'])
    def test_generation_is_deterministic(self, instance_service, kind):
        """Test the same arguments give the same instance."""
        first = instance_service.gen_random_metric(7, 11, kind)
        second = instance_service.gen_random_metric(7, 11, kind)

        assert first == second
        assert (first.s, first.t) == (0, 1)
        assert find_metric_violation(first.n, first.costs) is None

    def test_different_seeds_differ(self, instance_service):
        """Test different seeds give different names and, here, costs."""
        first = instance_service.gen_random_metric(7, 1, 'euclidean')
        second = instance_service.gen_random_metric(7, 2, 'euclidean')
        assert first.name != second.name

    def test_collinear_endpoints_at_extremes(self, collinear_instance):
        """Test every inner vertex lies between s and t."""
        direct = collinear_instance.cost(0, 1)

        assert direct == 10 * collinear_instance.n
        for v in range(2, collinear_instance.n):
            assert collinear_instance.cost(0, v) + collinear_instance.cost(v, 1) == direct

    def test_too_small(self, instance_service):
        """Test n < 3 raises InputError."""
        with pytest.raises(InputError):
            instance_service.gen_random_metric(2, 0)

    def test_unknown_kind(self, instance_service):
        """Test an unknown kind raises InputError."""
        with pytest.raises(InputError):
            instance_service.gen_random_metric(5, 0, 'random')
