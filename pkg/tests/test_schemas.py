"""
Tests for Marshmallow schemas.
"""
from fractions import Fraction

import pytest
from marshmallow import ValidationError

from stpath.schemas.certificate_schema import CertificateSchema, LedgerCheckSchema
from stpath.schemas.decomposition_schema import CutChainSchema, DecompositionSchema
from stpath.schemas.instance_schema import InstanceSchema, LpDumpSchema
from stpath.schemas.rational import EdgeVectorField, Rational
from stpath.schemas.run_config_schema import RunConfig, RunConfigSchema
from stpath.services.cut_service import find_narrow_cuts
from tests.fixtures import InstanceFactory

F = Fraction


class TestRational:
    """Test cases for the rational fields."""

    def test_serializes_as_p_over_q(self):
        """Test integers keep an explicit denominator."""
        assert Rational()._serialize(F(2), None, None) == '2/1'
        assert Rational()._serialize(F(-5, 3), None, None) == '-5/3'

    @pytest.mark.parametrize('value,expected', [
        ('2/1', F(2)),
        ('3/6', F(1, 2)),
        (' 7 ', F(7)),
        (4, F(4)),
    ])
    def test_deserialize(self, value, expected):
        """Test strings and integers load exactly."""
        assert Rational().deserialize(value) == expected

    @pytest.mark.parametrize('value', [0.5, True, '', '1/0', 'half'])
    def test_rejects_inexact_values(self, value):
        """Test floats, booleans and malformed strings are rejected."""
        with pytest.raises(ValidationError):
            Rational().deserialize(value)

    def test_edge_vector_drops_zeros(self):
        """Test zero entries are left out of the rows."""
        rows = EdgeVectorField()._serialize({(0, 1): F(1, 3), (1, 2): F(0)}, None, None)
        assert rows == [[0, 1, '1/3']]

    def test_edge_vector_sorts_endpoints(self):
        """Test rows load into sorted edge keys."""
        assert EdgeVectorField().deserialize([[2, 0, '1/2']]) == {(0, 2): F(1, 2)}


class TestInstanceSchema:
    """Test cases for InstanceSchema."""

    def test_valid_instance(self):
        """Test a triangle loads into a cost mapping."""
        data = InstanceSchema().load(InstanceFactory.build_instance_data())

        assert data['n'] == 3
        assert data['costs'] == {(0, 1): F(2), (0, 2): F(1), (1, 2): F(1)}

    def test_unknown_fields_are_ignored(self):
        """Test extra keys do not fail the load."""
        data = InstanceSchema().load(InstanceFactory.build_instance_data(comment='from a generator'))
        assert 'comment' not in data

    def test_missing_costs(self):
        """Test the cost rows are required."""
        payload = InstanceFactory.build_instance_data()
        del payload['costs']

        with pytest.raises(ValidationError) as exc_info:
            InstanceSchema().load(payload)
        assert 'costs' in exc_info.value.messages

    def test_too_few_vertices(self):
        """Test n below 2 is rejected."""
        with pytest.raises(ValidationError) as exc_info:
            InstanceSchema().load(InstanceFactory.build_instance_data(n=1, costs=[]))
        assert 'n' in exc_info.value.messages

    def test_equal_endpoints(self):
        """Test s = t is rejected."""
        with pytest.raises(ValidationError):
            InstanceSchema().load(InstanceFactory.build_instance_data(t=0))

    def test_endpoint_out_of_range(self):
        """Test endpoints must lie in 0..n-1."""
        with pytest.raises(ValidationError):
            InstanceSchema().load(InstanceFactory.build_instance_data(t=3))

    @pytest.mark.parametrize('row', [
        [0, 1, 0.5],
        [0, 0, '1'],
        [0, 1, '-1'],
        [0, 5, '1'],
        [0, 1],
    ])
    def test_invalid_cost_rows(self, row):
        """Test float, loop, negative, out-of-range and short rows are rejected."""
        costs = [row, [0, 2, '1'], [1, 2, '1']]
        with pytest.raises(ValidationError):
            InstanceSchema().load(InstanceFactory.build_instance_data(costs=costs))

    def test_conflicting_duplicates(self):
        """Test two different costs for one pair are rejected."""
        costs = [[0, 1, '2'], [1, 0, '3'], [0, 2, '1'], [1, 2, '1']]
        with pytest.raises(ValidationError):
            InstanceSchema().load(InstanceFactory.build_instance_data(costs=costs))

    def test_lp_dump(self):
        """Test x* rows and value load exactly."""
        data = LpDumpSchema().load({'rows': [[0, 2, '1'], [1, 2, '1']], 'value': '2'})

        assert data['rows'] == [(0, 2, F(1)), (1, 2, F(1))]
        assert data['value'] == 2


class TestRunConfigSchema:
    """Test cases for RunConfigSchema."""

    def test_defaults(self):
        """Test an empty payload loads the default run options."""
        config = RunConfigSchema().load({})

        assert isinstance(config, RunConfig)
        assert config.gamma == F(1, 16)
        assert config.threads == 1
        assert config.service_config()['MATCHING_CAP'] == 20

    def test_gamma_string(self):
        """Test gamma loads from a p/q string."""
        assert RunConfigSchema().load({'gamma': '1/8'}).gamma == F(1, 8)

    @pytest.mark.parametrize('payload,field', [
        ({'gamma': '3/4'}, 'gamma'),
        ({'gamma': '-1/16'}, 'gamma'),
        ({'threads': 0}, 'threads'),
        ({'matching_cap': -1}, 'matching_cap'),
    ])
    def test_invalid_options(self, payload, field):
        """Test out-of-range options report the offending field."""
        with pytest.raises(ValidationError) as exc_info:
            RunConfigSchema().load(payload)
        assert field in exc_info.value.messages


class TestOutputSchemas:
    """Test cases for the certificate and dump schemas."""

    def test_cut_chain_dump(self, fractional_xstar):
        """Test the chain dump lists sides and sizes in order."""
        data = CutChainSchema().dump(find_narrow_cuts(fractional_xstar))

        assert data['sizes'] == ['1/1', '5/3', '5/3', '5/3', '5/3', '1/1']
        assert data['cuts'][1]['side'] == [0, 1]
        assert data['cuts'][0]['edges'] == [[0, 1], [0, 3]]

    def test_decomposition_dump(self, fractional_layers, hand_layered):
        """Test trees, layers and x^Q appear in the dump."""
        combination, stats = hand_layered
        data = DecompositionSchema().dump(DecompositionSchema.payload(combination, stats, fractional_layers))

        assert len(data['trees']) == 3
        assert data['trees'][0]['coefficient'] == '1/3'
        assert data['layers']['zetas'] == ['1/3', '2/3']
        assert data['layers']['families'] == [[0, 1, 2, 3, 4, 5], [0, 5]]
        assert data['x_q']['1'] == [[1, 2, '1/3']]

    def test_certificate_dump_and_load(self, bomd_service, collinear_instance):
        """Test a certificate survives a dump and load with exact values."""
        certificate = bomd_service.run_bomd(collinear_instance).certificate
        schema = CertificateSchema()
        data = schema.dump(certificate)
        loaded = schema.load(data)

        assert data['valid'] is True
        assert data['b1'] == '375/4'
        assert loaded['b1'] == certificate.b1
        assert loaded['tour']['path'] == list(certificate.tour.path)
        assert len(loaded['checks']) == len(certificate.checks)

    def test_ledger_row_requires_sides(self):
        """Test a ledger row without lhs is rejected."""
        with pytest.raises(ValidationError):
            LedgerCheckSchema().load({'name': 'tour', 'relation': '<=', 'rhs': '1'})
