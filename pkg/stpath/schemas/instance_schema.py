"""
Marshmallow schemas for instance files and LP dumps.
"""
from marshmallow import (
    EXCLUDE, Schema, ValidationError, fields, post_load, validate, validates_schema
)

from stpath.models.edges import edge_key
from stpath.schemas.rational import Rational, Vertex, parse_rational


class CostRowField(fields.Field):
    """A cost row [u, v, "p/q"]."""

    def _serialize(self, value, attr, obj, **kwargs):
        u, v, cost = value
        return [u, v, Rational()._serialize(cost, attr, obj)]

    def _deserialize(self, value, attr, data, **kwargs):
        if not isinstance(value, (list, tuple)) or len(value) != 3:
            raise ValidationError("Cost rows must be [u, v, cost]")
        u = Vertex().deserialize(value[0])
        v = Vertex().deserialize(value[1])
        if u == v:
            raise ValidationError(f"Cost row ({u},{v}) is a loop")
        cost = parse_rational(value[2])
        if cost < 0:
            raise ValidationError(f"Cost of ({u},{v}) is negative")
        return (u, v, cost)


class InstanceSchema(Schema):
    """
    Schema for JSON instance files.
    Loads into a plain dict with a cost mapping keyed by sorted pairs.
    """

    class Meta:
        unknown = EXCLUDE

    name = fields.String(load_default='', metadata={"doc": "Instance name"})
    n = fields.Integer(
        required=True,
        strict=True,
        validate=validate.Range(min=2, error="Instance needs at least 2 vertices"),
        metadata={"doc": "Vertex count"}
    )
    s = Vertex(load_default=0, metadata={"doc": "Start vertex"})
    t = Vertex(load_default=1, metadata={"doc": "End vertex"})
    costs = fields.List(CostRowField(), required=True, metadata={"doc": "Rows [u, v, cost]"})

    @validates_schema
    def validate_endpoints(self, data, **kwargs):
        """Check endpoints and cost row vertices against n."""
        n = data.get('n')
        if n is None:
            return
        for label in ('s', 't'):
            if not 0 <= data[label] < n:
                raise ValidationError(f"{label} must lie in 0..{n - 1}", label)
        if data['s'] == data['t']:
            raise ValidationError("s and t must be distinct", 't')
        for u, v, _ in data.get('costs', []):
            if not (0 <= u < n and 0 <= v < n):
                raise ValidationError(f"Cost row ({u},{v}) references a vertex outside 0..{n - 1}", 'costs')

    @post_load
    def build_cost_map(self, data, **kwargs):
        """Collapse cost rows into a mapping, rejecting conflicting duplicates."""
        costs = {}
        for u, v, cost in data['costs']:
            key = edge_key(u, v)
            if key in costs and costs[key] != cost:
                raise ValidationError(f"Conflicting costs for {key}", 'costs')
            costs[key] = cost
        data['costs'] = costs
        return data


class LpDumpSchema(Schema):
    """Schema for x* dumps: rows [u, v, "p/q"]."""
    rows = fields.List(CostRowField(), required=True)
    value = Rational(required=True)
