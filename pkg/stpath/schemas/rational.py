"""
Marshmallow fields for exact rationals and vertex indices.
"""
from fractions import Fraction

from marshmallow import ValidationError, fields

from stpath.models.edges import edge_key, format_rational


def parse_rational(value) -> Fraction:
    """
    Parse an exact rational from an int, a Fraction or a string.

    Floats are rejected because they are not exact.
    """
    if isinstance(value, bool):
        raise ValidationError("Rational must not be a boolean")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not text:
            raise ValidationError("Rational must not be empty")
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError):
            raise ValidationError(f"Not a rational: {value!r}")
    raise ValidationError(f"Rational must be a 'p/q' string or an integer, got {type(value).__name__}")


class Rational(fields.Field):
    """Field serializing Fractions as 'p/q' strings."""

    default_error_messages = {'invalid': 'Not a valid rational.'}

    def _serialize(self, value, attr, obj, **kwargs):
        if value is None:
            return None
        return format_rational(value)

    def _deserialize(self, value, attr, data, **kwargs):
        return parse_rational(value)


class Vertex(fields.Field):
    """Vertex index given as an integer or a decimal string."""

    def _serialize(self, value, attr, obj, **kwargs):
        return value

    def _deserialize(self, value, attr, data, **kwargs):
        if isinstance(value, bool):
            raise ValidationError("Vertex must be an integer")
        if isinstance(value, int):
            return value
        if isinstance(value, str) and value.strip().lstrip('-').isdigit():
            return int(value.strip())
        raise ValidationError(f"Not a vertex index: {value!r}")


class EdgeField(fields.Field):
    """Edge as [u, v]; loads into the sorted tuple."""

    def _serialize(self, value, attr, obj, **kwargs):
        if value is None:
            return None
        return [value[0], value[1]]

    def _deserialize(self, value, attr, data, **kwargs):
        if not isinstance(value, (list, tuple)) or len(value) != 2:
            raise ValidationError("Edges must be [u, v]")
        u, v = Vertex().deserialize(value[0]), Vertex().deserialize(value[1])
        if u == v:
            raise ValidationError(f"Edge ({u},{v}) is a loop")
        return edge_key(u, v)


class EdgeVectorField(fields.Field):
    """Edge vector as sorted rows [u, v, "p/q"]; zero entries are dropped."""

    def _serialize(self, value, attr, obj, **kwargs):
        if value is None:
            return None
        return [[u, v, format_rational(w)] for (u, v), w in sorted(value.items()) if w]

    def _deserialize(self, value, attr, data, **kwargs):
        if not isinstance(value, list):
            raise ValidationError("Edge vectors must be lists of [u, v, value] rows")
        vector = {}
        for row in value:
            if not isinstance(row, (list, tuple)) or len(row) != 3:
                raise ValidationError("Rows must be [u, v, value]")
            vector[EdgeField().deserialize(row[:2])] = parse_rational(row[2])
        return vector
