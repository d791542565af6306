"""
Marshmallow schemas for narrow-cut chains, layers and tree decompositions.
"""
from marshmallow import Schema, fields

from stpath.schemas.rational import EdgeField, EdgeVectorField, Rational


def _sorted_vertices(value):
    return sorted(value)


class NarrowCutSchema(Schema):
    """One narrow cut: the s-side, its support edges and x*(Q)."""
    side = fields.Function(lambda cut: _sorted_vertices(cut.side), metadata={"doc": "U-side vertices"})
    edges = fields.Function(lambda cut: [list(e) for e in sorted(cut.edges)], metadata={"doc": "Support edges of Q"})
    size = Rational(required=True, metadata={"doc": "x*(Q)"})


class CutChainSchema(Schema):
    """Schema for --dump-cuts output."""
    cuts = fields.List(fields.Nested(NarrowCutSchema), metadata={"doc": "Chain order, innermost first"})
    sizes = fields.List(Rational(), metadata={"doc": "x*(Q) per cut"})


class LayerSchema(Schema):
    """Schema for the layer structure of a chain."""
    zetas = fields.List(Rational())
    thresholds = fields.List(Rational())
    families = fields.List(fields.List(fields.Integer()))
    layer_edges = fields.Function(lambda layers: [[list(e) for e in sorted(edges)] for edges in layers.layer_edges])


class LonelyField(fields.Field):
    """Lonely cut -> lonely edge as sorted [cut, [u, v]] rows."""

    def _serialize(self, value, attr, obj, **kwargs):
        return [[q, list(e)] for q, e in sorted(value.items())]

    def _deserialize(self, value, attr, data, **kwargs):
        return {int(q): EdgeField().deserialize(e) for q, e in value}


class TreeEntrySchema(Schema):
    """One tree of a combination."""
    edges = fields.Function(
        lambda tree: [list(e) for e in sorted(tree.edges)],
        deserialize=lambda rows: frozenset(EdgeField().deserialize(row) for row in rows)
    )
    coefficient = Rational(required=True, metadata={"doc": "lambda_S"})
    group = fields.Integer(load_default=0, metadata={"doc": "Layer index of the tree"})
    lonely = LonelyField(load_default=dict)


class DecompositionSchema(Schema):
    """
    Schema for the decompose command: trees with coefficients, groups and
    lonely edges, plus the x^Q table, p* and q*.
    """
    layered = fields.Boolean()
    trees = fields.List(fields.Nested(TreeEntrySchema))
    layers = fields.Nested(LayerSchema, allow_none=True)
    x_q = fields.Dict(keys=fields.String(), values=EdgeVectorField())
    p_star = EdgeVectorField()
    q_star = EdgeVectorField()

    @staticmethod
    def payload(combination, stats, layers=None) -> dict:
        """Flatten a combination and its statistics into the attributes dumped above."""
        return {
            'layered': combination.layered,
            'trees': list(combination),
            'layers': layers,
            'x_q': {str(q): vector for q, vector in sorted(stats.x_q.items())},
            'p_star': stats.p_star,
            'q_star': stats.q_star
        }
