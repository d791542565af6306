"""
Marshmallow schemas for tours, certificates and the per-tree dumps.
"""
from marshmallow import Schema, fields, validate

from stpath.schemas.rational import EdgeField, EdgeVectorField, Rational


class StTourSchema(Schema):
    """Schema for an {s,t}-tour and its shortcut path."""
    kind = fields.String(validate=validate.OneOf(['forest', 'christofides', 'baseline', 'path']))
    tree_index = fields.Integer(allow_none=True)
    path = fields.List(fields.Integer())
    edges = fields.List(EdgeField())
    multigraph_cost = Rational()
    path_cost = Rational()


class LedgerCheckSchema(Schema):
    """One ledger row."""
    name = fields.String(required=True)
    lhs = Rational(required=True)
    relation = fields.String(validate=validate.OneOf(['<=', '=']))
    rhs = Rational(required=True)
    tree = fields.Integer(allow_none=True)
    cut = fields.Integer(allow_none=True)
    holds = fields.Boolean()


class TreeLedgerSchema(Schema):
    """Per-tree costs of the ledger."""
    index = fields.Integer()
    coefficient = Rational()
    group = fields.Integer()
    tree_cost = Rational()
    forest_cost = Rational()
    y_cost = Rational()
    y_modified_cost = Rational()
    join_modified_cost = Rational()
    surcharge = Rational()
    surcharge_bound = Rational()
    forest_tour_cost = Rational()
    tree_tour_cost = Rational()
    plan_status = fields.String()


class SpecialCaseFlagsSchema(Schema):
    disjoint = fields.Boolean()
    two_per_edge = fields.Boolean()
    all_small = fields.Boolean()
    one_not_small = fields.Boolean()
    z = Rational(allow_none=True)


class CertificateSchema(Schema):
    """
    Schema for certificate files written by solve and certify and read back
    by verify. All rationals are "p/q" strings.
    """
    instance = fields.String(required=True)
    gamma = Rational(required=True)
    lp_cost = Rational(required=True)
    p_cost = Rational(required=True)
    q_cost = Rational(required=True)
    trees = fields.List(fields.Nested(TreeLedgerSchema), required=True)
    b1 = Rational(required=True)
    b2 = Rational(required=True)
    guarantee = Rational(allow_none=True)
    tour = fields.Nested(StTourSchema, required=True)
    baseline = fields.Nested(StTourSchema, allow_none=True)
    opt = Rational(allow_none=True)
    flags = fields.Nested(SpecialCaseFlagsSchema, allow_none=True)
    checks = fields.List(fields.Nested(LedgerCheckSchema), required=True)
    extras = fields.Dict(keys=fields.String(), values=fields.String(), load_default=dict)
    valid = fields.Boolean()


class Bomc85ReportSchema(Schema):
    """Schema for the best-of-many check without deletion."""
    average_cost = Rational()
    bound = Rational()
    checks = fields.List(fields.Nested(LedgerCheckSchema))
    valid = fields.Boolean()


class ReconnectTreeSchema(Schema):
    """Per-tree reconnection artifacts: B(S), r_Q, the plan x(b, Q) and the surcharge ledger."""
    index = fields.Integer()
    bad_edges = fields.Function(lambda run: [list(e) for e in sorted(run.bad.bad_edges)])
    residuals = fields.Function(
        lambda run: {str(q): Rational()._serialize(r, None, None) for q, r in sorted(run.bad.residuals.items())}
    )
    plan_status = fields.Function(lambda run: run.plan.status)
    plan = fields.Function(lambda run: [
        [list(edge), cut, Rational()._serialize(value, None, None)]
        for (edge, cut), value in sorted(run.plan.values.items())
    ])
    farkas = fields.Function(lambda run: None if run.plan.farkas is None else {
        str(row): Rational()._serialize(value, None, None) for row, value in sorted(run.plan.farkas.items())
    })
    subsets_checked = fields.Function(lambda run: run.subsets.subsets_checked)
    subsets_complete = fields.Function(lambda run: run.subsets.complete)
    surcharge = fields.Function(lambda run: Rational()._serialize(run.surcharge[0], None, None))
    surcharge_bound = fields.Function(lambda run: Rational()._serialize(run.surcharge[1], None, None))
    doubled = fields.List(EdgeField())


class ReconnectDumpSchema(Schema):
    """Schema for --dump-reconnect output."""
    trees = fields.List(fields.Nested(ReconnectTreeSchema))


class ParityTreeSchema(Schema):
    """Per-tree parity-correction vector y_F with its parts and the lightest odd cut."""
    index = fields.Integer()
    y = fields.Function(lambda run: EdgeVectorField()._serialize(run.y.y, None, None))
    basic = fields.Function(lambda run: EdgeVectorField()._serialize(run.y.basic, None, None))
    empty_completion = fields.Function(lambda run: EdgeVectorField()._serialize(run.y.empty_completion, None, None))
    even_completion = fields.Function(lambda run: EdgeVectorField()._serialize(run.y.even_completion, None, None))
    odd_cut = fields.Function(lambda run: None if run.odd_cut is None else {
        'side': sorted(run.odd_cut[0]),
        'weight': Rational()._serialize(run.odd_cut[1], None, None)
    })


class ParityDumpSchema(Schema):
    """Schema for --dump-parity output."""
    trees = fields.List(fields.Nested(ParityTreeSchema))
