"""
Marshmallow schema validating the options of a CLI run.
"""
from dataclasses import dataclass
from fractions import Fraction

from marshmallow import EXCLUDE, Schema, ValidationError, fields, post_load, validate, validates

from stpath.models.certificate import GAMMA_MAX, GAMMA_MIN
from stpath.schemas.rational import Rational


@dataclass(frozen=True)
class RunConfig:
    """Validated run options shared by the CLI subcommands."""
    gamma: Fraction
    k_cap: int
    matching_cap: int
    brute_force_cap: int
    enumeration_cap: int
    threads: int

    def service_config(self) -> dict:
        """Settings in the upper-case layout of the application config."""
        return {
            'K_CAP': self.k_cap,
            'MATCHING_CAP': self.matching_cap,
            'BRUTE_FORCE_CAP': self.brute_force_cap,
            'ENUMERATION_CAP': self.enumeration_cap,
            'THREADS': self.threads
        }


class RunConfigSchema(Schema):
    """
    Schema for run options.
    Caps and the thread count must be positive; gamma lies in [0, 1/2].
    """

    class Meta:
        unknown = EXCLUDE

    gamma = Rational(load_default=Fraction(1, 16), metadata={"doc": "Path weight of the basic parity correction"})
    k_cap = fields.Integer(
        load_default=2 ** 16,
        validate=validate.Range(min=1, error="K cap must be positive"),
        metadata={"doc": "Largest common denominator accepted for decomposition"}
    )
    matching_cap = fields.Integer(
        load_default=20,
        validate=validate.Range(min=1, error="Matching cap must be positive")
    )
    brute_force_cap = fields.Integer(
        load_default=16,
        validate=validate.Range(min=1, error="Brute-force cap must be positive")
    )
    enumeration_cap = fields.Integer(
        load_default=20,
        validate=validate.Range(min=1, error="Enumeration cap must be positive")
    )
    threads = fields.Integer(
        load_default=1,
        validate=validate.Range(min=1, error="Thread count must be at least 1")
    )

    @validates('gamma')
    def validate_gamma(self, value, **kwargs):
        """Gamma must lie in [0, 1/2]."""
        if not GAMMA_MIN <= value <= GAMMA_MAX:
            raise ValidationError(f"gamma must lie in [0, 1/2], got {value}")

    @post_load
    def make_config(self, data, **kwargs):
        return RunConfig(**data)
