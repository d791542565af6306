"""
Schemas package for instance, artifact and certificate validation and serialization.
"""
from .certificate_schema import (
    Bomc85ReportSchema, CertificateSchema, LedgerCheckSchema, ParityDumpSchema, ReconnectDumpSchema, StTourSchema
)
from .decomposition_schema import CutChainSchema, DecompositionSchema, LayerSchema
from .instance_schema import InstanceSchema, LpDumpSchema
from .run_config_schema import RunConfig, RunConfigSchema

__all__ = [
    'Bomc85ReportSchema',
    'CertificateSchema',
    'LedgerCheckSchema',
    'ParityDumpSchema',
    'ReconnectDumpSchema',
    'StTourSchema',
    'CutChainSchema',
    'DecompositionSchema',
    'LayerSchema',
    'InstanceSchema',
    'LpDumpSchema',
    'RunConfig',
    'RunConfigSchema'
]
