# Services package
from .bomd_service import BomdResult, BomdService
from .certify_service import CertifyService
from .errors import CertificationError, InputError, InternalError, SolverError
from .instance_service import InstanceService
from .subtour_service import SubtourService
from .treedecomp_service import TreeDecompositionService

__all__ = [
    'BomdResult', 'BomdService', 'CertifyService', 'CertificationError', 'InputError', 'InternalError',
    'SolverError', 'InstanceService', 'SubtourService', 'TreeDecompositionService'
]
