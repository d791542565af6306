# Models package
from .certificate import AnalysisParams, LedgerCheck, SpecialCaseFlags, TourCertificate, TreeLedger
from .combination import CombinationStats, PartitionResult, TreeCombination, TreeEntry
from .cuts import LayerStructure, NarrowCut, NarrowCutChain
from .instance import Instance
from .joins import Join, ParityCorrectionVector, ParitySet
from .lp import LpModel, LpOutcome, LpStatus, Relation, Sense
from .reconnect import BadEdgeIndex, ReconnectionPlan
from .solution import LpSolution
from .tour import StTour

__all__ = [
    'AnalysisParams', 'LedgerCheck', 'SpecialCaseFlags', 'TourCertificate', 'TreeLedger',
    'CombinationStats', 'PartitionResult', 'TreeCombination', 'TreeEntry',
    'LayerStructure', 'NarrowCut', 'NarrowCutChain',
    'Instance',
    'Join', 'ParityCorrectionVector', 'ParitySet',
    'LpModel', 'LpOutcome', 'LpStatus', 'Relation', 'Sense',
    'BadEdgeIndex', 'ReconnectionPlan',
    'LpSolution',
    'StTour'
]
