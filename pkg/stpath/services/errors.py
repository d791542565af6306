"""
Exception hierarchy shared by every service.

InputError subclasses describe bad input (exit code 2); InternalError
subclasses mean a proven inequality or structural property failed, which
can only be a bug (exit code 1).
"""
from typing import Any, Dict, Optional


class SolverError(Exception):
    """Base exception for solver service errors."""

    def __init__(self, message: str, context: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.context = context or {}


class InputError(SolverError):
    """Exception raised for invalid user input."""
    pass


class ParseError(InputError):
    """Exception raised for malformed JSON or TSPLIB input."""
    pass


class MetricViolationError(InputError):
    """Exception raised when a cost function violates the triangle inequality."""

    def __init__(self, triple, message: Optional[str] = None):
        u, v, w = triple
        super().__init__(
            message or f"Triangle inequality violated: c({u},{w}) > c({u},{v}) + c({v},{w})",
            {'triple': [u, v, w]}
        )
        self.triple = triple


class DisconnectedError(InputError):
    """Exception raised when a cost support graph is disconnected."""
    pass


class CapExceededError(InputError):
    """Exception raised when a configured size cap is exceeded."""
    pass


class InternalError(SolverError):
    """Exception raised when a structural guarantee fails."""
    pass


class ChainViolationError(InternalError):
    """Exception raised when two narrow cuts cross."""
    pass


class PartitionInfeasibleError(InternalError):
    """Exception raised when the matroid partition finds a violating set."""

    def __init__(self, violating_set, message: Optional[str] = None):
        super().__init__(
            message or f"Matroid partition infeasible; violating set has {len(violating_set)} edges",
            {'violating_set': sorted(violating_set)}
        )
        self.violating_set = violating_set


class ParityError(InternalError):
    """Exception raised when a multigraph is not a connected {s,t}-tour."""
    pass


class CertificationError(InternalError):
    """Exception raised when a ledger inequality fails."""
    pass
