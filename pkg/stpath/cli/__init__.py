"""
CLI package: the click command group of the solver.
"""
from .commands import cli, handle_service_errors

__all__ = ['cli', 'handle_service_errors']
