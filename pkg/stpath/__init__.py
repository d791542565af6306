"""
stpath: exact-rational solver and certification toolkit for the metric
s-t path TSP (best-of-many with deletion).
"""
import logging
from typing import Any, Dict

from config import config

__version__ = '1.0.0'


class SolverApp:
    """
    Configured application object shared by the CLI, scripts and tests.

    Attributes:
        name: Logger name of the application
        config: Plain dict of settings copied from the configuration object
        logger: Application logger
    """

    def __init__(self, name: str = 'stpath'):
        self.name = name
        self.config: Dict[str, Any] = {}
        self.logger = logging.getLogger(name)

    @property
    def debug(self) -> bool:
        return bool(self.config.get('DEBUG'))

    @property
    def testing(self) -> bool:
        return bool(self.config.get('TESTING'))

    def bomd_service(self):
        """Build a BomdService wired to this application's caps."""
        from stpath.services.bomd_service import BomdService
        return BomdService.from_config(self.config)

    def instance_service(self):
        """Build an InstanceService for this application."""
        from stpath.services.instance_service import InstanceService
        return InstanceService()

    def artifact_repository(self, base_dir=None):
        """Build an ArtifactRepository using the JSON settings of this application."""
        from stpath.repositories.artifact_repository import ArtifactRepository
        return ArtifactRepository(
            base_dir=base_dir,
            indent=self.config.get('JSON_INDENT', 2),
            sort_keys=self.config.get('JSON_SORT_KEYS', True)
        )

    def exit_code(self, name: str) -> int:
        """Exit code configured under EXIT_<name>."""
        return self.config[f'EXIT_{name}']


def create_app(config_name='default'):
    """
    Application factory for creating configured SolverApp instances.

    Args:
        config_name (str): Configuration name ('development', 'testing', 'production')

    Returns:
        SolverApp: Configured application instance
    """
    app = SolverApp()

    # Load configuration
    config_class = config.get(config_name, config['default'])
    config_obj = config_class()  # Create instance at runtime
    app.config.update(config_obj.to_dict())
    app.config['ENV'] = config_name

    # Initialize configuration-specific settings
    config_obj.init_app(app)

    # Configure logging (basic setup, enhanced in run.py)
    if not app.debug and not app.testing:
        logging.basicConfig(level=logging.INFO)

    return app
