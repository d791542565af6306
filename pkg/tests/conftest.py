import pytest
from click.testing import CliRunner

from stpath import create_app


@pytest.fixture
def app():
    """Create application for testing."""
    return create_app('testing')


@pytest.fixture
def runner():
    """Create test CLI runner."""
    return CliRunner()


@pytest.fixture
def bomd_service(app):
    """BomdService wired to the testing configuration."""
    return app.bomd_service()


# Import fixtures from fixtures.py
from tests.fixtures import (  # noqa: E402,F401
    InstanceFactory, instance_factory, instance_service, fractional_xstar, fractional_metric, triangle,
    collinear_instance, euclidean_instance, graph_metric_instance, fractional_layers, hand_layered
)
