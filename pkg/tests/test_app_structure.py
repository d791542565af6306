"""Test basic application structure and configuration."""
from fractions import Fraction

from stpath import SolverApp, create_app
from stpath.services.bomd_service import BomdService
from stpath.services.instance_service import InstanceService


def test_app_creation():
    """Test that the app can be created with different configurations."""
    dev_app = create_app('development')
    assert isinstance(dev_app, SolverApp)
    assert dev_app.config['DEBUG'] is True
    assert dev_app.config['LOG_LEVEL'] == 'DEBUG'

    test_app = create_app('testing')
    assert test_app.config['TESTING'] is True
    assert test_app.config['ENV'] == 'testing'


def test_unknown_config_falls_back_to_default():
    """Test an unknown configuration name uses the default configuration."""
    app = create_app('staging')
    assert app.config['DEBUG'] is True


def test_config_values(app):
    """Test that configuration values are set correctly."""
    assert app.config['TESTING'] is True
    assert app.config['THREADS'] == 2
    assert app.config['BENCH_SEEDS'] == 4
    assert app.config['GAMMA'] == Fraction(1, 16)
    assert app.config['EXIT_INPUT_ERROR'] == 2


def test_environment_overrides(monkeypatch):
    """Test caps are read from the environment at creation time."""
    monkeypatch.setenv('MATCHING_CAP', '8')
    monkeypatch.setenv('GAMMA', '1/8')
    app = create_app('testing')

    assert app.config['MATCHING_CAP'] == 8
    assert app.config['GAMMA'] == Fraction(1, 8)


def test_service_builders(app):
    """Test the application builds services wired to its config."""
    service = app.bomd_service()

    assert isinstance(service, BomdService)
    assert service.threads == app.config['THREADS']
    assert isinstance(app.instance_service(), InstanceService)


def test_artifact_repository_follows_json_config(app):
    """Test the repository builder takes indent and key order from the config."""
    app.config['JSON_INDENT'] = 4
    app.config['JSON_SORT_KEYS'] = False
    repository = app.artifact_repository()

    assert repository.indent == 4
    assert repository.sort_keys is False
    assert repository.dumps({'b': 1, 'a': 2}).index('"b"') < repository.dumps({'b': 1, 'a': 2}).index('"a"')


def test_artifact_repository_sorts_keys_by_default(app):
    """Test the default config writes objects with sorted keys."""
    text = app.artifact_repository().dumps({'b': 1, 'a': 2})

    assert text.index('"a"') < text.index('"b"')
    assert text.endswith('\n')


def test_exit_codes_come_from_config(app):
    """Test exit codes are looked up in the config."""
    assert app.exit_code('OK') == 0
    assert app.exit_code('ASSERTION_FAILURE') == 1
    app.config['EXIT_INPUT_ERROR'] = 7
    assert app.exit_code('INPUT_ERROR') == 7
