#!/usr/bin/env python3
"""
Entry point for the stpath command-line tool.

Loads a .env file, builds the configured application and hands control to
the click command group.
"""
import logging
import os
import sys

from dotenv import load_dotenv

from stpath import create_app
from stpath.cli import cli


def get_config_name():
    """
    Determine configuration name from environment variables.

    Returns:
        str: Configuration name ('development', 'testing', 'production')
    """
    config_name = (
        os.environ.get('APP_ENV') or
        os.environ.get('ENVIRONMENT') or
        'development'
    )

    # Normalize configuration names
    config_mapping = {
        'dev': 'development',
        'test': 'testing',
        'prod': 'production',
        'production': 'production',
        'development': 'development',
        'testing': 'testing'
    }

    return config_mapping.get(config_name.lower(), 'development')


def setup_logging(app):
    """
    Configure application logging based on environment.

    Args:
        app: SolverApp instance
    """
    if app.config['TESTING']:
        # Minimal logging for tests
        logging.getLogger().setLevel(logging.CRITICAL)
        return

    formatter = logging.Formatter(
        '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
    )

    # Diagnostics go to stderr so JSON written to stdout stays clean
    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setFormatter(formatter)

    level = getattr(logging, app.config.get('LOG_LEVEL', 'INFO'), logging.INFO)
    if app.config['DEBUG']:
        level = logging.DEBUG
    console_handler.setLevel(level)

    root = logging.getLogger()
    root.setLevel(level)
    root.handlers = [console_handler]
    app.logger.setLevel(level)


def create_application():
    """
    Create and configure the application.

    Returns:
        SolverApp: Configured application instance
    """
    load_dotenv()
    config_name = get_config_name()
    app = create_app(config_name)
    setup_logging(app)
    app.logger.debug(f"Application created with {config_name} configuration")
    return app


def main(argv=None):
    """Run the CLI and return its exit code."""
    app = create_application()
    return cli.main(args=argv, obj=app, prog_name='stpath', standalone_mode=True)


if __name__ == '__main__':
    main()
