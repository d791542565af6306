import os
from fractions import Fraction


class Config:
    """Base configuration class with common settings."""

    # Serialization settings
    JSON_SORT_KEYS = True
    JSON_INDENT = 2

    # Exit codes shared by every CLI command
    EXIT_OK = 0
    EXIT_ASSERTION_FAILURE = 1
    EXIT_INPUT_ERROR = 2

    DEBUG = False
    TESTING = False

    def __init__(self):
        """Initialize configuration with environment variables."""
        # Solver caps (loaded at runtime)
        self.K_CAP = int(os.environ.get('K_CAP', 2 ** 16))
        self.MATCHING_CAP = int(os.environ.get('MATCHING_CAP', 20))
        self.BRUTE_FORCE_CAP = int(os.environ.get('BRUTE_FORCE_CAP', 16))
        self.ENUMERATION_CAP = int(os.environ.get('ENUMERATION_CAP', 20))

        # Pipeline settings
        self.THREADS = int(os.environ.get('THREADS', 1))
        self.GAMMA = Fraction(os.environ.get('GAMMA', '1/16'))

        # Bench defaults
        self.BENCH_SEEDS = int(os.environ.get('BENCH_SEEDS', 200))
        self.BENCH_N_MIN = int(os.environ.get('BENCH_N_MIN', 5))
        self.BENCH_N_MAX = int(os.environ.get('BENCH_N_MAX', 12))

        self.LOG_LEVEL = os.environ.get('LOG_LEVEL', 'INFO').upper()

    def to_dict(self):
        """Return every upper-case setting as a plain dict."""
        return {
            key: getattr(self, key)
            for key in dir(self)
            if key.isupper()
        }

    @staticmethod
    def init_app(app):
        """Initialize application with configuration-specific settings."""
        pass


class DevelopmentConfig(Config):
    """Development configuration with debug logging enabled."""
    DEBUG = True
    TESTING = False

    def __init__(self):
        """Initialize development configuration with environment variables."""
        super().__init__()
        self.LOG_LEVEL = os.environ.get('LOG_LEVEL', 'DEBUG').upper()

    @staticmethod
    def init_app(app):
        """Initialize development-specific settings."""
        Config.init_app(app)


class TestingConfig(Config):
    """Testing configuration optimized for test execution."""
    DEBUG = False
    TESTING = True

    def __init__(self):
        """Initialize testing configuration with environment variables."""
        super().__init__()
        # Smaller bench runs for tests
        self.BENCH_SEEDS = 4
        self.BENCH_N_MIN = 5
        self.BENCH_N_MAX = 7
        self.THREADS = 2

    @staticmethod
    def init_app(app):
        """Initialize testing-specific settings."""
        Config.init_app(app)

        # Disable logging during tests unless explicitly enabled
        import logging
        if not os.environ.get('ENABLE_TEST_LOGGING'):
            logging.disable(logging.CRITICAL)


class ProductionConfig(Config):
    """Production configuration for long benchmark runs."""
    DEBUG = False
    TESTING = False

    def __init__(self):
        """Initialize production configuration with environment variables."""
        super().__init__()
        self.LOG_FILE = os.environ.get('LOG_FILE', 'logs/stpath.log')

    @staticmethod
    def init_app(app):
        """Initialize production-specific settings."""
        Config.init_app(app)

        # Production logging configuration
        import logging
        from logging.handlers import RotatingFileHandler

        if not app.debug and not app.testing:
            log_file = app.config.get('LOG_FILE', 'logs/stpath.log')
            logs_dir = os.path.dirname(log_file)
            if logs_dir and not os.path.exists(logs_dir):
                os.makedirs(logs_dir)

            # File handler for production logs
            file_handler = RotatingFileHandler(
                log_file,
                maxBytes=10240000,
                backupCount=10
            )
            file_handler.setFormatter(logging.Formatter(
                '%(asctime)s %(levelname)s: %(message)s [in %(pathname)s:%(lineno)d]'
            ))
            file_handler.setLevel(logging.INFO)
            app.logger.addHandler(file_handler)
            app.logger.setLevel(logging.INFO)
            app.logger.info('stpath startup')


# Configuration mapping
config = {
    'development': DevelopmentConfig,
    'testing': TestingConfig,
    'production': ProductionConfig,
    'default': DevelopmentConfig
}
