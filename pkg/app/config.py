"""
Application Configuration
Code-only settings; every behavioural setting also has a CLI flag
"""
import logging


class Config:
    """Base configuration"""
    LOG_LEVEL = logging.WARNING

    # SVG output
    SVG_DECIMALS = 6
    SVG_UNIT_PX = 60
    SLICE_SVG_UNIT_PX = 120

    # Polygon checks
    STRICT_ALPHA_LINT = False
    MAX_WALK_PIECES_SLACK = 1

    # Verification suite
    VERIFY_SEED = 20240611
    VERIFY_RANDOM_CASES = 1000
    VERIFY_SIGN_CASES = 10000
    VERIFY_ROUNDTRIP_POLYGONS = 25
    VERIFY_ZARISKI_DIVISORS = 200
    FANO_SAMPLE_COUNT = 21


class DevelopmentConfig(Config):
    """Development configuration"""
    DEBUG = True
    TESTING = False
    LOG_LEVEL = logging.INFO


class TestingConfig(Config):
    """Testing configuration"""
    DEBUG = True
    TESTING = True
    VERIFY_RANDOM_CASES = 100
    VERIFY_SIGN_CASES = 1000
    VERIFY_ROUNDTRIP_POLYGONS = 5
    VERIFY_ZARISKI_DIVISORS = 40


class VerificationConfig(Config):
    """Full-size acceptance runs"""
    DEBUG = False
    TESTING = False
    LOG_LEVEL = logging.INFO


config = {
    'development': DevelopmentConfig,
    'testing': TestingConfig,
    'verification': VerificationConfig,
    'default': Config
}
