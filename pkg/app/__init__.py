"""
Okounkov Bodies: exact Zariski decompositions, Okounkov polygons, toric
realization and slice bodies
Flask Application Factory
"""
import logging

from flask import Flask
from flask.logging import default_handler

from app.config import config


def configure_logging(level) -> None:
    """Route the package loggers to stderr so stdout carries only JSON"""
    logger = logging.getLogger('app')
    if default_handler not in logger.handlers:
        logger.addHandler(default_handler)
    logger.setLevel(level)


def create_app(config_name: str = 'default') -> Flask:
    """
    Application Factory Pattern
    Creates the Flask application and registers the command blueprints
    """
    if config_name not in config:
        raise KeyError(f"Unknown configuration {config_name!r}; choose from {sorted(config)}")

    app = Flask(__name__)
    app.config.from_object(config[config_name])
    configure_logging(app.config['LOG_LEVEL'])

    # Register blueprints
    from app.blueprints.surfaces import surfaces_bp
    from app.blueprints.polygons import polygons_bp
    from app.blueprints.toric import toric_bp
    from app.blueprints.slices import slices_bp
    from app.blueprints.verify import verify_bp

    app.register_blueprint(surfaces_bp)
    app.register_blueprint(polygons_bp)
    app.register_blueprint(toric_bp)
    app.register_blueprint(slices_bp)
    app.register_blueprint(verify_bp)

    return app
