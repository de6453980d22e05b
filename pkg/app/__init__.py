"""
Rational Approximation Workbench - Main Application Package
"""

from flask import Flask
from app.core.config import Config
from app.api.routes import api_bp
from app.services.logging_service import logging_service


def create_app(config_class=Config):
    """Application factory pattern"""
    app = Flask(__name__)
    app.config.from_object(config_class)
    app.json.sort_keys = True
    config_class.init_app(app)

    if app.config.get('LOG_TO_FILE'):
        logging_service.configure(log_dir=app.config['LOG_DIR'], level=app.config.get('LOG_LEVEL', 'INFO'))

    # Register blueprints
    app.register_blueprint(api_bp, url_prefix='/api')

    return app
