"""
Configuration settings for the Rational Approximation Workbench
Environment-driven Config classes and the JSON-backed settings manager
"""

import json
import os
from pathlib import Path
from typing import Any, Dict, Optional


class Config:
    """Base configuration class"""

    # Flask settings
    SECRET_KEY = os.environ.get('SECRET_KEY') or 'dev-secret-key-change-in-production'
    JSON_SORT_KEYS = True

    # Logging settings
    LOG_LEVEL = os.environ.get('LOG_LEVEL', 'INFO')
    LOG_DIR = os.environ.get('LOG_DIR', 'config')
    LOG_TO_FILE = os.environ.get('LOG_TO_FILE', '').lower() in ('1', 'true', 'yes', 'on')

    # Numerical defaults
    CHECKPOINTS = os.environ.get('RATAPPROX_CHECKPOINTS')
    QUADRATURE_NODES = os.environ.get('RATAPPROX_QUADRATURE_NODES')

    @staticmethod
    def init_app(app):
        """Initialize application with config"""
        pass


class DevelopmentConfig(Config):
    """Development configuration"""
    DEBUG = True


class ProductionConfig(Config):
    """Production configuration"""
    DEBUG = False


class TestingConfig(Config):
    """Testing configuration"""
    TESTING = True
    CHECKPOINTS = '400'


config = {
    'development': DevelopmentConfig,
    'production': ProductionConfig,
    'testing': TestingConfig,
    'default': DevelopmentConfig
}


class SettingsManager:
    """Manages numerical defaults and their persistence"""

    DEFAULT_SETTINGS = {
        'quadrature_nodes': 128,
        'checkpoints': 2000,
        'remez_tolerance': 1e-2,
        'remez_max_cycles': 50,
        'remez_max_inner': 20,
        'output_dir': 'output',
        'log_dir': 'config',
        'log_to_file': False
    }

    # (lower, upper) bounds for clamped integer settings
    INTEGER_BOUNDS = {
        'quadrature_nodes': (8, 4096),
        'checkpoints': (50, 200000),
        'remez_max_cycles': (1, 500),
        'remez_max_inner': (1, 200)
    }

    ENVIRONMENT_OVERRIDES = {
        'checkpoints': 'RATAPPROX_CHECKPOINTS',
        'quadrature_nodes': 'RATAPPROX_QUADRATURE_NODES',
        'output_dir': 'RATAPPROX_OUTPUT_DIR',
        'log_dir': 'LOG_DIR'
    }

    def __init__(self, config_file: str = 'config/config.json',
                 environ: Optional[Dict[str, str]] = None):
        """Initialize the settings manager

        Args:
            config_file: Path to the configuration file
            environ: Environment mapping (defaults to os.environ)
        """
        self.config_file = Path(config_file)
        self.environ = os.environ if environ is None else environ
        self.settings = self.load_settings()

    def load_settings(self) -> Dict[str, Any]:
        """Load settings from the configuration file and environment

        Returns:
            Dictionary containing the current settings
        """
        settings = self.DEFAULT_SETTINGS.copy()
        if self.config_file.exists():
            try:
                with open(self.config_file, 'r', encoding='utf-8') as f:
                    loaded_settings = json.load(f)
                if isinstance(loaded_settings, dict):
                    settings.update(loaded_settings)
            except (json.JSONDecodeError, IOError) as e:
                from app.services.logging_service import logging_service
                logging_service.warning(f"Could not load settings from {self.config_file}: {e}", 'config')

        for key, variable in self.ENVIRONMENT_OVERRIDES.items():
            value = self.environ.get(variable)
            if value not in (None, ''):
                settings[key] = value

        return self.validate_settings(settings)

    def save_settings(self, settings: Dict[str, Any]) -> bool:
        """Save settings to the configuration file

        Args:
            settings: Dictionary containing the settings to save

        Returns:
            True if successful, False otherwise
        """
        try:
            self.config_file.parent.mkdir(parents=True, exist_ok=True)
            validated_settings = self.validate_settings(settings)

            with open(self.config_file, 'w', encoding='utf-8') as f:
                json.dump(validated_settings, f, indent=2, sort_keys=True)

            self.settings = validated_settings
            return True
        except (IOError, OSError):
            return False

    def validate_settings(self, settings: Dict[str, Any]) -> Dict[str, Any]:
        """Validate and sanitize settings

        Args:
            settings: Raw settings dictionary

        Returns:
            Validated and sanitized settings dictionary
        """
        validated = {}

        # Numeric settings with bounds checking
        for key, (lower, upper) in self.INTEGER_BOUNDS.items():
            value = settings.get(key)
            try:
                validated[key] = max(lower, min(upper, int(value)))
            except (ValueError, TypeError):
                validated[key] = self.DEFAULT_SETTINGS[key]

        tolerance = settings.get('remez_tolerance')
        try:
            tolerance = float(tolerance)
            validated['remez_tolerance'] = max(1e-8, min(0.5, tolerance))
        except (ValueError, TypeError):
            validated['remez_tolerance'] = self.DEFAULT_SETTINGS['remez_tolerance']

        for key in ('output_dir', 'log_dir'):
            value = str(settings.get(key) or '').strip()
            validated[key] = value or self.DEFAULT_SETTINGS[key]

        log_to_file = settings.get('log_to_file', False)
        if isinstance(log_to_file, str):
            log_to_file = log_to_file.strip().lower() in ('1', 'true', 'yes', 'on')
        validated['log_to_file'] = bool(log_to_file)

        return validated

    def get_setting(self, key: str, default: Any = None) -> Any:
        """Get a specific setting value

        Args:
            key: Setting key to retrieve
            default: Default value if setting doesn't exist

        Returns:
            Setting value or default
        """
        return self.settings.get(key, default)

    def set_setting(self, key: str, value: Any) -> bool:
        """Set a specific setting value and persist it"""
        self.settings[key] = value
        return self.save_settings(self.settings)

    def get_all_settings(self) -> Dict[str, Any]:
        """Get all current settings"""
        return self.settings.copy()

    def create_example_config(self) -> bool:
        """Write an example configuration file

        Returns:
            True if successful, False otherwise
        """
        try:
            self.config_file.parent.mkdir(parents=True, exist_ok=True)
            example_config = dict(self.DEFAULT_SETTINGS)
            example_config['_comment'] = (
                'quadrature_nodes: Gauss-Chebyshev nodes s; checkpoints: error-curve grid size; '
                'environment variables RATAPPROX_CHECKPOINTS and RATAPPROX_QUADRATURE_NODES override these'
            )
            with open(self.config_file, 'w', encoding='utf-8') as f:
                json.dump(example_config, f, indent=2, sort_keys=True)
            return True
        except (IOError, OSError):
            return False


# Global settings manager instance
settings_manager = SettingsManager()
