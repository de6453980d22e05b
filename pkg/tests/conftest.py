"""
Shared fixtures for the workbench tests
"""

import pytest

from app import create_app
from app.core.config import SettingsManager, TestingConfig
from app.services import catalog


@pytest.fixture
def app():
    application = create_app(TestingConfig)
    yield application


@pytest.fixture
def client(app):
    return app.test_client()


@pytest.fixture
def settings(tmp_path):
    """Settings manager on a private file with an empty environment"""
    return SettingsManager(str(tmp_path / 'config' / 'config.json'), environ={})


@pytest.fixture
def cos_quarter():
    """cos(pi x / 4) on [-1, 1]"""
    return catalog.builtin('cos-scaled', 4)


@pytest.fixture
def exp_target():
    return catalog.builtin('exp')
