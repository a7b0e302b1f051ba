"""
Shared pytest fixtures
"""
import pytest

from app import create_app
from app.models.surface import FlagData
from app.services.surface_service import SurfaceService


@pytest.fixture
def app():
    return create_app('testing')


@pytest.fixture
def runner(app):
    return app.test_cli_runner()


@pytest.fixture
def f1():
    return SurfaceService.load_fixture('f1')


@pytest.fixture
def bl2p2():
    return SurfaceService.load_fixture('bl2p2')


@pytest.fixture
def p2():
    return SurfaceService.load_fixture('p2')


@pytest.fixture
def p1xp1():
    return SurfaceService.load_fixture('p1xp1')


@pytest.fixture
def k3():
    return SurfaceService.load_fixture('cutkosky_k3')


@pytest.fixture
def e_times_e():
    return SurfaceService.load_fixture('e_times_e')


@pytest.fixture
def fiber_flag():
    """Fiber H - E of F1 through a point on E"""
    return FlagData(curve=[1, -1], multiplicities={'E': 1})