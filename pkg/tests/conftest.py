import pytest

from coarsetop.groups import FreeAbelian, FreeGroup, build_ball
from coarsetop.fixtures import grid_fixture


@pytest.fixture(scope="session")
def z_ball_24():
    return build_ball(FreeAbelian(1), 24)


@pytest.fixture(scope="session")
def z_ball_12():
    return build_ball(FreeAbelian(1), 12)


@pytest.fixture(scope="session")
def z2_ball_16():
    return build_ball(FreeAbelian(2), 16)


@pytest.fixture(scope="session")
def z2_ball_12():
    return build_ball(FreeAbelian(2), 12)


@pytest.fixture(scope="session")
def z2_ball_10():
    return build_ball(FreeAbelian(2), 10)


@pytest.fixture(scope="session")
def f2_ball_6():
    return build_ball(FreeGroup(2), 6)


@pytest.fixture(scope="session")
def fig1_12():
    return grid_fixture("fig1_halfplane_flap", 12)


@pytest.fixture(scope="session")
def fig2_12():
    return grid_fixture("fig2_plane_fin", 12)


@pytest.fixture(scope="session")
def line_in_plane_8():
    return grid_fixture("line_in_plane", 8)
