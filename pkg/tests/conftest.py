import pytest

from protorelay.families import builtin_registry
from protorelay.lifting import lift_code
from protorelay.relay import desk_be, desk_bl, desk_two_relay

# Smoke-scale lifting factor shared across the suite: divisible by 12 so
# every relay overlay lifts integrally, and large enough that all stage-2
# circulant lifts exist at seed 0.
SMOKE_F = 96


@pytest.fixture(scope="session")
def reg():
    return builtin_registry()


@pytest.fixture(scope="session")
def bl12_q25(reg):
    return lift_code(reg["BL-1/2"], 25, name="BL-1/2")


@pytest.fixture(scope="session")
def be_desk(reg):
    return desk_be(SMOKE_F)


@pytest.fixture(scope="session")
def bl_desk(reg):
    return desk_bl(SMOKE_F)


@pytest.fixture(scope="session")
def two_desk(reg):
    return desk_two_relay(SMOKE_F)
