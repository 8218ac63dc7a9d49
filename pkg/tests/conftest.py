import pytest

from hapsran import EnergyParams, LinkParams, build_scenario, load_channel_tables


@pytest.fixture(scope="session")
def tables():
    return load_channel_tables()


@pytest.fixture(scope="session")
def link():
    return LinkParams()


@pytest.fixture(scope="session")
def energy():
    return EnergyParams()


@pytest.fixture(scope="session")
def small_scenario():
    # desk-size stand-in: 60 base traces matched onto 40 BSs
    return build_scenario(60, 40, seed=11)
