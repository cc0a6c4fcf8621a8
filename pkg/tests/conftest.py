import pytest

from bricklab import fixtures, quiver


@pytest.fixture(scope="session")
def a2():
    return fixtures.algebra("a2")


@pytest.fixture(scope="session")
def k2():
    return fixtures.algebra("k2")


@pytest.fixture(scope="session")
def cn2():
    return fixtures.algebra("cn2")


@pytest.fixture(scope="session")
def n2():
    return fixtures.algebra("n2")


@pytest.fixture(scope="session")
def node():
    return fixtures.algebra("node")


@pytest.fixture(scope="session")
def loop2():
    return fixtures.algebra("loop2")


@pytest.fixture(scope="session")
def a2_mods(a2):
    return {
        "s1": fixtures.module("a2_s1"),
        "s2": fixtures.module("a2_s2"),
        "p2": fixtures.module("a2_p2"),
        "zero": quiver.zero_rep(a2),
    }
