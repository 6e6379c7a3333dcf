import pytest
from hypothesis import HealthCheck, settings

from floydhull.conedoff import ConeSpec, build_coned_graph
from floydhull.graph import cayley_ball, cycle_graph
from floydhull.words import Alphabet, Subgroup

settings.register_profile("repo", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("repo")


@pytest.fixture(scope="session")
def F2():
    return Alphabet.free(2)


@pytest.fixture(scope="session")
def tree2(F2):
    return cayley_ball(F2, 2)


@pytest.fixture(scope="session")
def tree3(F2):
    return cayley_ball(F2, 3)


@pytest.fixture(scope="session")
def tree4(F2):
    return cayley_ball(F2, 4)


@pytest.fixture(scope="session")
def square():
    return cycle_graph(4)


def coned_axis(alphabet, radius):
    ball = cayley_ball(alphabet, radius)
    return build_coned_graph(ball, [ConeSpec(Subgroup.free_factor([0]))])


@pytest.fixture(scope="session")
def coned3(F2):
    return coned_axis(F2, 3)


@pytest.fixture(scope="session")
def coned4(F2):
    return coned_axis(F2, 4)
