import pytest

from fatpoints.linalg import FieldSpec
from fatpoints.linsys import FatPointScheme, UpstreamPoint, clear_memo
from fatpoints.plane import WeightedPlane

ONE = UpstreamPoint((1, 1, 1))


def golden(weights, field=None):
    field = field or FieldSpec.prime_field()
    return FatPointScheme(WeightedPlane(*weights), (ONE,), (), field)


@pytest.fixture
def s111():
    return golden((1, 1, 1))


@pytest.fixture
def s123():
    return golden((1, 2, 3))


@pytest.fixture
def s235():
    return golden((2, 3, 5))


@pytest.fixture
def fresh_memo():
    clear_memo()
    yield
    clear_memo()
