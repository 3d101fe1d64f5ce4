import pytest

from fatpoints.errors import InvalidInput
from fatpoints.plane import WeightedPlane, dim_S, enumerate_monomials, is_cartier
from tests.oracles import brute_monomials

PLANES = [(1, 1, 1), (1, 2, 3), (2, 3, 5), (3, 4, 5), (1, 1, 2)]


def test_enumerate_examples():
    assert len(enumerate_monomials(WeightedPlane(1, 1, 1), 4)) == 15
    assert enumerate_monomials(WeightedPlane(2, 3, 5), 1) == ()
    got = enumerate_monomials(WeightedPlane(1, 2, 3), 6)
    assert set(got) == {(6, 0, 0), (4, 1, 0), (2, 2, 0), (0, 3, 0), (3, 0, 1), (1, 1, 1), (0, 0, 2)}


def test_descending_lex_order():
    monos = enumerate_monomials(WeightedPlane(1, 2, 3), 6)
    assert list(monos) == sorted(monos, reverse=True)
    assert enumerate_monomials(WeightedPlane(1, 2, 3), 2) == ((2, 0, 0), (0, 1, 0))


@pytest.mark.parametrize("d", range(0, 15))
def test_dim_ordinary_plane(d):
    assert dim_S(WeightedPlane(1, 1, 1), d) == (d + 1) * (d + 2) // 2


def test_dim_examples():
    assert dim_S(WeightedPlane(1, 2, 3), 2) == 2
    for w in PLANES:
        assert dim_S(WeightedPlane(*w), -1) == 0


@pytest.mark.parametrize("weights", PLANES)
def test_generating_function(weights):
    a, b, c = weights
    N = 200
    series = [0] * (N + 1)
    series[0] = 1
    for w in weights:  # multiply by 1/(1 - t^w)
        for n in range(w, N + 1):
            series[n] += series[n - w]
    plane = WeightedPlane(a, b, c)
    assert [dim_S(plane, n) for n in range(N + 1)] == series


@pytest.mark.parametrize("weights", PLANES)
def test_enumeration_complete_and_duplicate_free(weights):
    plane = WeightedPlane(*weights)
    for n in range(0, 25):
        got = enumerate_monomials(plane, n)
        assert len(set(got)) == len(got)
        assert set(got) == brute_monomials(*weights, n)
        assert all(mono.degree(plane) == n for mono in got)


@pytest.mark.parametrize("weights", [(2, 3, 5), (3, 4, 5), (2, 5, 7)])
def test_positive_beyond_frobenius_bound(weights):
    a, b, c = weights
    plane = WeightedPlane(a, b, c)
    start = a * b + a * c + b * c
    assert all(dim_S(plane, n) > 0 for n in range(start, start + 100))


def test_cartier():
    assert is_cartier(WeightedPlane(1, 2, 3), 6)
    assert not is_cartier(WeightedPlane(1, 2, 3), 4)
    assert all(is_cartier(WeightedPlane(1, 1, 1), n) for n in range(-5, 5))


@pytest.mark.parametrize("weights", [(2, 4, 5), (1, 3, 3), (0, 1, 1), (-1, 2, 3)])
def test_bad_weights(weights):
    with pytest.raises(InvalidInput):
        WeightedPlane(*weights)


def test_derived_invariants():
    plane = WeightedPlane(2, 3, 5)
    assert (plane.abc, plane.lcm, plane.kappa) == (30, 30, 10)
    assert WeightedPlane.parse("1,2,3") == WeightedPlane(1, 2, 3)
