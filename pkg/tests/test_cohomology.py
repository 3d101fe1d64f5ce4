from fractions import Fraction

import pytest

from fatpoints.cohomology import (DivisorClass, cartier_records, chi_rr, cohomology_table, h1, h2,
                                  pair, parse_table_csv, record, rr_defect, table_csv)
from fatpoints.linsys import FatPointScheme, UpstreamPoint
from fatpoints.plane import WeightedPlane, dim_S
from tests.conftest import ONE, golden
from tests.oracles import oracle_h0

P123 = WeightedPlane(1, 2, 3)


def test_pairing_examples():
    A, E = DivisorClass(1, 0), DivisorClass(0, -1)
    assert pair(A, A, P123, 1) == Fraction(1, 6)
    assert pair(E, E, P123, 1) == -1
    assert pair(A, E, P123, 5) == 0
    D = DivisorClass(2, 1)
    assert pair(D, D, P123, 1) == Fraction(-1, 3)


def test_chi_rr_examples(s111, s123):
    assert chi_rr(DivisorClass(0, 0), s123) == 1
    assert chi_rr(DivisorClass(3, 2), s111) == 7
    assert chi_rr(DivisorClass(6, 1), s123) == 6


def test_chi_rr_ordinary_plane_closed_form(s111):
    for n in range(-6, 12):
        for m in range(0, 6):
            assert chi_rr(DivisorClass(n, m), s111) == Fraction(n * (n + 3) - m * (m + 1), 2) + 1


def test_h2_examples():
    for w in [(1, 1, 1), (1, 2, 3), (2, 3, 5)]:
        plane = WeightedPlane(*w)
        assert all(h2(plane, n) == 0 for n in range(-plane.kappa + 1, 40))
        assert h2(plane, -plane.kappa) == 1
    assert h2(WeightedPlane(1, 1, 1), -4) == 3
    assert h2(P123, -6) == 1


def test_h1_examples(s111, s123):
    assert all(h1(s123, n, 0) == 0 for n in range(-10, 10))
    assert h1(s111, -1, 1) == 1
    assert h1(s123, 2, 2) == 1


def test_table_m1_on_123(s123):
    recs = cohomology_table(s123, range(0, 7), [1])
    assert [r.h0 for r in recs] == [0, 0, 1, 2, 3, 4, 6]
    assert [r.h0 for r in recs] == [oracle_h0((1, 2, 3), [(1, 1, 1)], [1], n, 1, None) for n in range(7)]
    assert all(r.h1 == 0 for r in recs)


def test_table_m0_is_dim(s235):
    recs = cohomology_table(s235, range(-12, 30), [0])
    assert [r.h0 for r in recs] == [dim_S(s235.plane, n) for n in range(-12, 30)]


def test_single_point_record(s111):
    assert record(s111, 3, 2) == record(s111, 3, 2)
    r = record(s111, 3, 2)
    assert (r.h0, r.h1, r.h2, r.chi) == (7, 0, 0, 7)


def test_table_sorted_and_chi_identity(s123):
    recs = cohomology_table(s123, range(-8, 15), range(0, 4))
    assert [(r.m, r.n) for r in recs] == sorted((r.m, r.n) for r in recs)
    assert all(r.chi == r.h0 - r.h1 + r.h2 for r in recs)
    assert all(min(r.h0, r.h1, r.h2) >= 0 for r in recs)


def test_rr_on_cartier_classes_two_points():
    s = FatPointScheme(P123, (ONE, UpstreamPoint.parse("2,-1,3")), (1, 2))
    recs = cohomology_table(s, range(-12, 61, 6), range(0, 5))
    assert all(rr_defect(s, r) == 0 for r in recs)


def test_rr_fails_on_weil_class(s123):
    # the orbifold correction is nonzero for 2A - E on P(1,2,3)
    assert rr_defect(s123, record(s123, 2, 1)) != 0


@pytest.mark.parametrize("weights", [(1, 2, 3), (2, 3, 5)])
def test_serre_tail(weights):
    s = golden(weights)
    for m in range(1, 5):
        for n in range(-15, 0):
            assert h1(s, n, m) == s.conditions(m)


def test_csv_roundtrip(s123):
    recs = cohomology_table(s123, range(0, 5), range(0, 2))
    text = table_csv(s123, recs)
    assert text.splitlines()[0] == "a,b,c,u,n,m,h0,h1,h2,chi"
    assert text.splitlines()[1] == "1,2,3,1,0,0,1,0,0,1"
    assert parse_table_csv(text) == recs
    assert cartier_records(s123, recs) == [r for r in recs if r.n % 6 == 0]
