"""Cohomology of O_X(nA - mE) on the blowup X of P(a,b,c) at a fat-point scheme.

All three numbers come from one rank: with Z the fat-point scheme and
ρ = rank of evaluation S_n -> O_Z,

    h0 = dim S_n - ρ,   h1 = L(m) - ρ,   h2 = dim S_(-n-a-b-c),

the last by duality with the canonical class -(a+b+c)A + sum E_i.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, astuple, fields
from fractions import Fraction
from typing import Iterable, Sequence

from .linsys import FatPointScheme, condition_rank, h0
from .parallel import pmap
from .plane import WeightedPlane, dim_S, is_cartier

CSV_HEADER = ("a", "b", "c", "u", "n", "m", "h0", "h1", "h2", "chi")


@dataclass(frozen=True)
class DivisorClass:
    """The class nA - mE."""

    n: int
    m: int

    def __sub__(self, other: DivisorClass) -> DivisorClass:
        return DivisorClass(self.n - other.n, self.m - other.m)


@dataclass(frozen=True)
class CohomologyRecord:
    n: int
    m: int
    h0: int
    h1: int
    h2: int
    chi: int


def pair(D1: DivisorClass, D2: DivisorClass, plane: WeightedPlane, u: int) -> Fraction:
    """Intersection number, from A.A = 1/abc, E.E = -u, A.E = 0."""
    return Fraction(D1.n * D2.n, plane.abc) - D1.m * D2.m * u


def chi_rr(D: DivisorClass, scheme: FatPointScheme) -> Fraction:
    """Riemann-Roch value D.(D - K)/2 + 1 with K = -(a+b+c)A + sum E_i.

    Equals the Euler characteristic only when O_P(n) is invertible.
    """
    plane = scheme.plane
    DD = pair(D, D, plane, scheme.u)
    DK = Fraction(-D.n * plane.kappa, plane.abc) + D.m * scheme.esum
    return (DD - DK) / 2 + 1


def h2(plane: WeightedPlane, n: int) -> int:
    return dim_S(plane, -n - plane.kappa)


def h1(scheme: FatPointScheme, n: int, m: int) -> int:
    return scheme.conditions(m) - condition_rank(scheme, n, m)


def record(scheme: FatPointScheme, n: int, m: int) -> CohomologyRecord:
    a0 = h0(scheme, n, m)
    a1 = h1(scheme, n, m)
    a2 = h2(scheme.plane, n)
    return CohomologyRecord(n, m, a0, a1, a2, a0 - a1 + a2)


def _record_cell(args: tuple[FatPointScheme, int, int]) -> CohomologyRecord:
    return record(*args)


def cohomology_table(scheme: FatPointScheme, n_range: Iterable[int], m_range: Iterable[int],
                     workers: int = 1) -> list[CohomologyRecord]:
    """Records for every (n, m), sorted by (m, n)."""
    cells = sorted({(m, n) for m in m_range for n in n_range})
    recs = pmap(_record_cell, [(scheme, n, m) for m, n in cells], workers)
    return sorted(recs, key=lambda rec: (rec.m, rec.n))


def rr_defect(scheme: FatPointScheme, rec: CohomologyRecord) -> Fraction:
    """chi from counts minus the Riemann-Roch value (zero on Cartier classes)."""
    return rec.chi - chi_rr(DivisorClass(rec.n, rec.m), scheme)


def cartier_records(scheme: FatPointScheme, records: Sequence[CohomologyRecord]) -> list[CohomologyRecord]:
    return [rec for rec in records if is_cartier(scheme.plane, rec.n)]


def table_csv(scheme: FatPointScheme, records: Iterable[CohomologyRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    a, b, c = scheme.plane.weights
    for rec in records:
        w.writerow((a, b, c, scheme.u, *astuple(rec)))
    return buf.getvalue()


def parse_table_csv(text: str) -> list[CohomologyRecord]:
    names = [f.name for f in fields(CohomologyRecord)]
    rows = csv.DictReader(io.StringIO(text))
    return [CohomologyRecord(**{k: int(row[k]) for k in names}) for row in rows]
