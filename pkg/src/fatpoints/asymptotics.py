"""Regularity of symbolic powers, negative curves, s-invariants and σ-series.

reg(I^(m)) = a2(m) + 2, where a2(m) is the largest n with
H^1(X, O_X(nA - mE)) != 0.  h1 vanishes for n >= abc*m*sum(e_i) - 1, and that
cap is checked at runtime before any search below it.
"""

from __future__ import annotations

import csv
import io
import logging
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import isqrt
from typing import Sequence, Union

from .cohomology import DivisorClass, h1, pair
from .errors import InvalidInput, InvariantViolation
from .linsys import FatPointScheme, WeightedForm, basis_forms, d_min, h0
from .parallel import pmap
from .plane import dim_S

log = logging.getLogger(__name__)

SQRT = "sqrt(abcu)"
SValue = Union[Fraction, str]


def _check_cap(scheme: FatPointScheme, m: int) -> int:
    N = scheme.h1_cap(m)
    if h1(scheme, N, m) != 0:
        raise InvariantViolation(f"h1({N}, {m}) != 0 at the vanishing cap for {scheme.plane}")
    return N


def a2_scan(scheme: FatPointScheme, m: int) -> int:
    """Largest n with h1(n, m) != 0, scanning down from the cap."""
    if m < 1:
        raise InvalidInput("a2 needs m >= 1")
    n = _check_cap(scheme, m)
    while h1(scheme, n, m) == 0:
        n -= 1
    return n


def a2(scheme: FatPointScheme, m: int) -> int:
    """Largest n with h1(n, m) != 0.

    Multiplying by the smallest-weight variable w (nonzero at every point)
    can only raise the evaluation rank, so h1 is nonincreasing along each
    residue class mod w.  Each class is bisected between a degree with
    dim_S(n) < L(m) (h1 > 0 forced) and one at or above the cap (h1 = 0).
    """
    if m < 1:
        raise InvalidInput("a2 needs m >= 1")
    N = _check_cap(scheme, m)
    plane = scheme.plane
    w = min(plane.weights)
    L = scheme.conditions(m)
    best = None
    for top in range(N, N + w):
        lo = top - w
        while dim_S(plane, lo) >= L:
            lo -= w
        hi = top
        while hi - lo > w:
            mid = lo + ((hi - lo) // w // 2) * w
            if h1(scheme, mid, m) > 0:
                lo = mid
            else:
                hi = mid
        best = lo if best is None else max(best, lo)
    return best


def regularity(scheme: FatPointScheme, m: int) -> int:
    return a2(scheme, m) + 2


def _reg_cell(args: tuple[FatPointScheme, int]) -> int:
    return regularity(*args)


def regularity_series(scheme: FatPointScheme, m_max: int, workers: int = 1) -> list[int]:
    """[reg(1), ..., reg(m_max)]."""
    return pmap(_reg_cell, [(scheme, m) for m in range(1, m_max + 1)], workers)


@dataclass
class NegativeCurveCertificate:
    d: int
    m0: int
    self_int: Fraction
    s_candidate: Fraction
    witness: WeightedForm
    h0_at_class: int

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "m0": self.m0,
            "self_int": fraction_str(self.self_int),
            "s_candidate": fraction_str(self.s_candidate),
            "witness": str(self.witness),
            "h0_at_class": self.h0_at_class,
        }


def fraction_str(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _d_min_cell(args: tuple[FatPointScheme, int]) -> int:
    return d_min(*args)


def d_min_series(scheme: FatPointScheme, m_max: int, workers: int = 1) -> list[int]:
    return pmap(_d_min_cell, [(scheme, m) for m in range(1, m_max + 1)], workers)


def is_negative(scheme: FatPointScheme, d: int, m: int) -> bool:
    """d^2 < abc*u*m^2, i.e. the class dA - mE has negative self-intersection."""
    return d * d < scheme.plane.abc * scheme.u * m * m


def certificate(scheme: FatPointScheme, d: int, m0: int) -> NegativeCurveCertificate:
    plane, u = scheme.plane, scheme.u
    D = DivisorClass(d, m0)
    cert = NegativeCurveCertificate(
        d=d,
        m0=m0,
        self_int=pair(D, D, plane, u),
        s_candidate=Fraction(plane.abc * u * m0, d),
        witness=basis_forms(scheme, d, m0)[0],
        h0_at_class=h0(scheme, d, m0),
    )
    if not (cert.self_int < 0 and cert.h0_at_class >= 1):
        raise InvariantViolation(f"bad certificate {cert}")
    return cert


def negative_curve_search(scheme: FatPointScheme, m_max: int,
                          workers: int = 1) -> NegativeCurveCertificate | None:
    """First m <= m_max whose least effective degree d satisfies d^2 < abc*u*m^2."""
    if m_max < 1:
        raise InvalidInput("m_max must be >= 1")
    for m, d in enumerate(d_min_series(scheme, m_max, workers), start=1):
        if is_negative(scheme, d, m):
            return certificate(scheme, d, m)
    return None


def floor_sm(s: SValue, m: int, abcu: int) -> int:
    """floor(s*m), exactly; for the sqrt marker this is isqrt(abcu*m^2)."""
    if s == SQRT:
        return isqrt(abcu * m * m)
    s = Fraction(s)
    return (s.numerator * m) // s.denominator


@dataclass
class SigmaSeries:
    s_used: SValue
    entries: list[tuple[int, int, int, int]] = dc_field(default_factory=list)  # (m, reg, floor_sm, sigma)
    period: int | None = None

    @property
    def bound(self) -> int:
        return max((abs(e[3]) for e in self.entries), default=0)

    @property
    def sigmas(self) -> list[int]:
        return [e[3] for e in self.entries]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(("m", "reg", "floor_sm", "sigma"))
        w.writerows(self.entries)
        return buf.getvalue()


def sigma_from_regs(scheme: FatPointScheme, s: SValue, regs: Sequence[int]) -> SigmaSeries:
    abcu = scheme.plane.abc * scheme.u
    series = SigmaSeries(s if s == SQRT else Fraction(s))
    for m, reg in enumerate(regs, start=1):
        f = floor_sm(s, m, abcu)
        series.entries.append((m, reg, f, reg - f))
    return series


def sigma_series(scheme: FatPointScheme, s: SValue, m_max: int, workers: int = 1) -> SigmaSeries:
    """σ(m) = reg(m) - floor(s*m) for m = 1..m_max."""
    return sigma_from_regs(scheme, s, regularity_series(scheme, m_max, workers))


def detect_period(series: SigmaSeries, p_max: int, tail_start: int) -> int | None:
    """Smallest P <= p_max with σ(m + P) = σ(m) on [tail_start, m_max - P].

    A period only counts if the window holds at least one full repetition
    (m_max - tail_start + 1 >= 2P).
    """
    sig = dict((e[0], e[3]) for e in series.entries)
    m_max = max(sig, default=0)
    if tail_start >= m_max:
        raise InvalidInput("tail_start must be below m_max")
    for P in range(1, p_max + 1):
        if m_max - tail_start + 1 < 2 * P:
            break
        if all(sig[m + P] == sig[m] for m in range(tail_start, m_max - P + 1)):
            series.period = P
            return P
    return None


def tau_upper_bound(scheme: FatPointScheme, m_max: int, workers: int = 1) -> Fraction:
    """min over m <= m_max of d_min(m)/m."""
    if m_max < 1:
        raise InvalidInput("m_max must be >= 1")
    return min(Fraction(d, m) for m, d in enumerate(d_min_series(scheme, m_max, workers), start=1))


def s_invariant(scheme: FatPointScheme, m_max: int, workers: int = 1) -> dict:
    """Empirical s-invariant report.

    The candidate from a negative curve is not certified (irreducibility is
    not checked).  The verdict is "consistent" when max|σ| over the upper half
    of the window does not exceed max|σ| over the lower half.
    """
    if m_max < 2:
        raise InvalidInput("m_max must be >= 2")
    plane = scheme.plane
    abcu = plane.abc * scheme.u
    cert = negative_curve_search(scheme, m_max, workers)
    regs = regularity_series(scheme, m_max, workers)
    s: SValue = cert.s_candidate if cert is not None else SQRT
    if cert is not None and cert.s_candidate ** 2 <= abcu:
        raise InvariantViolation("negative curve gave s candidate <= sqrt(abcu)")
    series = sigma_from_regs(scheme, s, regs)
    half = m_max // 2
    low = max(abs(x) for x in series.sigmas[:half])
    high = max(abs(x) for x in series.sigmas[half:])
    return {
        "weights": list(plane.weights),
        "u": scheme.u,
        "abcu": abcu,
        "s_lower_bound_sq": abcu,
        "certificate": cert.to_json() if cert is not None else None,
        "s_used": s if s == SQRT else fraction_str(s),
        "reg_over_m": [{"m": m, "reg": r, "ratio": fraction_str(Fraction(r, m))}
                       for m, r in enumerate(regs, start=1)],
        "sigma": series.sigmas,
        "sigma_bound": series.bound,
        "verdict": "consistent" if high <= low else "inconsistent",
    }
