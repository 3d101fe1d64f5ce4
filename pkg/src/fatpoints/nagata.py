"""The covering map P^2 -> P(a,b,c), (u:v:w) -> (u^a : v^b : w^c).

Over F_p with abc | p - 1 every point off the coordinate triangle has abc
distinct preimages, obtained by multiplying coordinates by a-th, b-th and
c-th roots of unity.  This gives an independent route to h0 (vanish at the
whole orbit instead of one preimage) and to the regularity shift
reg(I^(m) C) = reg(I^(m)) + a + b + c - 3.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from itertools import product
from math import isqrt

import sympy

from .asymptotics import d_min_series, is_negative, negative_curve_search, regularity
from .errors import InvalidInput, InvariantViolation
from .linalg import FieldSpec, rank
from .linsys import (FatPointScheme, UpstreamPoint, _affine, condition_rank, hasse_matrix,
                     random_points, weighted_columns)
from .plane import WeightedPlane, dim_S

log = logging.getLogger(__name__)

ORDINARY = WeightedPlane(1, 1, 1)


def split_prime(abc: int, floor: int = 2) -> int:
    """Smallest prime p >= floor with abc | p - 1."""
    p = sympy.nextprime(max(floor, 2) - 1)
    while (p - 1) % abc:
        p = sympy.nextprime(p)
    return p


def roots_of_unity(q: int, p: int) -> list[int]:
    """All q-th roots of unity in F_p, as powers of g^((p-1)/q) for a generator g."""
    if (p - 1) % q:
        raise InvalidInput(f"F_{p} has no primitive {q}-th root of unity")
    zeta = pow(sympy.primitive_root(p), (p - 1) // q, p)
    return [pow(zeta, k, p) for k in range(q)]


@dataclass(frozen=True)
class OrbitScheme:
    plane: WeightedPlane
    p: int
    source: UpstreamPoint
    points: tuple[UpstreamPoint, ...]


def orbit_points(plane: WeightedPlane, pt: UpstreamPoint, p: int) -> OrbitScheme:
    """The abc preimages of the image of ``pt`` under the covering map."""
    field = FieldSpec.prime_field(p)
    if (p - 1) % plane.abc:
        raise InvalidInput(f"p={p} is not 1 mod abc={plane.abc}")
    field.check_weights(plane.abc)
    al, be, ga = pt.in_field(field)
    roots = [roots_of_unity(w, p) for w in plane.weights]
    pts = tuple(
        UpstreamPoint((za * al % p, zb * be % p, zc * ga % p))
        for za, zb, zc in product(*roots)
    )
    affine = {_affine(q, field) for q in pts}
    if len(affine) != plane.abc:
        raise InvariantViolation(f"orbit of {pt} has {len(affine)} distinct points, expected {plane.abc}")
    return OrbitScheme(plane, p, pt, pts)


def upstream_scheme(scheme: FatPointScheme, p: int) -> FatPointScheme:
    """All orbit points of all points of ``scheme``, as a fat-point scheme on P^2 over F_p."""
    pts, mults = [], []
    for pt, e in zip(scheme.points, scheme.mults):
        orbit = orbit_points(scheme.plane, pt, p)
        pts.extend(orbit.points)
        mults.extend([e] * len(orbit.points))
    return FatPointScheme(ORDINARY, tuple(pts), tuple(mults), FieldSpec.prime_field(p))


def orbit_h0(scheme: FatPointScheme, n: int, m: int, p: int) -> int:
    """Degree-n forms in u, v, w spanned by u^(ai) v^(bj) w^(ck) that vanish to
    order m*e_i at every orbit point.  Equals h0(n, m) on P(a,b,c)."""
    if n < 0:
        return 0
    field = FieldSpec.prime_field(p)
    up = upstream_scheme(scheme, p)
    cols = weighted_columns(scheme.plane, n)
    coords = [q.in_field(field) for q in up.points]
    M = hasse_matrix(cols, coords, [m * e for e in up.mults], field)
    return len(cols) - rank(M)


def basechange_check(scheme: FatPointScheme, m: int, p: int | None = None) -> dict:
    """Compare reg of the orbit scheme upstream with reg downstream + a+b+c-3, both over F_p."""
    plane = scheme.plane
    p = p or split_prime(plane.abc)
    down = scheme.with_field(FieldSpec.prime_field(p))
    up = upstream_scheme(down, p)
    reg_down = regularity(down, m)
    reg_up = regularity(up, m)
    shift = plane.kappa - 3
    return {
        "m": m,
        "prime": p,
        "reg_down": reg_down,
        "reg_up": reg_up,
        "shift": shift,
        "holds": reg_up == reg_down + shift,
    }


def _expected_h0(dim: int, conditions: int) -> int:
    return max(0, dim - conditions)


def _probe_once(n_points: int, m_list: list[int], seed: int, field: FieldSpec, sub: int) -> dict:
    pts = random_points(ORDINARY, n_points, seed, field, sub)
    scheme = FatPointScheme(ORDINARY, pts, (), field)
    checks = []
    rank_drop = False
    for m in m_list:
        bound = isqrt(n_points * m * m)
        L = scheme.conditions(m)
        first = None
        for d in range(bound + 1):
            dim = dim_S(ORDINARY, d)
            val = dim - condition_rank(scheme, d, m)
            if val > _expected_h0(dim, L):
                rank_drop = True
            if val > 0 and first is None:
                first = {"d": d, "h0": val, "expected_h0": _expected_h0(dim, L)}
        checks.append({"m": m, "d_bound": bound, "violation": first})
    return {"checks": checks, "rank_drop": rank_drop}


def nagata_vanishing_probe(n_points: int, m_list: list[int], seed: int = 0,
                           field: FieldSpec | None = None, max_redraws: int = 5) -> dict:
    """Check h0(d, m) = 0 for all d <= sqrt(n)*m at n random simple points of P^2.

    A draw whose ranks fall below the expected max(0, dim - L) somewhere is
    treated as non-generic and redrawn with the next sub-seed; redraws are
    listed in the report.  Violations with expected ranks are reported as is.
    """
    if n_points < 1:
        raise InvalidInput("n_points must be >= 1")
    field = field or FieldSpec.prime_field()
    redraws = []
    for sub in range(max_redraws + 1):
        result = _probe_once(n_points, m_list, seed, field, sub)
        if not result["rank_drop"]:
            break
        redraws.append(sub)
        log.info("probe draw %d (seed %d) not generic, redrawing", sub, seed)
    violations = [c for c in result["checks"] if c["violation"] is not None]
    return {
        "n_points": n_points,
        "m_list": list(m_list),
        "seed": seed,
        "field": str(field),
        "sub_seed": sub,
        "redraws": redraws,
        "generic": not result["rank_drop"],
        "checks": result["checks"],
        "verdict": "violation" if violations else "vanishing holds",
    }


def prop_nagata_report(a: int, b: int, c: int, r: int, seed: int = 0, m_max: int = 8,
                       field: FieldSpec | None = None, points: tuple[UpstreamPoint, ...] | None = None,
                       workers: int = 1) -> dict:
    """Bounded search for E-uniform negative curves on P(a,b,c) blown up at r
    points (all multiplicities 1).  Non-existence for every m would give
    Nagata's conjecture for abc*r general points; a finite search is only
    evidence and the report says so.
    """
    plane = WeightedPlane(a, b, c)
    field = field or FieldSpec.prime_field()
    if r < 1:
        raise InvalidInput("r must be >= 1")
    if points is None:
        points = random_points(plane, r, seed, field)
    scheme = FatPointScheme(plane, points, (), field)
    dmins = d_min_series(scheme, m_max, workers)
    per_m = [
        {
            "m": m,
            "d_min": d,
            "d_min_sq": d * d,
            "sqrt_bound_sq": plane.abc * scheme.u * m * m,
            "negative": is_negative(scheme, d, m),
        }
        for m, d in enumerate(dmins, start=1)
    ]
    cert = None
    if any(row["negative"] for row in per_m):
        cert = negative_curve_search(scheme, m_max)
    if cert is not None:
        verdict = "negative curve exists; no Nagata conclusion"
    else:
        verdict = (f"no E-uniform negative curve for m <= {m_max} (bounded search only); "
                   f"if none exists for all m, Nagata's conjecture holds for {plane.abc * r} general points")
    return {
        "weights": [a, b, c],
        "r": r,
        "n_points": plane.abc * r,
        "seed": seed,
        "prime": field.p,
        "points": [str(pt) for pt in points],
        "per_m": per_m,
        "certificate": cert.to_json() if cert is not None else None,
        "verdict": verdict,
    }
