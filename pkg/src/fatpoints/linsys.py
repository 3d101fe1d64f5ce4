"""Fat-point schemes on P(a,b,c) and dimensions of their linear systems.

A point of P(a,b,c) off the coordinate triangle is specified by an upstream
representative (α:β:γ) in P^2; its image is (α^a : β^b : γ^c).  A weighted form
F(x,y,z) of degree n vanishes to order μ at the image exactly when
G = F(u^a, v^b, w^c) vanishes to order μ at (α:β:γ), because the covering map
is unramified there.  Vanishing is tested with Hasse derivatives of G in an
affine chart, so no factorials are ever divided out.
"""

from __future__ import annotations

import hashlib
import json
import logging
import random
from collections import Counter
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import lru_cache
from math import comb, lcm, gcd
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .cache import active_cache
from .errors import InvalidInput
from .linalg import ExactMatrix, FieldSpec, kernel_basis, rank
from .plane import WeightedMonomial, WeightedPlane, dim_S, enumerate_monomials

log = logging.getLogger(__name__)

#: Counts of condition-matrix ranks actually computed vs. served by the cache.
STATS: Counter = Counter()

# Bound for random nonzero integer coordinates in rational mode.
_Q_COORD_BOUND = 2**15


@dataclass(frozen=True)
class UpstreamPoint:
    coords: tuple[Fraction, Fraction, Fraction]

    def __post_init__(self) -> None:
        if len(self.coords) != 3:
            raise InvalidInput("a point needs three coordinates")
        try:
            object.__setattr__(self, "coords", tuple(Fraction(c) for c in self.coords))
        except (ValueError, ZeroDivisionError, TypeError):
            raise InvalidInput(f"bad coordinates {self.coords!r}") from None

    @classmethod
    def parse(cls, text: str) -> UpstreamPoint:
        parts = text.replace(",", " ").replace(":", " ").split()
        if len(parts) != 3:
            raise InvalidInput(f"expected three coordinates, got {text!r}")
        return cls(tuple(parts))

    def in_field(self, field: FieldSpec) -> tuple:
        """Coordinates as field elements; rejects points on the coordinate triangle."""
        vals = tuple(field.element(c) for c in self.coords)
        if any(v == 0 for v in vals):
            raise InvalidInput(f"point {self} has a zero coordinate in {field} (condition A2)")
        return vals

    def __str__(self) -> str:
        return ":".join(str(c) for c in self.coords)


def _homogeneous(point: UpstreamPoint, field: FieldSpec) -> tuple[int, int, int]:
    """Integer homogeneous coordinates (cleared denominators over Q)."""
    vals = point.in_field(field)
    if field.p is not None:
        return vals
    den = lcm(*(v.denominator for v in vals))
    ints = [int(v * den) for v in vals]
    g = gcd(*ints)
    return tuple(x // g for x in ints)


def _affine(point: UpstreamPoint, field: FieldSpec) -> tuple:
    """Chart w = 1 coordinates; canonical form of the projective point."""
    al, be, ga = point.in_field(field)
    if field.p is None:
        return (al / ga, be / ga)
    inv = pow(ga, -1, field.p)
    return (al * inv % field.p, be * inv % field.p)


def _div(x, y, field: FieldSpec):
    return x / y if field.p is None else x * pow(y, -1, field.p) % field.p


def _pow(x, e, field: FieldSpec):
    return x**e if field.p is None else pow(x, e, field.p)


def downstream_equal(p: UpstreamPoint, q: UpstreamPoint, plane: WeightedPlane,
                     field: FieldSpec = FieldSpec.prime_field()) -> bool:
    """Whether (α^a:β^b:γ^c) and its analogue for q are the same point of P(a,b,c).

    With X, Y, Z the ratios of image coordinates this holds iff X^b = Y^a,
    Y^c = Z^b and X^c = Z^a (pairwise coprime weights).
    """
    a, b, c = plane.weights
    P = p.in_field(field)
    Q = q.in_field(field)
    X, Y, Z = (_div(_pow(s, w, field), _pow(t, w, field), field)
               for s, t, w in zip(Q, P, (a, b, c)))
    return (_pow(X, b, field) == _pow(Y, a, field)
            and _pow(Y, c, field) == _pow(Z, b, field)
            and _pow(X, c, field) == _pow(Z, a, field))


@dataclass(frozen=True)
class FatPointScheme:
    """Points P_i of P(a,b,c) with multiplicities e_i, over a fixed field."""

    plane: WeightedPlane
    points: tuple[UpstreamPoint, ...]
    mults: tuple[int, ...] = ()
    field: FieldSpec = dc_field(default_factory=FieldSpec.prime_field)

    def __post_init__(self) -> None:
        object.__setattr__(self, "points", tuple(self.points))
        if not self.points:
            raise InvalidInput("a fat point scheme needs at least one point")
        mults = tuple(int(e) for e in self.mults) or (1,) * len(self.points)
        if len(mults) != len(self.points):
            raise InvalidInput(f"{len(mults)} multiplicities for {len(self.points)} points")
        if any(e < 1 for e in mults):
            raise InvalidInput("multiplicities must be positive")
        object.__setattr__(self, "mults", mults)
        self.field.check_weights(self.plane.abc)
        for pt in self.points:
            pt.in_field(self.field)
        for i, p in enumerate(self.points):
            for q in self.points[:i]:
                if downstream_equal(p, q, self.plane, self.field):
                    raise InvalidInput(f"points {q} and {p} have the same image in {self.plane}")

    @property
    def r(self) -> int:
        return len(self.points)

    @property
    def u(self) -> int:
        return sum(e * e for e in self.mults)

    @property
    def esum(self) -> int:
        return sum(self.mults)

    def conditions(self, m: int) -> int:
        """L(m): number of linear conditions imposed in any degree."""
        return sum(mu * (mu + 1) // 2 for mu in (m * e for e in self.mults))

    def h1_cap(self, m: int) -> int:
        """abc*m*sum(e_i) - 1; h1 vanishes from this degree on."""
        return self.plane.abc * m * self.esum - 1

    def with_field(self, field: FieldSpec) -> FatPointScheme:
        return FatPointScheme(self.plane, self.points, self.mults, field)

    def cache_key(self, n: int, m: int) -> str:
        pts = sorted(
            (tuple(str(x) for x in _affine(pt, self.field)), e)
            for pt, e in zip(self.points, self.mults)
        )
        blob = json.dumps([list(self.plane.weights), pts, str(self.field), n, m])
        return hashlib.sha256(blob.encode()).hexdigest()


@dataclass
class ConditionMatrix:
    matrix: ExactMatrix
    n: int
    m: int

    @property
    def nrows(self) -> int:
        return self.matrix.nrows

    @property
    def ncols(self) -> int:
        return self.matrix.ncols


def hasse_orders(order: int) -> list[tuple[int, int]]:
    """Derivative multi-indices (s, t) with s + t < order, by total then s descending."""
    return [(s, tot - s) for tot in range(order) for s in range(tot, -1, -1)]


def _hasse_table(x: int, order: int, top: int, p: int | None) -> np.ndarray:
    """T[s, k] = C(k, s) * x^(k - s), the s-th Hasse derivative of X^k at x."""
    pw = [1] * (top + 1)
    for k in range(1, top + 1):
        pw[k] = pw[k - 1] * x if p is None else pw[k - 1] * x % p
    T = np.zeros((order, top + 1), dtype=object)
    for s in range(order):
        for k in range(s, top + 1):
            v = comb(k, s) * pw[k - s]
            T[s, k] = v if p is None else v % p
    return T


def hasse_matrix(columns: Sequence[tuple[int, int, int]], points: Sequence[tuple],
                 orders: Sequence[int], field: FieldSpec) -> ExactMatrix:
    """Vanishing conditions for forms in u, v, w supported on ``columns``.

    ``columns`` are exponent triples of one common total degree; ``points`` are
    integer homogeneous coordinates (field elements over F_p).  Point i
    contributes one row per Hasse derivative of order < orders[i], taken in
    the affine chart of its first nonzero coordinate among (w, v, u).  Rows
    are scaled by the chart coordinate to a power, which keeps them integral
    without changing rank or kernel.
    """
    p = field.p
    ncols = len(columns)
    rows: list[list] = []
    if ncols == 0:
        return ExactMatrix(field, 0, [[] for pt, o in zip(points, orders) for _ in range(o * (o + 1) // 2)])
    E = np.array(columns, dtype=np.int64).reshape(ncols, 3)
    for pt, order in zip(points, orders):
        if order <= 0:
            continue
        chart = next(ix for ix in (2, 1, 0) if (pt[ix] % p if p else pt[ix]) != 0)
        i1, i2 = (ix for ix in (0, 1, 2) if ix != chart)
        P, Q, R = E[:, i1], E[:, i2], E[:, chart]
        TU = _hasse_table(pt[i1], order, int(P.max()), p)
        TV = _hasse_table(pt[i2], order, int(Q.max()), p)
        G = _hasse_table(pt[chart], 1, int(R.max()), p)[0]
        st = hasse_orders(order)
        s_idx = np.array([s for s, _ in st])
        t_idx = np.array([t for _, t in st])
        block = TU[s_idx][:, P] * TV[t_idx][:, Q] * G[R]
        if p is not None:
            block %= p
        rows.extend(block.tolist())
    return ExactMatrix(field, ncols, rows)


def weighted_columns(plane: WeightedPlane, n: int) -> list[tuple[int, int, int]]:
    """Exponents of u^(ai) v^(bj) w^(ck) for the degree-n weighted monomials."""
    a, b, c = plane.weights
    return [(a * i, b * j, c * k) for i, j, k in enumerate_monomials(plane, n)]


def condition_matrix(scheme: FatPointScheme, n: int, m: int) -> ConditionMatrix:
    if m < 0:
        raise InvalidInput("m must be nonnegative")
    pts = [_homogeneous(pt, scheme.field) for pt in scheme.points]
    M = hasse_matrix(weighted_columns(scheme.plane, n), pts,
                     [m * e for e in scheme.mults], scheme.field)
    return ConditionMatrix(M, n, m)


def _full_row_rank_shortcut(scheme: FatPointScheme, n: int, m: int) -> int | None:
    """Return L(m) if an evenly spread set of 2L(m) columns already has rank L(m).

    Exact: the rank of a column subset bounds the full rank from below and the
    row count bounds it from above.
    """
    cols = weighted_columns(scheme.plane, n)
    L = scheme.conditions(m)
    if len(cols) <= 2 * L:
        return None
    step = len(cols) / (2 * L)
    sub = [cols[int(i * step)] for i in range(2 * L)]
    pts = [_homogeneous(pt, scheme.field) for pt in scheme.points]
    M = hasse_matrix(sub, pts, [m * e for e in scheme.mults], scheme.field)
    return L if rank(M) == L else None


@lru_cache(maxsize=None)
def _condition_rank(scheme: FatPointScheme, n: int, m: int) -> int:
    cache = active_cache()
    key = None
    if cache is not None:
        key = scheme.cache_key(n, m)
        hit = cache.get(key)
        if hit is not None:
            STATS["cache_hit"] += 1
            return hit[1]
    rk = _full_row_rank_shortcut(scheme, n, m)
    if rk is None:
        rk = rank(condition_matrix(scheme, n, m).matrix)
    STATS["rank"] += 1
    if cache is not None:
        cache.put(key, dim_S(scheme.plane, n) - rk, rk)
    return rk


def condition_rank(scheme: FatPointScheme, n: int, m: int) -> int:
    """Rank of the evaluation map from degree-n forms to the fat-point scheme."""
    if n < 0 or m == 0:
        return 0
    return _condition_rank(scheme, n, m)


def clear_memo() -> None:
    _condition_rank.cache_clear()


def h0(scheme: FatPointScheme, n: int, m: int) -> int:
    """dim of the degree-n piece of the m-th symbolic power."""
    if m < 0:
        raise InvalidInput("m must be nonnegative")
    if n < 0:
        return 0
    return dim_S(scheme.plane, n) - condition_rank(scheme, n, m)


def d_min_scan(scheme: FatPointScheme, m: int) -> int:
    """Least n >= 0 with h0(n, m) > 0, by upward scan."""
    n = 0
    while h0(scheme, n, m) == 0:
        n += 1
    return n


def d_min(scheme: FatPointScheme, m: int) -> int:
    """Least n >= 0 with h0(n, m) > 0.

    Multiplication by the variable of smallest weight w is injective, so h0
    is nondecreasing along each residue class mod w; each class is bisected
    between n < 0 and the first n where dim_S(n) exceeds L(m).
    """
    if m < 1:
        raise InvalidInput("d_min needs m >= 1")
    plane = scheme.plane
    w = min(plane.weights)
    L = scheme.conditions(m)
    best = None
    for r in range(w):
        hi = r
        while dim_S(plane, hi) <= L:
            hi += w
        lo = r - w  # h0 = 0 below degree 0
        while hi - lo > w:
            mid = lo + ((hi - lo) // w // 2) * w
            if h0(scheme, mid, m) > 0:
                hi = mid
            else:
                lo = mid
        best = hi if best is None else min(best, hi)
    return best


class WeightedForm:
    """A weighted-homogeneous polynomial in x, y, z with field coefficients."""

    def __init__(self, plane: WeightedPlane, field: FieldSpec, coeffs: dict):
        self.plane = plane
        self.field = field
        p = field.p
        self.coeffs = {WeightedMonomial(*mono): (c % p if p else c)
                       for mono, c in coeffs.items() if (c % p if p else c)}

    def __mul__(self, other: WeightedForm) -> WeightedForm:
        out: dict = {}
        for m1, c1 in self.coeffs.items():
            for m2, c2 in other.coeffs.items():
                key = (m1[0] + m2[0], m1[1] + m2[1], m1[2] + m2[2])
                out[key] = out.get(key, 0) + c1 * c2
        return WeightedForm(self.plane, self.field, out)

    def __pow__(self, k: int) -> WeightedForm:
        out = WeightedForm(self.plane, self.field, {(0, 0, 0): 1})
        for _ in range(k):
            out = out * self
        return out

    def degree(self) -> int | None:
        degs = {mono.degree(self.plane) for mono in self.coeffs}
        return degs.pop() if len(degs) == 1 else None

    def normalized(self) -> WeightedForm:
        """Scaled so the first term in ascending lex order has coefficient 1."""
        if not self.coeffs:
            return self
        lead = self.coeffs[min(self.coeffs)]
        inv = 1 / Fraction(lead) if self.field.p is None else pow(lead, -1, self.field.p)
        return WeightedForm(self.plane, self.field, {k: v * inv for k, v in self.coeffs.items()})

    def is_proportional(self, other: WeightedForm) -> bool:
        return self.normalized().coeffs == other.normalized().coeffs

    def vector(self, monomials: Sequence[WeightedMonomial]) -> list:
        return [self.coeffs.get(mono, 0) for mono in monomials]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, WeightedForm) and self.coeffs == other.coeffs

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for mono in sorted(self.coeffs):
            c = self.field.symmetric(self.coeffs[mono])
            factors = [v if e == 1 else f"{v}^{e}" for v, e in zip("xyz", mono) if e]
            body = "*".join(factors)
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if body:
                term = body if mag == 1 else f"{mag}*{body}"
            else:
                term = str(mag)
            parts.append((sign, term))
        first_sign, first = parts[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, term in parts[1:]:
            text += f" {sign} {term}"
        return text

    __repr__ = __str__


def basis_forms(scheme: FatPointScheme, n: int, m: int) -> list[WeightedForm]:
    """A basis of the degree-n piece of the m-th symbolic power, as forms."""
    monos = enumerate_monomials(scheme.plane, n)
    if not monos:
        return []
    M = condition_matrix(scheme, n, m).matrix
    vecs = [[int(i == j) for j in range(len(monos))] for i in range(len(monos))] if M.nrows == 0 \
        else kernel_basis(M)
    return [WeightedForm(scheme.plane, scheme.field, dict(zip(monos, v))).normalized() for v in vecs]


def random_points(plane: WeightedPlane, r: int, seed: int, field: FieldSpec,
                  sub: int = 0) -> tuple[UpstreamPoint, ...]:
    """r upstream points with nonzero coordinates and distinct images.

    Randomness comes from Python's Mersenne Twister (``random.Random``)
    seeded with the string ``"{seed}:{sub}"``.  Over F_p coordinates are
    uniform in 1..p-1; over Q they are uniform nonzero integers in
    [-2**15, 2**15].
    """
    if r < 1:
        raise InvalidInput("need at least one point")
    rng = random.Random(f"{seed}:{sub}")

    def coord() -> int:
        if field.p is not None:
            return rng.randrange(1, field.p)
        while True:
            x = rng.randint(-_Q_COORD_BOUND, _Q_COORD_BOUND)
            if x:
                return x

    pts: list[UpstreamPoint] = []
    while len(pts) < r:
        cand = UpstreamPoint((coord(), coord(), coord()))
        if all(not downstream_equal(cand, q, plane, field) for q in pts):
            pts.append(cand)
    return tuple(pts)


def read_points(path: str | Path) -> list[UpstreamPoint]:
    """Parse a point-list file: three coordinates per line, '#' comments."""
    pts = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if line:
                pts.append(UpstreamPoint.parse(line))
    return pts


def write_points(path: str | Path, points: Iterable[UpstreamPoint]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for pt in points:
            fh.write(" ".join(str(c) for c in pt.coords) + "\n")
