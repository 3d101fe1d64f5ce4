"""Exact rank and kernel computations over Q and prime fields F_p.

Two backends are provided.  The pure-Python routines (fraction-free Bareiss
elimination over Q, plain Gauss-Jordan over F_p) are the reference; when
python-flint is importable, ``rank`` hands large matrices to FLINT's
``fmpz_mat`` / ``nmod_mat`` instead.  Kernels always use the pure-Python
reduced row echelon form so that basis vectors are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from itertools import chain
from math import lcm
from typing import Sequence

import sympy

from .errors import InvalidInput

try:  # pragma: no cover - exercised implicitly
    import flint
except ImportError:  # pragma: no cover
    flint = None

#: Default working prime, 2**62 - 57 (the largest prime below 2**62).
DEFAULT_PRIME = 2**62 - 57

# Matrices with fewer entries than this stay on the pure-Python path.
_FLINT_MIN_ENTRIES = 64


@dataclass(frozen=True)
class FieldSpec:
    """Either the rationals (``p is None``) or the prime field F_p."""

    p: int | None = None

    def __post_init__(self) -> None:
        if self.p is not None and (self.p < 2 or not sympy.isprime(self.p)):
            raise InvalidInput(f"{self.p} is not a prime")

    @classmethod
    def rationals(cls) -> FieldSpec:
        return cls(None)

    @classmethod
    def prime_field(cls, p: int = DEFAULT_PRIME) -> FieldSpec:
        return cls(int(p))

    @classmethod
    def parse(cls, text: str) -> FieldSpec:
        """Parse ``q``, ``fp:auto`` or ``fp:P``."""
        text = text.strip().lower()
        if text in ("q", "qq", "rationals"):
            return cls.rationals()
        if text == "fp:auto":
            return cls.prime_field()
        if text.startswith("fp:"):
            try:
                return cls.prime_field(int(text[3:]))
            except ValueError:
                raise InvalidInput(f"bad field spec {text!r}") from None
        raise InvalidInput(f"bad field spec {text!r}")

    @property
    def is_prime(self) -> bool:
        return self.p is not None

    def __str__(self) -> str:
        return "q" if self.p is None else f"fp:{self.p}"

    def element(self, x: int | Fraction | str) -> int | Fraction:
        """Coerce an integer, rational or ``"num/den"`` string into the field."""
        q = Fraction(x)
        if self.p is None:
            return q
        if q.denominator % self.p == 0:
            raise InvalidInput(f"{x} has denominator divisible by {self.p}")
        return q.numerator * pow(q.denominator, -1, self.p) % self.p

    def check_weights(self, abc: int) -> None:
        """Condition (A1): the characteristic must not divide abc."""
        if self.p is not None and abc % self.p == 0:
            raise InvalidInput(f"characteristic {self.p} divides abc={abc}")

    def symmetric(self, x: int | Fraction) -> int | Fraction:
        """Representative in (-p/2, p/2] for display."""
        if self.p is None:
            return x
        x %= self.p
        return x - self.p if x > self.p // 2 else x


@dataclass
class ExactMatrix:
    field: FieldSpec
    ncols: int
    rows: list[list] = dc_field(default_factory=list)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    def __post_init__(self) -> None:
        for r in self.rows:
            if len(r) != self.ncols:
                raise InvalidInput("ragged matrix")

    def apply(self, v: Sequence) -> list:
        """Return M @ v computed exactly in the field."""
        out = [sum(a * b for a, b in zip(row, v)) for row in self.rows]
        if self.field.p is not None:
            out = [x % self.field.p for x in out]
        return out


def _integer_rows(rows: list[list]) -> list[list[int]]:
    out = []
    for row in rows:
        den = lcm(*(Fraction(x).denominator for x in row)) if row else 1
        out.append([int(Fraction(x) * den) for x in row])
    return out


def rank_bareiss(rows: list[list[int]], ncols: int) -> int:
    """Rank over Q of an integer matrix by fraction-free elimination."""
    A = [list(r) for r in rows]
    n = len(A)
    rank, prev = 0, 1
    for col in range(ncols):
        if rank == n:
            break
        piv = next((i for i in range(rank, n) if A[i][col]), None)
        if piv is None:
            continue
        A[rank], A[piv] = A[piv], A[rank]
        prow = A[rank]
        pv = prow[col]
        for i in range(rank + 1, n):
            row = A[i]
            f = row[col]
            A[i] = row[:col] + [(pv * row[j] - f * prow[j]) // prev for j in range(col, ncols)]
        prev = pv
        rank += 1
    return rank


def rref(M: ExactMatrix) -> tuple[list[list], list[int]]:
    """Reduced row echelon form with first-nonzero-in-column-order pivoting.

    Returns the nonzero rows and the pivot column indices.
    """
    p = M.field.p
    if p is None:
        work = [[Fraction(x) for x in r] for r in M.rows]
    else:
        work = [[x % p for x in r] for r in M.rows]
    pivots: list[int] = []
    r = 0
    n = len(work)
    for col in range(M.ncols):
        if r == n:
            break
        piv = next((i for i in range(r, n) if work[i][col]), None)
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        if p is None:
            inv = 1 / work[r][col]
            work[r] = [x * inv for x in work[r]]
        else:
            inv = pow(work[r][col], -1, p)
            work[r] = [x * inv % p for x in work[r]]
        prow = work[r]
        for i in range(n):
            f = work[i][col]
            if i != r and f:
                if p is None:
                    work[i] = [x - f * y for x, y in zip(work[i], prow)]
                else:
                    work[i] = [(x - f * y) % p for x, y in zip(work[i], prow)]
        pivots.append(col)
        r += 1
    return work[:r], pivots


def rank(M: ExactMatrix, backend: str = "auto") -> int:
    """Rank of ``M`` over its field.  ``backend`` is auto, python or flint."""
    if M.nrows == 0 or M.ncols == 0:
        return 0
    use_flint = backend == "flint" or (
        backend == "auto" and flint is not None and M.nrows * M.ncols >= _FLINT_MIN_ENTRIES
    )
    if use_flint and flint is None:
        raise InvalidInput("python-flint is not installed")
    p = M.field.p
    if p is None:
        rows = _integer_rows(M.rows)
        if use_flint:
            return flint.fmpz_mat(M.nrows, M.ncols, list(chain.from_iterable(rows))).rank()
        return rank_bareiss(rows, M.ncols)
    if use_flint:
        # nmod_mat reduces its entries mod p
        return flint.nmod_mat(M.nrows, M.ncols, list(chain.from_iterable(M.rows)), p).rank()
    return len(rref(M)[1])


def kernel_basis(M: ExactMatrix) -> list[list]:
    """Basis of the right kernel, one vector per free column (in column order)."""
    R, pivots = rref(M)
    zero = Fraction(0) if M.field.p is None else 0
    one = Fraction(1) if M.field.p is None else 1
    pivset = set(pivots)
    basis = []
    for free in range(M.ncols):
        if free in pivset:
            continue
        v = [zero] * M.ncols
        v[free] = one
        for row, pc in zip(R, pivots):
            if row[free]:
                v[pc] = -row[free] if M.field.p is None else (-row[free]) % M.field.p
        basis.append(v)
    return basis
