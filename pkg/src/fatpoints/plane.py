"""The weighted projective plane P(a,b,c) and its graded monomials."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd
from typing import NamedTuple

from .errors import InvalidInput


class WeightedMonomial(NamedTuple):
    """Exponents of x^i y^j z^k."""

    i: int
    j: int
    k: int

    def degree(self, plane: WeightedPlane) -> int:
        return plane.a * self.i + plane.b * self.j + plane.c * self.k


@dataclass(frozen=True)
class WeightedPlane:
    a: int
    b: int
    c: int

    def __post_init__(self) -> None:
        for w in self.weights:
            if not isinstance(w, int) or w < 1:
                raise InvalidInput(f"weights must be positive integers, got {self.weights}")
        a, b, c = self.weights
        if gcd(a, b) != 1 or gcd(a, c) != 1 or gcd(b, c) != 1:
            raise InvalidInput(f"weights {self.weights} are not pairwise coprime")

    @classmethod
    def parse(cls, text: str) -> WeightedPlane:
        try:
            a, b, c = (int(t) for t in text.split(","))
        except ValueError:
            raise InvalidInput(f"expected weights a,b,c, got {text!r}") from None
        return cls(a, b, c)

    @property
    def weights(self) -> tuple[int, int, int]:
        return (self.a, self.b, self.c)

    @property
    def abc(self) -> int:
        return self.a * self.b * self.c

    @property
    def lcm(self) -> int:
        # pairwise coprime
        return self.abc

    @property
    def kappa(self) -> int:
        """a + b + c; the canonical class is -kappa*A + sum E_i."""
        return self.a + self.b + self.c

    def __str__(self) -> str:
        return f"P({self.a},{self.b},{self.c})"


@lru_cache(maxsize=4096)
def _monomials(a: int, b: int, c: int, n: int) -> tuple[WeightedMonomial, ...]:
    out = []
    for i in range(n // a, -1, -1):
        rest = n - a * i
        for j in range(rest // b, -1, -1):
            r2 = rest - b * j
            if r2 % c == 0:
                out.append(WeightedMonomial(i, j, r2 // c))
    return tuple(out)


def enumerate_monomials(plane: WeightedPlane, n: int) -> tuple[WeightedMonomial, ...]:
    """All monomials of weighted degree n, in descending lex order of (i, j, k).

    Empty for n < 0.
    """
    if n < 0:
        return ()
    return _monomials(plane.a, plane.b, plane.c, n)


def dim_S(plane: WeightedPlane, n: int) -> int:
    """Dimension of the degree-n piece of K[x,y,z]."""
    return len(enumerate_monomials(plane, n))


def is_cartier(plane: WeightedPlane, n: int) -> bool:
    """O_P(n) is invertible exactly when abc divides n."""
    return n % plane.abc == 0
