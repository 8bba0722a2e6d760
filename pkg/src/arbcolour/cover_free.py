"""Cover-free families from graphs of low-degree polynomials over Z_q.

The set attached to a polynomial ``P`` of degree at most ``deg`` is its graph
``{(i, P(i)) : i in Z_q}``.  Two distinct polynomials agree on at most
``deg`` points, so with ``r * deg < q`` no set is covered by ``r`` others.

Index convention: colour ``x`` maps to the polynomial whose coefficient of
``t**j`` is the ``j``-th base-``q`` digit of ``x`` (least significant digit is
the constant term).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence


class InvalidParams(ValueError):
    pass


class IndexOutOfRange(IndexError):
    pass


class NoUncoveredElement(RuntimeError):
    """Every point of the target is covered; the caller broke a precondition."""


_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(x: int) -> bool:
    # Miller-Rabin with the first twelve primes is exact below 3.3e24
    if x < 2:
        return False
    for p in _WITNESSES:
        if x % p == 0:
            return x == p
    d, s = x - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _WITNESSES:
        y = pow(a, d, x)
        if y in (1, x - 1):
            continue
        for _ in range(s - 1):
            y = y * y % x
            if y == x - 1:
                break
        else:
            return False
    return True


def next_prime(x: int) -> int:
    """Smallest prime ``>= x``."""
    x = max(x, 2)
    while not is_prime(x):
        x += 1
    return x


def iroot_floor(k: int, e: int) -> int:
    """Largest integer ``a`` with ``a**e <= k``."""
    if k < 1:
        return 0
    a = int(round(k ** (1.0 / e)))
    while a**e > k:
        a -= 1
    while (a + 1) ** e <= k:
        a += 1
    return a


@dataclass(frozen=True)
class CfParams:
    q: int
    deg: int
    r: int
    k: int

    def __post_init__(self):
        if not is_prime(self.q):
            raise InvalidParams(f"q={self.q} is not prime")
        if self.deg < 1 or self.r < 1 or self.k < 1:
            raise InvalidParams("deg, r and k must be positive")
        if self.r * self.deg >= self.q:
            raise InvalidParams(f"need r*deg < q, got {self.r}*{self.deg} >= {self.q}")
        if self.q ** (self.deg + 1) <= self.k:
            raise InvalidParams(f"need q^(deg+1) > k, got {self.q}^{self.deg + 1} <= {self.k}")

    @property
    def family_size(self) -> int:
        return self.q ** (self.deg + 1)

    @property
    def palette_size(self) -> int:
        return self.q * self.q


def deg_search_range(k: int) -> range:
    return range(1, max(1, (k).bit_length()) + 1)


@lru_cache(maxsize=4096)
def select_params(k: int, r: int) -> CfParams:
    """Parameters minimising the output palette ``q**2`` over admissible degrees.

    Ties go to the smaller degree.
    """
    if k < 1 or r < 1:
        raise InvalidParams("k and r must be positive")
    # q >= bound(deg) always, so once a bound exceeds the best q found the
    # remaining degrees cannot win
    bounds = sorted((max(r * deg + 1, iroot_floor(k, deg + 1) + 1), deg) for deg in deg_search_range(k))
    best = None
    for lb, deg in bounds:
        if best is not None and lb > best[0]:
            break
        q = next_prime(lb)
        if best is None or (q, deg) < best:
            best = (q, deg)
    q, deg = best
    return CfParams(q=q, deg=deg, r=r, k=k)


@dataclass(frozen=True)
class PolySet:
    """Graph of a polynomial over Z_q; ``coeffs[j]`` multiplies ``t**j``."""

    coeffs: tuple[int, ...]
    q: int

    @property
    def deg(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, t: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = (acc * t + c) % self.q
        return acc

    def points(self) -> set[tuple[int, int]]:
        return {(i, self(i)) for i in range(self.q)}


def digits(x: int, q: int, count: int) -> tuple[int, ...]:
    out = []
    for _ in range(count):
        x, d = divmod(x, q)
        out.append(d)
    return tuple(out)


def colour_to_set(x: int, p: CfParams) -> PolySet:
    if not 0 <= x < p.family_size:
        raise IndexOutOfRange(f"colour {x} outside [0, {p.family_size})")
    return PolySet(digits(x, p.q, p.deg + 1), p.q)


def uncovered_element(target: PolySet, others: Sequence[PolySet]) -> tuple[int, int]:
    """Smallest ``x`` at which ``target`` agrees with none of ``others``."""
    q = target.q
    for x in range(q):
        y = target(x)
        for other in others:
            if other(x) == y:
                break
        else:
            return x, y
    raise NoUncoveredElement("target is covered by the other sets")


def point_index(point: tuple[int, int], q: int) -> int:
    x, y = point
    return x * q + y
