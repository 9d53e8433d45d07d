"""Exact integer/rational arithmetic used throughout the package.

Vectors are plain tuples: ``(x, y)`` with ``int`` entries for lattice
directions and ``Fraction`` entries for plane positions.  Nothing here
touches floating point.
"""
from __future__ import annotations

import math
from collections import Counter
from fractions import Fraction
from typing import Iterable, Tuple, Union

Vec2Z = Tuple[int, int]
Vec2Q = Tuple[Fraction, Fraction]
Rational = Union[int, Fraction]

__all__ = [
    "Vec2Z",
    "Vec2Q",
    "ZeroVector",
    "det2",
    "add",
    "sub",
    "scale",
    "primitive_and_length",
    "factorial",
    "binomial_comb",
    "binomial_gen",
    "symmetry_factor",
    "as_fraction_pair",
]


class ZeroVector(ValueError):
    """The zero vector has no primitive direction."""


def det2(u: Tuple[Rational, Rational], v: Tuple[Rational, Rational]) -> Rational:
    return u[0] * v[1] - u[1] * v[0]


def add(u, v):
    return (u[0] + v[0], u[1] + v[1])


def sub(u, v):
    return (u[0] - v[0], u[1] - v[1])


def scale(c, v):
    return (c * v[0], c * v[1])


def as_fraction_pair(v) -> Vec2Q:
    return (Fraction(v[0]), Fraction(v[1]))


def primitive_and_length(v: Vec2Z) -> Tuple[Vec2Z, int]:
    """Split an integer vector as ``length * primitive``.

    >>> primitive_and_length((2, -8))
    ((1, -4), 2)
    """
    x, y = v
    g = math.gcd(x, y)
    if g == 0:
        raise ZeroVector("zero vector has no primitive direction")
    return (x // g, y // g), g


def factorial(n: int) -> int:
    if n < 0:
        raise ValueError(f"factorial of negative number {n}")
    return math.factorial(n)


def binomial_comb(N: int, K: int) -> int:
    """Counting binomial: number of K-subsets of an N-set, 0 if N < 0 or K outside [0, N]."""
    if N < 0 or K < 0 or K > N:
        return 0
    return math.comb(N, K)


def binomial_gen(x: Rational, k: int) -> Rational:
    """Polynomial binomial x(x-1)...(x-k+1)/k!, defined for any rational x.

    Negative ``k`` gives 0.  Integer ``x`` yields an ``int``.
    """
    if k < 0:
        return 0
    num: Rational = 1
    for i in range(k):
        num *= x - i
    if isinstance(num, int):
        q, r = divmod(num, math.factorial(k))
        assert r == 0
        return q
    return Fraction(num) / math.factorial(k)


def symmetry_factor(mu: Iterable[int]) -> int:
    """Product over distinct values u of (number of entries equal to u)!."""
    out = 1
    for count in Counter(mu).values():
        out *= math.factorial(count)
    return out
