from __future__ import annotations

import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from troptev.exactmath import (
    ZeroVector,
    binomial_comb,
    binomial_gen,
    det2,
    factorial,
    primitive_and_length,
    symmetry_factor,
)


def test_det2_orientation():
    assert det2((1, 0), (0, 1)) == 1
    assert det2((0, 1), (1, 0)) == -1
    assert det2((Fraction(1, 2), 0), (0, 4)) == 2


def test_primitive_and_length():
    assert primitive_and_length((4, -6)) == ((2, -3), 2)
    assert primitive_and_length((0, -5)) == ((0, -1), 5)
    with pytest.raises(ZeroVector):
        primitive_and_length((0, 0))


def test_binomial_comb_out_of_range_is_zero():
    assert binomial_comb(5, 7) == 0
    assert binomial_comb(5, -1) == 0
    assert binomial_comb(6, 3) == 20


def test_binomial_gen_negative_upper():
    # C(-1, k) = (-1)^k
    assert [binomial_gen(-1, k) for k in range(5)] == [1, -1, 1, -1, 1]
    assert binomial_gen(Fraction(1, 2), 2) == Fraction(-1, 8)
    assert binomial_gen(3, -1) == 0


def test_symmetry_factor():
    assert symmetry_factor([1, 1, 1]) == 6
    assert symmetry_factor([4, 4, 1, 2, 2]) == 4
    assert symmetry_factor([]) == 1


@given(st.integers(0, 30), st.integers(0, 30))
def test_binomial_gen_matches_math_comb(n, k):
    assert binomial_gen(n, k) == math.comb(n, k)
    assert binomial_comb(n, k) == math.comb(n, k)


@given(st.integers(0, 20))
def test_factorial(n):
    assert factorial(n) == math.factorial(n)


@given(st.integers(-50, 50), st.integers(-50, 50))
def test_primitive_roundtrip(x, y):
    if (x, y) == (0, 0):
        return
    (px, py), g = primitive_and_length((x, y))
    assert (g * px, g * py) == (x, y)
    assert math.gcd(px, py) == 1
