from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from troptev.curves import NonGenericConfiguration
from troptev.formula import trop_tev
from troptev.model import grid_instances, validate
from troptev.oracle import (
    SPLITS,
    TooManyLegs,
    bareiss_solve,
    end_classes,
    formula_value,
    full_oracle,
    full_oracle_seeded,
    full_oracle_unpruned,
    identity_check,
    invariance_check,
    random_points,
    random_target,
    structured_oracle,
    structured_oracle_seeded,
)

N3 = [g for g in grid_instances(a_values=(1, 2, 3), s1_max=3, wmax=4, nmax=3)]


def _gauss(M, b):
    """Plain Fraction elimination, for comparison."""
    n = len(M)
    A = [[Fraction(x) for x in row] + [Fraction(v)] for row, v in zip(M, b)]
    det = Fraction(1)
    for k in range(n):
        p = next((i for i in range(k, n) if A[i][k] != 0), None)
        if p is None:
            return 0, None
        if p != k:
            A[k], A[p] = A[p], A[k]
            det = -det
        det *= A[k][k]
        for i in range(k + 1, n):
            f = A[i][k] / A[k][k]
            A[i] = [x - f * y for x, y in zip(A[i], A[k])]
    x = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        x[i] = (A[i][n] - sum(A[i][j] * x[j] for j in range(i + 1, n))) / A[i][i]
    return det, x


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 6), st.randoms(use_true_random=False))
def test_bareiss_against_gauss(n, rnd):
    M = [[rnd.randint(-3, 3) for _ in range(n)] for _ in range(n)]
    b = [Fraction(rnd.randint(-20, 20), rnd.randint(1, 9)) for _ in range(n)]
    det, x = bareiss_solve(M, b)
    ref_det, ref_x = _gauss(M, b)
    assert det == ref_det
    assert x == ref_x


def test_end_classes(example_b):
    classes = end_classes(example_b)
    assert sum(c.count for c in classes) == example_b.m
    assert {(c.divisor, c.weight) for c in classes} == {(1, 1), (2, 1), (3, 3), (4, 4)}


def test_random_points_are_distinct():
    pts = random_points(6, 4)
    assert len(set(pts)) == 6
    assert random_points(6, 4) == pts


def test_structured_oracle_examples(example_a, example_b):
    for seed in range(3):
        assert structured_oracle_seeded(example_b, seed).trop_tev == 24
        rep = structured_oracle_seeded(example_a, seed)
        assert rep.trop_tev == 512
        assert rep.labelled_sum == 512 * example_a.symmetry


def test_structured_equals_brute_force_on_every_n3_instance():
    # [DERIVED] the unpruned full oracle solves every trivalent tree
    for g in N3:
        brute, _ = full_oracle_unpruned(g, random_target(3, 17))
        assert structured_oracle_seeded(g, 5).trop_tev == brute, g.short()


def test_pruned_full_oracle_matches_unpruned():
    rng = random.Random(2)
    for g in rng.sample(N3, 12):
        target = random_target(3, 23)
        rep, stats = full_oracle(g, target)
        brute, _ = full_oracle_unpruned(g, target)
        assert rep.trop_tev == brute
        assert stats.max_resolutions <= 1


def test_full_oracle_n4(example_b):
    rep, stats = full_oracle_seeded(example_b, 0)
    assert rep.trop_tev == 24
    assert stats.total_types == 2027025
    assert stats.shapes == {"A": 1, "B": 1}


def test_full_oracle_leg_cap(example_a):
    with pytest.raises(TooManyLegs):
        full_oracle(example_a, random_target(example_a.n, 0))


def test_structured_oracle_rejects_degenerate_points(toy):
    pts = [(Fraction(0), Fraction(0)), (Fraction(0), Fraction(0)), (Fraction(1), Fraction(5))]
    with pytest.raises(NonGenericConfiguration):
        structured_oracle(toy, pts)


def test_invariance_on_toy(toy):
    res = invariance_check(toy, trials=3, seed=1)
    assert res["invariant"]
    for s in SPLITS:
        rep, _ = full_oracle_seeded(toy, 4, split=s)
        assert rep.trop_tev == 2


def test_formula_value_dispatch(plane_deg2, toy):
    assert formula_value(plane_deg2) == 1
    assert formula_value(toy) == trop_tev(toy).value


def test_identity_suite_small():
    res = identity_check((-4, 4), (0, 4), n_max=5, samples=5)
    assert res["passed"], res["failures"]
    # the second negation rule fails for some negative x
    assert res["upper_negation_fails_for_negative_x"] > 0


def test_plane_structured(plane_deg2):
    assert structured_oracle_seeded(plane_deg2, 0).trop_tev == 1
    assert validate(1, 4, [[1, 1], [], [1, 1], [1, 1]]).is_p2 is False
