from __future__ import annotations

import random

import pytest

from troptev.formula import (
    ComparisonStatus,
    InvalidContactData,
    ZeroReason,
    baseline_profile,
    comparison_report,
    conjecture_blowup,
    conjecture_pbundle,
    labelled_degree,
    per_curve_multiplicity,
    predicted_counts,
    profile_factor,
    search_separations,
    solve_profile,
    trop_tev,
    trop_tev_p2,
)
from troptev.model import grid_instances, validate
from troptev.oracle import full_oracle_unpruned, random_target, structured_oracle_seeded

GRID = list(grid_instances(a_values=(1, 2), s1_max=2, wmax=3, nmax=5))
NONZERO = [g for g in GRID if trop_tev(g).value]


def test_example_values(example_a, example_b, toy):
    # [PAPER]
    assert trop_tev(example_b).value == 24
    assert labelled_degree(example_b) == 144
    assert trop_tev(example_a).value == 512
    # [DERIVED] brute force over every tree type
    rep, _ = full_oracle_unpruned(toy, random_target(toy.n, 3))
    assert trop_tev(toy).value == rep == 2


def test_factor_breakdown(example_a):
    res = trop_tev(example_a)
    assert res.profile_factors == (4, 2, 1, 16)
    assert res.a_exponent == 4 - 1 - 2
    assert res.binomial == 2
    assert res.zero_reason is ZeroReason.NONE


def test_profile_factor():
    assert profile_factor([1, 1, 1]) == 1
    assert profile_factor([4, 4]) == 16
    assert profile_factor([1, 2]) == 4
    assert profile_factor([]) == 1


@pytest.mark.parametrize(
    "a,n,mu,reason",
    [
        (1, 4, [[1, 1, 1, 1], [], [4], [4]], ZeroReason.MU1_TOO_LONG),
        (1, 4, [[4], [], [1, 1, 1, 1], [4]], ZeroReason.MU3_TOO_LONG),
        (1, 3, [[], [1, 1, 1], [], [3]], ZeroReason.BINOMIAL_ZERO),
    ],
)
def test_zero_reasons(a, n, mu, reason):
    g = validate(a, n, mu)
    res = trop_tev(g)
    assert res.value == 0 and res.zero_reason is reason
    # [DERIVED]
    assert structured_oracle_seeded(g, 0).trop_tev == 0


def test_all_ones_with_a2_is_nonzero():
    g = validate(2, 3, [[1], [], [1], [1, 1]])
    res = trop_tev(g)
    assert res.value == 1 and res.discrepancy
    assert structured_oracle_seeded(g, 1).trop_tev == 1


def test_plane_formula(plane_deg2):
    assert trop_tev_p2(plane_deg2).value == 1
    with pytest.raises(ValueError):
        trop_tev_p2(validate(1, 3, [[1], [1], [1], [2]]))
    zero = validate(1, 4, [[4], [], [4], [1, 1, 1, 1]], target="p2")
    assert trop_tev_p2(zero).value == 0


def test_formula_matches_structured_oracle_on_small_grid():
    # [DERIVED]
    rng = random.Random(5)
    for g in rng.sample(GRID, 150):
        assert trop_tev(g).value == structured_oracle_seeded(g, 2).trop_tev, g.short()


def test_predicted_counts_times_multiplicity():
    for g in NONZERO:
        pc = predicted_counts(g)
        assert pc.type_a_labelled + pc.type_b_labelled == pc.total_labelled
        assert pc.total_unlabelled * per_curve_multiplicity(g) == trop_tev(g).value


def test_per_curve_multiplicity_raises_on_negative_exponent():
    g = validate(1, 3, [[], [1, 1, 1], [], [3]])
    with pytest.raises(ValueError):
        per_curve_multiplicity(g)


def test_baseline_profile(example_b, example_a):
    prof = baseline_profile(example_b)
    assert prof is not None and prof.satisfies(example_b)
    assert solve_profile(example_a, (0, 0, 0, 0), 0, 99) is None
    with pytest.raises(ValueError):
        solve_profile(example_a, (1, 0, 0, 0), 1, 0)
    with pytest.raises(ValueError):
        solve_profile(example_a, (0, 1, 0, 1), 1, 0)


def test_comparison_statuses():
    odd = search_separations("odd")
    assert any(r.lhs == 0 and r.rhs > 0 for r in odd)
    for r in search_separations("even"):
        if r.j >= 2:
            assert r.status is ComparisonStatus.INFEASIBLE_CLASS and (r.lhs, r.rhs) == (0, 1)
        else:
            assert r.status is ComparisonStatus.PAPER_DISCREPANCY and r.lhs == 1
    assert comparison_report("even", 1, 2, 4).status is ComparisonStatus.OUT_OF_RANGE
    with pytest.raises(ValueError):
        comparison_report("odd", 1, 1, 3)


def test_conjectures_reduce_to_surface_formula():
    # [DERIVED] r=1 specialisations are the closed formula itself
    rng = random.Random(11)
    for g in rng.sample(NONZERO, 10):
        m1, m2, m3, m4 = g.mu
        assert conjecture_pbundle(1, g.a, [m1, m3, m4, m2], g.n).value == trop_tev(g).value
    for g in rng.sample([h for h in NONZERO if h.a == 1], 10):
        m1, m2, m3, m4 = g.mu
        assert conjecture_blowup(2, [m2, m1, m4, m3], g.n, points=1).value == trop_tev(g).value


def test_conjecture_dimension_gates():
    with pytest.raises(InvalidContactData):
        conjecture_pbundle(1, 1, [[1], [1], [1], [1]], 4)
    with pytest.raises(ValueError):
        conjecture_blowup(2, [[1]] * 3, 3, points=3)
    with pytest.raises(ValueError):
        conjecture_pbundle(2, 1, [[1]] * 4, 3)
