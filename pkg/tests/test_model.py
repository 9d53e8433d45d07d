from __future__ import annotations

import itertools
import json

import pytest

from tests.conftest import instance_path
from troptev.model import (
    BalanceViolation,
    CurveClass,
    DimensionViolation,
    InfeasibleClass,
    InvalidContactData,
    NonPositiveWeight,
    P2ProfileViolation,
    TooFewMarkings,
    class_of,
    degree_of,
    dump_instance,
    grid_instances,
    instance_from_json,
    load_instance,
    partitions,
    profile_of_class,
    validate,
)


def test_validate_sorts_but_keeps_input_order():
    g = validate(2, 5, [[2, 1], [2], [1, 1, 1], [4, 4]])
    assert g.mu[0] == (1, 2)
    assert g.input_mu[0] == (2, 1)
    assert g.m == 8 and g.sums == (3, 2, 3, 8)


def test_printed_instance_reports_y_excess():
    # [PAPER] the printed data is off by one on the y axis
    with pytest.raises(InvalidContactData) as err:
        load_instance(instance_path("example1_printed"))
    assert err.value.violations == [BalanceViolation("y", 1)]
    assert "BalanceViolation(y, +1)" in str(err.value)


def test_all_violations_collected():
    with pytest.raises(InvalidContactData) as err:
        validate(1, 2, [[0], [], [1], [3]])
    exc = err.value
    assert exc.has(NonPositiveWeight)
    assert exc.has(TooFewMarkings)
    assert exc.has(DimensionViolation)
    assert exc.has(BalanceViolation)


def test_plane_target_gates():
    with pytest.raises(InvalidContactData) as err:
        validate(2, 3, [[1], [1], [1], [3]], target="p2")
    assert err.value.has(P2ProfileViolation)
    g = validate(1, 4, [[1, 1], [], [1, 1], [1, 1]], target="p2")
    assert g.is_p2


def test_degree_is_balanced_and_labelled_in_input_order():
    g = validate(2, 5, [[2, 1], [2], [1, 1, 1], [4, 4]])
    ends = degree_of(g)
    assert [e.label for e in ends] == list(range(1, 9))
    assert ends[0].vector == (-2, 4)
    assert sum(e.vector[0] for e in ends) == 0 and sum(e.vector[1] for e in ends) == 0


def test_class_roundtrip():
    g = validate(2, 5, [[1, 2], [2], [1, 1, 1], [4, 4]])
    beta = class_of(g)
    assert (beta.x, beta.y) == (8, 3)
    ones = profile_of_class(beta)
    assert ones.lengths == beta.intersections
    assert all(w == 1 for p in ones.mu for w in p)


def test_infeasible_classes():
    with pytest.raises(InfeasibleClass):
        profile_of_class(CurveClass(1, 1, 2))  # beta.D2 < 0
    with pytest.raises(InfeasibleClass):
        profile_of_class(CurveClass(2, 1, 1))  # m odd


def test_json_roundtrip(tmp_path):
    g = validate(3, 4, [[1], [1], [1], [1, 1, 2]])
    p = tmp_path / "g.json"
    p.write_text(dump_instance(g))
    assert load_instance(p) == g
    assert instance_from_json(json.loads(dump_instance(g))) == g


def test_partitions():
    assert list(partitions(4, 2)) == [(2, 2), (2, 1, 1), (1, 1, 1, 1)]
    assert list(partitions(4, 4, 2)) == [(3, 1), (2, 2)]
    assert list(partitions(0, 3)) == [()]


def _brute_grid(a_values, s1_max, wmax, nmax):
    """[DERIVED] every multiset of profiles, filtered by validity."""
    def multisets(max_len):
        for k in range(max_len + 1):
            yield from itertools.combinations_with_replacement(range(1, wmax + 1), k)

    out = set()
    for a in a_values:
        for n in range(3, nmax + 1):
            m = 2 * (n - 1)
            for mus in itertools.product(list(multisets(m)), repeat=4):
                if sum(len(p) for p in mus) != m or sum(mus[0]) > s1_max:
                    continue
                try:
                    g = validate(a, n, mus)
                except InvalidContactData:
                    continue
                out.add((a, n, g.mu))
    return out


def test_grid_matches_brute_force():
    got = [(g.a, g.n, g.mu) for g in grid_instances((1, 2), s1_max=2, wmax=2, nmax=4)]
    assert len(got) == len(set(got))
    assert set(got) == _brute_grid((1, 2), 2, 2, 4)
