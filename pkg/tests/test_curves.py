from __future__ import annotations

from fractions import Fraction

import pytest

from troptev.curves import (
    CombTree,
    ContributingCurve,
    Leg,
    LeafSpec,
    MalformedTree,
    NonGenericConfiguration,
    PlaneMap,
    ZeroEdgeDirection,
    build_central_curve,
    classify,
    curve_from_json,
    curve_multiplicity,
    positions_of,
    profile_of,
    solve_double_leaf,
    solve_single_leaf,
)
from troptev.model import End, degree_of

F = Fraction
ORIGIN = (F(0), F(0))


def _toy_curve(toy, t=(F(1), F(1), F(1), F(1))):
    q1, q2, q3, q4 = degree_of(toy)
    leaves = [LeafSpec(2, (q1, q2), t[:2]), LeafSpec(3, (q3, q4), t[2:])]
    return build_central_curve(ORIGIN, 1, leaves)


def test_build_and_positions(toy):
    pmap = _toy_curve(toy)
    pos = positions_of(pmap)
    assert pos[1] == ORIGIN
    # x2 = t1 * (n1 + n2) + t2 * n2
    assert pos[2] == (F(-1), F(3))
    assert pos[3] == (F(1), F(-4))
    assert classify(pmap.tree) == "A"


def test_multiplicity_is_product_of_leaf_determinants(toy):
    # [DERIVED] |det((-1,1),(0,1))| * |det((1,0),(0,-2))|
    assert curve_multiplicity(_toy_curve(toy)) == 1 * 2
    assert profile_of(_toy_curve(toy), toy).counts == (1, 0, 0, 1, 0)


def test_type_b_shape(toy):
    q1, q2, q3, q4 = degree_of(toy)
    leaves = [
        LeafSpec(1, (q1,), (F(2),)),
        LeafSpec(2, (q2,), (F(1),)),
        LeafSpec(3, (q3, q4), (F(1), F(1))),
    ]
    pmap = build_central_curve((F(1), F(-1)), None, leaves)
    assert classify(pmap.tree) == "B"
    assert curve_multiplicity(pmap) == 2 * 1
    assert profile_of(pmap).eps == (1, 1, 0, 0)


def test_solvers_invert_construction():
    V = (F(1, 3), F(-2))
    w, u = (-2, 4), (0, 1)
    x = (V[0] + 3 * (w[0] + u[0]) + 5 * u[0], V[1] + 3 * (w[1] + u[1]) + 5 * u[1])
    assert solve_double_leaf(V, x, w, u) == (3, 5)
    assert solve_double_leaf(V, (V[0] + 1, V[1]), w, u) is None
    assert solve_single_leaf(V, (V[0], V[1] + 7), (0, 2)) == F(7, 2)
    assert solve_single_leaf(V, (V[0], V[1] - 7), (0, 2)) is None
    with pytest.raises(NonGenericConfiguration):
        solve_double_leaf(V, (V[0] - 2, V[1] + 5), w, u)  # t2 = 0
    with pytest.raises(NonGenericConfiguration):
        solve_single_leaf(V, V, (1, 0))


def test_non_contributing_shape(toy):
    q1, q2, q3, q4 = degree_of(toy)
    legs = (
        Leg.marking(1, 0), Leg.end(q1, 0), Leg.end(q2, 0),
        Leg.marking(2, 1), Leg.marking(3, 1), Leg.end(q3, 1), Leg.end(q4, 1),
    )
    tree = CombTree(2, ((0, 1),), legs)
    assert classify(tree) == "NotContributingShape"


def test_malformed_trees(toy):
    q1, *_ = degree_of(toy)
    with pytest.raises(MalformedTree):
        CombTree(3, ((0, 1),), ())
    with pytest.raises(MalformedTree):
        CombTree(2, ((0, 0),), ())
    with pytest.raises(MalformedTree):
        CombTree(1, (), (Leg.end(q1, 4),))


def test_zero_edge_direction():
    # opposite ends on each side of the edge leave it with direction 0
    e1, e2 = End(1, 3, 1, (1, 0)), End(2, 1, 1, (-1, 0))
    e3, e4 = End(3, 2, 1, (0, 1)), End(4, 4, 1, (0, -1))
    bad = CombTree(2, ((0, 1),), (Leg.end(e1, 0), Leg.end(e2, 0), Leg.end(e3, 1), Leg.end(e4, 1)))
    with pytest.raises(ZeroEdgeDirection):
        PlaneMap(bad, 0, ORIGIN, (F(1),))


def test_lengths_must_be_positive(toy):
    pmap = _toy_curve(toy)
    with pytest.raises(MalformedTree):
        PlaneMap(pmap.tree, 0, ORIGIN, (F(1), F(0), F(1), F(1)))


def test_json_roundtrip(toy):
    pmap = _toy_curve(toy)
    curve = ContributingCurve(pmap, "A", profile_of(pmap), curve_multiplicity(pmap), ((2, (1, 2)), (3, (3, 4))), 1)
    data = curve.to_json()
    verts, edges, legs, ctype = curve_from_json(data)
    assert verts == pmap.vertex_positions()
    assert ctype == "A" and data["multiplicity"] == "2"
    assert len(edges) == 4 and len(legs) == 7
    assert curve.canonical() == ContributingCurve(**curve.__dict__).canonical()
