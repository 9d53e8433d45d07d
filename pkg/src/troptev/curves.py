"""Plane tropical curves: abstract trees, balanced realizations, shapes,
leaf profiles and multiplicities.
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .exactmath import Vec2Q, Vec2Z, det2, primitive_and_length
from .formula import LeafProfile
from .model import ContactData, End

__all__ = [
    "Leg",
    "CombTree",
    "PlaneMap",
    "LeafSpec",
    "ContributingCurve",
    "ZeroEdgeDirection",
    "ZeroMultiplicity",
    "NonGenericConfiguration",
    "MalformedTree",
    "balance_propagate",
    "classify",
    "central_vertex",
    "curve_multiplicity",
    "profile_of",
    "positions_of",
    "build_central_curve",
    "solve_double_leaf",
    "solve_single_leaf",
    "PAIR_KIND",
]

MARKING = "marking"
END = "end"

# two-vertex leaf ray pairs and the tally each one feeds
PAIR_KIND = {
    frozenset((1, 2)): "alpha",
    frozenset((1, 3)): "beta",
    frozenset((2, 3)): "gamma",
    frozenset((3, 4)): "delta",
    frozenset((1, 4)): "chi",
}


class ZeroEdgeDirection(ValueError):
    """A bounded edge between ends on both sides is contracted."""


class ZeroMultiplicity(ValueError):
    """The curve is not rigid: some local determinant vanishes."""


class NonGenericConfiguration(ValueError):
    """A solve landed exactly on a cone boundary."""


class MalformedTree(ValueError):
    pass


@dataclass(frozen=True)
class Leg:
    kind: str  # MARKING or END
    label: int  # marking index 1..n, or end label q_1..q_m
    vertex: int
    vector: Vec2Z = (0, 0)
    divisor: int = 0
    weight: int = 0

    @classmethod
    def marking(cls, label: int, vertex: int) -> "Leg":
        return cls(MARKING, label, vertex)

    @classmethod
    def end(cls, e: End, vertex: int) -> "Leg":
        return cls(END, e.label, vertex, e.vector, e.divisor, e.weight)


@dataclass(frozen=True)
class CombTree:
    num_vertices: int
    edges: Tuple[Tuple[int, int], ...]
    legs: Tuple[Leg, ...]

    def __post_init__(self):
        if len(self.edges) != self.num_vertices - 1:
            raise MalformedTree("a tree on k vertices has k-1 edges")
        seen = {0}
        queue = deque([0])
        adj = self.adjacency()
        while queue:
            v = queue.popleft()
            for w, _ in adj[v]:
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        if len(seen) != self.num_vertices:
            raise MalformedTree("tree is disconnected")
        for leg in self.legs:
            if not 0 <= leg.vertex < self.num_vertices:
                raise MalformedTree(f"leg {leg} attached to missing vertex")

    def adjacency(self) -> List[List[Tuple[int, int]]]:
        """For each vertex, (neighbour, edge index) pairs."""
        adj: List[List[Tuple[int, int]]] = [[] for _ in range(self.num_vertices)]
        for k, (u, v) in enumerate(self.edges):
            adj[u].append((v, k))
            adj[v].append((u, k))
        return adj

    def legs_at(self, v: int) -> List[Leg]:
        return [leg for leg in self.legs if leg.vertex == v]

    def valence(self, v: int) -> int:
        return sum(1 for e in self.edges if v in e) + len(self.legs_at(v))

    @property
    def markings(self) -> List[Leg]:
        return sorted((l for l in self.legs if l.kind == MARKING), key=lambda l: l.label)

    @property
    def ends(self) -> List[Leg]:
        return sorted((l for l in self.legs if l.kind == END), key=lambda l: l.label)

    def orient(self, root: int) -> List[Tuple[int, int]]:
        """Each edge as (parent, child) with respect to ``root``."""
        adj = self.adjacency()
        out: List[Optional[Tuple[int, int]]] = [None] * len(self.edges)
        seen = {root}
        queue = deque([root])
        while queue:
            v = queue.popleft()
            for w, k in adj[v]:
                if w not in seen:
                    seen.add(w)
                    out[k] = (v, w)
                    queue.append(w)
        return out  # type: ignore[return-value]

    def subtree_vertices(self, root: int) -> List[List[int]]:
        """Vertices below each vertex (itself included) when rooted at ``root``."""
        oriented = self.orient(root)
        children: List[List[int]] = [[] for _ in range(self.num_vertices)]
        for p, c in oriented:
            children[p].append(c)
        below: List[List[int]] = [[] for _ in range(self.num_vertices)]

        def walk(v: int) -> List[int]:
            acc = [v]
            for c in children[v]:
                acc.extend(walk(c))
            below[v] = acc
            return acc

        walk(root)
        return below


def balance_propagate(tree: CombTree, root: int) -> List[Tuple[int, int, Vec2Z]]:
    """Weighted direction of every bounded edge, oriented away from ``root``.

    The direction of an edge is the sum of the end vectors beyond it.  Raises
    :class:`ZeroEdgeDirection` if a contracted edge has ends on both sides.
    """
    oriented = tree.orient(root)
    below = tree.subtree_vertices(root)
    leg_sum: List[Vec2Z] = [(0, 0)] * tree.num_vertices
    has_end = [False] * tree.num_vertices
    for leg in tree.legs:
        x, y = leg_sum[leg.vertex]
        leg_sum[leg.vertex] = (x + leg.vector[0], y + leg.vector[1])
        if leg.kind == END:
            has_end[leg.vertex] = True
    any_end = any(has_end)
    out = []
    for parent, child in oriented:
        sx = sy = 0
        ends_beyond = False
        for v in below[child]:
            sx += leg_sum[v][0]
            sy += leg_sum[v][1]
            ends_beyond = ends_beyond or has_end[v]
        direction = (sx, sy)
        if direction == (0, 0) and ends_beyond and any_end:
            ends_inside = set(below[child])
            if any(has_end[v] for v in range(tree.num_vertices) if v not in ends_inside):
                raise ZeroEdgeDirection(f"edge {parent}-{child} separates ends but has direction 0")
        out.append((parent, child, direction))
    return out


@dataclass(frozen=True)
class PlaneMap:
    """A tree with a root position, positive edge lengths and weighted directions."""

    tree: CombTree
    root: int
    root_position: Vec2Q
    lengths: Tuple[Fraction, ...]
    oriented: Tuple[Tuple[int, int, Vec2Z], ...] = field(default=())

    def __post_init__(self):
        if not self.oriented:
            object.__setattr__(self, "oriented", tuple(balance_propagate(self.tree, self.root)))
        if len(self.lengths) != len(self.tree.edges):
            raise MalformedTree("one length per bounded edge")
        if any(l <= 0 for l in self.lengths):
            raise MalformedTree("edge lengths must be positive")
        self.check_balanced()

    def vertex_positions(self) -> List[Vec2Q]:
        pos: List[Optional[Vec2Q]] = [None] * self.tree.num_vertices
        pos[self.root] = (Fraction(self.root_position[0]), Fraction(self.root_position[1]))
        # oriented edges come out of a BFS, so parents are placed first
        for (parent, child, d), length in zip(self.oriented, self.lengths):
            px, py = pos[parent]  # type: ignore[misc]
            pos[child] = (px + length * d[0], py + length * d[1])
        return pos  # type: ignore[return-value]

    def check_balanced(self) -> None:
        out: List[Vec2Z] = [(0, 0)] * self.tree.num_vertices
        for leg in self.tree.legs:
            x, y = out[leg.vertex]
            out[leg.vertex] = (x + leg.vector[0], y + leg.vector[1])
        for parent, child, d in self.oriented:
            x, y = out[parent]
            out[parent] = (x + d[0], y + d[1])
            x, y = out[child]
            out[child] = (x - d[0], y - d[1])
        bad = [v for v, s in enumerate(out) if s != (0, 0)]
        if bad:
            raise AssertionError(f"unbalanced at vertices {bad}")


def positions_of(pmap: PlaneMap) -> Dict[int, Vec2Q]:
    """Image of every marking, keyed by marking index."""
    pos = pmap.vertex_positions()
    return {leg.label: pos[leg.vertex] for leg in pmap.tree.markings}


# -- central-vertex shapes --------------------------------------------------------


def _components_without(tree: CombTree, v: int) -> List[List[int]]:
    adj = tree.adjacency()
    comps = []
    for w, _ in adj[v]:
        comp = [w]
        seen = {v, w}
        queue = deque([w])
        while queue:
            u = queue.popleft()
            for z, _ in adj[u]:
                if z not in seen:
                    seen.add(z)
                    comp.append(z)
                    queue.append(z)
        comps.append(comp)
    return comps


def central_vertex(tree: CombTree) -> Optional[int]:
    """The n-valent vertex whose removal leaves one marking per component."""
    n = len(tree.markings)
    for v in range(tree.num_vertices):
        if tree.valence(v) != n:
            continue
        legs_v = tree.legs_at(v)
        if any(l.kind == END for l in legs_v):
            continue
        ok = True
        for comp in _components_without(tree, v):
            marks = sum(1 for u in comp for l in tree.legs_at(u) if l.kind == MARKING)
            if marks != 1:
                ok = False
                break
        if ok and len(legs_v) <= 1:
            return v
    return None


def _leaf_shapes(tree: CombTree, v: int) -> Optional[List[int]]:
    """Vertex count of each leaf at ``v``, or None if some leaf is malformed."""
    sizes = []
    for leg in tree.legs_at(v):
        if leg.kind == MARKING:
            sizes.append(0)
    adj = tree.adjacency()
    for comp in _components_without(tree, v):
        legs = [l for u in comp for l in tree.legs_at(u)]
        ends = [l for l in legs if l.kind == END]
        if len(comp) == 1:
            if len(ends) != 1 or len(legs) != 2:
                return None
        elif len(comp) == 2:
            if len(ends) != 2 or len(legs) != 3:
                return None
            w = next(u for u in comp if any(z == v for z, _ in adj[u]))
            # the unmarked vertex sits between the centre and the marking
            if any(l.kind == MARKING for l in tree.legs_at(w)):
                return None
        else:
            return None
        sizes.append(len(comp))
    return sizes


def classify(tree: CombTree) -> str:
    """'A', 'B' or 'NotContributingShape'."""
    v = central_vertex(tree)
    if v is None:
        return "NotContributingShape"
    sizes = _leaf_shapes(tree, v)
    if sizes is None:
        return "NotContributingShape"
    n = len(tree.markings)
    tally = (sizes.count(0), sizes.count(1), sizes.count(2))
    if tally == (1, 0, n - 1):
        return "A"
    if tally == (0, 2, n - 2):
        return "B"
    return "NotContributingShape"


# -- construction from leaf data --------------------------------------------------


@dataclass(frozen=True)
class LeafSpec:
    """One leaf at the central vertex.

    ``ends`` has length 2 (end at the unmarked vertex, end at the marked one)
    or length 1 for a one-vertex leaf.  ``lengths`` matches the bounded edges
    from the centre outward.
    """

    marking: int
    ends: Tuple[End, ...]
    lengths: Tuple[Fraction, ...]

    @property
    def rays(self) -> Tuple[int, ...]:
        return tuple(e.divisor for e in self.ends)

    @property
    def edge_directions(self) -> List[Vec2Z]:
        if len(self.ends) == 1:
            return [self.ends[0].vector]
        w, u = self.ends
        return [(w.vector[0] + u.vector[0], w.vector[1] + u.vector[1]), u.vector]


def solve_double_leaf(V: Vec2Q, x: Vec2Q, w_at_w: Vec2Z, w_at_u: Vec2Z) -> Optional[Tuple[Fraction, Fraction]]:
    """Lengths (t1, t2) > 0 with x = V + t1 (w_at_w + w_at_u) + t2 w_at_u.

    Returns None if no positive solution exists; raises
    :class:`NonGenericConfiguration` if the point lies on the cone boundary.
    """
    d1 = (w_at_w[0] + w_at_u[0], w_at_w[1] + w_at_u[1])
    d2 = w_at_u
    det = d1[0] * d2[1] - d1[1] * d2[0]
    r = (x[0] - V[0], x[1] - V[1])
    if det == 0:
        return None
    t1 = Fraction(r[0] * d2[1] - r[1] * d2[0]) / det
    t2 = Fraction(d1[0] * r[1] - d1[1] * r[0]) / det
    if t1 > 0 and t2 > 0:
        return t1, t2
    if (t1 == 0 and t2 >= 0) or (t2 == 0 and t1 >= 0):
        raise NonGenericConfiguration(f"point {x} on a leaf-cone boundary from {V}")
    return None


def solve_single_leaf(V: Vec2Q, x: Vec2Q, w: Vec2Z) -> Optional[Fraction]:
    """Length s > 0 with x = V + s w, or None."""
    r = (x[0] - V[0], x[1] - V[1])
    if det2(r, w) != 0:
        return None
    s = Fraction(r[0], w[0]) if w[0] else Fraction(r[1], w[1])
    if s > 0:
        return s
    if s == 0:
        raise NonGenericConfiguration(f"point {x} coincides with the centre")
    return None


def build_central_curve(
    V: Vec2Q, center_marking: Optional[int], leaves: Sequence[LeafSpec]
) -> PlaneMap:
    """Assemble the tree and plane map of a central-vertex curve rooted at V."""
    edges: List[Tuple[int, int]] = []
    legs: List[Leg] = []
    lengths: List[Fraction] = []
    if center_marking is not None:
        legs.append(Leg.marking(center_marking, 0))
    nv = 1
    for leaf in leaves:
        if len(leaf.ends) == 1:
            u = nv
            nv += 1
            edges.append((0, u))
            lengths.append(leaf.lengths[0])
            legs.append(Leg.marking(leaf.marking, u))
            legs.append(Leg.end(leaf.ends[0], u))
        elif len(leaf.ends) == 2:
            w, u = nv, nv + 1
            nv += 2
            edges.append((0, w))
            edges.append((w, u))
            lengths.extend(leaf.lengths)
            legs.append(Leg.end(leaf.ends[0], w))
            legs.append(Leg.marking(leaf.marking, u))
            legs.append(Leg.end(leaf.ends[1], u))
        else:
            raise MalformedTree("leaves carry one or two ends")
    tree = CombTree(nv, tuple(edges), tuple(legs))
    return PlaneMap(tree, 0, V, tuple(Fraction(l) for l in lengths))


@dataclass(frozen=True)
class ContributingCurve:
    plane_map: PlaneMap
    curve_type: str
    profile: LeafProfile
    multiplicity: int
    assignment: Tuple[Tuple[int, Tuple[int, ...]], ...]  # (marking, end labels)
    center_marking: Optional[int] = None

    @property
    def central_position(self) -> Vec2Q:
        return self.plane_map.root_position

    def unlabelled_key(self) -> Tuple:
        """Identifies the curve up to relabelling ends of equal weight and ray."""
        legs = {l.label: (l.divisor, l.weight) for l in self.plane_map.tree.ends}
        return (
            self.curve_type,
            self.center_marking,
            tuple((m, tuple(legs[q] for q in qs)) for m, qs in self.assignment),
        )

    def to_json(self) -> Dict:
        pmap = self.plane_map
        pos = pmap.vertex_positions()
        return {
            "type": self.curve_type,
            "multiplicity": str(self.multiplicity),
            "profile": self.profile.to_json(),
            "center_marking": self.center_marking,
            "vertices": [[_q(p[0]), _q(p[1])] for p in pos],
            "edges": [
                {"from": p, "to": c, "direction": list(d), "length": _q(l)}
                for (p, c, d), l in zip(pmap.oriented, pmap.lengths)
            ],
            "legs": [
                {
                    "kind": l.kind,
                    "label": l.label,
                    "vertex": l.vertex,
                    "vector": list(l.vector),
                    "divisor": l.divisor,
                    "weight": l.weight,
                }
                for l in sorted(pmap.tree.legs, key=lambda l: (l.kind, l.label))
            ],
            "assignment": [[m, list(qs)] for m, qs in self.assignment],
        }

    def canonical(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))


def _q(x: Fraction) -> List[str]:
    x = Fraction(x)
    return [str(x.numerator), str(x.denominator)]


def curve_from_json(data: Dict) -> Tuple[List[Vec2Q], List[Dict], List[Dict], str]:
    """Vertex positions, edges and legs of a serialized curve (for drawing)."""
    verts = [(Fraction(int(p[0][0]), int(p[0][1])), Fraction(int(p[1][0]), int(p[1][1]))) for p in data["vertices"]]
    return verts, data["edges"], data["legs"], data["type"]


# -- multiplicity and profile -----------------------------------------------------


def _local_det(u: Vec2Z, v: Vec2Z) -> int:
    pu, lu = primitive_and_length(u)
    pv, lv = primitive_and_length(v)
    return lu * lv * abs(det2(pu, pv))


def curve_multiplicity(pmap: PlaneMap) -> int:
    """Product of local evaluation multiplicities.

    Every unmarked leaf vertex contributes (end weights) * |det| of the
    primitive directions of its two outgoing edges; in type B the centre adds
    the same quantity for the two one-edge leaves.
    """
    tree = pmap.tree
    shape = classify(tree)
    if shape == "NotContributingShape":
        raise ZeroMultiplicity("shape cannot contribute")
    centre = central_vertex(tree)
    out_dirs: List[List[Vec2Z]] = [[] for _ in range(tree.num_vertices)]
    for parent, child, d in pmap.oriented:
        out_dirs[parent].append(d)
    mult = 1
    for v in range(tree.num_vertices):
        legs = tree.legs_at(v)
        if v == centre or any(l.kind == MARKING for l in legs):
            continue
        vectors = [l.vector for l in legs] + out_dirs[v]
        if len(vectors) != 2:
            raise ZeroMultiplicity(f"unmarked vertex {v} is not trivalent")
        mult *= _local_det(vectors[0], vectors[1])
    if shape == "B":
        fixed = [d for (p, c, d) in pmap.oriented if p == centre and any(l.kind == MARKING for l in tree.legs_at(c))]
        if len(fixed) != 2:
            raise ZeroMultiplicity("type B needs two one-edge leaves")
        mult *= _local_det(fixed[0], fixed[1])
    if mult == 0:
        raise ZeroMultiplicity("a local determinant vanishes")
    return mult


def profile_of(pmap: PlaneMap, gamma: Optional[ContactData] = None) -> LeafProfile:
    tree = pmap.tree
    centre = central_vertex(tree)
    if centre is None:
        raise ValueError("no central vertex")
    tallies = {k: 0 for k in ("alpha", "beta", "gamma", "delta", "chi")}
    eps = [0, 0, 0, 0]
    for comp in _components_without(tree, centre):
        rays = [l.divisor for u in comp for l in tree.legs_at(u) if l.kind == END]
        if len(rays) == 1:
            eps[rays[0] - 1] += 1
        elif len(rays) == 2:
            kind = PAIR_KIND.get(frozenset(rays))
            if kind is None:
                raise ZeroMultiplicity(f"leaf with ends on rays {rays} has zero determinant")
            tallies[kind] += 1
        else:
            raise ValueError("leaf with more than two ends")
    prof = LeafProfile(eps=tuple(eps), **tallies)  # type: ignore[arg-type]
    if gamma is not None and not prof.satisfies(gamma):
        raise AssertionError(f"profile {prof} violates the incidence system for {gamma.short()}")
    return prof
