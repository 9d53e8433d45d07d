"""Independent checks of the closed formula.

* :func:`structured_oracle` searches every central-vertex curve through an
  arbitrary generic point configuration and sums their multiplicities.  The
  multiplicity of a candidate is the absolute Jacobian determinant of the
  map (centre, edge lengths) -> marking positions, assembled block by block.
* :func:`full_oracle` knows nothing about central vertices.  It runs over
  trivalent trees with labelled legs, solves the square linear system
  "positions = points, forgetful coordinates = lambda" exactly and adds the
  absolute determinant of every solution with positive lengths.
* :func:`identity_check` verifies the binomial identities behind the count
  of type A/B curves.
"""
from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .curves import CombTree, Leg, NonGenericConfiguration, classify
from .exactmath import Vec2Q, Vec2Z, binomial_comb, binomial_gen
from .formula import trop_tev, trop_tev_p2
from .model import ContactData, End, degree_of
from .reports import CountReport

__all__ = [
    "EndClass",
    "GenericTarget",
    "NonGenericTarget",
    "OracleDisagreement",
    "TooManyLegs",
    "end_classes",
    "random_points",
    "random_target",
    "central_candidates",
    "central_solutions",
    "CentralCandidate",
    "structured_oracle",
    "structured_oracle_seeded",
    "full_oracle_seeded",
    "formula_value",
    "FullOracleStats",
    "full_oracle",
    "full_oracle_unpruned",
    "bareiss_solve",
    "invariance_check",
    "identity_check",
    "SPLITS",
]

FULL_ORACLE_MAX_LEGS = 10


class NonGenericTarget(ValueError):
    """Singular system or a zero edge length; pick another target."""


class TooManyLegs(ValueError):
    pass


class OracleDisagreement(AssertionError):
    pass


# -- end classes ---------------------------------------------------------------------


@dataclass(frozen=True)
class EndClass:
    """Ends with the same ray and weight; they are interchangeable."""

    divisor: int
    weight: int
    vector: Vec2Z
    count: int


def end_classes(gamma: ContactData) -> List[EndClass]:
    tally = Counter((e.divisor, e.weight, e.vector) for e in degree_of(gamma))
    return [EndClass(d, w, v, c) for (d, w, v), c in sorted(tally.items())]


def _det(u, v):
    return u[0] * v[1] - u[1] * v[0]


def _rand_q(rng: random.Random, lo: int, hi: int, den_bits: int = 16) -> Fraction:
    den = rng.randint(1, 1 << den_bits)
    return Fraction(rng.randint(lo * den, hi * den), den)


def random_points(n: int, seed: int, spread: int = 1 << 10) -> List[Vec2Q]:
    """n rational points with pairwise distinct coordinates, deterministic in ``seed``."""
    rng = random.Random(seed)
    while True:
        pts = [(_rand_q(rng, -spread, spread), _rand_q(rng, -spread, spread)) for _ in range(n)]
        if len({p[0] for p in pts}) == n and len({p[1] for p in pts}) == n:
            return pts


# -- structured oracle ---------------------------------------------------------------


def _cone_solve(V: Vec2Q, x: Vec2Q, d1: Vec2Z, d2: Vec2Z) -> Optional[Tuple[Fraction, Fraction]]:
    """Coefficients (s, t) of x - V in the basis d1, d2; None if d1, d2 are parallel."""
    det = _det(d1, d2)
    if det == 0:
        return None
    rx, ry = x[0] - V[0], x[1] - V[1]
    s = Fraction(rx * d2[1] - ry * d2[0], 1) / det
    t = Fraction(d1[0] * ry - d1[1] * rx, 1) / det
    return s, t


def _leaf_options(
    V: Vec2Q, x: Vec2Q, classes: Sequence[EndClass]
) -> List[Tuple[int, int, int]]:
    """Two-vertex leaves from V reaching x: (class at the unmarked vertex,
    class at the marking, Jacobian block |det|)."""
    out = []
    for i, cw in enumerate(classes):
        for j, cu in enumerate(classes):
            if i == j and cw.count < 2:
                continue
            stem = (cw.vector[0] + cu.vector[0], cw.vector[1] + cu.vector[1])
            sol = _cone_solve(V, x, stem, cu.vector)
            if sol is None:
                continue
            s, t = sol
            if s > 0 and t > 0:
                out.append((i, j, abs(_det(stem, cu.vector))))
            elif (s == 0 and t >= 0) or (t == 0 and s >= 0):
                raise NonGenericConfiguration(f"marking at {x} on a leaf-cone boundary from {V}")
    return out


def _count_matchings(
    options: Sequence[Sequence[Tuple[int, int, int]]], counts: Tuple[int, ...]
) -> Tuple[int, int]:
    """(number of typed assignments, sum of their weight products)."""

    @lru_cache(maxsize=None)
    def go(k: int, rem: Tuple[int, ...]) -> Tuple[int, int]:
        if k == len(options):
            return (1, 1) if not any(rem) else (0, 0)
        num = tot = 0
        for i, j, w in options[k]:
            r = list(rem)
            r[i] -= 1
            r[j] -= 1
            if r[i] < 0 or r[j] < 0:
                continue
            c, s = go(k + 1, tuple(r))
            num += c
            tot += w * s
        return num, tot

    return go(0, counts)


@dataclass(frozen=True)
class CentralCandidate:
    """A choice of central vertex: type A at a marking or type B from two single-edge leaves."""

    curve_type: str
    V: Vec2Q
    center_marking: Optional[int]
    single: Tuple[Tuple[int, int], ...]  # (marking, class index) for one-vertex leaves
    factor: int  # Jacobian block of the centre (1 for type A)


def central_candidates(
    gamma: ContactData, points: Sequence[Vec2Q], classes: Optional[Sequence[EndClass]] = None
) -> Iterator[CentralCandidate]:
    """Every possible central vertex: each marking (type A) and each positive
    intersection of two single-edge leaf rays (type B)."""
    if classes is None:
        classes = end_classes(gamma)
    n = gamma.n
    for c in range(1, n + 1):
        yield CentralCandidate("A", points[c - 1], c, (), 1)
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            for ci, ki in enumerate(classes):
                for cj, kj in enumerate(classes):
                    if ci == cj and ki.count < 2:
                        continue
                    # V = x_i - s v_i = x_j - t v_j with s, t > 0
                    xi, xj = points[i - 1], points[j - 1]
                    sol = _cone_solve(xj, xi, ki.vector, (-kj.vector[0], -kj.vector[1]))
                    if sol is None:
                        continue
                    s, t = sol
                    if s == 0 or t == 0:
                        raise NonGenericConfiguration("two markings on one ray")
                    if s > 0 and t > 0:
                        V = (xi[0] - s * ki.vector[0], xi[1] - s * ki.vector[1])
                        yield CentralCandidate("B", V, None, ((i, ci), (j, cj)), abs(_det(ki.vector, kj.vector)))


def central_solutions(
    gamma: ContactData, points: Sequence[Vec2Q]
) -> Iterator[Tuple[CentralCandidate, Tuple[Tuple[int, int, int], ...], int]]:
    """Every typed central-vertex curve through ``points``.

    Yields (candidate, per-marking leaf choices, multiplicity); the leaf
    choices are (marking, class at unmarked vertex, class at marking) for
    the two-vertex leaves.  Intended for small instances (audits, tests).
    """
    classes = end_classes(gamma)
    for cand in central_candidates(gamma, points, classes):
        rem = [k.count for k in classes]
        for _, ci in cand.single:
            rem[ci] -= 1
        if min(rem) < 0:
            continue
        used = {m for m, _ in cand.single} | ({cand.center_marking} if cand.center_marking else set())
        others = [k for k in range(1, gamma.n + 1) if k not in used]
        opts = [_leaf_options(cand.V, points[k - 1], classes) for k in others]

        def rec(idx: int, rem: List[int], chosen: List[Tuple[int, int, int]], mult: int):
            if idx == len(others):
                if not any(rem):
                    yield cand, tuple(chosen), mult * cand.factor
                return
            for i, j, w in opts[idx]:
                rem[i] -= 1
                rem[j] -= 1
                if rem[i] >= 0 and rem[j] >= 0:
                    chosen.append((others[idx], i, j))
                    yield from rec(idx + 1, rem, chosen, mult * w)
                    chosen.pop()
                rem[i] += 1
                rem[j] += 1

        yield from rec(0, rem, [], 1)


def _integer_points(points: Sequence[Vec2Q]) -> List[Tuple[int, int]]:
    """Rescale by the common denominator; every cone condition is scale invariant."""
    den = 1
    for p in points:
        for c in p:
            d = Fraction(c).denominator
            den = den * d // _gcd(den, d)
    return [(int(Fraction(p[0]) * den), int(Fraction(p[1]) * den)) for p in points]


def structured_oracle(gamma: ContactData, points: Sequence[Vec2Q], seed: Optional[int] = None) -> CountReport:
    """Sum of multiplicities over all central-vertex curves through generic ``points``.

    Same search as :func:`central_candidates` / :func:`central_solutions`,
    done in integer arithmetic: the centre is kept as (X, Y) / D and the
    leaf systems are decided by signs of cross products.  Type-B centres
    depend only on the two rays, so their leaf options are shared by all
    weight choices on those rays.
    """
    if len(points) != gamma.n:
        raise ValueError(f"need {gamma.n} points, got {len(points)}")
    n = gamma.n
    classes = end_classes(gamma)
    counts = tuple(k.count for k in classes)
    sym = gamma.symmetry
    P = _integer_points(points)
    pairs = []
    for i, cw in enumerate(classes):
        for j, cu in enumerate(classes):
            if i == j and cw.count < 2:
                continue
            det = _det(cw.vector, cu.vector)
            if det:
                stem = (cw.vector[0] + cu.vector[0], cw.vector[1] + cu.vector[1])
                pairs.append((i, j, stem, cu.vector, det, abs(det)))

    def options(X: int, Y: int, D: int, k: int) -> Tuple[Tuple[int, int, int], ...]:
        rx = P[k][0] * D - X
        ry = P[k][1] * D - Y
        out = []
        for i, j, stem, u, det, w in pairs:
            s = (rx * u[1] - ry * u[0]) * det
            t = (stem[0] * ry - stem[1] * rx) * det
            if s > 0 and t > 0:
                out.append((i, j, w))
            elif (s == 0 and t >= 0) or (t == 0 and s >= 0):
                raise NonGenericConfiguration(f"marking {k + 1} on a leaf-cone boundary")
        return tuple(out)

    total = 0
    n_a = n_b = 0
    for c in range(n):
        X, Y = P[c]
        opts = tuple(options(X, Y, 1, k) for k in range(n) if k != c)
        num, weight = _count_matchings(opts, counts)
        total += weight
        n_a += num

    rays = sorted({k.divisor for k in classes})
    by_ray = {r: [ci for ci, k in enumerate(classes) if k.divisor == r] for r in rays}
    for i in range(n):
        for j in range(i + 1, n):
            dx, dy = P[i][0] - P[j][0], P[i][1] - P[j][1]
            for ri in rays:
                ni = gamma.fan.ray(ri)
                for rj in rays:
                    nj = gamma.fan.ray(rj)
                    det0 = -_det(ni, nj)
                    if det0 == 0:
                        continue
                    # s ni - t nj = P_i - P_j
                    s_num = dx * (-nj[1]) - dy * (-nj[0])
                    t_num = ni[0] * dy - ni[1] * dx
                    if s_num == 0 or t_num == 0:
                        raise NonGenericConfiguration("two markings on one ray")
                    if (s_num > 0) != (det0 > 0) or (t_num > 0) != (det0 > 0):
                        continue
                    X = P[i][0] * det0 - s_num * ni[0]
                    Y = P[i][1] * det0 - s_num * ni[1]
                    D = det0
                    if D < 0:
                        X, Y, D = -X, -Y, -D
                    opts = tuple(options(X, Y, D, k) for k in range(n) if k not in (i, j))
                    if any(not o for o in opts):
                        continue
                    for ci in by_ray[ri]:
                        for cj in by_ray[rj]:
                            rem = list(counts)
                            rem[ci] -= 1
                            rem[cj] -= 1
                            if min(rem) < 0:
                                continue
                            num, weight = _count_matchings(opts, tuple(rem))
                            total += abs(_det(classes[ci].vector, classes[cj].vector)) * weight
                            n_b += num
    return CountReport(
        method="structured",
        trop_tev=total,
        labelled_sum=total * sym,
        unlabelled_curves=n_a + n_b,
        labelled_curves=(n_a + n_b) * sym,
        type_a=n_a,
        type_b=n_b,
        seed=seed,
        details={"points": [[str(p[0]), str(p[1])] for p in points]},
    )


def structured_oracle_seeded(gamma: ContactData, seed: int, attempts: int = 20) -> CountReport:
    """Structured oracle on random points, re-drawing on non-generic draws."""
    for k in range(attempts):
        pts = random_points(gamma.n, seed * 1000 + k)
        try:
            return structured_oracle(gamma, pts, seed=seed)
        except NonGenericConfiguration:
            continue
    raise NonGenericConfiguration(f"no generic configuration after {attempts} draws")


# -- exact linear algebra --------------------------------------------------------------


def bareiss_solve(M: Sequence[Sequence[int]], b: Sequence[Fraction]) -> Tuple[int, Optional[List[Fraction]]]:
    """Determinant of the integer matrix M and, if nonzero, the solution of M x = b.

    Fraction-free elimination on the augmented matrix keeps every
    intermediate entry an integer minor.
    """
    n = len(M)
    den = 1
    for v in b:
        den = den * Fraction(v).denominator // _gcd(den, Fraction(v).denominator)
    A = [list(M[i]) + [int(Fraction(b[i]) * den)] for i in range(n)]
    prev = 1
    sign = 1
    for k in range(n):
        p = k
        while p < n and A[p][k] == 0:
            p += 1
        if p == n:
            return 0, None
        if p != k:
            A[k], A[p] = A[p], A[k]
            sign = -sign
        Ak = A[k]
        akk = Ak[k]
        for i in range(k + 1, n):
            Ai = A[i]
            aik = Ai[k]
            if aik == 0:
                if akk != prev:
                    for j in range(k + 1, n + 1):
                        Ai[j] = Ai[j] * akk // prev
                continue
            for j in range(k + 1, n + 1):
                Ai[j] = (Ai[j] * akk - aik * Ak[j]) // prev
            Ai[k] = 0
        prev = akk
    det = sign * A[n - 1][n - 1]
    x: List[Fraction] = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        acc = Fraction(A[i][n])
        for j in range(i + 1, n):
            if A[i][j]:
                acc -= A[i][j] * x[j]
        x[i] = acc / A[i][i]
    return det, [v / den for v in x]


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


# -- full oracle -------------------------------------------------------------------------

# split types of the quartet {1, 2, 3, i}: the pair containing marking 1
SPLITS = ("12|3i", "13|2i", "1i|23")


def _split_masks(split: str, i: int) -> Tuple[int, int]:
    m = lambda *ks: sum(1 << (k - 1) for k in ks)  # noqa: E731
    if split == "12|3i":
        return m(1, 2), m(3, i)
    if split == "13|2i":
        return m(1, 3), m(2, i)
    if split == "1i|23":
        return m(1, i), m(2, 3)
    raise ValueError(f"unknown split {split!r}")


@dataclass(frozen=True)
class GenericTarget:
    """Marking images plus, for each i >= 4, a split type and a length for ft_i."""

    points: Tuple[Vec2Q, ...]
    splits: Tuple[str, ...]  # index i-4
    lambdas: Tuple[Fraction, ...]

    def to_json(self) -> Dict:
        return {
            "points": [[str(p[0]), str(p[1])] for p in self.points],
            "splits": list(self.splits),
            "lambdas": [str(l) for l in self.lambdas],
        }


def random_target(n: int, seed: int, split: Optional[str] = None) -> GenericTarget:
    """Random points of size ~2^10 and tiny positive lambdas (~2^-20)."""
    rng = random.Random(seed)
    pts = random_points(n, rng.randrange(1 << 30))
    splits = tuple(split or rng.choice(SPLITS) for _ in range(4, n + 1))
    lambdas = tuple(Fraction(rng.randint(1, 1 << 10), 1 << 30) for _ in range(4, n + 1))
    return GenericTarget(tuple(pts), splits, lambdas)


def _skeletons(n: int) -> Iterator[List[Tuple[int, int]]]:
    """Trivalent trees on leaves 0..n-1 (marking k+1 is leaf k), by leaf insertion.

    Edges touching a leaf are stored as (internal, leaf).
    """

    def grow(edges: List[Tuple[int, int]], k: int, next_node: int):
        if k == n:
            yield edges
            return
        for idx, (u, v) in enumerate(edges):
            w = next_node
            new = edges[:idx] + edges[idx + 1:] + [(u, w), (w, v), (w, k)]
            yield from grow(new, k + 1, next_node + 1)

    yield from grow([(n, 0), (n, 1), (n, 2)], 3, n + 1)


def _edge_sides(edges: Sequence[Tuple[int, int]], n: int) -> List[int]:
    """For each edge (u, v): bitmask of leaves on the v side."""
    adj: Dict[int, List[int]] = {}
    for u, v in edges:
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)

    def side(u: int, v: int) -> int:
        mask = 0
        stack = [(v, u)]
        while stack:
            x, par = stack.pop()
            if x < n:
                mask |= 1 << x
            for y in adj[x]:
                if y != par:
                    stack.append((y, x))
        return mask

    return [side(u, v) for u, v in edges]


def _has_split(sides: Sequence[int], quartet: int, pair: Tuple[int, int]) -> bool:
    return any((s & quartet) in pair for s in sides)


def _multiset_sequences(counts: List[int], length: int) -> Iterator[Tuple[int, ...]]:
    if length == 0:
        yield ()
        return
    for c, k in enumerate(counts):
        if k:
            counts[c] -= 1
            for rest in _multiset_sequences(counts, length - 1):
                yield (c,) + rest
            counts[c] += 1


def _double_factorial(k: int) -> int:
    out = 1
    while k > 1:
        out *= k
        k -= 2
    return out


@dataclass
class FullOracleStats:
    total_types: int = 0
    split_rejected: int = 0
    rule_pruned: int = 0
    explored_labelled: int = 0
    explored_typed: int = 0
    singular: int = 0
    nonpositive: int = 0
    accepted_typed: int = 0
    shapes: Dict[str, int] = field(default_factory=dict)
    max_resolutions: int = 0

    def to_json(self) -> Dict:
        return {k: (str(v) if isinstance(v, int) else v) for k, v in self.__dict__.items()}


def _placements(
    edges: Sequence[Tuple[int, int]], n: int, counts: List[int]
) -> Iterator[List[Tuple[int, ...]]]:
    """Typed end sequences per skeleton edge.

    Leg edges (towards a marking) take at most two ends; inner edges any
    number.  Ends never hang off other ends.
    """
    caps = [2 if v < n else None for _, v in edges]
    order = sorted(range(len(edges)), key=lambda e: caps[e] is None)
    out: List[Tuple[int, ...]] = [()] * len(edges)
    total = sum(counts)

    def go(pos: int, left: int):
        if pos == len(order):
            if left == 0:
                yield list(out)
            return
        e = order[pos]
        cap = caps[e]
        last = pos == len(order) - 1
        lengths = [left] if last else range(0, (left if cap is None else min(cap, left)) + 1)
        for L in lengths:
            if cap is not None and L > cap:
                continue
            # the generator keeps ``counts`` reduced by ``seq`` while suspended
            for seq in _multiset_sequences(counts, L):
                out[e] = seq
                yield from go(pos + 1, left - L)
        out[e] = ()

    yield from go(0, total)


def _tree_system(
    edges: Sequence[Tuple[int, int]],
    placement: Sequence[Tuple[int, ...]],
    n: int,
    vectors: Sequence[Vec2Z],
    quartets: Sequence[Tuple[int, Tuple[int, int]]],
):
    """Matrix and bookkeeping for one typed tree.

    Returns (matrix, edge list) where unknowns are (root x, root y, lengths).
    """
    # build the subdivided tree; end vertices get fresh ids
    adj: Dict[int, List[Tuple[int, int]]] = {}
    end_vec: Dict[int, Vec2Z] = {}
    attach: Dict[int, int] = {}
    bounded: List[Tuple[int, int]] = []
    nxt = 2 * n

    def link(u: int, v: int):
        k = len(bounded)
        bounded.append((u, v))
        adj.setdefault(u, []).append((v, k))
        adj.setdefault(v, []).append((u, k))

    for (u, v), seq in zip(edges, placement):
        chain = [u]
        for c in seq:
            end_vec[nxt] = vectors[c]
            chain.append(nxt)
            nxt += 1
        if v < n:
            attach[v] = chain[-1]
        else:
            chain.append(v)
        for p, q in zip(chain, chain[1:]):
            link(p, q)
    marks_at: Dict[int, int] = {}
    for k, node in attach.items():
        marks_at[node] = marks_at.get(node, 0) | (1 << k)

    root = attach[0]
    # iterative DFS: parent pointers, then post-order accumulation
    order = [root]
    parent = {root: (-1, -1)}
    for x in order:
        for y, k in adj.get(x, ()):
            if y not in parent:
                parent[y] = (x, k)
                order.append(y)
    vec: Dict[int, Vec2Z] = {}
    mask: Dict[int, int] = {}
    for x in reversed(order):
        vx, vy = end_vec.get(x, (0, 0))
        mk = marks_at.get(x, 0)
        for y, k in adj.get(x, ()):
            if parent.get(y, (None,))[0] == x:
                vx += vec[y][0]
                vy += vec[y][1]
                mk |= mask[y]
        vec[x] = (vx, vy)
        mask[x] = mk

    size = 3 * n - 3
    M = [[0] * size for _ in range(size)]
    for k in range(n):
        M[2 * k][0] = 1
        M[2 * k + 1][1] = 1
    col_dirs: List[Vec2Z] = []
    for x in order[1:]:
        col = 2 + parent[x][1]
        d = vec[x]
        mk = mask[x]
        col_dirs.append(d)
        k = 0
        while mk >> k:
            if (mk >> k) & 1:
                M[2 * k][col] = d[0]
                M[2 * k + 1][col] = d[1]
            k += 1
        for r, (quartet, pair) in enumerate(quartets):
            if (mk & quartet) in pair:
                M[2 * n + r][col] = 1
    return M, bounded


def full_oracle(
    gamma: ContactData,
    target: GenericTarget,
    max_legs: int = FULL_ORACLE_MAX_LEGS,
    check_shapes: bool = True,
) -> Tuple[CountReport, FullOracleStats]:
    """Degree of (ev, ft) at ``target``, summed over trivalent trees.

    Trees are generated as a trivalent skeleton on the markings with typed
    ends inserted on its edges.  Two classes of trees are skipped without
    solving because their determinant vanishes identically:

    * an end hanging off another end (the separating edge has no marking
      beyond it, so its length appears in no equation);
    * three or more ends on the leg of one marking (their lengths enter only
      the two position equations of that marking).

    The skipped and split-mismatched trees are counted in the stats so that
    all (2N-5)!! labelled trees are accounted for.
    """
    n, m = gamma.n, gamma.m
    N = n + m
    if N > max_legs:
        raise TooManyLegs(f"N = {N} legs exceeds the cap {max_legs}")
    classes = end_classes(gamma)
    vectors = [c.vector for c in classes]
    counts = [c.count for c in classes]
    sym = gamma.symmetry
    quartets = []
    for i in range(4, n + 1):
        a, b = _split_masks(target.splits[i - 4], i)
        quartets.append((a | b, (a, b)))
    rhs: List[Fraction] = []
    for p in target.points:
        rhs.extend((Fraction(p[0]), Fraction(p[1])))
    rhs.extend(Fraction(l) for l in target.lambdas)

    stats = FullOracleStats(total_types=_double_factorial(2 * N - 5))
    per_skeleton = 1
    e = 2 * n - 3
    for _ in range(m):
        per_skeleton *= e
        e += 2

    total = 0
    resolutions: Counter = Counter()
    for edges in _skeletons(n):
        sides = _edge_sides(edges, n)
        if not all(_has_split(sides, q, pair) for q, pair in quartets):
            stats.split_rejected += per_skeleton
            continue
        for placement in _placements(edges, n, counts):
            stats.explored_typed += 1
            M, bounded = _tree_system(edges, placement, n, vectors, quartets)
            det, sol = bareiss_solve(M, rhs)
            if det == 0:
                stats.singular += 1
                continue
            lengths = sol[2:]  # type: ignore[index]
            if any(l == 0 for l in lengths):
                raise NonGenericTarget("a solution has a zero-length edge")
            if any(l < 0 for l in lengths):
                stats.nonpositive += 1
                continue
            stats.accepted_typed += 1
            total += abs(det)
            if check_shapes:
                shape, key = _contracted_shape(edges, placement, n, classes)
                stats.shapes[shape] = stats.shapes.get(shape, 0) + 1
                resolutions[key] += 1
    stats.explored_labelled = stats.explored_typed * sym
    stats.rule_pruned = stats.total_types - stats.split_rejected - stats.explored_labelled
    stats.max_resolutions = max(resolutions.values(), default=0)
    report = CountReport(
        method="full",
        trop_tev=total,
        labelled_sum=total * sym,
        unlabelled_curves=stats.accepted_typed,
        labelled_curves=stats.accepted_typed * sym,
        type_a=stats.shapes.get("A", 0),
        type_b=stats.shapes.get("B", 0),
        details={"target": target.to_json(), "stats": stats.to_json()},
    )
    return report, stats


def _contracted_shape(edges, placement, n, classes):
    """Shape after collapsing every edge of the marking skeleton's interior.

    Ends placed on inner skeleton edges land on the collapsed vertex.
    """
    legs = []
    tree_edges = []
    nv = 1
    label = 0
    key = []
    for (u, v), seq in zip(edges, placement):
        if v >= n:
            for c in seq:
                label += 1
                k = classes[c]
                legs.append(Leg.end(End(label, k.divisor, k.weight, k.vector), 0))
            key.append(("inner", seq))
            continue
        prev = 0
        for c in seq:
            k = classes[c]
            label += 1
            tree_edges.append((prev, nv))
            legs.append(Leg.end(End(label, k.divisor, k.weight, k.vector), nv))
            prev = nv
            nv += 1
        legs.append(Leg.marking(v + 1, prev))
        key.append((v, seq))
    tree = CombTree(nv, tuple(tree_edges), tuple(legs))
    leg_key = tuple(sorted(k for k in key if k[0] != "inner"))
    return classify(tree), leg_key


def full_oracle_unpruned(gamma: ContactData, target: GenericTarget, max_legs: int = 8) -> Tuple[int, Dict]:
    """Brute force over every labelled trivalent tree, no pruning at all.

    Only for tiny N; used to confirm that the pruning rules of
    :func:`full_oracle` only discard trees with zero contribution.
    Returns (trop_tev, stats).
    """
    n, m = gamma.n, gamma.m
    N = n + m
    if N > max_legs:
        raise TooManyLegs(f"N = {N} legs exceeds the cap {max_legs}")
    ends = degree_of(gamma)
    # leaves 0..n-1 markings, n..N-1 ends
    vectors: List[Vec2Z] = [(0, 0)] * n + [e.vector for e in ends]
    quartets = []
    for i in range(4, n + 1):
        a, b = _split_masks(target.splits[i - 4], i)
        quartets.append((a | b, (a, b)))
    rhs: List[Fraction] = []
    for p in target.points:
        rhs.extend((Fraction(p[0]), Fraction(p[1])))
    rhs.extend(Fraction(l) for l in target.lambdas)
    size = 3 * n - 3
    total = 0
    stats = Counter()
    for edges in _all_trees(N):
        stats["trees"] += 1
        sides = _edge_sides(edges, N)
        inner = [(u, v, s) for (u, v), s in zip(edges, sides) if u >= N and v >= N]
        M = [[0] * size for _ in range(size)]
        for k in range(n):
            M[2 * k][0] = 1
            M[2 * k + 1][1] = 1
        # orient every inner edge away from marking 1
        for col, (u, v, s) in enumerate(inner):
            far = s if not s & 1 else ((1 << N) - 1) ^ s
            d = [0, 0]
            for leaf in range(n, N):
                if far >> leaf & 1:
                    d[0] += vectors[leaf][0]
                    d[1] += vectors[leaf][1]
            for k in range(n):
                if far >> k & 1:
                    M[2 * k][2 + col] = d[0]
                    M[2 * k + 1][2 + col] = d[1]
            marks = far & ((1 << n) - 1)
            for r, (quartet, pair) in enumerate(quartets):
                if (marks & quartet) in pair:
                    M[2 * n + r][2 + col] = 1
        split_ok = all(
            any((s & ((1 << n) - 1) & q) in pair for (_, _, s) in inner)
            for q, pair in quartets
        )
        det, sol = bareiss_solve(M, rhs)
        if det == 0:
            stats["singular"] += 1
            continue
        if not split_ok:
            stats["split_mismatch_nonsingular"] += 1
            continue
        lengths = sol[2:]  # type: ignore[index]
        if any(l == 0 for l in lengths):
            raise NonGenericTarget("zero-length edge")
        if any(l < 0 for l in lengths):
            stats["nonpositive"] += 1
            continue
        stats["accepted"] += 1
        total += abs(det)
    q, r = divmod(total, gamma.symmetry)
    assert r == 0
    return q, dict(stats)


def _all_trees(N: int) -> Iterator[List[Tuple[int, int]]]:
    """All trivalent trees on leaves 0..N-1, internal vertices numbered from N."""

    def grow(edges, k, nxt):
        if k == N:
            yield edges
            return
        for idx, (u, v) in enumerate(edges):
            new = edges[:idx] + edges[idx + 1:] + [(u, nxt), (nxt, v), (nxt, k)]
            yield from grow(new, k + 1, nxt + 1)

    yield from grow([(N, 0), (N, 1), (N, 2)], 3, N + 1)


def full_oracle_seeded(gamma: ContactData, seed: int, split: Optional[str] = None, attempts: int = 10, **kw):
    for k in range(attempts):
        target = random_target(gamma.n, seed * 1000 + k, split)
        try:
            return full_oracle(gamma, target, **kw)
        except NonGenericTarget:
            continue
    raise NonGenericTarget(f"no generic target after {attempts} draws")


# -- invariance and identities ----------------------------------------------------------


def formula_value(gamma: ContactData) -> int:
    return (trop_tev_p2(gamma) if gamma.is_p2 else trop_tev(gamma)).value


def invariance_check(gamma: ContactData, trials: int = 5, seed: int = 0, full: Optional[bool] = None) -> Dict:
    """Structured oracle over ``trials`` seeds and, when N is small, the full
    oracle for each split type.  All totals must coincide."""
    structured = [structured_oracle_seeded(gamma, seed + t).trop_tev for t in range(trials)]
    use_full = (gamma.n + gamma.m <= FULL_ORACLE_MAX_LEGS) if full is None else full
    full_totals: Dict[str, int] = {}
    if use_full:
        splits = SPLITS if gamma.n >= 4 else (SPLITS[0],)
        for s in splits:
            rep, _ = full_oracle_seeded(gamma, seed, split=s)
            full_totals[s] = rep.trop_tev
    values = set(structured) | set(full_totals.values())
    return {
        "instance": gamma.to_json(),
        "structured": [str(v) for v in structured],
        "full": {k: str(v) for k, v in full_totals.items()},
        "invariant": len(values) == 1,
    }


def identity_check(
    x_range: Tuple[int, int] = (-10, 10),
    y_range: Tuple[int, int] = (0, 10),
    n_max: int = 12,
    grid: Sequence[ContactData] = (),
    seed: int = 0,
    samples: int = 20,
) -> Dict:
    """Verify the binomial identities used in counting type A and B curves.

    * reflection C(x, y) = (-1)^y C(y-x-1, y) for every integer x, y >= 0;
    * C(x, y) = (-1)^(x-y) C(-y-1, x-y), which holds for x >= 0 only;
      negative x are reported as outside its domain;
    * Vandermonde sum_k C(x, k) C(y, N-k) = C(x+y, N) on random rationals;
    * for every grid instance with |mu3| + |mu4| < n-1, the type-B sum plus
      the type-A term equals C(n-1-|mu4|, |mu2|).
    """
    failures: List[str] = []
    xs = range(x_range[0], x_range[1] + 1)
    ys = range(y_range[0], y_range[1] + 1)
    for x in xs:
        for y in ys:
            if binomial_gen(x, y) != (-1) ** y * binomial_gen(y - x - 1, y):
                failures.append(f"reflection x={x} y={y}")
    second_out_of_domain = []
    for x in xs:
        for y in ys:
            ok = binomial_gen(x, y) == (-1) ** (x - y) * binomial_gen(-y - 1, x - y) if x >= y else (
                binomial_gen(x, y) == 0 and binomial_gen(-y - 1, x - y) == 0
            )
            if x >= 0 and not ok:
                failures.append(f"upper-negation x={x} y={y}")
            elif x < 0 and not ok:
                second_out_of_domain.append([x, y])
    rng = random.Random(seed)
    for N in range(0, n_max + 1):
        for _ in range(samples):
            x = Fraction(rng.randint(-50, 50), rng.randint(1, 12))
            y = Fraction(rng.randint(-50, 50), rng.randint(1, 12))
            lhs = sum(binomial_gen(x, k) * binomial_gen(y, N - k) for k in range(N + 1))
            if lhs != binomial_gen(x + y, N):
                failures.append(f"vandermonde N={N} x={x} y={y}")
    lemma_checked = 0
    for g in grid:
        l1, l2, l3, l4 = g.lengths
        n1 = g.n - 1
        if l3 + l4 >= n1 or l1 > n1:
            continue
        abar, bbar, gbar = n1 - l3 - l4, n1 - l4 - l2, n1 - l1
        if bbar < 0:
            continue
        lhs = sum(
            binomial_comb(abar + k - 1, abar - 1) * binomial_comb(bbar + gbar - k, bbar - k)
            for k in range(0, bbar + 1)
        )
        lemma_checked += 1
        if lhs != binomial_comb(n1 - l4, l2):
            failures.append(f"lemma {g.short()}")
    return {
        "passed": not failures,
        "failures": failures,
        "upper_negation_fails_for_negative_x": len(second_out_of_domain),
        "lemma_instances": lemma_checked,
    }
