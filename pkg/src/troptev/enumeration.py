"""Constructive enumeration of contributing curves for the standard point
placement, and an audit that no other central-vertex curve exists.

Markings sit as follows (x_1 always at the origin):

* if |mu3| + |mu4| >= n-1: n-1-|mu4| points in {x>0, y>0},
  |mu3|+|mu4|-(n-1) in {ax+y>0, y<0} and n-1-|mu3| in {x<0, y<0};
* otherwise: n-1-|mu3|-|mu4| points in {x<0, ax+y>0}, |mu3| in
  {x>0, y>0} and |mu4| in {x<0, y<0}.

For this placement every contributing curve is either of type A with its
centre at x_1, or (second case only) of type B with its centre on the ray
{x>0, ax+y=0}, one single-edge leaf reaching x_1 along n_1 and the other
reaching a point of {x>0, y>0} along n_2.
"""
from __future__ import annotations

import itertools
import random
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .curves import (
    ContributingCurve,
    LeafSpec,
    NonGenericConfiguration,
    build_central_curve,
    classify,
    curve_multiplicity,
    profile_of,
    solve_double_leaf,
    solve_single_leaf,
)
from .exactmath import Vec2Q
from .formula import predicted_counts, trop_tev
from .model import ContactData, End, degree_of
from .oracle import central_candidates, central_solutions, end_classes
from .reports import CountReport

__all__ = [
    "PointConfig",
    "AuditFailure",
    "EnumerationMismatch",
    "NoStandardConfiguration",
    "REGIONS",
    "region_tallies",
    "paper_point_config",
    "enumerate_contributing",
    "total",
    "exclusion_audit",
]

POS = "x>0,y>0"
LOWER_RIGHT = "ax+y>0,y<0"
NEG = "x<0,y<0"
UPPER_LEFT = "x<0,ax+y>0"
ORIGIN = "origin"
REGIONS = (POS, LOWER_RIGHT, NEG, UPPER_LEFT)


class AuditFailure(AssertionError):
    """A central-vertex curve outside the constructive list; carries it."""

    def __init__(self, message: str, counterexample: Dict):
        super().__init__(message)
        self.counterexample = counterexample


class EnumerationMismatch(AssertionError):
    pass


class NoStandardConfiguration(ValueError):
    """Some region tally is negative; the formula is zero for such data."""


@dataclass(frozen=True)
class PointConfig:
    points: Tuple[Vec2Q, ...]
    regions: Tuple[str, ...]
    seed: int
    case: str  # "geq" or "lt"

    def to_json(self) -> Dict:
        return {
            "seed": self.seed,
            "case": self.case,
            "points": [[str(p[0]), str(p[1])] for p in self.points],
            "regions": list(self.regions),
        }

    @classmethod
    def from_json(cls, data: Dict) -> "PointConfig":
        pts = tuple((Fraction(p[0]), Fraction(p[1])) for p in data["points"])
        return cls(pts, tuple(data.get("regions", ["custom"] * len(pts))), int(data.get("seed", 0)), data.get("case", "custom"))


def region_tallies(gamma: ContactData) -> Tuple[str, Dict[str, int]]:
    n1 = gamma.n - 1
    l3, l4 = gamma.length(3), gamma.length(4)
    if l3 + l4 >= n1:
        return "geq", {POS: n1 - l4, LOWER_RIGHT: l3 + l4 - n1, NEG: n1 - l3}
    return "lt", {UPPER_LEFT: n1 - l3 - l4, POS: l3, NEG: l4}


def _in_region(p: Vec2Q, region: str, a: int) -> bool:
    x, y = p
    return {
        POS: x > 0 and y > 0,
        LOWER_RIGHT: a * x + y > 0 and y < 0,
        NEG: x < 0 and y < 0,
        UPPER_LEFT: x < 0 and a * x + y > 0,
        ORIGIN: x == 0 and y == 0,
    }[region]


def _positive(rng: random.Random) -> Fraction:
    den = rng.randint(1, 1 << 16)
    return Fraction(rng.randint(1, den << 10), den)


def _sample(region: str, a: int, rng: random.Random) -> Vec2Q:
    if region == POS:
        return (_positive(rng), _positive(rng))
    if region == NEG:
        return (-_positive(rng), -_positive(rng))
    if region == LOWER_RIGHT:
        y = -_positive(rng)
        return (-y / a + _positive(rng), y)
    if region == UPPER_LEFT:
        x = -_positive(rng)
        return (x, -a * x + _positive(rng))
    raise ValueError(region)


def _generic(points: Sequence[Vec2Q], a: int) -> bool:
    n = len(points)
    if len({p[0] for p in points}) != n or len({p[1] for p in points}) != n:
        return False
    for p, q in itertools.combinations(points, 2):
        if a * (p[0] - q[0]) + (p[1] - q[1]) == 0:
            return False
    return True


def paper_point_config(gamma: ContactData, seed: int = 0, max_attempts: int = 100) -> PointConfig:
    """Random rational points with the region tallies above; deterministic in ``seed``."""
    case, tallies = region_tallies(gamma)
    if any(v < 0 for v in tallies.values()):
        raise NoStandardConfiguration(f"negative region tally {tallies} for {gamma.short()}")
    regions = [ORIGIN]
    for r in (POS, LOWER_RIGHT, UPPER_LEFT, NEG):
        regions.extend([r] * tallies.get(r, 0))
    rng = random.Random(seed)
    for _ in range(max_attempts):
        pts: List[Vec2Q] = [(Fraction(0), Fraction(0))]
        pts.extend(_sample(r, gamma.a, rng) for r in regions[1:])
        if _generic(pts, gamma.a):
            assert all(_in_region(p, r, gamma.a) for p, r in zip(pts, regions))
            return PointConfig(tuple(pts), tuple(regions), seed, case)
    raise NonGenericConfiguration(f"no generic draw after {max_attempts} attempts")


# -- enumeration -------------------------------------------------------------------------


def _typed_ends(gamma: ContactData):
    """Ends grouped by (ray, weight): class keys and label lists."""
    groups: Dict[Tuple[int, int], List[End]] = defaultdict(list)
    for e in degree_of(gamma):
        groups[(e.divisor, e.weight)].append(e)
    keys = sorted(groups)
    return keys, [groups[k] for k in keys]


def _double_leaf_options(V, x, keys, groups):
    out = []
    for i, ki in enumerate(keys):
        for j, kj in enumerate(keys):
            if i == j and len(groups[i]) < 2:
                continue
            sol = solve_double_leaf(V, x, groups[i][0].vector, groups[j][0].vector)
            if sol is not None:
                out.append((i, j, sol))
    return out


def _typed_assignments(markings, options, counts) -> Iterator[List[Tuple[int, int, int, Tuple[Fraction, Fraction]]]]:
    chosen: List[Tuple[int, int, int, Tuple[Fraction, Fraction]]] = []

    def rec(k: int):
        if k == len(markings):
            if not any(counts):
                yield list(chosen)
            return
        for i, j, sol in options[k]:
            counts[i] -= 1
            counts[j] -= 1
            if counts[i] >= 0 and counts[j] >= 0:
                chosen.append((markings[k], i, j, sol))
                yield from rec(k + 1)
                chosen.pop()
            counts[i] += 1
            counts[j] += 1

    yield from rec(0)


def _labelings(groups: Sequence[List[End]], labelled: bool):
    """Orderings of each class of ends; the k-th slot of a class takes the k-th end."""
    per_class = []
    for g in groups:
        per_class.append(itertools.permutations(g) if labelled else [tuple(g)])
    for choice in itertools.product(*per_class):
        yield choice


def _realize(gamma, V, center, singles, doubles, groups, labelled) -> Iterator[ContributingCurve]:
    """Turn a typed solution into labelled curves.

    singles: (marking, class, length); doubles: (marking, class W, class U, (t1, t2)).
    """
    for perm in _labelings(groups, labelled):
        cursor = [0] * len(groups)

        def take(c: int) -> End:
            e = perm[c][cursor[c]]
            cursor[c] += 1
            return e

        leaves = []
        assignment = []
        for mk, c, s in singles:
            e = take(c)
            leaves.append(LeafSpec(mk, (e,), (s,)))
            assignment.append((mk, (e.label,)))
        for mk, i, j, (t1, t2) in doubles:
            ew, eu = take(i), take(j)
            leaves.append(LeafSpec(mk, (ew, eu), (t1, t2)))
            assignment.append((mk, (ew.label, eu.label)))
        pmap = build_central_curve(V, center, leaves)
        ctype = classify(pmap.tree)
        yield ContributingCurve(
            plane_map=pmap,
            curve_type=ctype,
            profile=profile_of(pmap, gamma),
            multiplicity=curve_multiplicity(pmap),
            assignment=tuple(sorted(assignment)),
            center_marking=center,
        )


def enumerate_contributing(
    gamma: ContactData, config: PointConfig, labelled: bool = True
) -> List[ContributingCurve]:
    """All contributing curves through ``config``.

    With ``labelled=False`` one representative per orbit of the relabelling
    of equal ends is returned (the unlabelled curves).
    """
    keys, groups = _typed_ends(gamma)
    pts = config.points
    n = gamma.n
    out: List[ContributingCurve] = []

    # type A: centre at x_1
    V = pts[0]
    others = list(range(2, n + 1))
    options = [_double_leaf_options(V, pts[k - 1], keys, groups) for k in others]
    counts = [len(g) for g in groups]
    for typed in _typed_assignments(others, options, counts):
        out.extend(_realize(gamma, V, 1, [], typed, groups, labelled))

    # type B: centre on {x>0, ax+y=0}, second case only
    if config.case == "lt":
        ray1 = [i for i, k in enumerate(keys) if k[0] == 1]
        ray2 = [i for i, k in enumerate(keys) if k[0] == 2]
        for j in range(2, n + 1):
            if config.regions[j - 1] != POS:
                continue
            xj = pts[j - 1]
            V = (xj[0], -gamma.a * xj[0])
            for c1 in ray1:
                s1 = solve_single_leaf(V, pts[0], groups[c1][0].vector)
                if s1 is None:
                    continue
                for c2 in ray2:
                    s2 = solve_single_leaf(V, xj, groups[c2][0].vector)
                    if s2 is None:
                        continue
                    counts = [len(g) for g in groups]
                    counts[c1] -= 1
                    counts[c2] -= 1
                    rest = [k for k in range(2, n + 1) if k != j]
                    options = [_double_leaf_options(V, pts[k - 1], keys, groups) for k in rest]
                    singles = [(1, c1, s1), (j, c2, s2)]
                    for typed in _typed_assignments(rest, options, counts):
                        out.extend(_realize(gamma, V, None, singles, typed, groups, labelled))
    out.sort(key=lambda c: c.canonical())
    return out


def total(gamma: ContactData, seed: int = 0, attempts: int = 20) -> CountReport:
    """Count through the standard placement, checked against the closed formula."""
    sym = gamma.symmetry
    formula = trop_tev(gamma).value
    predicted = predicted_counts(gamma)
    try:
        case, _ = region_tallies(gamma)
        config = None
        for k in range(attempts):
            config = paper_point_config(gamma, seed + 7919 * k)
            try:
                curves = enumerate_contributing(gamma, config, labelled=False)
                break
            except NonGenericConfiguration:
                continue
        else:
            raise NonGenericConfiguration("every configuration drawn was degenerate")
    except NoStandardConfiguration as exc:
        if formula != 0:
            raise
        return CountReport("enumeration", 0, 0, seed=seed, details={"note": str(exc)})
    tt = sum(c.multiplicity for c in curves)
    type_a = sum(1 for c in curves if c.curve_type == "A")
    type_b = sum(1 for c in curves if c.curve_type == "B")
    report = CountReport(
        method="enumeration",
        trop_tev=tt,
        labelled_sum=tt * sym,
        unlabelled_curves=len(curves),
        labelled_curves=len(curves) * sym,
        type_a=type_a,
        type_b=type_b,
        seed=seed,
        details={
            "config": config.to_json(),  # type: ignore[union-attr]
            "multiplicities": sorted({str(c.multiplicity) for c in curves}),
        },
    )
    problems = []
    if tt != formula:
        problems.append(f"sum {tt} != formula {formula}")
    if report.labelled_curves != predicted.total_labelled:
        problems.append(f"labelled count {report.labelled_curves} != {predicted.total_labelled}")
    if type_a * sym != predicted.type_a_labelled or type_b * sym != predicted.type_b_labelled:
        problems.append(f"type split ({type_a * sym},{type_b * sym}) != predicted")
    if problems:
        raise EnumerationMismatch(f"{gamma.short()}: " + "; ".join(problems))
    return report


# -- audit -------------------------------------------------------------------------------


def _sign(q) -> str:
    return "+" if q > 0 else ("-" if q < 0 else "0")


def _cell(V: Vec2Q, a: int) -> str:
    x, y = V
    return f"x{_sign(x)} y{_sign(y)} ax+y{_sign(a * x + y)}"


def exclusion_audit(gamma: ContactData, config: PointConfig) -> Dict:
    """Search all central vertices through ``config`` and confirm that only
    the constructive ones carry curves.

    Cases are keyed by (type, one-edge leaf rays, cell of the centre by sign
    of x, y and ax+y).  Raises :class:`AuditFailure` on any solution outside
    the constructive list or if the constructive solutions disagree with
    :func:`enumerate_contributing`.
    """
    a = gamma.a
    classes = end_classes(gamma)
    verdicts: Dict[str, Dict[str, int]] = {}

    def key(ctype: str, eps: Tuple[int, ...], V: Vec2Q) -> str:
        return f"{ctype} eps={''.join(map(str, eps))} {_cell(V, a)}"

    def constructive(ctype, eps, V, center) -> bool:
        if ctype == "A":
            return center == 1
        return config.case == "lt" and eps == (1, 1, 0, 0) and V[0] > 0 and a * V[0] + V[1] == 0

    def eps_of(cand) -> Tuple[int, ...]:
        e = [0, 0, 0, 0]
        for _, ci in cand.single:
            e[classes[ci].divisor - 1] += 1
        return tuple(e)

    for cand in central_candidates(gamma, config.points, classes):
        k = key(cand.curve_type, eps_of(cand), cand.V)
        verdicts.setdefault(k, {"centres": 0, "solutions": 0, "constructive": 0})
        verdicts[k]["centres"] += 1
    found_constructive = 0
    for cand, leaves, mult in central_solutions(gamma, config.points):
        eps = eps_of(cand)
        k = key(cand.curve_type, eps, cand.V)
        verdicts[k]["solutions"] += 1
        if constructive(cand.curve_type, eps, cand.V, cand.center_marking):
            verdicts[k]["constructive"] += 1
            found_constructive += 1
            continue
        raise AuditFailure(
            f"extra curve for {gamma.short()} in case {k}",
            {
                "case": k,
                "centre": [str(cand.V[0]), str(cand.V[1])],
                "single_leaves": [list(s) for s in cand.single],
                "double_leaves": [list(l) for l in leaves],
                "multiplicity": str(mult),
                "config": config.to_json(),
            },
        )
    enumerated = len(enumerate_contributing(gamma, config, labelled=False))
    if enumerated != found_constructive:
        raise AuditFailure(
            f"constructive search found {enumerated} curves, exhaustive search {found_constructive}",
            {"config": config.to_json()},
        )
    refuted = sorted(k for k, v in verdicts.items() if v["solutions"] == 0)
    return {
        "instance": gamma.to_json(),
        "config": config.to_json(),
        "cases": verdicts,
        "refuted": refuted,
        "extra_solutions": 0,
        "constructive_solutions": found_constructive,
    }
