"""Problem instances: the Hirzebruch fan, tangency profiles and contact data."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .exactmath import Vec2Z, factorial, symmetry_factor

__all__ = [
    "Target",
    "FanSpec",
    "ContactData",
    "End",
    "CurveClass",
    "Violation",
    "DimensionViolation",
    "BalanceViolation",
    "NonPositiveWeight",
    "TooFewMarkings",
    "P2ProfileViolation",
    "InvalidContactData",
    "InfeasibleClass",
    "validate",
    "degree_of",
    "class_of",
    "profile_of_class",
    "load_instance",
    "instance_from_json",
    "dump_instance",
    "partitions",
    "grid_instances",
]


class Target(str, Enum):
    HIRZEBRUCH = "hirzebruch"
    P2 = "p2"


@dataclass(frozen=True)
class FanSpec:
    a: int
    target: Target = Target.HIRZEBRUCH

    @property
    def rays(self) -> Tuple[Vec2Z, Vec2Z, Vec2Z, Vec2Z]:
        return ((-1, self.a), (0, 1), (1, 0), (0, -1))

    def ray(self, i: int) -> Vec2Z:
        """Primitive ray of divisor D_i, 1-based."""
        return self.rays[i - 1]


# -- validation errors ---------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    def describe(self) -> str:
        return repr(self)


@dataclass(frozen=True)
class DimensionViolation(Violation):
    m: int
    expected: int

    def describe(self) -> str:
        return f"DimensionViolation(m={self.m}, 2(n-1)={self.expected})"


@dataclass(frozen=True)
class BalanceViolation(Violation):
    axis: str
    excess: int

    def describe(self) -> str:
        return f"BalanceViolation({self.axis}, {self.excess:+d})"


@dataclass(frozen=True)
class NonPositiveWeight(Violation):
    divisor: int
    index: int
    value: int

    def describe(self) -> str:
        return f"NonPositiveWeight(mu{self.divisor}[{self.index}]={self.value})"


@dataclass(frozen=True)
class TooFewMarkings(Violation):
    n: int

    def describe(self) -> str:
        return f"TooFewMarkings(n={self.n})"


@dataclass(frozen=True)
class P2ProfileViolation(Violation):
    reason: str

    def describe(self) -> str:
        return f"P2ProfileViolation({self.reason})"


class InvalidContactData(ValueError):
    """Raised by :func:`validate`; carries every violated invariant at once."""

    def __init__(self, violations: Sequence[Violation]):
        self.violations = list(violations)
        super().__init__("; ".join(v.describe() for v in self.violations))

    def has(self, kind: type) -> bool:
        return any(isinstance(v, kind) for v in self.violations)


class InfeasibleClass(ValueError):
    """A curve class with a negative intersection number or odd end count."""


# -- contact data --------------------------------------------------------------


@dataclass(frozen=True)
class End:
    label: int  # 1-based end label q_label
    divisor: int  # 1..4
    weight: int
    vector: Vec2Z


@dataclass(frozen=True)
class ContactData:
    """Validated discrete data: fan, marking count n and four tangency profiles.

    ``mu`` holds each profile sorted ascending; ``input_mu`` keeps the order the
    user supplied, which fixes the end labels q_1..q_m.
    """

    fan: FanSpec
    n: int
    mu: Tuple[Tuple[int, ...], Tuple[int, ...], Tuple[int, ...], Tuple[int, ...]]
    input_mu: Tuple[Tuple[int, ...], ...] = field(compare=False, repr=False, default=())

    @property
    def a(self) -> int:
        return self.fan.a

    @property
    def m(self) -> int:
        return sum(len(p) for p in self.mu)

    @property
    def lengths(self) -> Tuple[int, int, int, int]:
        return tuple(len(p) for p in self.mu)  # type: ignore[return-value]

    @property
    def sums(self) -> Tuple[int, int, int, int]:
        return tuple(sum(p) for p in self.mu)  # type: ignore[return-value]

    def length(self, i: int) -> int:
        return len(self.mu[i - 1])

    @property
    def symmetry(self) -> int:
        out = 1
        for p in self.mu:
            out *= symmetry_factor(p)
        return out

    @property
    def length_factorials(self) -> int:
        out = 1
        for p in self.mu:
            out *= factorial(len(p))
        return out

    @property
    def is_p2(self) -> bool:
        return self.fan.target is Target.P2

    def swapped(self) -> "ContactData":
        """The instance with mu1 and mu3 exchanged (fan automorphism fixing n2, n4)."""
        m1, m2, m3, m4 = self.input_mu or self.mu
        return validate(self.a, self.n, [m3, m2, m1, m4], target=self.fan.target)

    def to_json(self) -> Dict:
        return {
            "a": self.a,
            "n": self.n,
            "mu": [list(p) for p in (self.input_mu or self.mu)],
            "target": self.fan.target.value,
        }

    def short(self) -> str:
        mus = ",".join("(" + ",".join(map(str, p)) + ")" for p in self.mu)
        return f"a={self.a} n={self.n} mu={mus}"


def validate(a: int, n: int, mu: Sequence[Sequence[int]], target: str | Target = Target.HIRZEBRUCH) -> ContactData:
    """Check an instance and return its :class:`ContactData`.

    All violations are collected before raising :class:`InvalidContactData`.
    """
    target = Target(target)
    if len(mu) != 4:
        raise ValueError("expected four tangency profiles mu1..mu4")
    if a < 1:
        raise ValueError(f"a must be >= 1, got {a}")
    profiles = tuple(tuple(int(w) for w in p) for p in mu)
    violations: List[Violation] = []
    for i, p in enumerate(profiles, start=1):
        for j, w in enumerate(p):
            if w <= 0:
                violations.append(NonPositiveWeight(i, j, w))
    if n < 3:
        violations.append(TooFewMarkings(n))
    m = sum(len(p) for p in profiles)
    if m != 2 * (n - 1):
        violations.append(DimensionViolation(m, 2 * (n - 1)))
    s1, s2, s3, s4 = (sum(p) for p in profiles)
    if s3 - s1 != 0:
        violations.append(BalanceViolation("x", s3 - s1))
    if a * s1 + s2 - s4 != 0:
        violations.append(BalanceViolation("y", a * s1 + s2 - s4))
    if target is Target.P2:
        if a != 1:
            violations.append(P2ProfileViolation(f"a must be 1, got {a}"))
        if profiles[1]:
            violations.append(P2ProfileViolation("mu2 must be empty"))
    if violations:
        raise InvalidContactData(violations)
    return ContactData(
        fan=FanSpec(a, target),
        n=n,
        mu=tuple(tuple(sorted(p)) for p in profiles),  # type: ignore[arg-type]
        input_mu=profiles,
    )


def degree_of(gamma: ContactData) -> List[End]:
    """The labelled degree: one weighted end vector per contact point, in input order."""
    ends = []
    label = 1
    for i, p in enumerate(gamma.input_mu or gamma.mu, start=1):
        rx, ry = gamma.fan.ray(i)
        for w in p:
            ends.append(End(label, i, w, (w * rx, w * ry)))
            label += 1
    total = (sum(e.vector[0] for e in ends), sum(e.vector[1] for e in ends))
    assert total == (0, 0), total
    return ends


# -- curve classes ---------------------------------------------------------------


@dataclass(frozen=True)
class CurveClass:
    """beta = x D1 + y D2 on H_a, using D1 ~ D3 and D4 ~ a D1 + D2."""

    x: int
    y: int
    a: int

    def dot(self, i: int) -> int:
        if i in (1, 3):
            return self.y
        if i == 2:
            return self.x - self.a * self.y
        if i == 4:
            return self.x
        raise ValueError(f"no divisor D{i}")

    @property
    def intersections(self) -> Tuple[int, int, int, int]:
        return tuple(self.dot(i) for i in range(1, 5))  # type: ignore[return-value]


def class_of(gamma: ContactData) -> CurveClass:
    s1, s2, s3, s4 = gamma.sums
    beta = CurveClass(x=s4, y=s1, a=gamma.a)
    assert beta.intersections == (s1, s2, s3, s4)
    return beta


def profile_of_class(beta: CurveClass) -> ContactData:
    """All-ones contact data with |mu_i| = beta . D_i."""
    dots = beta.intersections
    bad = [i for i, d in enumerate(dots, start=1) if d < 0]
    if bad:
        raise InfeasibleClass(
            "negative intersection " + ", ".join(f"beta.D{i}={dots[i - 1]}" for i in bad)
        )
    m = sum(dots)
    if m % 2:
        raise InfeasibleClass(f"m={m} is odd, no integer n with m = 2(n-1)")
    n = m // 2 + 1
    return validate(beta.a, n, [[1] * d for d in dots])


# -- JSON ------------------------------------------------------------------------


def load_instance(path: str | Path, target: Optional[str] = None) -> ContactData:
    data = json.loads(Path(path).read_text())
    return instance_from_json(data, target)


def instance_from_json(data: Dict, target: Optional[str] = None) -> ContactData:
    return validate(
        int(data["a"]),
        int(data["n"]),
        data["mu"],
        target=target or data.get("target", "hirzebruch"),
    )


def dump_instance(gamma: ContactData) -> str:
    return json.dumps(gamma.to_json(), sort_keys=True)


# -- instance grids --------------------------------------------------------------


def partitions(total: int, max_part: int, parts: Optional[int] = None) -> Iterator[Tuple[int, ...]]:
    """Non-increasing tuples of positive integers <= max_part summing to total,
    optionally with exactly ``parts`` entries."""
    if total == 0:
        if parts in (None, 0):
            yield ()
        return
    if parts == 0:
        return
    for first in range(min(total, max_part), 0, -1):
        for rest in partitions(total - first, first, None if parts is None else parts - 1):
            yield (first,) + rest


def grid_instances(
    a_values: Sequence[int] = (1, 2, 3), s1_max: int = 3, wmax: int = 4, nmax: int = 6
) -> Iterator[ContactData]:
    """Every valid instance with S1 <= s1_max, contact orders <= wmax and 3 <= n <= nmax."""
    for a in a_values:
        for n in range(3, nmax + 1):
            m = 2 * (n - 1)
            for s1 in range(0, s1_max + 1):
                for mu1 in partitions(s1, wmax):
                    for mu3 in partitions(s1, wmax):
                        for s2 in range(0, wmax * m + 1):
                            s4 = a * s1 + s2
                            l2_room = m - len(mu1) - len(mu3)
                            if l2_room < 0:
                                break
                            for mu2 in partitions(s2, wmax):
                                l4 = l2_room - len(mu2)
                                if l4 < 0:
                                    continue
                                for mu4 in partitions(s4, wmax, l4):
                                    yield validate(a, n, [mu1, mu2, mu3, mu4])
