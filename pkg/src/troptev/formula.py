"""Closed-form evaluations: tropical Tevelev degrees, leaf profiles, predicted
curve counts, conjectural higher-dimensional products and the class comparison.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .exactmath import binomial_comb, factorial, symmetry_factor
from .model import (
    ContactData,
    CurveClass,
    InfeasibleClass,
    InvalidContactData,
    profile_of_class,
)

__all__ = [
    "ZeroReason",
    "FormulaResult",
    "LeafProfile",
    "PredictedCounts",
    "ConjecturalValue",
    "ComparisonReport",
    "profile_factor",
    "trop_tev",
    "trop_tev_p2",
    "labelled_degree",
    "solve_profile",
    "baseline_profile",
    "predicted_counts",
    "per_curve_multiplicity",
    "is_all_ones_large_a",
    "conjecture_pbundle",
    "conjecture_blowup",
    "comparison_report",
    "search_separations",
]


class ZeroReason(str, Enum):
    NONE = "None"
    MU1_TOO_LONG = "Mu1TooLong"
    MU3_TOO_LONG = "Mu3TooLong"
    BINOMIAL_ZERO = "BinomialZero"


def profile_factor(mu: Sequence[int]) -> int:
    """|mu|! * prod(mu) / sym(mu); the quotient is a multinomial, hence integral."""
    num = factorial(len(mu))
    for w in mu:
        num *= w
    q, r = divmod(num, symmetry_factor(mu))
    assert r == 0, f"non-integral profile factor for {mu}"
    return q


@dataclass(frozen=True)
class FormulaResult:
    value: int
    zero_reason: ZeroReason
    profile_factors: Tuple[int, ...]
    a_exponent: int
    binomial: int
    discrepancy: bool = False
    notes: Tuple[str, ...] = ()

    def to_json(self) -> Dict:
        return {
            "value": str(self.value),
            "zero_reason": self.zero_reason.value,
            "factors": {
                "profile": [str(f) for f in self.profile_factors],
                "a_exponent": self.a_exponent,
                "binomial": str(self.binomial),
            },
            "discrepancy": self.discrepancy,
            "notes": list(self.notes),
        }


def is_all_ones_large_a(gamma: ContactData) -> bool:
    """All contact orders 1 and a >= 2: the situation claimed to give no curves."""
    return gamma.a >= 2 and all(w == 1 for p in gamma.mu for w in p)


def trop_tev(gamma: ContactData) -> FormulaResult:
    n1 = gamma.n - 1
    l1, l2, l3, l4 = gamma.lengths
    factors = tuple(profile_factor(p) for p in gamma.mu)
    exponent = n1 - l2 - l4
    binom = binomial_comb(n1 - l4, l2)
    if l1 > n1:
        value, reason = 0, ZeroReason.MU1_TOO_LONG
    elif l3 > n1:
        value, reason = 0, ZeroReason.MU3_TOO_LONG
    elif binom == 0:
        value, reason = 0, ZeroReason.BINOMIAL_ZERO
    else:
        if exponent < 0:
            raise AssertionError(f"negative a-exponent with nonzero binomial for {gamma.short()}")
        value = factors[0] * factors[1] * factors[2] * factors[3] * gamma.a**exponent * binom
        reason = ZeroReason.NONE
    discrepancy = value != 0 and is_all_ones_large_a(gamma)
    notes = ()
    if discrepancy:
        notes = ("all-ones data with a>=2 is nonzero here although it is commonly listed as a zero case",)
    return FormulaResult(value, reason, factors, exponent, binom, discrepancy, notes)


def trop_tev_p2(gamma: ContactData) -> FormulaResult:
    """Degree for the projective plane, viewed as a=1 with mu2 empty.

    The three rays are permuted by lattice automorphisms, so the vanishing
    condition |mu_i| > n-1 applies to all of mu1, mu3, mu4.
    """
    if gamma.a != 1 or gamma.mu[1]:
        raise ValueError("plane data needs a=1 and mu2 empty")
    n1 = gamma.n - 1
    l1, _, l3, l4 = gamma.lengths
    factors = tuple(profile_factor(p) for p in gamma.mu)
    if l1 > n1:
        value, reason = 0, ZeroReason.MU1_TOO_LONG
    elif l3 > n1:
        value, reason = 0, ZeroReason.MU3_TOO_LONG
    elif l4 > n1:
        value, reason = 0, ZeroReason.BINOMIAL_ZERO
    else:
        value, reason = factors[0] * factors[2] * factors[3], ZeroReason.NONE
    return FormulaResult(value, reason, factors, n1 - l4, binomial_comb(n1 - l4, 0))


def labelled_degree(gamma: ContactData) -> int:
    res = trop_tev_p2(gamma) if gamma.is_p2 else trop_tev(gamma)
    return res.value * gamma.symmetry


# -- leaf profiles ---------------------------------------------------------------


@dataclass(frozen=True)
class LeafProfile:
    """Leaf tallies of a contributing curve.

    alpha..chi count two-vertex leaves whose ends lie on rays (1,2), (1,3),
    (2,3), (3,4), (4,1); eps[i] counts one-vertex leaves with an end on ray i+1.
    """

    alpha: int
    beta: int
    gamma: int
    delta: int
    chi: int
    eps: Tuple[int, int, int, int] = (0, 0, 0, 0)

    @property
    def type_b(self) -> int:
        return 1 if sum(self.eps) == 2 else 0

    @property
    def counts(self) -> Tuple[int, int, int, int, int]:
        return (self.alpha, self.beta, self.gamma, self.delta, self.chi)

    def satisfies(self, gamma: ContactData) -> bool:
        """The four ray-incidence equations plus the leaf total."""
        l1, l2, l3, l4 = gamma.lengths
        e1, e2, e3, e4 = self.eps
        a, b, g, d, c = self.counts
        return (
            sum(self.eps) in (0, 2)
            and min(self.counts) >= 0
            and a + b + c == l1 - e1
            and a + g == l2 - e2
            and b + g + d == l3 - e3
            and c + d == l4 - e4
            and a + b + g + d + c == gamma.n - 1 - self.type_b
        )

    def to_json(self) -> Dict:
        return {
            "alpha": self.alpha,
            "beta": self.beta,
            "gamma": self.gamma,
            "delta": self.delta,
            "chi": self.chi,
            "eps": list(self.eps),
        }


def solve_profile(
    gamma: ContactData, eps: Sequence[int], type_b: int, alpha: int
) -> Optional[LeafProfile]:
    """Solve the leaf system for beta, gamma, delta, chi given alpha.

    Returns ``None`` when some tally would be negative.
    """
    eps = tuple(int(e) for e in eps)
    if sum(eps) != 2 * type_b or any(e not in (0, 1) for e in eps):
        raise ValueError(f"eps={eps} inconsistent with type_b={type_b}")
    if eps[1] and eps[3]:
        raise ValueError("eps2 and eps4 cannot both be 1 for generic points")
    l1, l2, l3, l4 = gamma.lengths
    leaves = gamma.n - 1 - type_b
    e1, e2, e3, e4 = eps
    b = leaves - l4 - l2 + e2 + e4
    g = l2 - e2 - alpha
    d = l3 + l4 - leaves - e3 - e4 + alpha
    c = leaves - l3 + e3 - alpha
    if min(alpha, b, g, d, c) < 0:
        return None
    prof = LeafProfile(alpha, b, g, d, c, eps)  # type: ignore[arg-type]
    assert prof.satisfies(gamma)
    return prof


def baseline_profile(gamma: ContactData) -> Optional[LeafProfile]:
    """The type-A solution with no one-vertex leaves and the least alpha."""
    l3, l4 = gamma.length(3), gamma.length(4)
    alpha = max(0, gamma.n - 1 - l3 - l4)
    return solve_profile(gamma, (0, 0, 0, 0), 0, alpha)


@dataclass(frozen=True)
class PredictedCounts:
    type_a_labelled: int
    type_b_labelled: int
    total_labelled: int
    total_unlabelled: int

    def to_json(self) -> Dict:
        return {k: str(v) for k, v in self.__dict__.items()}


def predicted_counts(gamma: ContactData) -> PredictedCounts:
    n1 = gamma.n - 1
    l1, l2, l3, l4 = gamma.lengths
    if l1 > n1 or l3 > n1:
        return PredictedCounts(0, 0, 0, 0)
    lf = gamma.length_factorials
    total = lf * binomial_comb(n1 - l4, l2)
    if l3 + l4 >= n1:
        type_a, type_b = total, 0
    else:
        abar = n1 - l3 - l4
        bbar = n1 - l4 - l2
        gbar = n1 - l1
        type_a = lf * binomial_comb(bbar + gbar, bbar)
        type_b = lf * sum(
            binomial_comb(abar + k - 1, abar - 1) * binomial_comb(bbar + gbar - k, bbar - k)
            for k in range(1, bbar + 1)
        )
    assert type_a + type_b == total, (gamma.short(), type_a, type_b, total)
    unlabelled, r = divmod(total, gamma.symmetry)
    assert r == 0
    return PredictedCounts(type_a, type_b, total, unlabelled)


def per_curve_multiplicity(gamma: ContactData) -> int:
    """Multiplicity shared by every contributing curve.

    Raises ``ValueError`` when the a-exponent is negative; there are no
    contributing curves then.
    """
    exponent = gamma.n - 1 - gamma.length(2) - gamma.length(4)
    if exponent < 0:
        raise ValueError("negative a-exponent: no contributing curves")
    out = gamma.a**exponent
    for p in gamma.mu:
        for w in p:
            out *= w
    return out


# -- conjectural evaluators --------------------------------------------------------


@dataclass(frozen=True)
class ConjecturalValue:
    value: Fraction
    conjectural: bool = True
    notes: Tuple[str, ...] = ()

    def to_json(self) -> Dict:
        return {"value": str(self.value), "conjectural": True, "notes": list(self.notes)}


def _check_dimension(dim: int, mus: Sequence[Sequence[int]], n: int) -> None:
    """m must equal dim(X) * (n-1)."""
    m = sum(len(p) for p in mus)
    if m != dim * (n - 1):
        raise InvalidContactData([DimensionViolationR(m, dim * (n - 1))])
    for i, p in enumerate(mus, start=1):
        if any(w <= 0 for w in p):
            raise ValueError(f"non-positive contact order in mu{i}")


@dataclass(frozen=True)
class DimensionViolationR:
    m: int
    expected: int

    def describe(self) -> str:
        return f"DimensionViolation(m={self.m}, dim(n-1)={self.expected})"


def _pow(a: int, e: int) -> Fraction:
    return Fraction(a) ** e


def conjecture_pbundle(r: int, a: int, mus: Sequence[Sequence[int]], n: int) -> ConjecturalValue:
    """Product formula for P(O + O(a)) over P^r; mus has r+3 profiles.

    Profiles 1..r+1 sit on the fibres over coordinate hyperplanes, r+2 and r+3
    on the zero and infinity sections.
    """
    if len(mus) != r + 3:
        raise ValueError(f"expected {r + 3} profiles, got {len(mus)}")
    # the bundle has dimension r+1
    _check_dimension(r + 1, mus, n)
    prod = 1
    for p in mus:
        prod *= profile_factor(p)
    l_zero, l_inf = len(mus[r + 1]), len(mus[r + 2])
    value = prod * _pow(a, n - 1 - l_zero - l_inf) * binomial_comb(n - 1 - l_zero, l_inf)
    return ConjecturalValue(
        value,
        notes=("inner product over j read as j=1..|mu_i|",),
    )


def conjecture_blowup(
    r: int, mus: Sequence[Sequence[int]], n: int, points: Optional[int] = None
) -> ConjecturalValue:
    """Product formula for P^r blown up at ``points`` coordinate points (default r).

    Profiles 1..points are the exceptional divisors over e_2, ..., e_{points+1};
    the next r+1 are the strict transforms of {x_1=0}, ..., {x_{r+1}=0}.
    Exceptional divisor i pairs with the hyperplane missing its centre.
    """
    k = r if points is None else points
    if not 0 <= k <= r:
        raise ValueError("number of blown-up points must lie in [0, r]")
    if len(mus) != k + r + 1:
        raise ValueError(f"expected {k + r + 1} profiles, got {len(mus)}")
    _check_dimension(r, mus, n)
    value = 1
    for p in mus:
        value *= profile_factor(p)
    for i in range(1, k + 1):
        value *= binomial_comb(n - 1 - len(mus[i + k]), len(mus[i - 1]))
    return ConjecturalValue(
        Fraction(value),
        notes=("outer product starts at i=1; there is no profile mu_0",),
    )


# -- comparison with stable-map degrees -----------------------------------------------


class ComparisonStatus(str, Enum):
    SEPARATED = "Separated"
    NO_SEPARATION = "NoSeparation"
    INFEASIBLE_CLASS = "InfeasibleClass"
    PAPER_DISCREPANCY = "PaperDiscrepancy"
    OUT_OF_RANGE = "ParametersOutOfRange"


@dataclass(frozen=True)
class ComparisonReport:
    parity: str
    j: int
    a: int
    d: int
    k: Optional[int]
    n: int
    curve_class: Tuple[int, int]
    intersections: Tuple[int, int, int, int]
    lhs: int
    rhs: int
    status: ComparisonStatus
    instance: Optional[Dict] = None
    notes: Tuple[str, ...] = field(default=())

    @property
    def distinct(self) -> bool:
        return self.lhs != self.rhs

    def to_json(self) -> Dict:
        return {
            "parity": self.parity,
            "j": self.j,
            "a": self.a,
            "d": self.d,
            "k": self.k,
            "n": self.n,
            "class": {"x": self.curve_class[0], "y": self.curve_class[1]},
            "intersections": list(self.intersections),
            "lhs": str(self.lhs),
            "rhs": str(self.rhs),
            "distinct": self.distinct,
            "status": self.status.value,
            "instance": self.instance,
            "notes": list(self.notes),
        }


def comparison_report(parity: str, j: int, d: int, n: int, k: Optional[int] = None) -> ComparisonReport:
    """Log-side degree of the all-ones profile of beta against the stable-map value.

    even: a = 2j, beta = d((j+1)D1 + D2), reference 1, needs 2d = n-1.
    odd:  a = 2j+1, beta = (j(d-k)+d)D1 + (d-k)D2, reference C(n-1-d, k),
          needs 0 <= k <= d, k <= n-1-d and 3d - k = 2(n-1).
    """
    notes: List[str] = []
    if parity == "even":
        a = 2 * j
        beta = CurveClass(d * (j + 1), d, a)
        rhs = 1
        in_range = j >= 1 and d > 0 and 2 * d == n - 1
    elif parity == "odd":
        if k is None:
            raise ValueError("odd case needs k")
        a = 2 * j + 1
        beta = CurveClass(j * (d - k) + d, d - k, a)
        rhs = binomial_comb(n - 1 - d, k)
        in_range = j >= 1 and 0 <= k <= d and k <= n - 1 - d and 3 * d - k == 2 * (n - 1)
    else:
        raise ValueError(f"parity must be 'even' or 'odd', got {parity!r}")

    common = dict(parity=parity, j=j, a=a, d=d, k=k, n=n, curve_class=(beta.x, beta.y),
                  intersections=beta.intersections, rhs=rhs)
    if not in_range:
        notes.append("parameters violate the stated constraints")
    try:
        gamma = profile_of_class(beta)
    except InfeasibleClass as exc:
        notes.append(f"moduli problem empty: {exc}")
        status = ComparisonStatus.INFEASIBLE_CLASS if in_range else ComparisonStatus.OUT_OF_RANGE
        return ComparisonReport(lhs=0, status=status, notes=tuple(notes), **common)
    if gamma.n != n:
        notes.append(f"profile of beta forces n={gamma.n}")
    res = trop_tev(gamma)
    lhs = res.value
    if not in_range:
        status = ComparisonStatus.OUT_OF_RANGE
    elif res.discrepancy:
        status = ComparisonStatus.PAPER_DISCREPANCY
        notes.append("closed formula is nonzero for this all-ones profile")
    elif lhs != rhs:
        status = ComparisonStatus.SEPARATED
    else:
        status = ComparisonStatus.NO_SEPARATION
    return ComparisonReport(lhs=lhs, status=status, instance=gamma.to_json(), notes=tuple(notes), **common)


def search_separations(parity: str, j_max: int = 3, d_max: int = 8) -> List[ComparisonReport]:
    """All in-range parameter choices up to the given bounds."""
    out = []
    for j in range(1, j_max + 1):
        for d in range(1, d_max + 1):
            if parity == "even":
                out.append(comparison_report("even", j, d, 2 * d + 1))
                continue
            for k in range(0, d + 1):
                if (3 * d - k) % 2:
                    continue
                n = (3 * d - k) // 2 + 1
                if k <= n - 1 - d:
                    out.append(comparison_report("odd", j, d, n, k))
    return out
