"""Exact Airy-series solution and checkers for the convergence lemmas.

The exact profile of w'' + (r + 1) w = 0, w(0) = 1, w'(0) = 0 has the power
series coefficients

    alpha_0 = 1, alpha_1 = 0, alpha_2 = -1/2,
    alpha_{n+2} = -(alpha_n + alpha_{n-1}) / ((n+1)(n+2)).

Everything here is exact; violations are returned as data.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .engine import IterationTrace
from .exactcore import Poly, format_rational

EVAL_TOLERANCE = Fraction(1, 10**14)


@dataclass(frozen=True)
class ExactSeries:
    coefficients: tuple[Fraction, ...]

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __getitem__(self, k: int) -> Fraction:
        return self.coefficients[k]

    def as_poly(self) -> Poly:
        return Poly(self.coefficients)


def exact_series(degree: int) -> ExactSeries:
    if degree < 2:
        raise ValueError(f"exact series needs degree >= 2, got {degree}")
    alpha = [Fraction(1), Fraction(0), Fraction(-1, 2)]
    for n in range(1, degree - 1):
        alpha.append(-(alpha[n] + alpha[n - 1]) / ((n + 1) * (n + 2)))
    return ExactSeries(tuple(alpha))


def recursion_defects(exact: ExactSeries) -> list[int]:
    """Indices n+2 where the stored coefficients break the recursion."""
    a = exact.coefficients
    bad = []
    if a[:3] != (1, 0, Fraction(-1, 2)):
        bad.append(0)
    for n in range(1, exact.degree - 1):
        if a[n + 2] * (n + 1) * (n + 2) != -(a[n] + a[n - 1]):
            bad.append(n + 2)
    return bad


def choose_exact_degree(R: Fraction, tol: Fraction = EVAL_TOLERANCE) -> int:
    """Smallest D >= 2 with |alpha_k| R^k < tol for k = D, ..., D+3."""
    R = abs(Fraction(R))
    size = 32
    while True:
        alpha = exact_series(size).coefficients
        for d in range(2, size - 2):
            if all(abs(alpha[k]) * R**k < tol for k in range(d, d + 4)):
                return d
        size *= 2


def airy_prefix_length(w: Poly, exact: ExactSeries) -> int:
    """Length of the leading block of w that agrees with the exact series."""
    if len(w) > exact.degree + 1:
        raise ValueError("exact series is shorter than the profile")
    p = 0
    while p <= exact.degree and w[p] == exact[p]:
        p += 1
    return p


def tail_mass(w: Poly, exact: ExactSeries | None, from_index: int, R: Fraction) -> Fraction:
    """sum_{k >= from_index} |a_k| R^k over the stored coefficients."""
    R = Fraction(R)
    return sum((abs(w[k]) * R**k for k in range(max(from_index, 0), len(w))), Fraction(0))


def sup_error_bound(w: Poly, exact: ExactSeries, R: Fraction) -> Fraction:
    """sum_k |a_k - alpha_k| R^k: an exact bound on max |w - exact| over [-R, R]."""
    R = abs(Fraction(R))
    n = max(len(w), exact.degree + 1)
    alpha = Poly(exact.coefficients)
    return sum((abs(w[k] - alpha[k]) * R**k for k in range(n)), Fraction(0))


# --------------------------------------------------------------------------
# Lemma checks
# --------------------------------------------------------------------------


@dataclass
class LemmaReport:
    prefix_lengths: list[int]
    degrees: list[int]
    prefix_violations: list[dict] = field(default_factory=list)
    support_violations: list[dict] = field(default_factory=list)
    bound_violations: list[dict] = field(default_factory=list)

    @property
    def l1_prefix_growth(self) -> bool:
        return not self.prefix_violations

    @property
    def l2_support_growth(self) -> bool:
        return not self.support_violations

    @property
    def l3_bounded(self) -> bool:
        return not self.bound_violations

    @property
    def all_pass(self) -> bool:
        return self.l1_prefix_growth and self.l2_support_growth and self.l3_bounded

    def to_dict(self) -> dict:
        return {
            "L1_prefix_growth": self.l1_prefix_growth,
            "L2_support_growth": self.l2_support_growth,
            "L3_bounded": self.l3_bounded,
            "prefix_lengths": self.prefix_lengths,
            "degrees": self.degrees,
            "violations": {
                "L1": self.prefix_violations,
                "L2": self.support_violations,
                "L3": [
                    {**v, "value": format_rational(v["value"])} for v in self.bound_violations
                ],
            },
        }


def _rows(trace: IterationTrace | Sequence[Poly]) -> list[Poly]:
    if isinstance(trace, IterationTrace):
        return list(trace.profiles)
    return list(trace)


def check_lemmas(
    trace: IterationTrace | Sequence[Poly], exact: ExactSeries | None = None
) -> LemmaReport:
    """Prefix growth >= 2, support growth <= 6 and |a_k^n| <= 1 per step."""
    rows = _rows(trace)
    width = max((len(p) for p in rows), default=1)
    if exact is None or exact.degree + 1 < width + 2:
        exact = exact_series(max(width + 2, 2))

    prefixes = [airy_prefix_length(p, exact) for p in rows]
    degrees = [len(p) - 1 for p in rows]
    report = LemmaReport(prefixes, degrees)
    for n in range(len(rows) - 1):
        if prefixes[n + 1] < min(prefixes[n] + 2, exact.degree + 1):
            report.prefix_violations.append(
                {"n": n + 1, "prefix_before": prefixes[n], "prefix_after": prefixes[n + 1]}
            )
        if degrees[n + 1] > degrees[n] + 6:
            report.support_violations.append(
                {"n": n + 1, "degree_before": degrees[n], "degree_after": degrees[n + 1]}
            )
    for n, p in enumerate(rows):
        for k, c in enumerate(p.coeffs):
            if abs(c) > 1:
                report.bound_violations.append({"n": n, "k": k, "value": c})
    return report


# --------------------------------------------------------------------------
# Pointwise coefficient bound
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class BoundProfile:
    k: int
    m: int
    a: int
    bound_value: Fraction


def bound_profile(k: int) -> BoundProfile:
    """2^m / prod_{i<m} (k-6i-1)(k-6i-2) for k = 6m + a."""
    m, a = divmod(k, 6)
    denom = 1
    for i in range(m):
        denom *= (k - 6 * i - 1) * (k - 6 * i - 2)
    return BoundProfile(k, m, a, Fraction(2**m, denom))


def knot_factorial(k: int) -> int | None:
    """The step-six product 6 -> 5*4*3, 9 -> 8*7*6, k -> (k-1)(k-2)(k-3)(k-6)~.

    Only reaches k divisible by 3; returns None elsewhere.
    """
    if k == 6:
        return 5 * 4 * 3
    if k == 9:
        return 8 * 7 * 6
    if k < 6 or k % 3:
        return None
    inner = knot_factorial(k - 6)
    if inner is None:
        return None
    return (k - 1) * (k - 2) * (k - 3) * inner


@dataclass
class BoundEntry:
    n: int
    k: int
    value: Fraction
    bound: Fraction
    ok: bool
    knot_bound: Fraction | None
    knot_ok: bool | None

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "value": format_rational(self.value),
            "bound": format_rational(self.bound),
            "pass": self.ok,
            "knot_bound": None if self.knot_bound is None else format_rational(self.knot_bound),
            "knot_pass": self.knot_ok,
        }


@dataclass
class BoundReport:
    entries: list[BoundEntry]
    min_k: int

    @property
    def violations(self) -> list[BoundEntry]:
        return [e for e in self.entries if not e.ok]

    @property
    def all_pass(self) -> bool:
        return not self.violations

    @property
    def knot_violations(self) -> list[BoundEntry]:
        return [e for e in self.entries if e.knot_ok is False]

    def to_dict(self) -> dict:
        return {
            "min_k": self.min_k,
            "all_pass": self.all_pass,
            "checked": len(self.entries),
            "violations": [e.to_dict() for e in self.violations],
            "entries": [e.to_dict() for e in self.entries],
            "knot_variant": {
                "checked": sum(e.knot_ok is not None for e in self.entries),
                "violations": [e.to_dict() for e in self.knot_violations],
            },
        }


def bound_check(trace: IterationTrace | Sequence[Poly], min_k: int = 8) -> BoundReport:
    entries = []
    for n, p in enumerate(_rows(trace)):
        for k in range(min_k, len(p)):
            value = p[k]
            bound = bound_profile(k).bound_value
            knot = knot_factorial(k)
            knot_bound = None if knot is None else Fraction(2 ** (k // 6), knot)
            entries.append(
                BoundEntry(
                    n,
                    k,
                    value,
                    bound,
                    abs(value) <= bound,
                    knot_bound,
                    None if knot_bound is None else abs(value) <= knot_bound,
                )
            )
    return BoundReport(entries, min_k)
