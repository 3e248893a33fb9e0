"""VIM iteration on mode-reduced profiles.

With psi(r, t) = exp(i*omega*t) * w(r), the update

    psi_{n+1} = psi_n + int_0^r lambda(s, r) (psi_ss - psi_tt + V(s) psi) ds

acts on the real profile w alone, with residual w'' + (V + omega^2) w.  Two
routes are provided: direct symbolic integration (``iterate_oracle``, the
ground truth) and the closed coefficient recurrence for the ps2 multiplier on
V = r, omega = 1 (``iterate_recurrence_case2``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Sequence

from .exactcore import BiPoly, Poly, bipoly_mul, integrate_s_zero_to_r, poly_diff2
from .multiplier import LINEAR_POTENTIAL, LambdaKernel, MultiplierSpec, build_lambda

HEADER_COLUMNS = 6


class PathMode(str, Enum):
    ORACLE = "oracle"
    RECURRENCE = "recurrence"
    BOTH = "both"


@dataclass(frozen=True)
class ProblemSpec:
    potential: Poly = field(default=LINEAR_POTENTIAL)
    omega: Fraction = Fraction(1)
    initial_value: Fraction = Fraction(1)
    initial_slope: Fraction = Fraction(0)

    @property
    def is_paper_instance(self) -> bool:
        return (
            self.potential == LINEAR_POTENTIAL
            and self.omega == 1
            and self.initial_value == 1
            and self.initial_slope == 0
        )

    def initial_guess(self) -> Poly:
        # Constant w(0) for the paper instance; a nonzero slope adds its linear term.
        return Poly((self.initial_value, self.initial_slope))


PAPER_PROBLEM = ProblemSpec()


@dataclass(frozen=True)
class Discrepancy:
    iteration: int
    column: int
    oracle: Fraction
    recurrence: Fraction


@dataclass
class IterationTrace:
    profiles: list[Poly]
    multiplier: MultiplierSpec
    problem: ProblemSpec = PAPER_PROBLEM
    truncation_degree: int | None = None
    path: PathMode = PathMode.ORACLE
    discrepancies: list[Discrepancy] = field(default_factory=list)

    @property
    def n_iterations(self) -> int:
        return len(self.profiles) - 1

    @property
    def width(self) -> int:
        return max(len(p) for p in self.profiles) if self.profiles else 0

    @property
    def coefficient_table(self) -> list[list[Fraction]]:
        """Row n holds a_k^n, zero-padded to a common width."""
        width = self.width
        return [p.padded(width) for p in self.profiles]


def residual(w: Poly, problem: ProblemSpec = PAPER_PROBLEM) -> Poly:
    """w'' + (V + omega^2) w."""
    coeff = problem.potential + Poly.constant(problem.omega**2)
    return poly_diff2(w) + coeff * w


def iterate_oracle(
    w: Poly,
    kernel: LambdaKernel,
    problem: ProblemSpec = PAPER_PROBLEM,
    truncation: int | None = None,
) -> Poly:
    integrand = bipoly_mul(kernel.expanded, BiPoly.from_s(residual(w, problem)))
    out = w + integrate_s_zero_to_r(integrand)
    if truncation is not None:
        out = out.truncate(truncation)
    return out


def _case2_column(a: Sequence[Fraction], k: int) -> Fraction:
    def at(i: int) -> Fraction:
        return a[i] if 0 <= i < len(a) else Fraction(0)

    quartic = (k - 1) * (k - 2) * (k - 3) * (k - 4)
    return (
        Fraction(at(k - 6), quartic)
        + Fraction(at(k - 5), quartic)
        + Fraction(2 * at(k - 3), k * (k - 1) * (k - 2))
        - Fraction(at(k - 2), k * (k - 1))
    )


def iterate_recurrence_case2(row: Sequence[Fraction]) -> list[Fraction]:
    """One ps2 step on a coefficient row via the closed recurrence.

    Columns k >= 6 come from the recurrence.  Columns 0..5 are taken from the
    oracle applied to the first six input columns; output column k only
    depends on input columns <= k, so this is exact.  The output is trimmed
    and has length at most ``len(row) + 6``.
    """
    if len(row) == 0:
        raise ValueError("recurrence needs a nonempty coefficient row")
    row = [Fraction(c) for c in row]
    kernel = build_lambda(MultiplierSpec.parse("ps2"))
    header = iterate_oracle(Poly(row[:HEADER_COLUMNS]), kernel, PAPER_PROBLEM)
    out = header.padded(HEADER_COLUMNS)
    for k in range(HEADER_COLUMNS, len(row) + 6):
        out.append(_case2_column(row, k))
    while out and out[-1] == 0:
        out.pop()
    return out


def run(
    problem: ProblemSpec,
    spec: MultiplierSpec,
    n_iterations: int,
    truncation: int | None = None,
    path: PathMode | str = PathMode.ORACLE,
) -> IterationTrace:
    path = PathMode(path)
    if n_iterations < 0:
        raise ValueError("n_iterations must be >= 0")
    if path is not PathMode.ORACLE and not (spec.is_paper_case2 and problem.is_paper_instance):
        raise ValueError("the recurrence path only applies to ps2 on the paper instance")
    if path is not PathMode.ORACLE and truncation is not None:
        raise ValueError("the recurrence path does not support truncation")

    kernel = build_lambda(spec)
    w = problem.initial_guess()
    if truncation is not None:
        w = w.truncate(truncation)
    trace = IterationTrace([w], spec, problem, truncation, path)
    for n in range(1, n_iterations + 1):
        if path is PathMode.ORACLE:
            w = iterate_oracle(w, kernel, problem, truncation)
        else:
            fast = Poly(iterate_recurrence_case2(w.coeffs or (Fraction(0),)))
            if path is PathMode.BOTH:
                slow = iterate_oracle(w, kernel, problem)
                width = max(len(fast), len(slow))
                for k in range(width):
                    if fast[k] != slow[k]:
                        trace.discrepancies.append(Discrepancy(n, k, slow[k], fast[k]))
                # Oracle stays authoritative when the two disagree.
                w = slow
            else:
                w = fast
        trace.profiles.append(w)
    return trace


def support_growth(trace: IterationTrace) -> list[int]:
    """degree(w_{n+1}) - degree(w_n) for each consecutive pair."""
    degs = [len(p) - 1 for p in trace.profiles]
    return [b - a for a, b in zip(degs, degs[1:])]



def support_growth_bound(kernel: LambdaKernel, problem: ProblemSpec = PAPER_PROBLEM) -> int:
    """Largest possible degree increase of one oracle step.

    The term a_n(r) (s - r)^n of the kernel integrated against a residual of
    degree d + deg(V + omega^2) lands in degree d + deg(V + omega^2) + n + 1
    + deg a_n.
    """
    coeff = problem.potential + Poly.constant(problem.omega**2)
    v_deg = max(len(coeff) - 1, 0)
    return v_deg + 1 + max(n + len(a) - 1 for n, a in enumerate(kernel.shifted_coeffs) if len(a))
