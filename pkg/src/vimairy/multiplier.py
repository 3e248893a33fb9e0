"""Lagrange multiplier kernels lambda(s, r) for the operator d^2/ds^2 + V(s).

The kernel solves

    lambda_ss + V(s) lambda = 0,   lambda(r, r) = 0,   lambda_s(r, r) = 1

and is built as a series in u = s - r.  Writing V(s) = sum_j v_j(r) u^j, the
shifted coefficients obey

    a_{n+2}(r) = -(sum_j v_j(r) a_{n-j}(r)) / ((n+1)(n+2)),  a_0 = 0, a_1 = 1.

``ps1`` and ``ps2`` are the first two nonzero partial sums of that series for
V(r) = r: ``s - r`` and ``(s - r) - (r/6)(s - r)^3``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from math import comb

from .exactcore import R, BiPoly, Poly, bipoly_mul, expand_shifted_powers, poly_scale

LINEAR_POTENTIAL = R


class MultiplierKind(str, Enum):
    PARTIAL_SUM_1 = "ps1"
    PARTIAL_SUM_2 = "ps2"
    SERIES = "series"


@dataclass(frozen=True)
class MultiplierSpec:
    kind: MultiplierKind
    potential: Poly = field(default=LINEAR_POTENTIAL)
    order: int | None = None

    def __post_init__(self) -> None:
        if self.kind is MultiplierKind.SERIES:
            if self.order is None or self.order < 1:
                raise ValueError(f"series multiplier needs order K >= 1, got {self.order}")
        else:
            if self.potential != LINEAR_POTENTIAL:
                raise ValueError(
                    f"{self.kind.value} is only defined for the linear potential V(r) = r"
                )
            if self.order is not None:
                raise ValueError(f"{self.kind.value} takes no order")

    @classmethod
    def parse(cls, text: str, potential: Poly = LINEAR_POTENTIAL) -> MultiplierSpec:
        """Parse ``"ps1"``, ``"ps2"`` or ``"series:K"``."""
        text = text.strip()
        if text == "ps1":
            return cls(MultiplierKind.PARTIAL_SUM_1, potential)
        if text == "ps2":
            return cls(MultiplierKind.PARTIAL_SUM_2, potential)
        m = re.fullmatch(r"series:(\d+)", text)
        if m:
            return cls(MultiplierKind.SERIES, potential, int(m.group(1)))
        raise ValueError(f"unknown multiplier {text!r}; expected ps1, ps2 or series:K")

    def label(self) -> str:
        if self.kind is MultiplierKind.SERIES:
            return f"series:{self.order}"
        return self.kind.value

    @property
    def is_paper_case2(self) -> bool:
        return self.kind is MultiplierKind.PARTIAL_SUM_2 and self.potential == LINEAR_POTENTIAL


@dataclass(frozen=True)
class LambdaKernel:
    shifted_coeffs: tuple[Poly, ...]
    expanded: BiPoly
    order: int
    potential: Poly

    def __post_init__(self) -> None:
        if len(self.shifted_coeffs) < 2:
            raise ValueError("kernel needs at least the (s - r) term")
        if not self.shifted_coeffs[0].is_zero() or self.shifted_coeffs[1] != Poly.constant(1):
            raise ValueError("kernel must satisfy lambda(r,r) = 0 and lambda_s(r,r) = 1")


def shift_potential(potential: Poly) -> list[Poly]:
    """Coefficients v_j(r) with V(s) = sum_j v_j(r) (s - r)^j."""
    # s^k = (u + r)^k = sum_j C(k, j) u^j r^(k-j)
    out = [Poly() for _ in range(len(potential))]
    for k, c in enumerate(potential.coeffs):
        for j in range(k + 1):
            out[j] = out[j] + Poly.monomial(comb(k, j) * c, k - j)
    return out


def series_coefficients(potential: Poly, order: int) -> list[Poly]:
    """Shifted coefficients a_0..a_K from the recurrence (a_{-1} := 0)."""
    v = shift_potential(potential)
    a: list[Poly] = [Poly(), Poly.constant(1)]
    for n in range(order - 1):
        acc = Poly()
        for j, v_j in enumerate(v):
            if n - j < 0:
                break
            acc = acc + v_j * a[n - j]
        a.append(poly_scale(Fraction(-1, (n + 1) * (n + 2)), acc))
    return a[: order + 1]


def build_lambda(spec: MultiplierSpec) -> LambdaKernel:
    if spec.kind is MultiplierKind.PARTIAL_SUM_1:
        coeffs = [Poly(), Poly.constant(1)]
    elif spec.kind is MultiplierKind.PARTIAL_SUM_2:
        coeffs = [Poly(), Poly.constant(1), Poly(), Poly((0, Fraction(-1, 6)))]
    else:
        assert spec.order is not None
        coeffs = series_coefficients(spec.potential, spec.order)
    order = len(coeffs) - 1
    return LambdaKernel(tuple(coeffs), expand_shifted_powers(coeffs), order, spec.potential)


def lambda_residual(kernel: LambdaKernel) -> BiPoly:
    """lambda_ss + V(s) lambda as a polynomial in (s, r)."""
    lam = kernel.expanded
    return lam.diff_s().diff_s() + bipoly_mul(BiPoly.from_s(kernel.potential), lam)


def shifted_residual(kernel: LambdaKernel) -> list[Poly]:
    """The same residual in the (s - r) basis: entry m multiplies (s - r)^m."""
    a = kernel.shifted_coeffs
    v = shift_potential(kernel.potential)
    length = len(a) + max(len(v) - 1, 0)
    out = [Poly() for _ in range(length)]
    for n in range(2, len(a)):
        out[n - 2] = out[n - 2] + poly_scale(n * (n - 1), a[n])
    for j, v_j in enumerate(v):
        for n, a_n in enumerate(a):
            out[j + n] = out[j + n] + v_j * a_n
    while out and out[-1].is_zero():
        out.pop()
    return out
