"""Exact rational scalars and polynomials in one (r) and two (s, r) variables.

Scalars are :class:`fractions.Fraction`, which is always stored in lowest
terms with a positive denominator.  :class:`Poly` is a dense univariate
polynomial in ``r``; :class:`BiPoly` is a sparse bivariate polynomial keyed by
``(s_degree, r_degree)``.  Both are immutable.

The zero polynomial is the empty coefficient tuple and reports
``degree == NEG_INF``.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import ROUND_HALF_EVEN, Context, Decimal
from fractions import Fraction
from math import comb
from typing import Iterable, Mapping, Sequence, Union

Rational = Fraction
Scalar = Union[int, Fraction]

NEG_INF = float("-inf")

_DECIMAL_CTX = Context(prec=17, rounding=ROUND_HALF_EVEN)


# --------------------------------------------------------------------------
# Rational helpers
# --------------------------------------------------------------------------


def rat(value: Scalar | str) -> Fraction:
    return Fraction(value)


def rat_add(x: Fraction, y: Fraction) -> Fraction:
    return x + y


def rat_mul(x: Fraction, y: Fraction) -> Fraction:
    return x * y


def rat_neg(x: Fraction) -> Fraction:
    return -x


def rat_div(x: Fraction, y: Fraction) -> Fraction:
    if y == 0:
        raise ZeroDivisionError("rational division by zero")
    return Fraction(x) / y


def rat_cmp(x: Fraction, y: Fraction) -> int:
    """Three-way comparison: -1, 0 or 1."""
    return (x > y) - (x < y)


def format_rational(x: Fraction) -> str:
    """Render as ``"p/q"``; integers keep the bare ``"p"`` form."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"``, an integer or a plain decimal like ``"2.5"`` exactly."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not an exact rational: {text!r}") from exc


def to_decimal_string(x: Fraction) -> str:
    """17 significant digits, round-half-even."""
    x = Fraction(x)
    if x == 0:
        return "0"
    d = _DECIMAL_CTX.divide(Decimal(x.numerator), Decimal(x.denominator))
    return str(d)


# --------------------------------------------------------------------------
# Univariate polynomials
# --------------------------------------------------------------------------


def _trim(coeffs: Iterable[Scalar]) -> tuple[Fraction, ...]:
    out = [Fraction(c) for c in coeffs]
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


@dataclass(frozen=True, init=False)
class Poly:
    """Dense polynomial in r; ``coeffs[k]`` multiplies ``r**k``."""

    coeffs: tuple[Fraction, ...]

    def __init__(self, coeffs: Iterable[Scalar] = ()) -> None:
        object.__setattr__(self, "coeffs", _trim(coeffs))

    @classmethod
    def constant(cls, c: Scalar) -> Poly:
        return cls((c,))

    @classmethod
    def monomial(cls, c: Scalar, k: int) -> Poly:
        return cls([0] * k + [c])

    @property
    def degree(self) -> int | float:
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, k: int) -> Fraction:
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return Fraction(0)

    def __len__(self) -> int:
        return len(self.coeffs)

    def padded(self, length: int) -> list[Fraction]:
        return [self[k] for k in range(length)]

    def __add__(self, other: Poly) -> Poly:
        return poly_add(self, other)

    def __sub__(self, other: Poly) -> Poly:
        return poly_add(self, poly_scale(-1, other))

    def __neg__(self) -> Poly:
        return poly_scale(-1, self)

    def __mul__(self, other: Poly | Scalar) -> Poly:
        if isinstance(other, Poly):
            return poly_mul(self, other)
        return poly_scale(other, self)

    __rmul__ = __mul__

    def __call__(self, x: Scalar) -> Fraction:
        return poly_eval(self, x)

    def truncate(self, degree: int) -> Poly:
        return Poly(self.coeffs[: degree + 1])

    def diff(self) -> Poly:
        return Poly(k * c for k, c in enumerate(self.coeffs) if k > 0)

    def __repr__(self) -> str:
        if not self.coeffs:
            return "Poly(0)"
        terms = [f"{format_rational(c)}*r^{k}" for k, c in enumerate(self.coeffs) if c]
        return "Poly(" + " + ".join(terms) + ")"


R = Poly((0, 1))


def poly_add(p: Poly, q: Poly) -> Poly:
    n = max(len(p), len(q))
    return Poly(p[k] + q[k] for k in range(n))


def poly_scale(c: Scalar, p: Poly) -> Poly:
    c = Fraction(c)
    if c == 0:
        return Poly()
    return Poly(c * a for a in p.coeffs)


def poly_mul(p: Poly, q: Poly) -> Poly:
    if p.is_zero() or q.is_zero():
        return Poly()
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p.coeffs):
        if a == 0:
            continue
        for j, b in enumerate(q.coeffs):
            out[i + j] += a * b
    return Poly(out)


def poly_diff2(p: Poly) -> Poly:
    """Second derivative: coefficient j of the result is (j+2)(j+1) p[j+2]."""
    return Poly((j + 2) * (j + 1) * p[j + 2] for j in range(len(p) - 2))


def poly_eval(p: Poly, x: Scalar) -> Fraction:
    x = Fraction(x)
    acc = Fraction(0)
    for c in reversed(p.coeffs):
        acc = acc * x + c
    return acc


def poly_eval_float(p: Poly, x: float) -> float:
    """Horner evaluation in double precision on the exact coefficients."""
    acc = 0.0
    for c in reversed(p.coeffs):
        acc = acc * x + float(c)
    return acc


# --------------------------------------------------------------------------
# Bivariate polynomials in (s, r)
# --------------------------------------------------------------------------


@dataclass(frozen=True, init=False)
class BiPoly:
    """Sparse polynomial in s and r; keys are ``(s_degree, r_degree)``."""

    terms: Mapping[tuple[int, int], Fraction]

    def __init__(self, terms: Mapping[tuple[int, int], Scalar] | None = None) -> None:
        clean = {k: Fraction(v) for k, v in (terms or {}).items() if v != 0}
        object.__setattr__(self, "terms", dict(sorted(clean.items())))

    @classmethod
    def from_r(cls, p: Poly) -> BiPoly:
        """Embed a polynomial in r (all s-degrees zero)."""
        return cls({(0, i): c for i, c in enumerate(p.coeffs)})

    @classmethod
    def from_s(cls, p: Poly) -> BiPoly:
        """Re-express a polynomial in r as the same polynomial in s."""
        return cls({(j, 0): c for j, c in enumerate(p.coeffs)})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BiPoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash(tuple(self.terms.items()))

    def __add__(self, other: BiPoly) -> BiPoly:
        return bipoly_add(self, other)

    def __sub__(self, other: BiPoly) -> BiPoly:
        return bipoly_add(self, bipoly_scale(-1, other))

    def __mul__(self, other: BiPoly | Scalar) -> BiPoly:
        if isinstance(other, BiPoly):
            return bipoly_mul(self, other)
        return bipoly_scale(other, self)

    __rmul__ = __mul__

    def subs_s_equals_r(self) -> Poly:
        """Set s = r, giving a polynomial in r."""
        out: dict[int, Fraction] = {}
        for (j, i), c in self.terms.items():
            out[i + j] = out.get(i + j, Fraction(0)) + c
        return _poly_from_dict(out)

    def diff_s(self) -> BiPoly:
        return BiPoly({(j - 1, i): j * c for (j, i), c in self.terms.items() if j > 0})

    def diff_r(self) -> BiPoly:
        return BiPoly({(j, i - 1): i * c for (j, i), c in self.terms.items() if i > 0})

    def evaluate(self, s: Scalar, r: Scalar) -> Fraction:
        s, r = Fraction(s), Fraction(r)
        return sum((c * s**j * r**i for (j, i), c in self.terms.items()), Fraction(0))

    def __repr__(self) -> str:
        if not self.terms:
            return "BiPoly(0)"
        parts = [f"{format_rational(c)}*s^{j}*r^{i}" for (j, i), c in self.terms.items()]
        return "BiPoly(" + " + ".join(parts) + ")"


S_MINUS_R = BiPoly({(1, 0): 1, (0, 1): -1})


def _poly_from_dict(d: Mapping[int, Fraction]) -> Poly:
    if not d:
        return Poly()
    return Poly(d.get(k, 0) for k in range(max(d) + 1))


def bipoly_add(a: BiPoly, b: BiPoly) -> BiPoly:
    out = dict(a.terms)
    for key, c in b.terms.items():
        out[key] = out.get(key, Fraction(0)) + c
    return BiPoly(out)


def bipoly_scale(c: Scalar, a: BiPoly) -> BiPoly:
    c = Fraction(c)
    return BiPoly({k: c * v for k, v in a.terms.items()})


def bipoly_mul(a: BiPoly, b: BiPoly) -> BiPoly:
    out: dict[tuple[int, int], Fraction] = {}
    for (ja, ia), ca in a.terms.items():
        for (jb, ib), cb in b.terms.items():
            key = (ja + jb, ia + ib)
            out[key] = out.get(key, Fraction(0)) + ca * cb
    return BiPoly(out)


def integrate_s_zero_to_r(f: BiPoly) -> Poly:
    """Definite integral over s from 0 to r: s^j r^i -> r^(i+j+1) / (j+1)."""
    out: dict[int, Fraction] = {}
    for (j, i), c in f.terms.items():
        k = i + j + 1
        out[k] = out.get(k, Fraction(0)) + c / (j + 1)
    return _poly_from_dict(out)


def expand_shifted_powers(coeffs: Sequence[Poly]) -> BiPoly:
    """Expand sum_n coeffs[n](r) * (s - r)^n into the (s, r) monomial basis."""
    out: dict[tuple[int, int], Fraction] = {}
    for n, a_n in enumerate(coeffs):
        if a_n.is_zero():
            continue
        # (s - r)^n = sum_j C(n, j) s^j (-r)^(n-j)
        for j in range(n + 1):
            binom = comb(n, j) * (-1) ** (n - j)
            for i, c in enumerate(a_n.coeffs):
                if c == 0:
                    continue
                key = (j, i + n - j)
                out[key] = out.get(key, Fraction(0)) + binom * c
    return BiPoly(out)
