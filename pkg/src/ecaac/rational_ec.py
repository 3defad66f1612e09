"""Exact rational-point arithmetic on the curves Y^2 = X^3 - 432*m^mu.

Finite points are kept in canonical integer coordinates (u, v, d) with
X = u/d^2 and Y = v/d^3 in lowest terms and d >= 1; the point at infinity
is the reserved triple (0, 1, 0).  Group-law divisions all happen over
exact rationals, never floats, so equality of points is plain structural
equality of the canonical triples.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt

from .powerful_arith import factorize

TORSION_SCREEN_LIMIT = 12  # rational torsion has order at most 12 (Mazur)


class CurveParameterError(ValueError):
    """Bad (m, mu): m not a squarefree positive integer, or mu outside {2, 4}."""

    def __init__(self, message: str, square_factor: int | None = None):
        super().__init__(message)
        self.square_factor = square_factor


class NotOnCurveError(ValueError):
    pass


class CanonicalFormError(ValueError):
    """X, Y denominators do not have the d^2 / d^3 shape, or (u,v,d) is malformed."""


@dataclass(frozen=True)
class CurveQ:
    """Y^2 = X^3 + B over Q with B = -432 * m**mu."""

    m: int
    mu: int
    B: int

    def __str__(self) -> str:
        return f"E({self.m},{self.mu}): Y^2 = X^3 - {-self.B}"


@dataclass(frozen=True)
class RatPoint:
    """Canonical coordinates: X = u/d^2, Y = v/d^3; (0, 1, 0) is infinity."""

    u: int
    v: int
    d: int

    def __post_init__(self):
        if self.d == 0:
            if (self.u, self.v) != (0, 1):
                raise CanonicalFormError("the point at infinity must be (0, 1, 0)")
            return
        if self.d < 0:
            raise CanonicalFormError(f"d must be positive, got {self.d}; signs live in u and v")
        if gcd(self.u, self.d) != 1 or gcd(self.v, self.d) != 1:
            raise CanonicalFormError(f"u and v must be coprime to d in ({self.u}, {self.v}, {self.d})")

    @property
    def is_infinity(self) -> bool:
        return self.d == 0

    def x(self) -> Fraction:
        if self.is_infinity:
            raise ValueError("infinity has no affine coordinates")
        return Fraction(self.u, self.d * self.d)

    def y(self) -> Fraction:
        if self.is_infinity:
            raise ValueError("infinity has no affine coordinates")
        return Fraction(self.v, self.d**3)


INFINITY = RatPoint(0, 1, 0)


def make_curve(m: int, mu: int) -> CurveQ:
    """Build E(m, mu); m must be a squarefree positive integer, mu in {2, 4}."""
    if mu not in (2, 4):
        raise CurveParameterError(f"mu must be 2 or 4, got {mu}")
    if m < 1:
        raise CurveParameterError(f"m must be a positive integer, got {m}")
    if m > 1:
        for p, e in factorize(m).factors:
            if e >= 2:
                raise CurveParameterError(
                    f"m = {m} is not squarefree: divisible by {p}**2 = {p * p}",
                    square_factor=p * p,
                )
    return CurveQ(m, mu, -432 * m**mu)


def is_on_curve(P: RatPoint, E: CurveQ) -> bool:
    if P.is_infinity:
        return True
    return P.v * P.v == P.u**3 + E.B * P.d**6


def _require_on_curve(P: RatPoint, E: CurveQ) -> None:
    if not is_on_curve(P, E):
        raise NotOnCurveError(f"({P.u}, {P.v}, {P.d}) does not satisfy {E}")


def negate(P: RatPoint) -> RatPoint:
    if P.is_infinity:
        return INFINITY
    return RatPoint(P.u, -P.v, P.d)


def canonicalize(xnum: int, xden: int, ynum: int, yden: int) -> RatPoint:
    """Canonical (u, v, d) for X = xnum/xden, Y = ynum/yden.

    Rejects coordinates whose lowest-terms denominators are not a perfect
    square paired with its cube, the shape every rational point of an
    integral model has.
    """
    if xden == 0 or yden == 0:
        raise CanonicalFormError("zero denominator")
    return _canonical_from_xy(Fraction(xnum, xden), Fraction(ynum, yden))


def _canonical_from_xy(x: Fraction, y: Fraction) -> RatPoint:
    d = isqrt(x.denominator)
    if d * d != x.denominator or y.denominator != d**3:
        raise CanonicalFormError(
            f"denominators ({x.denominator}, {y.denominator}) do not have the d^2, d^3 shape"
        )
    return RatPoint(x.numerator, y.numerator, d)


def _xy(P: RatPoint) -> tuple[Fraction, Fraction] | None:
    return None if P.is_infinity else (P.x(), P.y())


def _add_xy(p1, p2):
    """Chord/tangent sum of affine pairs; None stands for infinity."""
    if p1 is None:
        return p2
    if p2 is None:
        return p1
    x1, y1 = p1
    x2, y2 = p2
    if x1 == x2:
        if y1 + y2 == 0:
            return None
        lam = (3 * x1 * x1) / (2 * y1)
    else:
        lam = (y2 - y1) / (x2 - x1)
    x3 = lam * lam - x1 - x2
    return (x3, lam * (x1 - x3) - y1)


def add(P: RatPoint, Q: RatPoint, E: CurveQ) -> RatPoint:
    _require_on_curve(P, E)
    _require_on_curve(Q, E)
    r = _add_xy(_xy(P), _xy(Q))
    return INFINITY if r is None else _canonical_from_xy(*r)


def double(P: RatPoint, E: CurveQ) -> RatPoint:
    return add(P, P, E)


def scalar_mul(k: int, P: RatPoint, E: CurveQ) -> RatPoint:
    """k*P by left-to-right double-and-add over exact rationals."""
    _require_on_curve(P, E)
    if k == 0 or P.is_infinity:
        return INFINITY
    if k < 0:
        return scalar_mul(-k, negate(P), E)
    base = _xy(P)
    acc = base
    for bit in bin(k)[3:]:
        acc = _add_xy(acc, acc)
        if bit == "1":
            acc = _add_xy(acc, base)
    return INFINITY if acc is None else _canonical_from_xy(*acc)


def is_non_torsion(P: RatPoint, E: CurveQ, limit: int = TORSION_SCREEN_LIMIT) -> bool:
    """Screen for infinite order: k*P stays finite for k = 1..limit.

    With limit >= 12 this is exact for curves over Q, not just a heuristic.
    """
    if P.is_infinity:
        return False
    _require_on_curve(P, E)
    base = _xy(P)
    acc = base
    for _ in range(limit - 1):
        acc = _add_xy(acc, base)
        if acc is None:
            return False
    return True
