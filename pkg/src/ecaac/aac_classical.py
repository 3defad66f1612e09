"""Fundamental units of real quadratic fields by continued fractions, and the
classical divisibility scan: does d divide the u-part of the fundamental unit?

Everything is exact integer arithmetic.  For squarefree d, the unit of
Z[(1+sqrt(d))/2] (d = 1 mod 4) or Z[sqrt(d)] (otherwise) comes straight
from the continued fraction of the corresponding generator; no floats,
no rounding, and minimality is inherited from the convergent structure.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt

from .powerful_arith import is_prime, is_squarefree


class NotSquarefreeError(ValueError):
    pass


@dataclass(frozen=True)
class CFExpansion:
    """sqrt(d) = [a0; period repeating], with period[-1] == 2 * a0."""

    d: int
    a0: int
    period: tuple[int, ...]


@dataclass(frozen=True)
class QuadUnit:
    """(t + u * sqrt(d)) / 2 with t*t - d*u*u = 4 * norm, norm in {1, -1}."""

    d: int
    t: int
    u: int
    norm: int


@dataclass(frozen=True)
class AacFlag:
    d: int
    u_reported: int
    divisible: bool


@dataclass(frozen=True)
class AacScanResult:
    rows: tuple[AacFlag, ...]
    flagged: tuple[int, ...]
    errors: tuple[tuple[int, str], ...]


def cf_sqrt(d: int) -> CFExpansion:
    """Continued fraction of sqrt(d) for non-square d >= 2."""
    if d < 2:
        raise ValueError(f"d must be at least 2, got {d}")
    a0 = isqrt(d)
    if a0 * a0 == d:
        raise ValueError(f"d = {d} is a perfect square")
    period = []
    p, q = a0, d - a0 * a0
    first = (p, q)
    while True:
        a = (a0 + p) // q
        period.append(a)
        p = a * q - p
        q = (d - p * p) // q
        if (p, q) == first and period:
            break
    if period[-1] != 2 * a0:
        raise AssertionError(f"period of sqrt({d}) did not close on 2*a0: {period}")
    return CFExpansion(d, a0, tuple(period))


def _convergents(terms) -> tuple[int, int]:
    """Numerator and denominator of the convergent over the given terms."""
    h, h_prev = 1, 0
    k, k_prev = 0, 1
    for a in terms:
        h, h_prev = a * h + h_prev, h
        k, k_prev = a * k + k_prev, k
    return h, k


def _omega_expansion(d: int) -> tuple[list[int], int]:
    """CF terms of (1 + sqrt(d)) / 2 through one full period.

    Returns (terms, start) where the period is terms[start:].  start is 0
    exactly when the generator is reduced (only d = 5 here), else 1.
    """
    s = isqrt(d)
    p, q = 1, 2
    terms = []
    seen: dict[tuple[int, int], int] = {}
    while (p, q) not in seen:
        seen[(p, q)] = len(terms)
        a = (p + s) // q
        terms.append(a)
        p = a * q - p
        qn, rem = divmod(d - p * p, q)
        if rem != 0 or qn <= 0:
            raise AssertionError(f"continued fraction state broke down at d = {d}")
        q = qn
    start = seen[(p, q)]
    if start not in (0, 1):
        raise AssertionError(f"unexpected preperiod {start} for (1+sqrt({d}))/2")
    return terms, start


def fundamental_unit(d: int) -> QuadUnit:
    """Fundamental unit of the order of discriminant d or 4d, half-coordinates.

    d = 1 mod 4 walks (1 + sqrt(d))/2 and can return odd t, u; other
    residues walk sqrt(d) and return the classical x + y*sqrt(d) unit as
    (t, u) = (2x, 2y).
    """
    if d < 2:
        raise ValueError(f"d must be at least 2, got {d}")
    if not is_squarefree(d):
        raise NotSquarefreeError(f"d = {d} is not squarefree")
    if d % 4 == 1:
        terms, start = _omega_expansion(d)
        ell = len(terms) - start
        if start == 0:
            # purely periodic: unit is B*omega + B_prev over one period
            _, b = _convergents(terms)
            _, b_prev = _convergents(terms[:-1])
            t = b + 2 * b_prev
            u = b
        else:
            a_conv, b_conv = _convergents(terms[:ell])
            t = 2 * a_conv - b_conv
            u = b_conv
        norm4 = t * t - d * u * u
    else:
        cf = cf_sqrt(d)
        ell = len(cf.period)
        x, y = _convergents([cf.a0] + list(cf.period[: ell - 1]))
        t, u = 2 * x, 2 * y
        norm4 = t * t - d * u * u
    if norm4 == 4:
        norm = 1
    elif norm4 == -4:
        norm = -1
    else:
        raise AssertionError(f"unit candidate for d = {d} has norm {norm4}/4")
    if t < 0 or u < 1:
        raise AssertionError(f"unit candidate for d = {d} is not the positive fundamental one")
    return QuadUnit(d, t, u, norm)


def unit_power(d: int, n: int) -> tuple[int, int]:
    """(t_n, u_n) of the n-th power of the fundamental unit, n >= 1.

    Uses the half-coordinate recurrence t' = (t*t_n + d*u*u_n)/2,
    u' = (t*u_n + u*t_n)/2, which stays integral.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    eps = fundamental_unit(d)
    t, u = eps.t, eps.u
    tn, un = t, u
    for _ in range(n - 1):
        t_next = t * tn + d * u * un
        u_next = t * un + u * tn
        if t_next % 2 or u_next % 2:
            raise AssertionError(f"unit power recurrence lost integrality at d = {d}")
        tn, un = t_next // 2, u_next // 2
    return tn, un


def aac_flag(d: int) -> AacFlag:
    """Test the AAC divisibility d | u on the fundamental unit of d.

    For d = 1 mod 4 the tested quantity is u itself; otherwise u = 2y and
    the classical quantity is y.
    """
    eps = fundamental_unit(d)
    u_reported = eps.u if d % 4 == 1 else eps.u // 2
    return AacFlag(d, u_reported, u_reported % d == 0)


def aac_scan(d_lo: int, d_hi: int, which: str = "all") -> AacScanResult:
    """Scan squarefree d in [d_lo, d_hi], ascending; errors never abort."""
    if which not in ("all", "prime", "composite"):
        raise ValueError(f"which must be all, prime or composite, got {which!r}")
    rows = []
    flagged = []
    errors = []
    for d in range(max(d_lo, 2), d_hi + 1):
        if not is_squarefree(d):
            continue
        if which == "prime" and not is_prime(d):
            continue
        if which == "composite" and (is_prime(d) or d == 1):
            continue
        try:
            flag = aac_flag(d)
        except Exception as exc:  # keep scanning, report later
            errors.append((d, f"{type(exc).__name__}: {exc}"))
            continue
        rows.append(flag)
        if flag.divisible:
            flagged.append(d)
    return AacScanResult(tuple(rows), tuple(flagged), tuple(errors))
