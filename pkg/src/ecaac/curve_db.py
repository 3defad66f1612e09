"""Point sources: tab-separated generator records and a bounded naive search.

Record format, one point per line, '#' starts a comment:

    m <TAB> mu <TAB> Xnum/Xden <TAB> Ynum/Yden <TAB> source <TAB> claimed

where claimed is 0 or 1 and a bare integer is accepted where a fraction
may appear.  Bad lines never abort a load; they come back as problems.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterable

from .powerful_arith import iroot
from .rational_ec import (
    CanonicalFormError,
    CurveParameterError,
    CurveQ,
    RatPoint,
    canonicalize,
    is_non_torsion,
    is_on_curve,
    make_curve,
)

SEARCH_D_MAX = 8
SEARCH_U_BOUND = 10_000

_SQUARE_MOD_64 = frozenset(pow(i, 2, 64) for i in range(64))


@dataclass(frozen=True)
class GeneratorRecord:
    m: int
    mu: int
    point: RatPoint
    source: str
    claimed_generator: bool


@dataclass(frozen=True)
class RecordProblem:
    line_no: int
    reason: str
    residual: int | None = None


def _parse_fraction(text: str) -> tuple[int, int]:
    if "/" in text:
        a, b = text.split("/", 1)
        return int(a), int(b)
    return int(text), 1


def load_records(lines: Iterable[str]) -> tuple[list[GeneratorRecord], list[RecordProblem]]:
    """Parse a record stream; malformed or invalid lines become problems."""
    records: list[GeneratorRecord] = []
    problems: list[RecordProblem] = []
    for line_no, raw in enumerate(lines, start=1):
        line = raw.rstrip("\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 6:
            problems.append(RecordProblem(line_no, f"expected 6 tab-separated fields, got {len(parts)}"))
            continue
        m_s, mu_s, x_s, y_s, source, claimed_s = parts
        try:
            m, mu = int(m_s), int(mu_s)
            xn, xd = _parse_fraction(x_s)
            yn, yd = _parse_fraction(y_s)
        except ValueError as exc:
            problems.append(RecordProblem(line_no, f"unparseable field: {exc}"))
            continue
        if claimed_s not in ("0", "1"):
            problems.append(RecordProblem(line_no, f"claimed flag must be 0 or 1, got {claimed_s!r}"))
            continue
        try:
            curve = make_curve(m, mu)
        except CurveParameterError as exc:
            problems.append(RecordProblem(line_no, f"bad curve parameters: {exc}"))
            continue
        try:
            point = canonicalize(xn, xd, yn, yd)
        except (CanonicalFormError, ZeroDivisionError) as exc:
            problems.append(RecordProblem(line_no, f"bad coordinates: {exc}"))
            continue
        if not is_on_curve(point, curve):
            residual = point.v**2 - point.u**3 - curve.B * point.d**6
            problems.append(
                RecordProblem(line_no, f"point is not on {curve}: residual {residual}", residual)
            )
            continue
        if not is_non_torsion(point, curve):
            problems.append(RecordProblem(line_no, "torsion point, useless as a generator"))
            continue
        records.append(GeneratorRecord(m, mu, point, source, claimed_s == "1"))
    return records, problems


def format_record(rec: GeneratorRecord) -> str:
    """One record line in the load_records format."""
    p = rec.point
    x = f"{p.u}/{p.d * p.d}" if p.d != 1 else str(p.u)
    y = f"{p.v}/{p.d**3}" if p.d != 1 else str(p.v)
    return f"{rec.m}\t{rec.mu}\t{x}\t{y}\t{rec.source}\t{int(rec.claimed_generator)}"


def search_points(E: CurveQ, d_max: int = SEARCH_D_MAX, u_bound: int = SEARCH_U_BOUND) -> list[RatPoint]:
    """All canonical points with d <= d_max and |u| <= u_bound * d^2.

    Both signs of v are reported.  B < 0 forces u**3 >= -B * d**6 > 0, so
    only positive u from the cube-root floor onward need scanning.
    """
    if d_max < 1 or u_bound < 1:
        raise ValueError("d_max and u_bound must be positive")
    found: list[RatPoint] = []
    for d in range(1, d_max + 1):
        bd6 = E.B * d**6
        root, exact = iroot(-bd6, 3)
        u_lo = root if exact else root + 1
        for u in range(u_lo, u_bound * d * d + 1):
            if d > 1 and gcd(u, d) != 1:
                continue
            t = u**3 + bd6
            if t & 63 not in _SQUARE_MOD_64:
                continue
            v, square = iroot(t, 2)
            if not square:
                continue
            found.append(RatPoint(u, v, d))
            if v != 0:
                found.append(RatPoint(u, -v, d))
    found.sort(key=lambda P: (P.d, abs(P.u), P.u, -P.v))
    return found


def pick_point(candidates: Iterable[RatPoint], E: CurveQ) -> RatPoint | None:
    """Smallest non-torsion candidate by (digits of d, |u|), or None.

    Positive v wins the tie between a point and its negative.
    """
    ordered = sorted(candidates, key=lambda P: (len(str(P.d)), abs(P.u), P.u, -P.v))
    for P in ordered:
        if is_non_torsion(P, E):
            return P
    return None
