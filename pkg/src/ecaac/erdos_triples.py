"""From curve points to coprime 3-powerful solutions of a + b = c.

A finite point (u, v, d) on Y^2 = X^3 - 432*m^mu unwinds to a coprime
integer solution of x^3 + y^3 = m^e * z^3 with e = mu/2.  When m also
divides z, pulling one m into the cube and moving the negative cube to
the other side leaves a + b = c in positive 3-powerful terms: two cubes
and one m^(e+3) * z'^3, pairwise coprime.  Multiples k*(3m)*P always land
in that eligible case, giving an infinite family from a single point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

from .powerful_arith import (
    DIGIT_LIMIT_DEFAULT,
    KPowerfulCheck,
    certify_k_powerful,
    factorize,
    is_squarefree,
)
from .rational_ec import CurveQ, RatPoint, add, is_non_torsion, scalar_mul, _require_on_curve


class DegeneratePointError(ValueError):
    """The point maps to a solution with x*y = 0; nothing to normalize."""


class NotErdosEligible(Exception):
    """m does not divide z, so the m^(e+3) rearrangement is unavailable."""

    def __init__(self, m: int, z: int):
        super().__init__(f"m = {m} does not divide z = {z}")
        self.m = m
        self.z = z


class CoprimalityError(Exception):
    """A pairwise gcd that must be 1 is not; carries the offending gcd."""

    def __init__(self, message: str, offender: int):
        super().__init__(message)
        self.offender = offender


class TripleConstructionError(Exception):
    """Exact re-verification failed; carries every intermediate for autopsy."""

    def __init__(self, message: str, intermediates: dict):
        super().__init__(message)
        self.intermediates = intermediates


class StructuralAssumptionError(Exception):
    """A 3mk multiple missed eligibility, contradicting the 3m-multiplier guarantee."""


@dataclass(frozen=True)
class CubicTriple:
    """Coprime solution of x^3 + y^3 = m^e * z^3 with z >= 1."""

    x: int
    y: int
    z: int
    m: int
    e: int

    def __post_init__(self):
        if self.z < 1:
            raise ValueError(f"z must be positive, got {self.z}")


@dataclass(frozen=True)
class PowerCertificate:
    """Witness that one term of a triple is 3-powerful.

    kind "cube": value = cube_root**3.
    kind "power-cube": value = base**exp * cube_root**3 with base
    squarefree and exp >= 3.
    factors carries a defense-in-depth factorization when the term was
    small enough to factor; structural_only marks the ones that were not.
    """

    kind: str
    cube_root: int
    base: int = 1
    exp: int = 0
    factors: tuple[tuple[int, int], ...] | None = None
    structural_only: bool = True


@dataclass(frozen=True)
class PowerfulTriple:
    """a + b = c, pairwise coprime, each term certified 3-powerful."""

    a: int
    b: int
    c: int
    certificates: tuple[PowerCertificate, PowerCertificate, PowerCertificate]


def extract(Q: RatPoint, E: CurveQ) -> CubicTriple:
    """Coprime (x, y, z) with x^3 + y^3 = m^(mu/2) * z^3 from a finite point.

    The two cube terms are built from 36*w*d^3 +- v over 6*u*d with
    w = m^(mu/2); v = +-36*w*d^3 would zero one of them and is rejected
    as degenerate.  The identity and the coprimality of x, y are
    re-verified exactly before anything is returned.
    """
    if Q.is_infinity:
        raise ValueError("cannot extract a triple from the point at infinity")
    _require_on_curve(Q, E)
    e = E.mu // 2
    w = E.m**e
    wall = 36 * w * Q.d**3
    if Q.v == wall or Q.v == -wall:
        raise DegeneratePointError(f"v = {Q.v} makes one cube term vanish")
    den = 6 * Q.u * Q.d
    s = Fraction(wall + Q.v, den)
    t = Fraction(wall - Q.v, den)
    z = lcm(s.denominator, t.denominator)
    x = s.numerator * (z // s.denominator)
    y = t.numerator * (z // t.denominator)
    g = gcd(gcd(x, y), z)
    if g > 1:
        x, y, z = x // g, y // g, z // g
    if x**3 + y**3 != w * z**3 or gcd(x, y) != 1:
        raise TripleConstructionError(
            "exact re-verification of x^3 + y^3 = m^e * z^3 failed",
            {"point": Q, "curve": E, "s": s, "t": t, "x": x, "y": y, "z": z, "w": w},
        )
    return CubicTriple(x, y, z, E.m, e)


def _certify_term(value: int, kind: str, cube_root: int, base: int, exp: int, digit_limit: int) -> PowerCertificate:
    factors = None
    structural_only = True
    if len(str(value)) <= digit_limit:
        factors = factorize(value).factors
        structural_only = False
    return PowerCertificate(kind, cube_root, base, exp, factors, structural_only)


def normalize_to_erdos(t: CubicTriple, digit_limit: int = DIGIT_LIMIT_DEFAULT) -> PowerfulTriple:
    """Rearrange x^3 + y^3 = m^e * z^3 into positive a + b = c terms.

    Needs m | z.  One factor m moves out of z (z = m * z'), making the
    right side m^(e+3) * z'^3; a negative cube changes sides.  Emits the
    smaller cube first when both cubes sit on the left.
    """
    if t.z % t.m != 0:
        raise NotErdosEligible(t.m, t.z)
    zp = t.z // t.m
    exp = t.e + 3
    mterm = t.m**exp * zp**3
    gxy = gcd(t.x, t.y)
    if gxy != 1:
        raise CoprimalityError(f"gcd(x, y) = {gxy} != 1", gxy)
    gmz = gcd(t.x * t.y, t.m * t.z)
    if gmz != 1:
        raise CoprimalityError(f"gcd(x*y, m*z) = {gmz} != 1", gmz)
    cert_m = _certify_term(mterm, "power-cube", zp, t.m, exp, digit_limit)
    if t.x > 0 and t.y > 0:
        lo, hi = sorted((t.x, t.y))
        a, b, c = lo**3, hi**3, mterm
        certs = (
            _certify_term(a, "cube", lo, 1, 0, digit_limit),
            _certify_term(b, "cube", hi, 1, 0, digit_limit),
            cert_m,
        )
    elif t.x < 0:
        a, b, c = (-t.x) ** 3, mterm, t.y**3
        certs = (
            _certify_term(a, "cube", -t.x, 1, 0, digit_limit),
            cert_m,
            _certify_term(c, "cube", t.y, 1, 0, digit_limit),
        )
    elif t.y < 0:
        a, b, c = (-t.y) ** 3, mterm, t.x**3
        certs = (
            _certify_term(a, "cube", -t.y, 1, 0, digit_limit),
            cert_m,
            _certify_term(c, "cube", t.x, 1, 0, digit_limit),
        )
    else:
        raise DegeneratePointError("x * y = 0 cannot happen for a verified triple")
    if a + b != c:
        raise TripleConstructionError(
            "sign rearrangement broke a + b = c", {"triple": t, "a": a, "b": b, "c": c}
        )
    return PowerfulTriple(a, b, c, certs)


def infinite_family(P: RatPoint, E: CurveQ, count: int):
    """Yield the triples of k*(3m)*P for k = 1..count.

    Steps incrementally by the fixed point R = (3m)*P, so each iteration
    costs one exact addition instead of a fresh scalar multiple.
    """
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    if not is_non_torsion(P, E):
        raise ValueError("P must be a non-torsion point on E")
    R = scalar_mul(3 * E.m, P, E)
    Q = R
    for k in range(1, count + 1):
        try:
            yield normalize_to_erdos(extract(Q, E))
        except NotErdosEligible as exc:
            raise StructuralAssumptionError(
                f"multiple {k}*(3*{E.m})*P gave z with m not dividing it: {exc}"
            ) from exc
        if k < count:
            Q = add(Q, R, E)


def check_certificate(value: int, cert: PowerCertificate) -> bool:
    """Recompute a certificate from scratch; True means it proves 3-powerful."""
    if value < 1 or cert.cube_root < 0:
        return False
    if cert.kind == "cube":
        ok = cert.cube_root**3 == value
    elif cert.kind == "power-cube":
        ok = (
            cert.exp >= 3
            and cert.base >= 1
            and is_squarefree(cert.base)
            and cert.base**cert.exp * cert.cube_root**3 == value
        )
    else:
        return False
    if not ok:
        return False
    if cert.factors is not None:
        prod = 1
        for p, e in cert.factors:
            if e < 3:
                return False
            prod *= p**e
        if prod != value:
            return False
    return True


@dataclass(frozen=True)
class TripleCheck:
    """Independent verification of a claimed 3-powerful a + b = c."""

    sum_ok: bool
    coprime_ok: bool
    gcds: tuple[int, int, int]
    powerful: tuple[KPowerfulCheck, KPowerfulCheck, KPowerfulCheck]
    fully_decided: bool

    @property
    def passed(self) -> bool:
        return self.sum_ok and self.coprime_ok and self.fully_decided


def check_triple(a: int, b: int, c: int, digit_limit: int = DIGIT_LIMIT_DEFAULT) -> TripleCheck:
    """Check a + b = c, pairwise coprimality, and 3-powerfulness of each term.

    Terms above digit_limit digits only get the unconditional perfect-cube
    test, so their verdict may come back undecided rather than False.
    """
    if min(a, b, c) < 1:
        raise ValueError("triple terms must be positive")
    gcds = (gcd(a, b), gcd(a, c), gcd(b, c))
    checks = tuple(certify_k_powerful(n, 3, digit_limit) for n in (a, b, c))
    fully = all(ch.verdict is True for ch in checks)
    return TripleCheck(a + b == c, all(g == 1 for g in gcds), gcds, checks, fully)
