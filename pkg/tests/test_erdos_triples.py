"""Cubic-triple extraction, normalization to a + b = c, certificates."""

from math import gcd

import pytest

from ecaac.erdos_triples import (
    CoprimalityError,
    CubicTriple,
    DegeneratePointError,
    NotErdosEligible,
    PowerCertificate,
    check_certificate,
    check_triple,
    extract,
    infinite_family,
    normalize_to_erdos,
)
from ecaac.rational_ec import RatPoint, make_curve, negate, scalar_mul

G7 = RatPoint(84, 756, 1)


def test_extraction_vectors(e7, p7):
    t1 = extract(G7, e7)
    assert (t1.x, t1.y, t1.z) == (2, -1, 1)
    t2 = extract(p7, e7)
    assert (t2.x, t2.y, t2.z) == (5, 4, 3)
    t3 = extract(scalar_mul(3, G7, e7), e7)
    assert (t3.x, t3.y, t3.z) == (-17, 73, 38)
    for t in (t1, t2, t3):
        assert t.m == 7 and t.e == 1
        assert t.x**3 + t.y**3 == 7 * t.z**3
        assert gcd(t.x, t.y) == 1


def test_extract_rejects_infinity_and_off_curve(e7):
    from ecaac.rational_ec import INFINITY, NotOnCurveError

    with pytest.raises(ValueError):
        extract(INFINITY, e7)
    with pytest.raises(NotOnCurveError):
        extract(RatPoint(28, 29, 1), e7)


def test_extract_degenerate_point():
    e1 = make_curve(1, 2)
    with pytest.raises(DegeneratePointError):
        extract(RatPoint(12, 36, 1), e1)  # v = 36 w d^3 zeroes one cube
    with pytest.raises(DegeneratePointError):
        extract(RatPoint(12, -36, 1), e1)


def test_extract_round_trip(e7, p7):
    w = 7
    point = p7
    for _ in range(4):
        t = extract(point, e7)
        s = t.x + t.y
        assert point.x() * s == 12 * w * t.z
        assert point.y() * s == 36 * w * (t.x - t.y)
        point = scalar_mul(2, point, e7)


def test_negate_swaps_cubes(e7, p7):
    t = extract(p7, e7)
    tn = extract(negate(p7), e7)
    assert (tn.x, tn.y, tn.z) == (t.y, t.x, t.z)


def test_normalize_requires_m_dividing_z(e7):
    with pytest.raises(NotErdosEligible) as info:
        normalize_to_erdos(CubicTriple(5, 4, 3, 7, 1))
    assert info.value.m == 7
    assert info.value.z == 3
    with pytest.raises(NotErdosEligible):
        normalize_to_erdos(CubicTriple(-17, 73, 38, 7, 1))
    with pytest.raises(NotErdosEligible):
        normalize_to_erdos(CubicTriple(2, -1, 1, 7, 1))


def test_normalize_coprimality_guards():
    with pytest.raises(CoprimalityError) as info:
        normalize_to_erdos(CubicTriple(2, 4, 7, 7, 1))
    assert info.value.offender == 2
    with pytest.raises(CoprimalityError) as info:
        normalize_to_erdos(CubicTriple(7, 2, 7, 7, 1))
    assert info.value.offender == 7


def test_pipeline_21p(e7, p7):
    q = scalar_mul(21, p7, e7)
    triple = normalize_to_erdos(extract(q, e7))
    assert triple.a + triple.b == triple.c
    assert gcd(triple.a, triple.b) == 1
    assert gcd(triple.a, triple.c) == 1
    assert gcd(triple.b, triple.c) == 1
    assert [c.kind for c in triple.certificates] == ["cube", "power-cube", "cube"]
    assert triple.b % 7**4 == 0
    assert (len(str(triple.a)), len(str(triple.b)), len(str(triple.c))) == (1028, 1026, 1028)
    for value, cert in zip((triple.a, triple.b, triple.c), triple.certificates):
        assert check_certificate(value, cert)


def test_infinite_family_distinct_members(e7, p7):
    triples = list(infinite_family(p7, e7, 2))
    assert len(triples) == 2
    assert triples[0] != triples[1]
    assert len(str(triples[1].a)) == 4111
    for t in triples:
        assert t.a + t.b == t.c
        assert gcd(t.a, t.b) == 1


def test_infinite_family_validates_count(e7, p7):
    with pytest.raises(ValueError):
        list(infinite_family(p7, e7, 0))


def test_infinite_family_rejects_torsion():
    e1 = make_curve(1, 2)
    with pytest.raises(ValueError):
        list(infinite_family(RatPoint(12, 36, 1), e1, 1))


def test_check_certificate_cube():
    good = PowerCertificate("cube", 2)
    assert check_certificate(8, good)
    assert not check_certificate(9, good)
    assert not check_certificate(8, PowerCertificate("cube", 3))


def test_check_certificate_power_cube():
    cert = PowerCertificate("power-cube", 3, base=7, exp=4)
    assert check_certificate(7**4 * 27, cert)
    assert not check_certificate(7**4 * 27, PowerCertificate("power-cube", 3, base=7, exp=2))
    assert not check_certificate(4**3 * 27, PowerCertificate("power-cube", 3, base=4, exp=3))
    assert not check_certificate(7**4 * 27 + 1, cert)
    assert not check_certificate(5, PowerCertificate("perfect", 5))


def test_check_certificate_factor_cross_check():
    with_factors = PowerCertificate("cube", 2, factors=((2, 3),), structural_only=False)
    assert check_certificate(8, with_factors)
    wrong_product = PowerCertificate("cube", 2, factors=((3, 3),), structural_only=False)
    assert not check_certificate(8, wrong_product)
    low_exponent = PowerCertificate("cube", 2, factors=((2, 2), (2, 1)), structural_only=False)
    assert not check_certificate(8, low_exponent)


def test_check_triple_verdicts():
    bad_power = check_triple(1, 8, 9)
    assert bad_power.sum_ok
    assert bad_power.coprime_ok
    assert not bad_power.passed
    assert bad_power.powerful[2].verdict is False

    bad_sum = check_triple(1, 1, 3)
    assert not bad_sum.sum_ok
    assert not bad_sum.passed

    # sum and coprimality can hold while a term fails the exponent test
    near_miss = check_triple(1, 2**3 * 3**6, 1 + 2**3 * 3**6)
    assert near_miss.sum_ok
    assert near_miss.coprime_ok
    assert near_miss.passed is False  # 5833 = 19 * 307


def test_check_triple_from_pipeline(e7, p7):
    t = next(iter(infinite_family(p7, e7, 1)))
    report = check_triple(t.a, t.b, t.c)
    assert report.sum_ok
    assert report.coprime_ok
    assert report.gcds == (1, 1, 1)
    # the two cubes certify via the unconditional perfect-power test, but
    # the m-power term is too large to factor, so it stays undecided
    assert report.powerful[0].verdict is True
    assert report.powerful[1].verdict is None
    assert report.powerful[2].verdict is True
    assert not report.fully_decided
    assert report.passed is False


def test_check_triple_shared_factor():
    report = check_triple(8, 8, 16)
    assert report.sum_ok
    assert not report.coprime_ok
    assert report.passed is False
