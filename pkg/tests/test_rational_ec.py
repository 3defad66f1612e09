"""Exact rational-point arithmetic on Y^2 = X^3 - 432 m^mu."""

import random
from fractions import Fraction

import pytest

from ecaac.rational_ec import (
    INFINITY,
    CanonicalFormError,
    CurveParameterError,
    NotOnCurveError,
    RatPoint,
    add,
    canonicalize,
    double,
    is_non_torsion,
    is_on_curve,
    make_curve,
    negate,
    scalar_mul,
)

G7 = RatPoint(84, 756, 1)


def test_make_curve_coefficients():
    assert make_curve(7, 2).B == -21168
    assert make_curve(35, 2).B == -432 * 35**2
    assert make_curve(1349, 4).B == -432 * 1349**4
    assert make_curve(1, 2).B == -432


def test_make_curve_rejects_bad_parameters():
    with pytest.raises(CurveParameterError):
        make_curve(7, 3)
    with pytest.raises(CurveParameterError):
        make_curve(0, 2)
    with pytest.raises(CurveParameterError):
        make_curve(-7, 2)
    with pytest.raises(CurveParameterError) as info:
        make_curve(12, 2)
    assert info.value.square_factor == 4
    with pytest.raises(CurveParameterError) as info:
        make_curve(18, 2)
    assert info.value.square_factor == 9


def test_ratpoint_canonical_form_validation():
    assert RatPoint(28, 28, 1).x() == 28
    assert RatPoint(0, 1, 0).is_infinity
    with pytest.raises(CanonicalFormError):
        RatPoint(2, 2, 2)  # gcd(u, d) != 1
    with pytest.raises(CanonicalFormError):
        RatPoint(3, 4, 2)  # gcd(v, d) != 1
    with pytest.raises(CanonicalFormError):
        RatPoint(1, 1, 0)  # only (0, 1, 0) may sit at infinity
    with pytest.raises(CanonicalFormError):
        RatPoint(1, 1, -1)


def test_point_accessors():
    p = RatPoint(8, 27, 5)
    assert p.x() == Fraction(8, 25)
    assert p.y() == Fraction(27, 125)
    assert INFINITY.is_infinity
    with pytest.raises(ValueError):
        INFINITY.x()


def test_canonicalize_examples():
    assert canonicalize(52, 1, 260, 1) == RatPoint(52, 260, 1)
    assert canonicalize(1708, 1, -70588, 1) == RatPoint(1708, -70588, 1)
    q = canonicalize(1, 4, 1, 8)
    assert (q.u, q.v, q.d) == (1, 1, 2)
    with pytest.raises(CanonicalFormError):
        canonicalize(1, 2, 1, 8)  # X denominator 2 is not a square
    with pytest.raises(CanonicalFormError):
        canonicalize(1, 4, 1, 16)  # Y denominator disagrees with d = 2
    with pytest.raises(CanonicalFormError):
        canonicalize(1, 0, 1, 1)


def test_is_on_curve(e7):
    assert is_on_curve(G7, e7)
    assert is_on_curve(RatPoint(28, 28, 1), e7)
    assert not is_on_curve(RatPoint(28, 29, 1), e7)
    assert is_on_curve(INFINITY, e7)


def test_add_requires_on_curve(e7):
    with pytest.raises(NotOnCurveError):
        add(RatPoint(28, 29, 1), G7, e7)


def test_fixed_vectors(e7):
    two = double(G7, e7)
    assert two == RatPoint(28, 28, 1)
    three = add(G7, two, e7)
    assert three == RatPoint(57, -405, 1)
    assert scalar_mul(3, G7, e7) == three
    four = double(two, e7)
    assert four == RatPoint(1708, -70588, 1)
    assert is_on_curve(four, e7)


def test_negate(e7):
    assert negate(G7) == RatPoint(84, -756, 1)
    assert negate(INFINITY) == INFINITY
    assert add(G7, negate(G7), e7) == INFINITY


def test_identity_and_inverse(e7):
    assert add(G7, INFINITY, e7) == G7
    assert add(INFINITY, G7, e7) == G7
    assert scalar_mul(0, G7, e7) == INFINITY
    assert scalar_mul(1, G7, e7) == G7
    assert scalar_mul(-2, G7, e7) == negate(double(G7, e7))


def test_group_law_properties(e7):
    multiples = [INFINITY]
    for _ in range(12):
        multiples.append(add(multiples[-1], G7, e7))
    # closure and consistency scalar_mul(k) == iterated addition
    for k, point in enumerate(multiples):
        assert is_on_curve(point, e7)
        assert scalar_mul(k, G7, e7) == point
    # commutativity
    rng = random.Random(2718)
    for _ in range(10):
        a = rng.randrange(0, 12)
        b = rng.randrange(0, 12)
        assert add(multiples[a], multiples[b], e7) == add(multiples[b], multiples[a], e7)
    # associativity spot checks
    for _ in range(10):
        a, b, c = (rng.randrange(0, 9) for _ in range(3))
        left = add(add(multiples[a], multiples[b], e7), multiples[c], e7)
        right = add(multiples[a], add(multiples[b], multiples[c], e7), e7)
        assert left == right
    # a + b consistency law
    for _ in range(10):
        a = rng.randrange(0, 11)
        b = rng.randrange(0, 11)
        assert scalar_mul(a + b, G7, e7) == add(multiples[a], multiples[b], e7)


def test_group_law_on_second_curve(e13, p13):
    assert is_on_curve(p13, e13)
    two = double(p13, e13)
    assert is_on_curve(two, e13)
    assert add(p13, negate(p13), e13) == INFINITY
    assert scalar_mul(5, p13, e13) == add(two, scalar_mul(3, p13, e13), e13)


def test_torsion_screen():
    e1 = make_curve(1, 2)
    t = RatPoint(12, 36, 1)
    assert is_on_curve(t, e1)
    assert scalar_mul(3, t, e1) == INFINITY
    assert not is_non_torsion(t, e1)


def test_non_torsion_witnesses(e7, p7, e13, p13):
    assert is_non_torsion(G7, e7)
    assert is_non_torsion(p7, e7)
    assert is_non_torsion(p13, e13)


def test_denominator_growth(e7, p7):
    # digit length of d(k*P) never shrinks in k = 1..20 (height growth)
    digits = []
    point = p7
    for _ in range(20):
        digits.append(len(str(point.d)))
        point = add(point, p7, e7)
    assert digits[:6] == [1, 1, 2, 4, 7, 9]
    assert all(digits[i] <= digits[i + 1] for i in range(19))
