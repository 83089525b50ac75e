import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gyrolab.qfield import ONE, SQRT2, ZERO, Q2, inverse, parse, sign

rationals = st.fractions(min_value=-1000, max_value=1000, max_denominator=100)
q2s = st.builds(Q2, rationals, rationals)
nonzero_q2s = q2s.filter(lambda x: not x.is_zero())


def test_product_of_conjugate_units():
    assert (ONE + SQRT2) * (-ONE + SQRT2) == ONE


def test_additive_inverse():
    x = Q2(Fraction(3, 2), 7)
    assert x + (-x) == ZERO


def test_square_of_one_plus_sqrt2():
    assert (ONE + SQRT2) ** 2 == Q2(3, 2)


def test_inverse_examples():
    assert inverse(ONE + SQRT2) == Q2(-1, 1)
    assert inverse(Q2(2)) == Q2(Fraction(1, 2))
    assert inverse(SQRT2) == Q2(0, Fraction(1, 2))


def test_inverse_of_zero_raises():
    with pytest.raises(ZeroDivisionError):
        inverse(ZERO)


def test_sign_examples():
    assert sign(Q2(7, -5)) == -1  # 49 < 50
    assert sign(ZERO) == 0
    assert sign(Q2(-1, 1)) == 1  # 2 > 1


def test_canonical_serialization():
    assert str(Q2(3)) == "3/1+0/1*sqrt2"
    assert str(Q2(Fraction(-1, 2), Fraction(3, 4))) == "-1/2+3/4*sqrt2"
    assert str(Q2(1, -1)) == "1/1-1/1*sqrt2"


def test_parse_shorthands():
    assert parse("3") == Q2(3)
    assert parse("-1/2") == Q2(Fraction(-1, 2))
    assert parse("1+1*sqrt2") == Q2(1, 1)
    assert parse("sqrt2") == SQRT2
    assert parse("-sqrt2") == -SQRT2
    assert parse("1/2-3/4*sqrt2") == Q2(Fraction(1, 2), Fraction(-3, 4))


@pytest.mark.parametrize("bad", ["", "1 + sqrt2", "sqrt3", "2*sqrt2+1", "1sqrt2", "++1"])
def test_parse_rejects_garbage(bad):
    with pytest.raises(ValueError):
        parse(bad)


@given(q2s)
def test_parse_format_round_trip(x):
    assert parse(str(x)) == x


@given(q2s, q2s, q2s)
def test_field_axioms(x, y, z):
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x + y == y + x
    assert x * y == y * x
    assert x * (y + z) == x * y + x * z


@given(nonzero_q2s)
def test_multiplicative_inverse(x):
    assert x * x.inverse() == ONE
    assert ONE / x == x.inverse()


@given(q2s, q2s)
def test_order_antisymmetric(x, y):
    assert (x < y) + (y < x) + (x == y) == 1


@given(q2s, q2s, q2s)
def test_order_transitive(x, y, z):
    a, b, c = sorted([x, y, z])
    assert a <= b <= c
    assert not (c < a)


@given(q2s)
def test_hash_eq_consistency_with_rationals(x):
    if x.b == 0:
        assert x == x.a and hash(x) == hash(x.a)


@settings(max_examples=50)
@given(nonzero_q2s, st.integers(min_value=-6, max_value=6))
def test_integer_powers(x, n):
    expected = ONE
    base = x if n >= 0 else x.inverse()
    for _ in range(abs(n)):
        expected = expected * base
    assert x ** n == expected


def test_sign_agrees_with_high_precision_floats():
    # 10^4 random samples against 60-digit evaluation
    rng = random.Random(20261)
    mpmath.mp.dps = 60
    root2 = mpmath.sqrt(2)
    for _ in range(10_000):
        a = Fraction(rng.randint(-10**8, 10**8), rng.randint(1, 10**6))
        b = Fraction(rng.randint(-10**8, 10**8), rng.randint(1, 10**6))
        x = Q2(a, b)
        val = mpmath.mpf(a.numerator) / a.denominator + (
            mpmath.mpf(b.numerator) / b.denominator
        ) * root2
        expected = 0 if val == 0 else (1 if val > 0 else -1)
        assert sign(x) == expected


def test_sign_of_near_cancellation():
    # Pell convergents: 8119/5741 < sqrt2 < 3363/2378, both within 1e-8
    assert sign(Q2(8119, -5741)) == -1
    assert sign(Q2(-8119, 5741)) == 1
    assert sign(Q2(3363, -2378)) == 1
