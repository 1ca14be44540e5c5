from fractions import Fraction

import pytest

from psl.field import MAX_PRIME, QQ, FieldSpec, parse_field
from psl.harness import trial_rng


def test_prime_field_arithmetic_wraps():
    k = FieldSpec(7)
    assert k.add(5, 4) == 2
    assert k.mul(3, 5) == 1
    assert k.inv(3) == 5
    assert k.neg(2) == 5
    assert k(-1) == 6
    assert k.div(1, 3) == 5


def test_rationals_are_fractions():
    assert QQ("3/4") == Fraction(3, 4)
    assert QQ.inv(Fraction(3, 4)) == Fraction(4, 3)
    assert isinstance(QQ.mul(2, Fraction(1, 2)), Fraction)


@pytest.mark.parametrize("bad", [1, 4, 9, 101])
def test_non_primes_and_large_primes_rejected(bad):
    with pytest.raises(ValueError):
        FieldSpec(bad)


def test_largest_allowed_prime():
    assert FieldSpec(MAX_PRIME).p == 97


def test_inverse_of_zero_raises():
    with pytest.raises(ZeroDivisionError):
        FieldSpec(5).inv(0)


@pytest.mark.parametrize("text,p", [("Q", None), ("F2", 2), ("F7", 7), ("f5", 5)])
def test_parse_field(text, p):
    assert parse_field(text).p == p


def test_json_round_trip():
    for k in (QQ, FieldSpec(3)):
        assert FieldSpec.from_json(k.to_json()) == k
    assert FieldSpec(7).to_json() == {"Fp": 7}
    assert QQ.to_json() == "Q"


def test_random_nonzero_and_range():
    rng = trial_rng(1)
    k = FieldSpec(2)
    assert all(k.random(rng, nonzero=True) == 1 for _ in range(20))
    values = {QQ.random(rng) for _ in range(300)}
    assert values <= {Fraction(i) for i in range(-9, 10)}
