import pytest
from hypothesis import given, strategies as st

from ecquad.errors import DivisionByZero, UsageError
from ecquad.field import FieldCtx, is_prime

PRIMES = [5, 7, 13, 101, 1009, 8191, 10007, (1 << 61) - 1]


def test_is_prime_matches_trial_division():
    def slow(n):
        return n > 1 and all(n % q for q in range(2, int(n ** 0.5) + 1))
    assert [n for n in range(3000) if is_prime(n)] == [n for n in range(3000) if slow(n)]


def test_is_prime_large():
    assert is_prime((1 << 61) - 1)
    assert not is_prime((1 << 61) + 1)
    assert not is_prime(3215031751)   # strong pseudoprime to bases 2, 3, 5, 7


@pytest.mark.parametrize("bad", [0, 1, 2, 3, 4, 9, 1000, 1 << 61])
def test_bad_modulus(bad):
    with pytest.raises(UsageError):
        FieldCtx(bad)


@pytest.mark.parametrize("p", PRIMES)
def test_inverse_and_sqrt(p, rng):
    F = FieldCtx(p)
    for _ in range(50):
        a = F.random(rng)
        if a:
            assert a * a.inv() == 1
        r = a.sqrt()
        if r is None:
            assert not a.is_square()
        else:
            assert r * r == a


def test_division_by_zero():
    F = FieldCtx(7)
    with pytest.raises(DivisionByZero):
        F(3) / F(0)
    with pytest.raises(DivisionByZero):
        F.inv(0)


def test_mixed_fields_rejected():
    with pytest.raises(UsageError):
        FieldCtx(7)(1) + FieldCtx(11)(1)


def test_sqrt_exhaustive_small():
    F = FieldCtx(13)
    squares = {x * x % 13 for x in range(13)}
    for a in range(13):
        assert (F.sqrt(a) is not None) == (a in squares)


@given(st.integers(), st.integers(), st.integers())
def test_field_axioms(a, b, c):
    F = FieldCtx(10007)
    a, b, c = F(a), F(b), F(c)
    assert (a + b) * c == a * c + b * c
    assert a - b + b == a
    assert -(-a) == a
    if b:
        assert a / b * b == a


@given(st.integers(min_value=1, max_value=10006), st.integers(min_value=0, max_value=50))
def test_pow_matches_builtin(a, e):
    F = FieldCtx(10007)
    assert int(F(a) ** e) == pow(a, e, 10007)
