import random

import pytest
from hypothesis import given, strategies as st

from ecquad.curve import Curve
from ecquad.errors import DivisionByZero
from ecquad.field import FieldCtx
from ecquad.upoly import (UPoly, curve_resultant, gcd, roots_in_field, sylvester_resultant,
                          valuation_at)

F = FieldCtx(101)
coeff_lists = st.lists(st.integers(min_value=0, max_value=100), max_size=8)


def P(cs):
    return UPoly(F, cs)


@given(coeff_lists, coeff_lists, coeff_lists)
def test_ring_axioms(a, b, c):
    a, b, c = P(a), P(b), P(c)
    assert (a + b) * c == a * c + b * c
    assert a * b == b * a
    assert a - a == P([])


@given(coeff_lists, coeff_lists)
def test_divrem(a, b):
    a, b = P(a), P(b)
    if b.is_zero():
        with pytest.raises(DivisionByZero):
            a.divrem(b)
        return
    q, r = a.divrem(b)
    assert q * b + r == a
    assert r.degree < b.degree


@given(coeff_lists, coeff_lists, coeff_lists)
def test_gcd_divides(a, b, c):
    a, b, c = P(a), P(b), P(c)
    if (a * c).is_zero() or (b * c).is_zero():
        return
    g = gcd(a * c, b * c)
    assert g.lc() == 1
    assert (a * c).divrem(g)[1].is_zero()
    assert (b * c).divrem(g)[1].is_zero()
    assert c.is_zero() or g.divrem(c.monic())[1].is_zero()


def test_eval_and_zero_degree():
    assert P([]).degree == -1
    f = P([1, 2, 3])
    assert f(2) == (1 + 4 + 12) % 101


@given(st.lists(st.integers(min_value=0, max_value=100), min_size=1, max_size=7),
       st.integers(min_value=0, max_value=100))
def test_roots_with_multiplicity(roots, x0):
    f = UPoly.from_roots(F, roots)
    expected = sorted((r, roots.count(r)) for r in set(roots))
    assert roots_in_field(f, random.Random(1)) == expected
    assert valuation_at(f, x0) == roots.count(x0)


def test_roots_large_prime_against_scan():
    G = FieldCtx(10007)
    rng = random.Random(3)
    for _ in range(5):
        f = UPoly(G, [rng.randrange(10007) for _ in range(6)] + [1])
        scan = [x for x in range(10007) if f(x) == 0]
        assert [r for r, _ in roots_in_field(f, rng)] == scan


def test_resultant_matches_norm():
    # Res_y(y g + h, y^2 - s) = h^2 - g^2 s
    E = Curve(F, 3, 7)
    rng = random.Random(0)
    for _ in range(10):
        g = P([rng.randrange(101) for _ in range(3)])
        h = P([rng.randrange(101) for _ in range(4)])
        if g.is_zero():
            continue
        s = P([E.B, E.A, 0, 1])
        res = sylvester_resultant([h, g], [-s, P([]), P([1])])
        assert res == curve_resultant(g, h, E)


def test_resultant_of_two_graphs():
    # Res_y(y - a(x), y - b(x)) = +-(a - b): zero exactly where the graphs meet
    a = UPoly.from_roots(F, [3, 4])
    b = P([7, 1])
    res = sylvester_resultant([-a, P([1])], [-b, P([1])])
    assert res in (a - b, b - a)
