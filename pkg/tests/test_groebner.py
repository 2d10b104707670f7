import random
import time
from pathlib import Path

import pytest

from ecquad.errors import DimensionError, SolverTimeout
from ecquad.groebner import (brute_force_variety, fglm, groebner, is_groebner, is_reduced,
                             is_zero_dimensional, quotient_dimension, solve_zero_dim)
from ecquad.mpoly import PolyRing, parse_system_file, system_to_text

DATA = Path(__file__).parent / "data"


def random_quadrics(p, nvars, ngens, rng, order="grevlex"):
    R = PolyRing(p, nvars, order)
    monos = [(i, j) for i in range(nvars) for j in range(i, nvars)]
    gens = []
    for _ in range(ngens):
        d = {}
        for i, j in monos:
            e = [0] * nvars
            e[i] += 1
            e[j] += 1
            d[tuple(e)] = rng.randrange(p)
        for i in range(nvars):
            e = [0] * nvars
            e[i] = 1
            d[tuple(e)] = rng.randrange(p)
        d[(0,) * nvars] = rng.randrange(p)
        gens.append(R.from_dict(d))
    return gens


def planted_system(p, nvars, ngens, rng):
    """Random quadrics vanishing at a random point."""
    pt = [rng.randrange(p) for _ in range(nvars)]
    gens = random_quadrics(p, nvars, ngens, rng)
    return [g - g.ring.constant(g.evaluate(pt)) for g in gens], tuple(pt)


@pytest.mark.parametrize("seed", range(12))
def test_f4_matches_buchberger(seed):
    rng = random.Random(f"f4-vs-bb:{seed}")
    p = rng.choice([101, 1009, 65521])
    n = rng.randrange(2, 6)
    gens = random_quadrics(p, n, n + rng.randrange(0, 2), rng)
    a = groebner(gens, "grevlex", "f4")
    b = groebner(gens, "grevlex", "buchberger")
    assert a.generators == b.generators
    assert is_groebner(a.generators) and is_reduced(a)


def test_lex_small():
    R = PolyRing(101, ["x", "y"], "lex")
    gens = [R.parse("x^2 + y^2 - 5"), R.parse("x*y - 2")]
    a = groebner(gens, "lex", "f4")
    b = groebner(gens, "lex", "buchberger")
    assert a.generators == b.generators
    assert is_groebner(a.generators)


def test_large_prime_path():
    rng = random.Random("big-p")
    p = (1 << 61) - 1
    gens, pt = planted_system(p, 3, 3, rng)
    a = groebner(gens, "grevlex", "f4")
    b = groebner(gens, "grevlex", "buchberger")
    assert a.generators == b.generators
    lex = fglm(a, "lex")
    assert pt in solve_zero_dim(lex, gens, rng)


def test_unit_ideal_and_trivial_inputs():
    R = PolyRing(101, ["x", "y"])
    x, y = R.gens()
    assert groebner([x, y]).generators == [y, x]
    gb = groebner([x * y - 1, x, y])
    assert gb.is_unit()
    assert solve_zero_dim(fglm(gb, "lex")) == []


@pytest.mark.parametrize("seed", range(20))
def test_solve_matches_exhaustive_scan(seed):
    rng = random.Random(f"scan:{seed}")
    p = rng.choice([5, 7, 11, 13])
    k = rng.randrange(1, 4)
    gens, _ = planted_system(p, k, k, rng)
    gb = groebner(gens, "grevlex")
    if not is_zero_dimensional(gb):
        with pytest.raises(DimensionError):
            solve_zero_dim(groebner(gens, "lex"), gens)
        return
    lex = fglm(gb, "lex")
    assert lex.generators == groebner(gens, "lex").generators
    assert solve_zero_dim(lex, gens, rng) == brute_force_variety(gens)


def test_positive_dimension_detected():
    R = PolyRing(101, ["x", "y", "z"])
    gb = groebner([R.parse("x*y - z"), R.parse("x - 1")])
    assert not is_zero_dimensional(gb)
    with pytest.raises(DimensionError):
        solve_zero_dim(groebner(gb.generators, "lex"))


def test_quotient_dimension_counts_points():
    R = PolyRing(101, ["x", "y"])
    gens = [R.parse("x^2 - 1"), R.parse("y^2 - 4")]
    gb = groebner(gens)
    assert quotient_dimension(gb) == 4
    assert len(solve_zero_dim(fglm(gb, "lex"), gens)) == 4


def test_deadline():
    gens = random_quadrics(65521, 7, 7, random.Random(1))
    for method in ("f4", "buchberger"):
        with pytest.raises(SolverTimeout):
            groebner(gens, "grevlex", method, deadline=time.monotonic() - 1)


def test_golden_fixture_basis():
    gens = parse_system_file((DATA / "system_1009_7.txt").read_text())
    golden = (DATA / "gb_1009_7.txt").read_text()
    for method in ("f4", "buchberger"):
        gb = groebner(gens, "grevlex", method)
        assert system_to_text(gb.generators, gb.ring) == golden
    gb = groebner(gens, "grevlex", "f4")
    assert is_groebner(gb.generators)
