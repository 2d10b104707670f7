"""GF(p)-rational points of zero-dimensional ideals by lex back-substitution."""
from __future__ import annotations

import itertools
import random

from ..errors import DimensionError, InconsistencyError, UsageError
from ..mpoly import MPoly
from ..upoly import UPoly, gcd, roots_in_field
from .buchberger import buchberger
from .core import GroebnerBasis
from .fglm import is_zero_dimensional


def solve_zero_dim(gb_lex: GroebnerBasis, gens_orig=None,
                   rng: random.Random | None = None) -> list[tuple[int, ...]]:
    """All GF(p)-rational points of V(I), sorted.

    The univariate generator in the last (smallest) variable gives candidate
    values; each is substituted and the specialised system solved
    recursively.  Every point is checked against ``gens_orig``.
    """
    if gb_lex.order != "lex":
        raise UsageError("solve_zero_dim needs a lex basis")
    if gb_lex.is_unit():
        return []
    if not is_zero_dimensional(gb_lex):
        raise DimensionError("ideal is not zero-dimensional")
    rng = rng or random.Random(0)
    points = sorted(_solve(list(gb_lex.generators), gb_lex.ring, rng))
    if gens_orig is not None:
        for pt in points:
            for g in gens_orig:
                if g.evaluate(pt) != 0:
                    raise InconsistencyError(f"point {pt} does not satisfy {g}")
    return points


def _solve(gens: list[MPoly], ring, rng) -> list[tuple]:
    n = ring.nvars
    ctx = ring.ctx
    last = n - 1
    uni = [g for g in gens if not g.is_zero() and g.variables() <= {last}]
    if any(g.is_constant() for g in uni):
        return []
    if not uni:
        raise InconsistencyError("lex basis has no univariate generator in the last variable")
    f = UPoly(ctx, [0])
    for g in uni:
        coeffs = [0] * (g.degree_in(last) + 1)
        for m, c in g.terms:
            coeffs[m[last]] = c
        u = UPoly(ctx, coeffs)
        f = u if f.is_zero() else gcd(f, u)
    roots = [r for r, _ in roots_in_field(f, rng)] if f.degree > 0 else []
    if n == 1:
        return [(r,) for r in roots]
    sub = ring.subring(ring.names[:last])
    out = []
    for r in roots:
        special = [g.substitute({last: r}).to_ring(sub) for g in gens]
        special = [g for g in special if not g.is_zero()]
        if not special:
            raise DimensionError("specialised system is not zero-dimensional")
        gb = buchberger(special, order="lex")
        if gb.is_unit():
            continue
        if not is_zero_dimensional(gb):
            raise DimensionError("specialised system is not zero-dimensional")
        for pt in _solve(list(gb.generators), gb.ring, rng):
            out.append(pt + (r,))
    return out


def brute_force_variety(gens, p: int | None = None) -> list[tuple[int, ...]]:
    """Exhaustive scan of GF(p)^k; only for tiny p and k."""
    ring = gens[0].ring
    p = p or ring.p
    return sorted(pt for pt in itertools.product(range(p), repeat=ring.nvars)
                  if all(g.evaluate(pt) == 0 for g in gens))
