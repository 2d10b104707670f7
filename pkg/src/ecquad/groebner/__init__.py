"""Groebner bases over GF(p): Buchberger and F4 paths, FGLM, and solving."""
from __future__ import annotations

from ..mpoly import MPoly, normal_form
from .buchberger import buchberger
from .core import GBStats, GroebnerBasis
from .f4 import f4, f4_step
from .fglm import fglm, is_zero_dimensional, quotient_dimension, standard_monomials
from .solve import brute_force_variety, solve_zero_dim


def groebner(gens, order: str | None = None, method: str = "f4",
             deadline: float | None = None, stats: GBStats | None = None) -> GroebnerBasis:
    if method == "f4":
        return f4(gens, order, deadline, stats)
    if method == "buchberger":
        return buchberger(gens, order, deadline, stats)
    raise ValueError(f"unknown Groebner method {method!r}")


def spoly(f: MPoly, g: MPoly) -> MPoly:
    """S-polynomial of two polynomials of the same ring."""
    ring = f.ring
    lcm = tuple(max(a, b) for a, b in zip(f.lm(), g.lm()))
    tf = tuple(a - b for a, b in zip(lcm, f.lm()))
    tg = tuple(a - b for a, b in zip(lcm, g.lm()))
    inv = ring.ctx.inv
    return f.mul_term(tf, inv(f.lc())) - g.mul_term(tg, inv(g.lc()))


def is_groebner(gens) -> bool:
    """Every S-polynomial reduces to zero.

    Pairs with coprime leading monomials are skipped: their S-polynomials
    always reduce to zero (Buchberger's first criterion).
    """
    gens = [g for g in gens if not g.is_zero()]
    for i in range(len(gens)):
        for j in range(i + 1, len(gens)):
            if not any(a and b for a, b in zip(gens[i].lm(), gens[j].lm())):
                continue
            if not normal_form(spoly(gens[i], gens[j]), gens).is_zero():
                return False
    return True


def is_reduced(gb: GroebnerBasis) -> bool:
    lms = gb.leading_monomials()
    for g in gb.generators:
        if g.lc() != 1:
            return False
        for lm in lms:
            for m, _ in g.terms:
                if m == g.lm() and lm == g.lm():
                    continue
                if all(a <= b for a, b in zip(lm, m)) and not (m == g.lm() and lm == m):
                    return False
    return True


def variety(gens, method: str = "f4", deadline: float | None = None,
            stats: GBStats | None = None) -> list[tuple[int, ...]]:
    """GF(p)-points of V(gens): grevlex basis, FGLM to lex, back-substitution."""
    gb = groebner(gens, "grevlex", method, deadline, stats)
    lex = fglm(gb)
    return solve_zero_dim(lex, gens)


__all__ = [
    "GBStats", "GroebnerBasis", "brute_force_variety", "buchberger", "f4", "f4_step", "fglm",
    "groebner", "is_groebner", "is_reduced", "is_zero_dimensional", "quotient_dimension",
    "solve_zero_dim", "spoly", "standard_monomials", "variety",
]
