"""Buchberger's algorithm with sugar selection and Gebauer-Moeller criteria."""
from __future__ import annotations

import time

from ..errors import SolverTimeout
from .core import (GBStats, GroebnerBasis, PairSet, ReducerIndex, from_internal, interreduce,
                   make_monic, prepare_input, reduce_full, spoly, to_internal)
from .f4 import _install
from .monomials import MonoCodec


def buchberger(gens, order: str | None = None, deadline: float | None = None,
               stats: GBStats | None = None) -> GroebnerBasis:
    """Reduced Groebner basis, one S-pair at a time (smallest sugar first)."""
    ring, gens = prepare_input(gens)
    if order is not None and order != ring.order.name:
        ring = ring.with_order(order)
        gens = [g.to_ring(ring) for g in gens]
    stats = stats if stats is not None else GBStats()
    p = ring.p
    codec = MonoCodec(ring.order.name, ring.nvars)
    polys = [make_monic(to_internal(g, codec), p) for g in gens]
    if not polys:
        return GroebnerBasis([], ring, True, stats)
    active: list = []
    pairs = PairSet(codec)
    index = ReducerIndex(codec)
    unit = False
    for i, f in enumerate(polys):
        codec.check_cap(f.lm)
        active = _install(polys, active, i, pairs, index)
        if codec.degree(f.lm) == 0:
            unit = True
    while pairs and not unit:
        if deadline is not None and time.monotonic() > deadline:
            raise SolverTimeout("Groebner basis computation timed out")
        _, _, i, j = pairs.pop_one()
        s = spoly(polys[i], polys[j], codec, p)
        stats.pairs_reduced += 1
        if not s.monos:
            stats.zero_reductions += 1
            continue
        r = reduce_full(s, polys, index, codec, p)
        if not r.monos:
            stats.zero_reductions += 1
            continue
        r = make_monic(r, p)
        for m in (r.monos if ring.order.name == "lex" else r.monos[:1]):
            codec.check_cap(m)
        stats.max_degree = max(stats.max_degree, codec.degree(r.lm))
        polys.append(r)
        active = _install(polys, active, len(polys) - 1, pairs, index)
        if codec.degree(r.lm) == 0:
            unit = True
    stats.steps = stats.pairs_reduced
    if unit:
        basis = [ring.one()]
    else:
        basis = [from_internal(f, ring, codec) for f in interreduce(polys, active, codec, p)]
    return GroebnerBasis(basis, ring, True, stats)
