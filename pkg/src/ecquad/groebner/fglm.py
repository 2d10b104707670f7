"""FGLM conversion of a zero-dimensional Groebner basis to lex order."""
from __future__ import annotations

from ..errors import DimensionError, UsageError
from ..mpoly import MPoly, normal_form
from .core import GroebnerBasis


def is_zero_dimensional(gb: GroebnerBasis) -> bool:
    """Every variable has a pure power among the leading monomials."""
    if gb.is_unit():
        return True
    n = gb.ring.nvars
    pure = set()
    for m in gb.leading_monomials():
        support = [i for i, e in enumerate(m) if e]
        if len(support) == 1:
            pure.add(support[0])
    return len(pure) == n


def standard_monomials(gb: GroebnerBasis) -> list[tuple]:
    """Monomials outside the leading ideal, ascending in the basis order."""
    if not is_zero_dimensional(gb):
        raise DimensionError("ideal is not zero-dimensional")
    if gb.is_unit():
        return []
    lms = gb.leading_monomials()
    n = gb.ring.nvars
    one = (0,) * n
    seen = {one}
    frontier = [one]
    while frontier:
        nxt = []
        for m in frontier:
            for i in range(n):
                e = list(m)
                e[i] += 1
                e = tuple(e)
                if e in seen:
                    continue
                if any(all(a <= b for a, b in zip(lm, e)) for lm in lms):
                    continue
                seen.add(e)
                nxt.append(e)
        frontier = nxt
    key = gb.ring.order.key
    return sorted(seen, key=key)


def quotient_dimension(gb: GroebnerBasis) -> int:
    return len(standard_monomials(gb))


def _nf_vector(f: MPoly, gb: GroebnerBasis, pos: dict) -> list[int]:
    r = normal_form(f, gb.generators)
    v = [0] * len(pos)
    for m, c in r.terms:
        v[pos[m]] = c
    return v


def fglm(gb: GroebnerBasis, target: str = "lex") -> GroebnerBasis:
    """Reduced basis of the same ideal in the ``target`` order."""
    if not gb.reduced:
        raise UsageError("FGLM needs a reduced Groebner basis")
    ring = gb.ring
    tring = ring.with_order(target)
    if gb.is_unit():
        return GroebnerBasis([tring.one()], tring, True)
    basis = standard_monomials(gb)
    D = len(basis)
    pos = {m: i for i, m in enumerate(basis)}
    p = ring.p
    n = ring.nvars
    # multiplication matrices: mult[i][b] = NF(x_i * basis[b])
    mult = [[_nf_vector(ring.monomial(tuple(e + (1 if k == i else 0) for k, e in enumerate(b))),
                        gb, pos) for b in basis] for i in range(n)]

    def times_var(vec, i):
        out = [0] * D
        M = mult[i]
        for b, c in enumerate(vec):
            if c:
                row = M[b]
                for k in range(D):
                    if row[k]:
                        out[k] = (out[k] + c * row[k]) % p
        return out

    tkey = tring.order.key
    one = (0,) * n
    e1 = [0] * D
    if one in pos:
        e1[pos[one]] = 1
    # echelon store: rows (vector, combination over accepted monomials)
    ech: list = []         # (pivot index, vec, combo)
    accepted: list = []    # accepted target-order standard monomials
    vec_of: dict = {}
    new_gens: list[MPoly] = []
    lead_monos: list[tuple] = []
    cand = {one: e1}
    while cand:
        m = min(cand, key=tkey)
        v = cand.pop(m)
        if any(all(a <= b for a, b in zip(lm, m)) for lm in lead_monos):
            continue
        # reduce v against the echelon rows
        w = list(v)
        combo = [0] * (len(accepted) + 1)
        for piv, rv, rc in ech:
            c = w[piv]
            if c:
                for k in range(D):
                    if rv[k]:
                        w[k] = (w[k] - c * rv[k]) % p
                for k, cc in enumerate(rc):
                    if cc:
                        combo[k] = (combo[k] - c * cc) % p
        nz = next((k for k in range(D) if w[k]), -1)
        if nz < 0:
            # m = - sum combo_k * accepted_k  in the quotient
            d = {m: 1}
            for k, cc in enumerate(combo[:len(accepted)]):
                if cc:
                    d[accepted[k]] = (d.get(accepted[k], 0) + cc) % p
            new_gens.append(tring.from_dict(d))
            lead_monos.append(m)
            continue
        inv = pow(w[nz], -1, p)
        w = [x * inv % p for x in w]
        combo[len(accepted)] = 1
        combo = [x * inv % p for x in combo]
        ech.append((nz, w, combo))
        for idx in range(len(ech) - 1):
            ech[idx] = (ech[idx][0], ech[idx][1], ech[idx][2] + [0])
        accepted.append(m)
        vec_of[m] = v
        for i in range(n):
            e = list(m)
            e[i] += 1
            e = tuple(e)
            if e not in cand:
                cand[e] = times_var(v, i)
    if len(accepted) != D:
        raise DimensionError("quotient dimension changed under conversion")
    new_gens.sort(key=lambda g: tkey(g.lm()))
    return GroebnerBasis(new_gens, tring, True)
