"""Internal polynomial representation shared by the Groebner algorithms.

An internal polynomial is a pair of lists ``(monos, coeffs)`` with encoded
monomials (see :mod:`.monomials`) strictly descending.
"""
from __future__ import annotations

import heapq

import numpy as np
from dataclasses import dataclass, field

from ..errors import UsageError
from ..mpoly import MPoly, PolyRing
from .monomials import MonoCodec


@dataclass
class GBStats:
    steps: int = 0
    pairs_reduced: int = 0
    zero_reductions: int = 0
    max_rows: int = 0
    max_cols: int = 0
    max_degree: int = 0

    def as_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass
class GroebnerBasis:
    """A Groebner basis: monic generators sorted by ascending leading monomial."""

    generators: list
    ring: PolyRing
    reduced: bool = True
    stats: GBStats = field(default_factory=GBStats)

    @property
    def order(self) -> str:
        return self.ring.order.name

    def __len__(self):
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)

    def is_unit(self) -> bool:
        return any(g.is_constant() and not g.is_zero() for g in self.generators)

    def leading_monomials(self) -> list[tuple]:
        return [g.lm() for g in self.generators]

    def max_degree(self) -> int:
        return max((g.total_degree() for g in self.generators), default=0)


class Poly:
    """Mutable-free internal polynomial with its sugar degree."""

    __slots__ = ("monos", "coeffs", "sugar", "arrays")

    def __init__(self, monos: list, coeffs: list, sugar: int = 0, arrays=None):
        self.monos = monos
        self.coeffs = coeffs
        self.sugar = sugar
        # optional cache: (exponent matrix, coefficient vector) as numpy arrays
        self.arrays = arrays

    @property
    def lm(self) -> int:
        return self.monos[0]

    def __len__(self):
        return len(self.monos)


def to_internal(f: MPoly, codec: MonoCodec) -> Poly:
    monos = [codec.encode(m) for m, _ in f.terms]
    coeffs = [c for _, c in f.terms]
    order = sorted(range(len(monos)), key=monos.__getitem__, reverse=True)
    monos = [monos[i] for i in order]
    coeffs = [coeffs[i] for i in order]
    return Poly(monos, coeffs, f.total_degree())


def from_internal(f: Poly, ring: PolyRing, codec: MonoCodec) -> MPoly:
    return ring.from_dict({codec.decode(m): c for m, c in zip(f.monos, f.coeffs)})


def make_monic(f: Poly, p: int) -> Poly:
    c = f.coeffs[0]
    if c == 1:
        return f
    inv = pow(c, -1, p)
    return Poly(f.monos, [v * inv % p for v in f.coeffs], f.sugar)


def poly_arrays(f: Poly, codec: MonoCodec):
    """Cached ``(exponents (len, n) int64, coefficients int64)`` of f."""
    if f.arrays is None:
        e = np.array([codec.decode(m) for m in f.monos], dtype=np.int64).reshape(len(f.monos), codec.n)
        f.arrays = (e, np.array(f.coeffs, dtype=np.int64))
    return f.arrays


def prepare_input(gens, ring: PolyRing | None = None):
    gens = [g for g in gens]
    if not gens:
        raise UsageError("empty generator set")
    ring = ring or gens[0].ring
    for g in gens:
        if g.ring != ring:
            raise UsageError("generators from different rings")
    return ring, [g for g in gens if not g.is_zero()]


class ReducerIndex:
    """Maps a monomial to the active basis element with the smallest leading
    monomial dividing it.  Active leading monomials are pairwise distinct."""

    def __init__(self, codec: MonoCodec):
        self.codec = codec
        self.by_lm: dict[int, int] = {}
        self.lms_sorted: list[int] = []
        self._dirty = False
        self._degs: set[int] = set()
        self.min_deg = 0
        self.max_deg = 0
        self._lt_words = None

    def add(self, lm: int, idx: int):
        self.by_lm[lm] = idx
        self._dirty = True

    def remove(self, lm: int):
        self.by_lm.pop(lm, None)
        self._dirty = True

    def _refresh(self):
        if self._dirty:
            self.lms_sorted = sorted(self.by_lm)
            degs = [self.codec.degree(m) for m in self.lms_sorted]
            self.min_deg = min(degs, default=0)
            self.max_deg = max(degs, default=0)
            self._lt_words = None
            self._dirty = False

    def find(self, m: int) -> int:
        """Index of the reducer for m, or -1."""
        self._refresh()
        divides = self.codec.divides
        for lm in self.lms_sorted:
            if lm > m:
                break
            if divides(lm, m):
                return self.by_lm[lm]
        return -1

    def find_many(self, monos) -> dict:
        """Reducers for many monomials at once (vectorized divisibility)."""
        self._refresh()
        monos = list(monos)
        if len(self.lms_sorted) < 16 or len(monos) < 16:
            return {m: self.find(m) for m in monos}
        if self._lt_words is None:
            self._lt_words = self.codec.words(self.lms_sorted)
        L = self._lt_words
        X = self.codec.words(monos)
        k = L.shape[0]
        chunk = max(1, (1 << 22) // k)
        idx_of = [self.by_lm[lm] for lm in self.lms_sorted]
        out = {}
        for s in range(0, len(monos), chunk):
            ok = self.codec.divides_words(L[None, :, :], X[s:s + chunk, None, :])
            first = ok.argmax(axis=1)
            hit = ok[np.arange(ok.shape[0]), first]
            for r in range(ok.shape[0]):
                out[monos[s + r]] = idx_of[first[r]] if hit[r] else -1
        return out


def reduce_full(f: Poly, basis: list, index: ReducerIndex, codec: MonoCodec, p: int,
                skip_lead: bool = False) -> Poly:
    """Full normal form of f modulo the active basis, terms largest first."""
    coeffs = {}
    for m, c in zip(f.monos, f.coeffs):
        coeffs[m] = c
    heap = [-m for m in f.monos]
    heapq.heapify(heap)
    out_m, out_c = [], []
    off = codec.offset
    first = True
    while heap:
        m = -heapq.heappop(heap)
        c = coeffs.pop(m, 0) % p
        if not c:
            continue
        j = -1 if (skip_lead and first) else index.find(m)
        first = False
        if j < 0:
            out_m.append(m)
            out_c.append(c)
            continue
        g = basis[j]
        t = m - g.monos[0] + off
        t2 = t - off
        for gm, gc in zip(g.monos[1:], g.coeffs[1:]):
            mm = gm + t2
            old = coeffs.get(mm)
            if old is None:
                coeffs[mm] = -c * gc
                heapq.heappush(heap, -mm)
            else:
                coeffs[mm] = old - c * gc
    return Poly(out_m, out_c, f.sugar)


def spoly(f: Poly, g: Poly, codec: MonoCodec, p: int) -> Poly:
    lcm = codec.lcm(f.lm, g.lm)
    tf = codec.div(lcm, f.lm)
    tg = codec.div(lcm, g.lm)
    d: dict = {}
    off = codec.offset
    for m, c in zip(f.monos, f.coeffs):
        mm = m + tf - off
        d[mm] = d.get(mm, 0) + c * g.coeffs[0]
    for m, c in zip(g.monos, g.coeffs):
        mm = m + tg - off
        d[mm] = d.get(mm, 0) - c * f.coeffs[0]
    items = sorted(((m, c % p) for m, c in d.items() if c % p), reverse=True)
    sugar = max(f.sugar + codec.degree(tf), g.sugar + codec.degree(tg))
    return Poly([m for m, _ in items], [c for _, c in items], sugar)


class PairSet:
    """Critical pairs with the Gebauer-Moeller installation criteria."""

    def __init__(self, codec: MonoCodec):
        self.codec = codec
        self.pairs: list[tuple] = []   # (sugar, lcm, i, j)
        self._words = codec.words([])  # lcm of each pair, vectorized

    def __len__(self):
        return len(self.pairs)

    def update(self, polys: list, active: list, h_idx: int) -> list:
        """Install h = polys[h_idx]; returns the new active index list."""
        codec = self.codec
        h = polys[h_idx]
        hl = h.lm
        lms = [polys[g].lm for g in active]
        lcms = [codec.lcm(hl, g) for g in lms]
        coprime = [codec.coprime(hl, g) for g in lms]
        k = len(active)
        W = codec.words(lcms)
        # D[a, b]: lcm_a divides lcm_b
        D = codec.divides_words(W[:, None, :], W[None, :, :]) if k else None
        # criterion M / F on the new pairs: drop a pair whose lcm is divided
        # by the lcm of a later candidate or of an already kept one
        kept = np.array(coprime, dtype=bool)
        if k:
            later = np.tril(D, -1).any(axis=0)
            for a in np.nonzero(~kept & ~later)[0]:
                if not (D[:a, a] & kept[:a]).any():
                    kept[a] = True
        new_pairs, new_rows = [], []
        hdeg = codec.degree(hl)
        for a in np.nonzero(kept)[0]:
            if coprime[a]:
                continue
            g_idx = active[a]
            g = polys[g_idx]
            ld = codec.degree(lcms[a])
            sugar = max(h.sugar + ld - hdeg, g.sugar + ld - codec.degree(g.lm))
            new_pairs.append((sugar, lcms[a], min(g_idx, h_idx), max(g_idx, h_idx)))
            new_rows.append(a)
        # criterion B on the old pairs
        if self.pairs:
            hw = codec.words([hl])[0]
            hit = codec.divides_words(hw[None, :], self._words)
            keep_old = np.ones(len(self.pairs), dtype=bool)
            for q in np.nonzero(hit)[0]:
                _, lcm, i, j = self.pairs[q]
                if codec.lcm(polys[i].lm, hl) != lcm and codec.lcm(polys[j].lm, hl) != lcm:
                    keep_old[q] = False
            if not keep_old.all():
                self.pairs = [pr for pr, kq in zip(self.pairs, keep_old) if kq]
                self._words = self._words[keep_old]
        self.pairs = self.pairs + new_pairs
        self._words = np.concatenate([self._words, W[new_rows]])
        return [g for g, lm in zip(active, lms) if not codec.divides(hl, lm)] + [h_idx]

    def _take(self, mask) -> list[tuple]:
        taken = [pr for pr, t in zip(self.pairs, mask) if t]
        self.pairs = [pr for pr, t in zip(self.pairs, mask) if not t]
        self._words = self._words[~np.asarray(mask, dtype=bool)]
        return taken

    def pop_min_sugar(self) -> list[tuple]:
        """Remove and return all pairs of minimal sugar, sorted."""
        s = min(pr[0] for pr in self.pairs)
        return sorted(self._take([pr[0] == s for pr in self.pairs]))

    def pop_one(self) -> tuple:
        best = min(self.pairs)
        k = self.pairs.index(best)
        return self._take([q == k for q in range(len(self.pairs))])[0]


def interreduce(polys: list, active: list, codec: MonoCodec, p: int) -> list[Poly]:
    """Reduced basis from a Groebner basis given by active indices."""
    basis = [make_monic(polys[i], p) for i in active]
    if any(len(b.monos) and codec.degree(b.lm) == 0 for b in basis):
        return [Poly([codec.one], [1], 0)]
    # minimalise
    basis.sort(key=lambda b: b.lm)
    minimal = []
    for b in basis:
        if not any(codec.divides(m.lm, b.lm) for m in minimal):
            minimal.append(b)
    index = ReducerIndex(codec)
    for k, b in enumerate(minimal):
        index.add(b.lm, k)
    out = []
    for k, b in enumerate(minimal):
        r = reduce_full(b, minimal, index, codec, p, skip_lead=True)
        out.append(make_monic(r, p))
    out.sort(key=lambda b: b.lm)
    return out
