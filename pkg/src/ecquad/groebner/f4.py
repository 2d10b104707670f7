"""F4-style Groebner basis computation with Macaulay-matrix reduction."""
from __future__ import annotations

import heapq
import time

import numpy as np

from ..errors import ResourceError, SolverTimeout
from ..mpoly import MPoly
from .core import (GBStats, GroebnerBasis, PairSet, Poly, ReducerIndex, from_internal, poly_arrays,
                   interreduce, make_monic, prepare_input, to_internal)
from .monomials import MonoCodec

MAX_MATRIX_ROWS = 200_000
MAX_MATRIX_COLS = 200_000
_KERNEL_MAX_P = 1 << 31
# entries of the dense reduced pivot block (int64) before falling back to
# the sparse scatter kernel
DENSE_BLOCK_CAP = 150_000_000


def symbolic_preprocessing(rows: list, polys: list, index: ReducerIndex,
                           codec: MonoCodec, done: set):
    """Add reducer rows for every reducible monomial appearing in ``rows``.

    ``rows`` holds ``(multiplier, poly_index)``.  Returns
    ``(reducers, monomials)`` where each reducer is a
    ``(multiplier, poly_index)`` whose leading monomial is a distinct column.
    """
    off = codec.offset
    monos: set = set()
    for t, k in rows:
        monos.update(map((t - off).__add__, polys[k].monos))
    todo = monos - done
    reducers = []
    while todo:
        found = index.find_many(todo)
        done |= todo
        fresh: set = set()
        for m, k in found.items():
            if k < 0:
                continue
            g = polys[k]
            t = m - g.monos[0] + off
            reducers.append((t, k))
            fresh.update(map((t - off).__add__, g.monos[1:]))
        fresh -= monos
        monos |= fresh
        todo = fresh - done
    return reducers, monos


def f4_step(pairs: list, polys: list, index: ReducerIndex, codec: MonoCodec, p: int,
            stats: GBStats | None = None) -> list[Poly]:
    """Reduce a batch of critical pairs ``(sugar, lcm, i, j)`` simultaneously.

    Returns the new basis candidates (monic, leading monomials outside the
    current leading ideal).
    """
    if not pairs:
        return []
    if not codec.lex and p < _KERNEL_MAX_P:
        D = max(codec.degree(pr[1]) for pr in pairs)
        if _StepCodes.fits(codec.n, D):
            return _f4_step_compact(pairs, polys, index, codec, p, stats, D)
    return _f4_step_generic(pairs, polys, index, codec, p, stats)


class _StepCodes:
    """Order-preserving int64 codes for grevlex monomials of degree <= D.

    code(e) = deg(e) * B^n + sum (D - e_i) B^i with B = D + 1, so a product
    of monomials is a sum of codes up to a shift depending on the cofactor.
    """

    def __init__(self, n: int, D: int):
        self.D = D
        self.B = D + 1
        self.pw = np.array([self.B ** i for i in range(n)], dtype=np.int64)
        self.top = self.B ** n

    @staticmethod
    def fits(n: int, D: int) -> bool:
        return (D + 1) ** (n + 1) < (1 << 62)

    def codes(self, e: np.ndarray) -> np.ndarray:
        return e.sum(axis=1) * self.top + (self.D - e) @ self.pw

    def shift(self, t: np.ndarray) -> int:
        """Code offset for multiplying by the monomial with exponents t."""
        return int(t.sum()) * self.top - int(t @ self.pw)

    def decode(self, c: np.ndarray) -> np.ndarray:
        low = c % self.top
        return self.D - (low[:, None] // self.pw[None, :]) % self.B


def _f4_step_compact(pairs, polys, index, codec, p, stats, D):
    sc = _StepCodes(codec.n, D)
    pcodes: dict = {}

    def row(k, t):
        if k not in pcodes:
            pcodes[k] = sc.codes(poly_arrays(polys[k], codec)[0])
        return pcodes[k] + sc.shift(t)

    # pair rows, deduplicated by (multiplier, poly)
    rows = []          # (k, codes)
    seen = set()
    lcm_codes = []
    pair_sugar = 0
    for sugar, lcm, i, j in pairs:
        pair_sugar = max(pair_sugar, sugar)
        le = np.array(codec.decode(lcm), dtype=np.int64)
        lcm_codes.append(int(sc.codes(le[None, :])[0]))
        for k in (i, j):
            t = le - poly_arrays(polys[k], codec)[0][0]
            key = (k, t.tobytes())
            if key not in seen:
                seen.add(key)
                rows.append((k, row(k, t)))

    # reducer candidates: active leading monomials of degree <= D, ascending
    index._refresh()
    lts = [lm for lm in index.lms_sorted if codec.degree(lm) <= D]
    lt_idx = np.array([index.by_lm[lm] for lm in lts], dtype=np.int64)
    L = np.array([codec.decode(lm) for lm in lts], dtype=np.int64).reshape(len(lts), codec.n)

    def find(M):
        out = np.full(M.shape[0], -1, dtype=np.int64)
        if not len(lts):
            return out
        chunk = max(1, (1 << 23) // (len(lts) * codec.n))
        for a in range(0, M.shape[0], chunk):
            ok = (L[None, :, :] <= M[a:a + chunk, None, :]).all(axis=2)
            first = ok.argmax(axis=1)
            hit = ok[np.arange(ok.shape[0]), first]
            out[a:a + chunk] = np.where(hit, lt_idx[first], -1)
        return out

    # symbolic preprocessing
    allc = np.unique(np.concatenate([rc for _, rc in rows]))
    todo = np.setdiff1d(allc, np.array(lcm_codes, dtype=np.int64), assume_unique=False)
    reducers = []
    while todo.size:
        M = sc.decode(todo)
        ridx = find(M)
        parts = []
        for q in np.nonzero(ridx >= 0)[0]:
            k = int(ridx[q])
            t = M[q] - poly_arrays(polys[k], codec)[0][0]
            rc = row(k, t)
            reducers.append((k, rc))
            parts.append(rc[1:])
        if not parts:
            break
        fresh = np.setdiff1d(np.unique(np.concatenate(parts)), allc, assume_unique=True)
        allc = np.union1d(allc, fresh)
        todo = fresh

    ncols = allc.size
    nrows = len(rows) + len(reducers)
    _check_size(nrows, ncols, stats)

    pivots = list(reducers)
    to_reduce = []
    claimed = set()
    for k, rc in rows:
        lead = int(rc[0])
        if lead in claimed:
            to_reduce.append((k, rc))
        else:
            claimed.add(lead)
            pivots.append((k, rc))

    def csr(rowlist):
        ptr = np.zeros(len(rowlist) + 1, dtype=np.int64)
        if not rowlist:
            return ptr, np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64)
        np.cumsum([rc.size for _, rc in rowlist], out=ptr[1:])
        codes = np.concatenate([rc for _, rc in rowlist])
        idx = ncols - 1 - np.searchsorted(allc, codes)
        val = np.concatenate([poly_arrays(polys[k], codec)[1] for k, _ in rowlist])
        return ptr, idx.astype(np.int64), val

    piv = csr(pivots)
    red = csr(to_reduce)
    new_rows, new_lead, free_cols = _reduce_matrix(ncols, p, piv, red)

    free_codes = allc[ncols - 1 - free_cols]
    free_exps = sc.decode(free_codes)
    free_monos = [codec.encode(tuple(int(x) for x in e)) for e in free_exps]
    out = []
    for r in range(len(new_lead)):
        rw = new_rows[r]
        nz = np.nonzero(rw)[0]
        coeffs = rw[nz].astype(np.int64)
        out.append(Poly([free_monos[q] for q in nz], coeffs.tolist(), pair_sugar,
                        (free_exps[nz], coeffs)))
    _record(stats, pairs, to_reduce, out)
    return out


def _check_size(nrows, ncols, stats):
    if stats is not None:
        stats.max_rows = max(stats.max_rows, nrows)
        stats.max_cols = max(stats.max_cols, ncols)
    if nrows > MAX_MATRIX_ROWS or ncols > MAX_MATRIX_COLS:
        raise ResourceError(f"F4 matrix {nrows} x {ncols} exceeds the cap")


def _record(stats, pairs, to_reduce, out):
    if stats is not None:
        stats.steps += 1
        stats.pairs_reduced += len(pairs)
        stats.zero_reductions += len(to_reduce) - len(out)


def _reduce_matrix(ncols, p, piv, red):
    """Echelonize the rows ``red`` against the known pivot rows ``piv``
    (both CSR triples, columns ordered largest monomial first).

    Returns ``(new_rows, new_lead, free_cols)``; new rows are dense over the
    free columns (those without a known pivot).
    """
    piv_ptr, piv_idx, piv_val = piv
    red_ptr, red_idx, red_val = red
    pivot_of_col = np.full(ncols, -1, dtype=np.int64)
    pivot_of_col[piv_idx[piv_ptr[:-1]]] = np.arange(len(piv_ptr) - 1, dtype=np.int64)
    free_cols = np.nonzero(pivot_of_col < 0)[0].astype(np.int64)
    free_of_col = np.full(ncols, -1, dtype=np.int64)
    free_of_col[free_cols] = np.arange(len(free_cols), dtype=np.int64)
    if not len(free_cols) or len(red_ptr) == 1:
        return np.zeros((0, len(free_cols)), dtype=np.int64), np.zeros(0, dtype=np.int64), free_cols
    if p < _KERNEL_MAX_P:
        from ._kernel import reduce_rows, reduce_rows_schur
        lazy = p * p * (ncols + 1) < (1 << 62)
        args = (ncols, p, lazy, piv_ptr, piv_idx, piv_val, pivot_of_col,
                red_ptr, red_idx, red_val, free_cols, free_of_col)
        new_rows, new_lead, ok = reduce_rows_schur(*args, DENSE_BLOCK_CAP)
        if not ok:
            new_rows, new_lead = reduce_rows(*args)
    else:
        new_rows, new_lead = _reduce_rows_py(ncols, p, piv_ptr, piv_idx, piv_val, pivot_of_col,
                                             red_ptr, red_idx, red_val, free_cols, free_of_col)
    return new_rows, new_lead, free_cols


def _f4_step_generic(pairs, polys, index, codec, p, stats):
    off = codec.offset
    rows: list = []
    seen: set = set()
    lcms = set()
    pair_sugar = {}
    for sugar, lcm, i, j in pairs:
        lcms.add(lcm)
        pair_sugar[lcm] = max(pair_sugar.get(lcm, 0), sugar)
        for k in (i, j):
            t = lcm - polys[k].monos[0] + off
            if (t, k) not in seen:
                seen.add((t, k))
                rows.append((t, k))
    done = set(lcms)
    reducers, monos = symbolic_preprocessing(rows, polys, index, codec, done)

    cols = sorted(monos, reverse=True)
    ncols = len(cols)
    _check_size(len(rows) + len(reducers), ncols, stats)
    col_of = {m: c for c, m in enumerate(cols)}

    # first pair row per lcm becomes the known pivot of that column
    pivots = list(reducers)
    to_reduce = []
    claimed = set()
    for t, k in rows:
        lead = polys[k].monos[0] + t - off
        if lead in claimed:
            to_reduce.append((t, k))
        else:
            claimed.add(lead)
            pivots.append((t, k))

    def csr(rowlist):
        idx, val, lens = [], [], []
        for t, k in rowlist:
            g = polys[k]
            idx.extend(map(col_of.__getitem__, map((t - off).__add__, g.monos)))
            val.extend(g.coeffs)
            lens.append(len(g.monos))
        ptr = np.zeros(len(rowlist) + 1, dtype=np.int64)
        np.cumsum(lens, out=ptr[1:])
        dtype = np.int64 if p < _KERNEL_MAX_P else object
        return ptr, np.array(idx, dtype=np.int64), np.array(val, dtype=dtype)

    new_rows, new_lead, free_cols = _reduce_matrix(ncols, p, csr(pivots), csr(to_reduce))

    # sugar of a new row: max over the pair sugars of this batch (normal strategy)
    sugar = max(pair_sugar.values())
    out = []
    for r in range(len(new_lead)):
        row = new_rows[r]
        nz = np.nonzero(row)[0]
        out.append(Poly([cols[free_cols[q]] for q in nz], [int(row[q]) for q in nz], sugar))
    _record(stats, pairs, to_reduce, out)
    return out


def _reduce_rows_py(ncols, p, piv_ptr, piv_idx, piv_val, pivot_of_col,
                    red_ptr, red_idx, red_val, free_cols, free_of_col):
    """Pure-Python twin of the compiled kernel, for moduli >= 2^31."""
    n_free = len(free_cols)
    dyn: dict = {}
    new_rows, new_lead = [], []
    for r in range(len(red_ptr) - 1):
        acc: dict = {}
        for k in range(red_ptr[r], red_ptr[r + 1]):
            acc[int(red_idx[k])] = int(red_val[k])
        lead = -1
        kept = {}
        heap = list(acc)
        heapq.heapify(heap)
        while heap:
            c = heapq.heappop(heap)
            v = acc.pop(c, 0) % p
            if not v:
                continue
            pr = int(pivot_of_col[c])
            if pr >= 0:
                for k in range(piv_ptr[pr] + 1, piv_ptr[pr + 1]):
                    j = int(piv_idx[k])
                    if j not in acc:
                        heapq.heappush(heap, j)
                    acc[j] = acc.get(j, 0) - v * int(piv_val[k])
                continue
            fc = int(free_of_col[c])
            if fc in dyn and lead < 0:
                drow = dyn[fc]
                for q, w in drow.items():
                    if q > fc:
                        j = int(free_cols[q])
                        if j not in acc:
                            heapq.heappush(heap, j)
                        acc[j] = acc.get(j, 0) - v * w
                continue
            kept[c] = v
            if lead < 0:
                lead = c
        if lead >= 0:
            inv = pow(kept[lead], -1, p)
            drow = {int(free_of_col[c]): v * inv % p for c, v in kept.items()}
            dyn[int(free_of_col[lead])] = drow
            new_rows.append(drow)
            new_lead.append(lead)
    dense = np.zeros((len(new_rows), n_free), dtype=object)
    for i, drow in enumerate(new_rows):
        for q, w in drow.items():
            dense[i, q] = w
    return dense, np.array(new_lead, dtype=np.int64)


def f4(gens, order: str | None = None, deadline: float | None = None,
       stats: GBStats | None = None) -> GroebnerBasis:
    """Reduced Groebner basis by batched (F4-style) reduction."""
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
    for f in polys:
        codec.check_cap(f.lm)
    active: list = []
    pairs = PairSet(codec)
    index = ReducerIndex(codec)
    unit = False
    for i in range(len(polys)):
        active = _install(polys, active, i, pairs, index)
        if codec.degree(polys[i].lm) == 0:
            unit = True
    while pairs and not unit:
        if deadline is not None and time.monotonic() > deadline:
            raise SolverTimeout("Groebner basis computation timed out")
        batch = pairs.pop_min_sugar()
        new = f4_step(batch, polys, index, codec, p, stats)
        new.sort(key=lambda f: f.lm)
        for f in new:
            codec.check_cap(f.lm)
            stats.max_degree = max(stats.max_degree, codec.degree(f.lm))
            polys.append(f)
            active = _install(polys, active, len(polys) - 1, pairs, index)
            if codec.degree(f.lm) == 0:
                unit = True
                break
    if unit:
        basis = [ring.one()]
    else:
        basis = [from_internal(f, ring, codec) for f in interreduce(polys, active, codec, p)]
    return GroebnerBasis(basis, ring, True, stats)


def _install(polys, active, i, pairs: PairSet, index: ReducerIndex):
    new_active = pairs.update(polys, active, i)
    removed = set(active) - set(new_active)
    for r in removed:
        index.remove(polys[r].lm)
    index.add(polys[i].lm, i)
    return new_active
