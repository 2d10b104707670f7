"""Compiled row reduction for F4 matrices over GF(p), p < 2^31.

Known pivot rows (one per pivot column, leading coefficient 1) are stored in
CSR form.  Rows to reduce are processed in order; each is scanned column by
column, eliminated against known pivots and against pivots discovered
earlier in the same call, and if it survives it becomes a new pivot stored
densely over the columns that have no known pivot.
"""
import numpy as np
from numba import njit


@njit(cache=True)
def _modpow(a, e, p):
    r = 1
    a %= p
    while e > 0:
        if e & 1:
            r = r * a % p
        a = a * a % p
        e >>= 1
    return r


@njit(cache=True)
def reduce_rows(ncols, p, lazy,
                piv_ptr, piv_idx, piv_val, pivot_of_col,
                red_ptr, red_idx, red_val,
                free_cols, free_of_col):
    n_free = free_cols.shape[0]
    n_red = red_ptr.shape[0] - 1
    cap = min(n_red, n_free)
    new_rows = np.zeros((max(cap, 1), n_free), dtype=np.int64)
    new_lead = np.empty(max(cap, 1), dtype=np.int64)
    dyn_of_free = np.full(n_free, -1, dtype=np.int64)
    acc = np.zeros(ncols, dtype=np.int64)
    n_new = 0
    for r in range(n_red):
        a, b = red_ptr[r], red_ptr[r + 1]
        if a == b:
            continue
        start = red_idx[a]
        for k in range(a, b):
            acc[red_idx[k]] = red_val[k]
        lead = -1
        for c in range(start, ncols):
            v = acc[c]
            if v == 0:
                continue
            v %= p
            if v == 0:
                acc[c] = 0
                continue
            pr = pivot_of_col[c]
            if pr >= 0:
                if lazy:
                    for k in range(piv_ptr[pr] + 1, piv_ptr[pr + 1]):
                        acc[piv_idx[k]] -= v * piv_val[k]
                else:
                    for k in range(piv_ptr[pr] + 1, piv_ptr[pr + 1]):
                        j = piv_idx[k]
                        acc[j] = (acc[j] - v * piv_val[k]) % p
                acc[c] = 0
                continue
            fc = free_of_col[c]
            dr = dyn_of_free[fc]
            if dr >= 0 and lead < 0:
                for q in range(fc + 1, n_free):
                    w = new_rows[dr, q]
                    if w != 0:
                        j = free_cols[q]
                        if lazy:
                            acc[j] -= v * w
                        else:
                            acc[j] = (acc[j] - v * w) % p
                acc[c] = 0
                continue
            acc[c] = v
            if lead < 0:
                lead = c
        if lead >= 0:
            inv = _modpow(acc[lead], p - 2, p)
            f0 = free_of_col[lead]
            for q in range(f0, n_free):
                j = free_cols[q]
                w = acc[j] % p
                if w != 0:
                    new_rows[n_new, q] = w * inv % p
                acc[j] = 0
            new_lead[n_new] = lead
            dyn_of_free[f0] = n_new
            n_new += 1
        # clear leftovers in pivot columns before the lead
        for c in range(start, ncols):
            acc[c] = 0
    return new_rows[:n_new], new_lead[:n_new]


@njit(cache=True)
def reduce_rows_schur(ncols, p, lazy,
                      piv_ptr, piv_idx, piv_val, pivot_of_col,
                      red_ptr, red_idx, red_val,
                      free_cols, free_of_col, needed_cap):
    """Same output as ``reduce_rows``, computed through the fully reduced
    pivot block: every needed pivot row is first rewritten densely over the
    free columns (right to left), then each row to reduce is a sparse
    combination of those dense rows.  Returns ``(rows, lead, ok)``; ``ok`` is
    False when the dense block would exceed ``needed_cap`` entries."""
    n_free = free_cols.shape[0]
    n_piv = piv_ptr.shape[0] - 1
    n_red = red_ptr.shape[0] - 1
    # mark pivots reachable from the rows to reduce
    needed = np.zeros(n_piv, dtype=np.bool_)
    for k in range(red_idx.shape[0]):
        pr = pivot_of_col[red_idx[k]]
        if pr >= 0:
            needed[pr] = True
    n_needed = 0
    for c in range(ncols):
        pr = pivot_of_col[c]
        if pr >= 0 and needed[pr]:
            n_needed += 1
            for k in range(piv_ptr[pr] + 1, piv_ptr[pr + 1]):
                q = pivot_of_col[piv_idx[k]]
                if q >= 0:
                    needed[q] = True
    if n_needed * max(n_free, 1) > needed_cap:
        return np.zeros((1, 1), dtype=np.int64), np.zeros(1, dtype=np.int64), False
    slot = np.full(n_piv, -1, dtype=np.int64)
    # residues fit in int32; halves the memory traffic of the dense block
    R = np.zeros((max(n_needed, 1), max(n_free, 1)), dtype=np.int32)
    row = np.zeros(max(n_free, 1), dtype=np.int64)
    s = 0
    for c in range(ncols - 1, -1, -1):
        pr = pivot_of_col[c]
        if pr < 0 or not needed[pr]:
            continue
        for q in range(n_free):
            row[q] = 0
        for k in range(piv_ptr[pr] + 1, piv_ptr[pr + 1]):
            j = piv_idx[k]
            v = piv_val[k]
            fq = free_of_col[j]
            if fq >= 0:
                row[fq] += v
            else:
                src = R[slot[pivot_of_col[j]]]
                if lazy:
                    for q in range(n_free):
                        row[q] -= v * src[q]
                else:
                    for q in range(n_free):
                        row[q] = (row[q] - v * src[q]) % p
        for q in range(n_free):
            R[s, q] = row[q] % p
        slot[pr] = s
        s += 1

    cap = min(n_red, n_free)
    new_rows = np.zeros((max(cap, 1), n_free), dtype=np.int64)
    new_lead = np.empty(max(cap, 1), dtype=np.int64)
    dyn_of_free = np.full(n_free, -1, dtype=np.int64)
    acc = np.zeros(n_free, dtype=np.int64)
    n_new = 0
    for r in range(n_red):
        a, b = red_ptr[r], red_ptr[r + 1]
        if a == b:
            continue
        for q in range(n_free):
            acc[q] = 0
        for k in range(a, b):
            j = red_idx[k]
            v = red_val[k]
            fq = free_of_col[j]
            if fq >= 0:
                acc[fq] += v
            else:
                src = R[slot[pivot_of_col[j]]]
                if lazy:
                    for q in range(n_free):
                        acc[q] -= v * src[q]
                else:
                    for q in range(n_free):
                        acc[q] = (acc[q] - v * src[q]) % p
        for q in range(n_free):
            acc[q] %= p
        lead = -1
        for q in range(n_free):
            v = acc[q] % p
            acc[q] = v
            if v == 0:
                continue
            dr = dyn_of_free[q]
            if dr >= 0:
                src = new_rows[dr]
                if lazy:
                    for t in range(q + 1, n_free):
                        acc[t] -= v * src[t]
                else:
                    for t in range(q + 1, n_free):
                        acc[t] = (acc[t] - v * src[t]) % p
                acc[q] = 0
                continue
            lead = q
            break
        if lead >= 0:
            inv = _modpow(acc[lead], p - 2, p)
            for q in range(lead, n_free):
                w = acc[q] % p
                if w != 0:
                    new_rows[n_new, q] = w * inv % p
            new_lead[n_new] = free_cols[lead]
            dyn_of_free[lead] = n_new
            n_new += 1
    return new_rows[:n_new], new_lead[:n_new], True
