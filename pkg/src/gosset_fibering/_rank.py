"""Sparse boundary matrices and their ranks over prime fields.

Columns are reduced with the usual "lowest nonzero row" pivoting; the
clearing trick skips columns already known to reduce to zero.
"""

from __future__ import annotations

import heapq
from math import comb, gcd

import numpy as np
from numba import njit

PRIMES = (2147483629, 2147483587)


@njit(cache=True)
def _pow_mod(a, e, p):
    r = 1
    a %= p
    while e > 0:
        if e & 1:
            r = r * a % p
        a = a * a % p
        e >>= 1
    return r


@njit(cache=True)
def reduce_columns(ptr, idx, vals, nrows, p, skip):
    """Reduce the sparse columns mod p; return (rank, low row per column or -1)."""
    ncols = len(ptr) - 1
    w = np.zeros(nrows, np.int64)
    pivot_of_row = -np.ones(nrows, np.int64)
    lows = -np.ones(ncols, np.int64)
    sptr = [0]
    sidx = [np.int64(0)]
    sval = [np.int64(0)]
    sidx.pop()
    sval.pop()
    rank = 0
    for c in range(ncols):
        if skip[c]:
            continue
        heap = [np.int64(0)]
        heap.pop()
        for t in range(ptr[c], ptr[c + 1]):
            r = idx[t]
            w[r] = (w[r] + vals[t]) % p
            heapq.heappush(heap, -r)
        while len(heap) > 0:
            r = -heapq.heappop(heap)
            if w[r] == 0:
                continue
            while len(heap) > 0 and -heap[0] == r:
                heapq.heappop(heap)
            j = pivot_of_row[r]
            if j < 0:
                inv = _pow_mod(w[r], p - 2, p)
                sidx.append(r)
                sval.append(1)
                w[r] = 0
                while len(heap) > 0:
                    q = -heapq.heappop(heap)
                    if w[q] != 0:
                        sidx.append(q)
                        sval.append(w[q] * inv % p)
                        w[q] = 0
                sptr.append(len(sidx))
                pivot_of_row[r] = len(sptr) - 2
                lows[c] = r
                rank += 1
                break
            f = p - w[r]
            for t in range(sptr[j], sptr[j + 1]):
                q = sidx[t]
                old = w[q]
                new = (old + f * sval[t]) % p
                w[q] = new
                if old == 0 and new != 0:
                    heapq.heappush(heap, -q)
    return rank, lows


_COMB = np.array([[comb(v, i) for i in range(12)] for v in range(257)], dtype=np.int64)


def simplex_keys(simplices: np.ndarray) -> np.ndarray:
    """Injective integer key of sorted vertex rows (combinatorial number system)."""
    m, k = simplices.shape
    keys = np.zeros(m, dtype=np.int64)
    for i in range(k):
        keys += _COMB[simplices[:, i], i + 1]
    return keys


def boundary_columns(upper: np.ndarray, lower: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """CSR description of the boundary map from `upper` simplices to `lower` ones.

    Rows of both arrays are sorted vertex tuples; the face obtained by deleting
    position d carries the sign (-1)^d.
    """
    m, k = upper.shape
    lk = simplex_keys(lower)
    order = np.argsort(lk, kind="stable")
    sorted_keys = lk[order]
    idx = np.empty((m, k), dtype=np.int64)
    for d in range(k):
        face = np.delete(upper, d, axis=1)
        fk = simplex_keys(face)
        pos = np.searchsorted(sorted_keys, fk)
        if m and (pos.max(initial=0) >= len(sorted_keys) or not np.array_equal(sorted_keys[pos], fk)):
            raise ValueError("a face of a simplex is missing from the lower dimension")
        idx[:, d] = order[pos]
    vals = np.tile(np.array([1 if d % 2 == 0 else -1 for d in range(k)], dtype=np.int64), m)
    ptr = np.arange(0, m * k + 1, k, dtype=np.int64)
    return ptr, idx.ravel(), vals


def chain_ranks(simplices: list[np.ndarray], p: int) -> list[int]:
    """Ranks of the boundary maps over GF(p), highest dimension first with clearing.

    `simplices[d]` holds the d-simplices; entry d of the result is the rank
    of the map from d-chains to (d-1)-chains (entry 0 is the augmentation).
    """
    top = len(simplices) - 1
    ranks = [0] * (top + 1)
    ranks[0] = 1 if len(simplices[0]) else 0
    cleared: np.ndarray | None = None
    for d in range(top, 0, -1):
        upper, lower = simplices[d], simplices[d - 1]
        skip = np.zeros(len(upper), dtype=np.bool_)
        if cleared is not None and len(cleared):
            skip[cleared] = True
        if len(upper) == 0 or len(lower) == 0:
            cleared = np.zeros(0, dtype=np.int64)
            continue
        ptr, idx, vals = boundary_columns(upper, lower)
        rank, lows = reduce_columns(ptr, idx, vals % p, len(lower), p, skip)
        ranks[d] = rank
        cleared = lows[lows >= 0]
    return ranks


def exact_rank(ptr: np.ndarray, idx: np.ndarray, vals: np.ndarray) -> int:
    """Rank over Q by fraction-free elimination on sparse integer columns."""
    pivots: dict[int, dict[int, int]] = {}
    rank = 0
    for c in range(len(ptr) - 1):
        col: dict[int, int] = {}
        for t in range(ptr[c], ptr[c + 1]):
            r = int(idx[t])
            col[r] = col.get(r, 0) + int(vals[t])
        col = {r: v for r, v in col.items() if v}
        while col:
            low = max(col)
            piv = pivots.get(low)
            if piv is None:
                pivots[low] = col
                rank += 1
                break
            a, b = col[low], piv[low]
            new = {r: v * b for r, v in col.items()}
            for r, v in piv.items():
                new[r] = new.get(r, 0) - v * a
            col = {r: v for r, v in new.items() if v}
            g = 0
            for v in col.values():
                g = gcd(g, v)
            if g > 1:
                col = {r: v // g for r, v in col.items()}
    return rank


def exact_chain_ranks(simplices: list[np.ndarray]) -> list[int]:
    top = len(simplices) - 1
    ranks = [0] * (top + 1)
    ranks[0] = 1 if len(simplices[0]) else 0
    for d in range(top, 0, -1):
        if len(simplices[d]) and len(simplices[d - 1]):
            ranks[d] = exact_rank(*boundary_columns(simplices[d], simplices[d - 1]))
    return ranks
