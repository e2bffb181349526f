"""Compiled lattice construction on integer-encoded patterns.

Same rounds, pair order, join and child-set bookkeeping as the pure Python
path in :mod:`epicure.lattice`, which stays the reference; the test suite
checks that both produce identical lattices. Tokens are encoded by their
rank in sorted order so integer comparison of rows reproduces the
lexicographic order of the string tuples.
"""
from __future__ import annotations

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - optional dependency
    numba = None

OK = 0
ROUND_LIMIT = 1
TOO_LARGE = 2

# Beyond this the dense child bitsets get too big; the caller falls back.
MAX_NODES = 1 << 14

AVAILABLE = numba is not None


def _jit(fn):
    if numba is None:
        return fn
    return numba.njit(cache=True, nogil=True)(fn)


@_jit
def _less(store, lens, x, y):
    lx = lens[x]
    ly = lens[y]
    n = min(lx, ly)
    for k in range(n):
        if store[x, k] != store[y, k]:
            return store[x, k] < store[y, k]
    return lx < ly


@_jit
def _sort_ids(ids, store, lens):
    # merge sort by pattern order
    n = ids.shape[0]
    src = ids.copy()
    dst = np.empty_like(src)
    width = 1
    while width < n:
        for lo in range(0, n, 2 * width):
            mid = min(lo + width, n)
            hi = min(lo + 2 * width, n)
            p = lo
            q = mid
            for k in range(lo, hi):
                if p < mid and (q >= hi or not _less(store, lens, src[q], src[p])):
                    dst[k] = src[p]
                    p += 1
                else:
                    dst[k] = src[q]
                    q += 1
        src, dst = dst, src
        width *= 2
    return src


@_jit
def _join_into(a, la, b, lb, wild, out, stack, blocks, prev, cur):
    """Write join(a, b) into ``out`` and return its length."""
    # operand order
    swap = False
    same = la == lb
    for k in range(min(la, lb)):
        if a[k] != b[k]:
            swap = b[k] < a[k]
            same = False
            break
    else:
        if not same:
            swap = lb < la
    if same:
        for k in range(la):
            out[k] = a[k]
        return la
    if swap:
        a, b = b, a
        la, lb = lb, la

    # Ratcliff/Obershelp: longest block (earliest in a, then in b), recurse
    nblocks = 0
    top = 0
    stack[0, 0] = 0
    stack[0, 1] = la
    stack[0, 2] = 0
    stack[0, 3] = lb
    top = 1
    while top > 0:
        top -= 1
        alo = stack[top, 0]
        ahi = stack[top, 1]
        blo = stack[top, 2]
        bhi = stack[top, 3]
        if alo >= ahi or blo >= bhi:
            continue
        best = 0
        besti = alo
        bestj = blo
        for j in range(blo, bhi + 1):
            prev[j] = 0
        for i in range(alo, ahi):
            cur[blo] = 0
            for j in range(blo, bhi):
                if a[i] == b[j]:
                    k = prev[j] + 1
                    cur[j + 1] = k
                    if k > best:
                        best = k
                        besti = i - k + 1
                        bestj = j - k + 1
                else:
                    cur[j + 1] = 0
            for j in range(blo, bhi + 1):
                prev[j] = cur[j]
        if best == 0:
            continue
        blocks[nblocks, 0] = besti
        blocks[nblocks, 1] = bestj
        blocks[nblocks, 2] = best
        nblocks += 1
        stack[top, 0] = alo
        stack[top, 1] = besti
        stack[top, 2] = blo
        stack[top, 3] = bestj
        top += 1
        stack[top, 0] = besti + best
        stack[top, 1] = ahi
        stack[top, 2] = bestj + best
        stack[top, 3] = bhi
        top += 1

    # blocks are disjoint and consistently ordered; sort by start in a
    for x in range(1, nblocks):
        k = x
        while k > 0 and blocks[k - 1, 0] > blocks[k, 0]:
            for c in range(3):
                tmp = blocks[k - 1, c]
                blocks[k - 1, c] = blocks[k, c]
                blocks[k, c] = tmp
            k -= 1

    n = 0
    i = 0
    j = 0
    for x in range(nblocks):
        sa = blocks[x, 0]
        sb = blocks[x, 1]
        size = blocks[x, 2]
        if (sa > i or sb > j) and (n == 0 or out[n - 1] != wild):
            out[n] = wild
            n += 1
        for k in range(size):
            v = a[sa + k]
            if v == wild and n > 0 and out[n - 1] == wild:
                continue
            out[n] = v
            n += 1
        i = sa + size
        j = sb + size
    if (i < la or j < lb) and (n == 0 or out[n - 1] != wild):
        out[n] = wild
        n += 1
    return n


@_jit
def _row_hash(row, n):
    h = np.uint64(1469598103934665603)
    for k in range(n):
        h = (h ^ np.uint64(row[k] + 1)) * np.uint64(1099511628211)
    return h


@_jit
def _build(leaves, leaf_lens, wild, max_rounds):
    n_leaves = leaves.shape[0]
    width = leaves.shape[1]
    cap = 64
    while cap < 2 * n_leaves:
        cap *= 2
    store = np.zeros((cap, width), dtype=np.int32)
    lens = np.zeros(cap, dtype=np.int32)
    words = cap // 64
    bits = np.zeros((cap, words), dtype=np.uint64)
    has_kids = np.zeros(cap, dtype=np.bool_)
    tsize = 4 * cap
    table = -np.ones(tsize, dtype=np.int64)

    n = 0
    for r in range(n_leaves):
        for k in range(leaf_lens[r]):
            store[n, k] = leaves[r, k]
        lens[n] = leaf_lens[r]
        h = _row_hash(store[n], lens[n])
        slot = np.int64(h & np.uint64(tsize - 1))
        while table[slot] != -1:
            slot = (slot + 1) & (tsize - 1)
        table[slot] = n
        n += 1

    frontier = _sort_ids(np.arange(n_leaves), store, lens)
    m_of = np.zeros(1, dtype=np.int64)
    out = np.zeros(width, dtype=np.int32)
    stack = np.zeros((2 * width + 2, 4), dtype=np.int64)
    blocks = np.zeros((width + 1, 3), dtype=np.int64)
    prev = np.zeros(width + 2, dtype=np.int64)
    cur = np.zeros(width + 2, dtype=np.int64)
    marked = np.zeros(cap, dtype=np.bool_)

    rounds = 0
    while frontier.shape[0] > 1:
        if rounds >= max_rounds:
            return store, lens, bits, n, frontier[0], rounds, ROUND_LIMIT
        rounds += 1
        following = np.empty(frontier.shape[0] * (frontier.shape[0] - 1) // 2 + 1, dtype=np.int64)
        nf = 0
        for a in range(frontier.shape[0]):
            i = frontier[a]
            for bpos in range(a + 1, frontier.shape[0]):
                j = frontier[bpos]
                ln = _join_into(store[i], lens[i], store[j], lens[j], wild,
                                out, stack, blocks, prev, cur)
                # intern
                h = _row_hash(out, ln)
                slot = np.int64(h & np.uint64(tsize - 1))
                m = -1
                while table[slot] != -1:
                    c = table[slot]
                    if lens[c] == ln:
                        eq = True
                        for k in range(ln):
                            if store[c, k] != out[k]:
                                eq = False
                                break
                        if eq:
                            m = c
                            break
                    slot = (slot + 1) & (tsize - 1)
                if m == -1:
                    if n >= MAX_NODES:
                        return store, lens, bits, n, frontier[0], rounds, TOO_LARGE
                    if n >= cap:
                        new_cap = 2 * cap
                        new_store = np.zeros((new_cap, width), dtype=np.int32)
                        new_store[:cap] = store
                        store = new_store
                        new_lens = np.zeros(new_cap, dtype=np.int32)
                        new_lens[:cap] = lens
                        lens = new_lens
                        new_bits = np.zeros((new_cap, new_cap // 64), dtype=np.uint64)
                        new_bits[:cap, :words] = bits
                        bits = new_bits
                        words = new_cap // 64
                        new_kids = np.zeros(new_cap, dtype=np.bool_)
                        new_kids[:cap] = has_kids
                        has_kids = new_kids
                        new_marked = np.zeros(new_cap, dtype=np.bool_)
                        new_marked[:cap] = marked
                        marked = new_marked
                        cap = new_cap
                        # rehash into a larger table
                        tsize = 4 * cap
                        table = -np.ones(tsize, dtype=np.int64)
                        for c in range(n):
                            hc = _row_hash(store[c], lens[c])
                            s2 = np.int64(hc & np.uint64(tsize - 1))
                            while table[s2] != -1:
                                s2 = (s2 + 1) & (tsize - 1)
                            table[s2] = c
                        slot = np.int64(h & np.uint64(tsize - 1))
                        while table[slot] != -1:
                            slot = (slot + 1) & (tsize - 1)
                    for k in range(ln):
                        store[n, k] = out[k]
                    lens[n] = ln
                    table[slot] = n
                    m = n
                    n += 1
                if not marked[m]:
                    marked[m] = True
                    following[nf] = m
                    nf += 1
                used = (n + 63) // 64
                for s in (i, j):
                    if s != m:
                        bits[m, s >> 6] |= np.uint64(1) << np.uint64(s & 63)
                        has_kids[m] = True
                        if has_kids[s]:
                            for w in range(used):
                                bits[m, w] &= ~bits[s, w]
        for x in range(nf):
            marked[following[x]] = False
        frontier = _sort_ids(following[:nf].copy(), store, lens)
    return store, lens, bits, n, frontier[0], rounds, OK


def encode(sequences, wildcard):
    """Rank-encode ``sequences`` into a padded int32 matrix."""
    vocab = sorted({tok for seq in sequences for tok in seq} | {wildcard})
    rank = {tok: k for k, tok in enumerate(vocab)}
    longest = max(len(seq) for seq in sequences)
    width = 2 * longest + 2
    rows = np.zeros((len(sequences), width), dtype=np.int32)
    lens = np.zeros(len(sequences), dtype=np.int32)
    for r, seq in enumerate(sequences):
        rows[r, : len(seq)] = [rank[tok] for tok in seq]
        lens[r] = len(seq)
    return vocab, rank[wildcard], rows, lens


def build(sequences, wildcard, max_rounds):
    """Run the compiled construction.

    Returns ``(status, patterns, children, top_index, rounds)`` where
    ``children[k]`` is the list of child indices of ``patterns[k]``.
    """
    vocab, wild, rows, lens = encode(sequences, wildcard)
    store, plens, bits, n, top, rounds, status = _build(rows, lens, wild, max_rounds)
    if status == TOO_LARGE:
        return status, None, None, None, rounds
    patterns = [tuple(vocab[v] for v in store[k, : plens[k]]) for k in range(n)]
    children = []
    unpacked = np.unpackbits(bits[:n].view(np.uint8), axis=1, bitorder="little")[:, :n]
    for k in range(n):
        children.append(np.flatnonzero(unpacked[k]).tolist())
    return status, patterns, children, int(top), rounds
