# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the hot kernels; same contracts as _pykernels."""

from libc.stdint cimport uint64_t
from libc.stdlib cimport malloc, free

BACKEND = "cython"


cdef inline int popcount(uint64_t x) nogil:
    return __builtin_popcountll(x)


cdef inline int lowbit_index(uint64_t x) nogil:
    return __builtin_ctzll(x)


cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil
    int __builtin_ctzll(unsigned long long) nogil


def components_mask(adj, mask):
    cdef int n = len(adj)
    if n > 64:
        from ._pykernels import components_mask as slow
        return slow(adj, mask)
    cdef uint64_t a[64]
    cdef int i
    for i in range(n):
        a[i] = <uint64_t>adj[i]
    cdef uint64_t rest = <uint64_t>mask, comp, frontier, low, nb
    out = []
    while rest:
        comp = rest & (~rest + 1)
        frontier = comp
        while frontier:
            low = frontier & (~frontier + 1)
            frontier ^= low
            nb = a[lowbit_index(low)] & rest & ~comp
            comp |= nb
            frontier |= nb
        out.append(comp)
        rest &= ~comp
    return out


def gf2_rank(rows):
    """Gaussian elimination on rows packed into 64-bit words."""
    cdef Py_ssize_t nrows = len(rows)
    if nrows == 0:
        return 0
    cdef int width = 0
    for r in rows:
        width = max(width, (<object>r).bit_length())
    cdef Py_ssize_t words = (width + 63) // 64
    if words == 0:
        return 0
    cdef uint64_t *buf = <uint64_t *>malloc(nrows * words * sizeof(uint64_t))
    if buf == NULL:
        raise MemoryError()
    cdef Py_ssize_t i, j, w, piv
    cdef uint64_t bit
    cdef uint64_t *rp
    cdef uint64_t *rq
    cdef int rank = 0
    cdef int col
    try:
        mask64 = (1 << 64) - 1
        for i in range(nrows):
            r = rows[i]
            for w in range(words):
                buf[i * words + w] = <uint64_t>((r >> (64 * w)) & mask64)
        for col in range(width - 1, -1, -1):
            w = col // 64
            bit = (<uint64_t>1) << (col % 64)
            piv = -1
            for i in range(rank, nrows):
                if buf[i * words + w] & bit:
                    piv = i
                    break
            if piv < 0:
                continue
            if piv != rank:
                rp = buf + piv * words
                rq = buf + rank * words
                for j in range(words):
                    rp[j], rq[j] = rq[j], rp[j]
            rq = buf + rank * words
            for i in range(rank + 1, nrows):
                rp = buf + i * words
                if rp[w] & bit:
                    for j in range(w + 1):
                        rp[j] ^= rq[j]
            rank += 1
            if rank == nrows:
                break
    finally:
        free(buf)
    return rank


cdef void _ham(uint64_t *a, int n, uint64_t full, int *path, int depth,
               uint64_t used, list out):
    cdef int v = path[depth - 1]
    cdef uint64_t cand, low
    cdef int w
    if used == full:
        if (a[v] & 1) and path[1] < path[depth - 1]:
            out.append(tuple([path[i] for i in range(depth)]))
        return
    cand = a[v] & ~used
    while cand:
        low = cand & (~cand + 1)
        cand ^= low
        w = lowbit_index(low)
        path[depth] = w
        _ham(a, n, full, path, depth + 1, used | low, out)


def hamiltonian_cycles(adj, int n):
    if n < 3:
        return []
    if n > 64:
        from ._pykernels import hamiltonian_cycles as slow
        return slow(adj, n)
    cdef uint64_t a[64]
    cdef int path[64]
    cdef int i
    for i in range(n):
        a[i] = <uint64_t>adj[i]
    cdef uint64_t full = (<uint64_t>1 << n) - 1 if n < 64 else <uint64_t>0xFFFFFFFFFFFFFFFF
    out = []
    path[0] = 0
    _ham(a, n, full, path, 1, 1, out)
    return out


cdef bint _balanced(uint64_t *a, uint64_t rest, uint64_t s_mask, int half) nogil:
    cdef uint64_t comp, frontier, low, nb
    while rest:
        comp = rest & (~rest + 1)
        frontier = comp
        while frontier:
            low = frontier & (~frontier + 1)
            frontier ^= low
            nb = a[lowbit_index(low)] & rest & ~comp
            comp |= nb
            frontier |= nb
        if popcount(comp & s_mask) > half:
            return False
        rest &= ~comp
    return True


def balanced_separator(adj, universe, s_mask, limit=-1):
    cdef int n = len(adj)
    if n > 64:
        from ._pykernels import balanced_separator as slow
        return slow(adj, universe, s_mask, limit)
    cdef uint64_t a[64]
    cdef int verts[64]
    cdef int idx[64]
    cdef int i, k = 0, size, top, pos
    for i in range(n):
        a[i] = <uint64_t>adj[i]
    cdef uint64_t uni = <uint64_t>universe
    cdef uint64_t s = (<uint64_t>s_mask) & uni
    for i in range(64):
        if (uni >> i) & 1:
            verts[k] = i
            k += 1
    cdef int half = popcount(s) // 2
    top = k if limit < 0 else min(limit, k)
    cdef uint64_t x
    for size in range(top + 1):
        # lexicographic combinations of `size` indices out of k
        for i in range(size):
            idx[i] = i
        while True:
            x = 0
            for i in range(size):
                x |= (<uint64_t>1) << verts[idx[i]]
            if _balanced(a, uni & ~x, s, half):
                return x
            pos = size - 1
            while pos >= 0 and idx[pos] == k - size + pos:
                pos -= 1
            if pos < 0:
                break
            idx[pos] += 1
            for i in range(pos + 1, size):
                idx[i] = idx[i - 1] + 1
    return -1


def compat_rows(partners):
    cdef Py_ssize_t count = len(partners)
    if count == 0:
        return []
    cdef int size = len(partners[0])
    if size == 0:
        return [1 for _ in range(count)]
    cdef int *flat = <int *>malloc(count * size * sizeof(int))
    if flat == NULL:
        raise MemoryError()
    cdef Py_ssize_t a, b
    cdef int i, x, length
    cdef int *pa
    cdef int *pb
    cdef uint64_t *bits = <uint64_t *>malloc(((count + 63) // 64) * sizeof(uint64_t))
    if bits == NULL:
        free(flat)
        raise MemoryError()
    rows = []
    try:
        for a in range(count):
            p = partners[a]
            for i in range(size):
                flat[a * size + i] = p[i]
        for a in range(count):
            pa = flat + a * size
            for b in range((count + 63) // 64):
                bits[b] = 0
            for b in range(count):
                pb = flat + b * size
                length = 0
                x = 0
                while True:
                    x = pb[pa[x]]
                    length += 2
                    if x == 0:
                        break
                if length == size:
                    bits[b // 64] |= (<uint64_t>1) << (b % 64)
            row = 0
            for b in range((count + 63) // 64 - 1, -1, -1):
                row = (row << 64) | bits[b]
            rows.append(row)
    finally:
        free(flat)
        free(bits)
    return rows
