"""Pure-Python versions of the hot kernels (reference and fallback).

Vertex sets are int bitmasks, bit i for vertex index i (0-based).
"""

from itertools import combinations

BACKEND = "python"


def components_mask(adj, mask):
    """Connected components of the subgraph induced by ``mask``."""
    out = []
    rest = mask
    while rest:
        comp = frontier = rest & -rest
        while frontier:
            low = frontier & -frontier
            frontier ^= low
            nb = adj[low.bit_length() - 1] & rest & ~comp
            comp |= nb
            frontier |= nb
        out.append(comp)
        rest &= ~comp
    return out


def gf2_rank(rows):
    """Rank over GF(2) of rows given as int bitmasks."""
    pivots = {}
    rank = 0
    for r in rows:
        while r:
            top = r.bit_length() - 1
            p = pivots.get(top)
            if p is None:
                pivots[top] = r
                rank += 1
                break
            r ^= p
    return rank


def hamiltonian_cycles(adj, n):
    """All Hamiltonian cycles as vertex tuples starting at 0, each cycle once."""
    if n < 3:
        return []
    out = []
    full = (1 << n) - 1
    path = [0]

    def extend(v, used):
        if used == full:
            if adj[v] & 1 and path[1] < path[-1]:
                out.append(tuple(path))
            return
        cand = adj[v] & ~used
        while cand:
            low = cand & -cand
            cand ^= low
            w = low.bit_length() - 1
            path.append(w)
            extend(w, used | low)
            path.pop()

    extend(0, 1)
    return out


def balanced_separator(adj, universe, s_mask, limit=-1):
    """Smallest X within ``universe`` such that every component of
    universe - X holds at most floor(|S|/2) vertices of S.

    Candidates are scanned by size, then in lexicographic index order.
    Returns the mask of X, or -1 if no separator of size <= limit exists.
    """
    s_mask &= universe
    half = bin(s_mask).count("1") // 2
    verts = [i for i in range(universe.bit_length()) if universe >> i & 1]
    top = len(verts) if limit < 0 else min(limit, len(verts))
    for size in range(top + 1):
        for combo in combinations(verts, size):
            x = 0
            for i in combo:
                x |= 1 << i
            ok = True
            for comp in components_mask(adj, universe & ~x):
                if bin(comp & s_mask).count("1") > half:
                    ok = False
                    break
            if ok:
                return x
    return -1


def compat_rows(partners):
    """Rows of the matching compatibility matrix as int bitmasks.

    ``partners[j][i]`` is the partner of point i in matching j. Entry (a, b)
    is 1 when the union of matchings a and b is one cycle (a doubled edge
    counts as a 2-cycle).
    """
    rows = []
    if not partners:
        return rows
    size = len(partners[0])
    for pa in partners:
        row = 0
        for b, pb in enumerate(partners):
            if size == 0:
                row |= 1 << b
                continue
            # walk the alternating cycle through point 0 and measure it
            length, x = 0, 0
            while True:
                x = pb[pa[x]]
                length += 2
                if x == 0:
                    break
            if length == size:
                row |= 1 << b
        rows.append(row)
    return rows
