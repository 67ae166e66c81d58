"""Compatibility matrix over perfect matchings, GF(2) rank, and the min-solution count check."""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

from . import kernels
from .errors import MinNotUnique, PreconditionError
from .graph import Graph
from .solutions import Configuration, Subgraph, all_configurations, min_compliant, pair_weights, perfect_matchings


@dataclass(frozen=True)
class CompatibilityMatrix:
    X: tuple
    matchings: tuple
    rows: tuple  # int bitmasks, bit j = column j

    @property
    def dim(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij) -> int:
        i, j = ij
        return self.rows[i] >> j & 1

    def to_lists(self) -> list[list[int]]:
        return [[r >> j & 1 for j in range(self.dim)] for r in self.rows]

    def dump(self) -> str:
        return format_matrix(self.rows, self.dim)


def format_matrix(rows, cols: int) -> str:
    """Dimension header, then one hex string per row (bit j = column j)."""
    width = max(1, (cols + 3) // 4)
    lines = [f"d {len(rows)} {cols}"] + [format(r, f"0{width}x") for r in rows]
    return "\n".join(lines) + "\n"


def parse_matrix(text: str) -> tuple[list[int], int]:
    lines = [ln for ln in text.split() if ln]
    if len(lines) < 3 or lines[0] != "d":
        raise PreconditionError("matrix dump must start with 'd <rows> <cols>'")
    r, c = int(lines[1]), int(lines[2])
    rows = [int(h, 16) for h in lines[3:]]
    if len(rows) != r:
        raise PreconditionError("row count does not match header")
    return rows, c


def compat_matrix(X) -> CompatibilityMatrix:
    """H_X[M1, M2] = 1 iff M1 + M2 (as a multigraph) is one cycle through all of X."""
    xs = tuple(sorted(X))
    if len(xs) % 2:
        raise PreconditionError(f"|X| = {len(xs)} is odd")
    if len(xs) > 12:
        raise PreconditionError(f"|X| = {len(xs)} exceeds 12")
    pos = {x: i for i, x in enumerate(xs)}
    matchings = tuple(perfect_matchings(xs)) if xs else ((),)
    partners = []
    for M in matchings:
        p = [0] * len(xs)
        for a, b in M:
            p[pos[a]], p[pos[b]] = pos[b], pos[a]
        partners.append(p)
    return CompatibilityMatrix(xs, matchings, tuple(kernels.compat_rows(partners)))


def _as_rows(M) -> list[int]:
    if isinstance(M, CompatibilityMatrix):
        return list(M.rows)
    rows = []
    for r in M:
        if isinstance(r, int):
            rows.append(r)
        else:
            v = 0
            for j, bit in enumerate(r):
                if int(bit) & 1:
                    v |= 1 << j
            rows.append(v)
    return rows


def gf2_rank(M) -> int:
    """Rank over GF(2); accepts a CompatibilityMatrix, int bit rows, or 0/1 row sequences."""
    return kernels.gf2_rank(_as_rows(M))


def expected_rank(x: int) -> int:
    """2^(x/2 - 1) for even x >= 2; 1 for the empty boundary."""
    return 1 if x == 0 else 1 << (x // 2 - 1)


def block_rank_bound(x: int) -> int:
    """Sum over (V0, V1, V2) partitions of a size-x boundary of rank(H_V1)."""
    return sum(comb(x, 2 * j) * 2 ** (x - 2 * j) * expected_rank(2 * j) for j in range(x // 2 + 1))


def explicit_bound_holds(count: int, x: int) -> bool:
    """count <= 3^x * 2^(x/2 - 1), compared exactly; the empty boundary allows 1."""
    if x == 0:
        return count <= 1
    return 4 * count * count <= 9 ** x * 2 ** x


def hhat_entry(c: Configuration, d: Configuration) -> int:
    """Block-diagonal compatibility between configurations on the same boundary."""
    if c.V0 != d.V2 or c.V2 != d.V0 or c.V1 != d.V1:
        return 0
    if not c.V1:
        return 1
    union = list(c.M) + list(d.M)
    adj: dict = {}
    for a, b in union:
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    start = next(iter(c.V1))
    seen = {start}
    stack = [start]
    while stack:
        for y in adj[stack.pop()]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return int(seen == set(c.V1))


def min_solution_report(G: Graph, X, omega) -> dict:
    """Union of Min(omega, G, c) over all configurations c on X, checked against the bounds.

    ``omega`` is indexed by edge id. Raises MinNotUnique on the first
    configuration with two or more minimum-weight compliant sets.
    """
    X = sorted(X)
    weights = pair_weights(G, omega)
    H = Subgraph.of(G)
    union = set()
    realized = []
    for c in all_configurations(X):
        mins = min_compliant(weights, H, c)
        if len(mins) >= 2:
            raise MinNotUnique(c, len(mins))
        if mins:
            union.add(mins[0])
            realized.append(c)
    x = len(X)
    return {
        "count": len(union),
        "block_bound": block_rank_bound(x),
        "explicit_ok": explicit_bound_holds(len(union), x),
        "realized": realized,
    }


def min_solution_count_check(G: Graph, X, omega) -> bool:
    rep = min_solution_report(G, X, omega)
    return rep["explicit_ok"] and rep["count"] <= rep["block_bound"]
