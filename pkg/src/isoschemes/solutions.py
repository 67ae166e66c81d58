"""Brute-force solution families, boundary configurations, compliance and pivotal vertices."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Mapping

from . import kernels
from .errors import PreconditionError, RefusalError
from .graph import EliminationForest, Graph

PROBLEMS = ("HC", "MIS", "MaxMatching", "MinSteiner", "MinMaxMatching")
DEFAULT_BOUNDS = {"HC": 14, "MIS": 16, "MaxMatching": 16, "MinSteiner": 16, "MinMaxMatching": 16}
_ALIASES = {"hc": "HC", "mis": "MIS", "mm": "MaxMatching", "maxmatching": "MaxMatching",
            "steiner": "MinSteiner", "minsteiner": "MinSteiner", "mmm": "MinMaxMatching",
            "minmaxmatching": "MinMaxMatching"}


def canonical_problem(problem: str) -> str:
    if problem in PROBLEMS:
        return problem
    try:
        return _ALIASES[problem.lower()]
    except KeyError:
        raise PreconditionError(f"unknown problem {problem!r}") from None


def _pair(u, v):
    return (u, v) if u < v else (v, u)


# --------------------------------------------------------------------------
# families


def hamiltonian_cycles(G: Graph) -> list[list[int]]:
    out = []
    for cyc in kernels.hamiltonian_cycles(G.adjacency_masks(), G.n):
        ids = [G.edge_id(cyc[i] + 1, cyc[(i + 1) % len(cyc)] + 1) for i in range(len(cyc))]
        out.append(sorted(ids))
    return sorted(out)


def maximum_independent_sets(G: Graph) -> list[list[int]]:
    adj = G.adjacency_masks()
    best = [0]
    found: list[int] = []

    def grow(chosen: int, size: int, cand: int):
        if size + bin(cand).count("1") < best[0]:
            return
        if not cand:
            if size > best[0]:
                best[0] = size
                found.clear()
            found.append(chosen)
            return
        low = cand & -cand
        v = low.bit_length() - 1
        grow(chosen | low, size + 1, cand & ~low & ~adj[v])
        # skipping v only makes sense when some neighbour could take its place
        if adj[v] & cand:
            grow(chosen, size, cand & ~low)

    grow(0, 0, (1 << G.n) - 1)
    return sorted([i + 1 for i in range(G.n) if s >> i & 1] for s in found)


def _matchings(G: Graph, want: str) -> list[list[int]]:
    """Maximum matchings (want='max') or minimum maximal matchings (want='minmax')."""
    n = G.n
    nbrs = [sorted(G.neighbors(v)) for v in range(n + 1)]
    done = [False] * (n + 1)  # matched, or deliberately left unmatched
    cover = [False] * (n + 1)
    chosen: list[int] = []
    best = [None]
    found: list[tuple] = []

    def record():
        size = len(chosen)
        b = best[0]
        if b is None or (size > b if want == "max" else size < b):
            best[0] = size
            found.clear()
        if best[0] == size:
            found.append(tuple(sorted(chosen)))

    def go(v: int):
        while v <= n and done[v]:
            v += 1
        if v > n:
            record()
            return
        b = best[0]
        if b is not None:
            if want == "max":
                free = sum(1 for x in range(v, n + 1) if not done[x])
                if len(chosen) + free // 2 < b:
                    return
            elif len(chosen) > b:
                return
        done[v] = True
        for w in nbrs[v]:
            if w > v and not done[w]:
                done[w] = cover[v] = cover[w] = True
                chosen.append(G.edge_id(v, w))
                go(v + 1)
                chosen.pop()
                done[w] = cover[v] = cover[w] = False
        # leave v unmatched; for maximality no earlier neighbour may be uncovered
        if want == "max" or not any(u < v and not cover[u] for u in nbrs[v]):
            go(v + 1)
        done[v] = False

    go(1)
    return sorted(list(m) for m in found)


def minimum_steiner_sets(G: Graph, terminals: Iterable[int]) -> list[list[int]]:
    T = set(terminals)
    if not T:
        return [[]]
    rest = [v for v in G.vertices if v not in T]
    for size in range(len(rest) + 1):
        found = []
        for extra in combinations(rest, size):
            S = T | set(extra)
            if len(G.components(set(G.vertices) - S)) == 1:
                found.append(sorted(S))
        if found:
            return sorted(found)
    return []


def enumerate_family(problem: str, G: Graph, terminals=None, bound: int | None = None) -> list[list[int]]:
    """Exact family as a sorted list of sorted id lists (vertex ids or edge ids)."""
    problem = canonical_problem(problem)
    limit = DEFAULT_BOUNDS[problem] if bound is None else bound
    if G.n > limit:
        raise RefusalError(f"{problem} enumeration refuses n={G.n} > {limit}")
    if problem == "HC":
        return hamiltonian_cycles(G)
    if problem == "MIS":
        return maximum_independent_sets(G)
    if problem == "MaxMatching":
        return _matchings(G, "max")
    if problem == "MinMaxMatching":
        return _matchings(G, "minmax")
    if terminals is None:
        raise PreconditionError("MinSteiner needs a terminal set")
    return minimum_steiner_sets(G, terminals)


def format_family(family) -> str:
    return "".join(" ".join(str(i) for i in s) + "\n" for s in family)


def parse_family(text: str) -> list[list[int]]:
    return [sorted(int(t) for t in line.split()) for line in text.splitlines()]


# --------------------------------------------------------------------------
# configurations and compliance


@dataclass(frozen=True)
class Configuration:
    V0: frozenset
    V1: frozenset
    V2: frozenset
    M: frozenset  # of sorted pairs

    def __post_init__(self):
        for name in ("V0", "V1", "V2"):
            object.__setattr__(self, name, frozenset(getattr(self, name)))
        object.__setattr__(self, "M", frozenset(_pair(*p) for p in self.M))
        if (self.V0 & self.V1) or (self.V0 & self.V2) or (self.V1 & self.V2):
            raise PreconditionError("V0, V1, V2 must be disjoint")
        covered = [v for p in self.M for v in p]
        if len(covered) != len(set(covered)) or set(covered) != set(self.V1):
            raise PreconditionError("M must be a perfect matching on V1")

    @property
    def X(self) -> frozenset:
        return self.V0 | self.V1 | self.V2

    def key(self):
        return (tuple(sorted(self.V0)), tuple(sorted(self.V1)), tuple(sorted(self.V2)), tuple(sorted(self.M)))

    def __repr__(self):
        v0, v1, v2, m = self.key()
        return f"Configuration(V0={list(v0)}, V1={list(v1)}, V2={list(v2)}, M={list(m)})"


@dataclass(frozen=True)
class Subgraph:
    """A subgraph of a host graph, keeping the host's vertex labels."""

    vertices: frozenset
    edges: tuple  # sorted pairs

    @classmethod
    def of(cls, G: Graph, vertices=None, edges=None) -> "Subgraph":
        if vertices is None and edges is None:
            return cls(frozenset(G.vertices), G.edges)
        if edges is None:
            vs = frozenset(vertices)
            return cls(vs, tuple(e for e in G.edges if e[0] in vs and e[1] in vs))
        es = tuple(sorted(_pair(*e) for e in edges))
        vs = frozenset(vertices) if vertices is not None else frozenset(v for e in es for v in e)
        return cls(vs, es)


def perfect_matchings(X) -> list[tuple]:
    """All perfect matchings on X, lexicographic by sorted pair list."""
    xs = sorted(X)
    if len(xs) % 2:
        return []
    out = []

    def go(rest, acc):
        if not rest:
            out.append(tuple(acc))
            return
        a = rest[0]
        for j in range(1, len(rest)):
            go(rest[1:j] + rest[j + 1:], acc + [(a, rest[j])])

    go(xs, [])
    return sorted(out)


def all_configurations(X) -> list[Configuration]:
    xs = sorted(X)
    out = []

    def go(i, v0, v1, v2):
        if i == len(xs):
            for M in perfect_matchings(v1):
                out.append(Configuration(v0, v1, v2, M))
            return
        x = xs[i]
        go(i + 1, v0 + [x], v1, v2)
        go(i + 1, v0, v1 + [x], v2)
        go(i + 1, v0, v1, v2 + [x])

    go(0, [], [], [])
    return out


def _degrees(S) -> dict:
    deg: dict = {}
    for u, v in S:
        deg[u] = deg.get(u, 0) + 1
        deg[v] = deg.get(v, 0) + 1
    return deg


def is_partial_solution(S) -> bool:
    S = [_pair(*e) for e in S]
    if len(set(S)) != len(S):
        return False
    if any(d > 2 for d in _degrees(S).values()):
        return False
    root = {}

    def find(x):
        root.setdefault(x, x)
        while root[x] != x:
            root[x] = root[root[x]]
            x = root[x]
        return x

    for u, v in S:
        a, b = find(u), find(v)
        if a == b:
            return False
        root[a] = b
    return True


def configuration_of(S, X) -> Configuration:
    """Boundary fingerprint c_X(S) of a partial solution S (edges as vertex pairs)."""
    S = [_pair(*e) for e in S]
    if not is_partial_solution(S):
        raise PreconditionError("S is not a partial solution (degree > 2 or a cycle)")
    X = set(X)
    deg = _degrees(S)
    adj: dict = {}
    for u, v in S:
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    V = [set(), set(), set()]
    for x in X:
        V[deg.get(x, 0)].add(x)
    M = set()
    for a in V[1]:
        prev, cur = None, a
        while True:
            nxt = [y for y in adj[cur] if y != prev]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
        if cur not in X:
            raise PreconditionError(f"path from boundary vertex {a} ends outside X at {cur}")
        M.add(_pair(a, cur))
    return Configuration(V[0], V[1], V[2], M)


def is_compliant(S, H: Subgraph, c: Configuration) -> bool:
    """S and M disjoint, and S + M a Hamiltonian cycle on V(H) - V2.

    Fewer than three vertices outside V2 admit no cycle, except the empty
    vertex set, which only S = M = {} satisfies.
    """
    S = {_pair(*e) for e in S}
    if not c.X <= H.vertices:
        return False
    if not S <= set(H.edges):
        return False
    if S & c.M:
        return False
    U = H.vertices - c.V2
    if not U:
        return not S and not c.M
    if len(U) < 3:
        return False
    if any(u not in U or v not in U for u, v in S):
        return False
    union = list(S) + list(c.M)
    if len(union) != len(U):
        return False
    deg = _degrees(union)
    if any(deg.get(u, 0) != 2 for u in U):
        return False
    adj: dict = {}
    for u, v in union:
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    start = next(iter(U))
    seen = {start}
    stack = [start]
    while stack:
        for y in adj[stack.pop()]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return seen == U


def compliant_sets(H: Subgraph, c: Configuration) -> list[tuple]:
    """Every S within E(H) compliant with c, via degree-constrained backtracking."""
    U = H.vertices - c.V2
    if not U:
        return [()] if not c.M else []
    if len(U) < 3 or not c.X <= H.vertices:
        return []
    need = {u: 2 for u in U}
    for u in c.V1:
        need[u] = 1
    edges = [e for e in H.edges if e[0] in U and e[1] in U and e not in c.M]
    out = []
    chosen: list = []
    # prune: remaining capacity must be coverable by remaining edges
    remaining = {u: 0 for u in U}
    for u, v in edges:
        remaining[u] += 1
        remaining[v] += 1

    def go(i):
        if any(need[u] > remaining[u] for u in (edges[i - 1] if i else ())):
            return
        if i == len(edges):
            if all(need[u] == 0 for u in U) and is_compliant(chosen, H, c):
                out.append(tuple(chosen))
            return
        u, v = edges[i]
        remaining[u] -= 1
        remaining[v] -= 1
        if need[u] and need[v]:
            need[u] -= 1
            need[v] -= 1
            chosen.append((u, v))
            go(i + 1)
            chosen.pop()
            need[u] += 1
            need[v] += 1
        go(i + 1)
        remaining[u] += 1
        remaining[v] += 1

    go(0)
    return out


def pair_weights(G: Graph, omega) -> dict:
    """Map vertex pairs of G to the weight of the corresponding edge id."""
    return {e: omega[i] for i, e in enumerate(G.edges, 1)}


def min_compliant(omega: Mapping, H: Subgraph, c: Configuration) -> list[tuple]:
    """Min(omega, H, c): all compliant sets of minimum weight (``omega`` maps pairs)."""
    sets = compliant_sets(H, c)
    if not sets:
        return []
    weigh = [sum(omega[e] for e in S) for S in sets]
    low = min(weigh)
    return sorted(S for S, w in zip(sets, weigh) if w == low)


# --------------------------------------------------------------------------
# pivotal vertices and the exchange property


def pivotal_vertices(A, B, F: EliminationForest, G: Graph | None = None, edge: bool = False) -> set[int]:
    """Vertices u in A^B whose strict ancestors meet A and B identically.

    With ``edge=True``, A and B are edge-id sets of G and the three-clause
    edge version is used: ancestors x see ux in both or neither, some
    descendant x has ux in A^B, and no strict ancestor qualifies too.
    """
    A, B = set(A), set(B)
    if A == B:
        raise PreconditionError("pivotal vertices need A != B")
    if not edge:
        return {u for u in A ^ B if F.tail(u) & A == F.tail(u) & B}
    if G is None:
        raise PreconditionError("edge-pivotal vertices need the graph")
    diff = A ^ B

    def has_edge_id(u, x):
        return G.has_edge(u, x)

    def qualifies(u):
        for x in F.tail(u):
            if has_edge_id(u, x):
                eid = G.edge_id(u, x)
                if (eid in A) != (eid in B):
                    return False
        below = F.subtree(u) - {u}
        return any(has_edge_id(u, x) and G.edge_id(u, x) in diff for x in below)

    good = {u for u in G.vertices if qualifies(u)}
    return {u for u in good if not (F.tail(u) & good)}


def exchange_check(problem: str, G: Graph, F: EliminationForest, omega, detail: bool = False):
    """Whenever omega has two minimizers on the family, some pair of minimizers
    has exactly one pivotal (edge-pivotal for matchings) vertex."""
    problem = canonical_problem(problem)
    if problem not in ("MIS", "MaxMatching"):
        raise PreconditionError("exchange_check covers MIS and MaxMatching")
    fam = enumerate_family(problem, G)
    weigh = [sum(omega[i] for i in S) for S in fam]
    low = min(weigh, default=0)
    minimizers = [S for S, w in zip(fam, weigh) if w == low]
    empty_pivotal = []
    ok = len(minimizers) < 2
    for A, B in combinations(minimizers, 2):
        piv = pivotal_vertices(A, B, F, G, edge=(problem == "MaxMatching"))
        if not piv:
            empty_pivotal.append((A, B))
        if len(piv) == 1:
            ok = True
            if not detail:
                break
    if detail:
        return ok, {"minimizers": len(minimizers), "empty_pivotal_pairs": empty_pivotal}
    return ok
