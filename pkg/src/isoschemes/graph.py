"""Graphs, elimination forests and tree decompositions, with their file formats."""

from __future__ import annotations

from collections import deque
from typing import Iterable, Mapping

from .errors import (
    CyclicForest,
    DecompositionError,
    DuplicateEdge,
    ForestError,
    IncomparableEdge,
    MalformedHeader,
    ParseError,
    RefusalError,
    SelfLoop,
    VertexOutOfRange,
)


def ceil_log2(n: int) -> int:
    """Smallest L with 2**L >= n (0 for n <= 1)."""
    return max(0, (n - 1).bit_length())


class Graph:
    """Undirected simple graph on vertices 1..n.

    Edge ids are canonical: edges sorted lexicographically as (min, max)
    pairs receive ids 1..m in that order.
    """

    __slots__ = ("n", "edges", "_ids", "_adj")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        pairs = set()
        for u, v in edges:
            if u == v:
                raise SelfLoop(f"self-loop at vertex {u}")
            if not (1 <= u <= n and 1 <= v <= n):
                raise VertexOutOfRange(f"edge {u}-{v} outside 1..{n}")
            p = (u, v) if u < v else (v, u)
            if p in pairs:
                raise DuplicateEdge(f"edge {p[0]}-{p[1]} listed twice")
            pairs.add(p)
        self.n = n
        self.edges = tuple(sorted(pairs))
        self._ids = {e: i for i, e in enumerate(self.edges, 1)}
        adj = [set() for _ in range(n + 1)]
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        self._adj = tuple(frozenset(a) for a in adj)

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def vertices(self) -> range:
        return range(1, self.n + 1)

    def edge_id(self, u: int, v: int) -> int:
        return self._ids[(u, v) if u < v else (v, u)]

    def edge(self, eid: int) -> tuple[int, int]:
        return self.edges[eid - 1]

    def has_edge(self, u: int, v: int) -> bool:
        return ((u, v) if u < v else (v, u)) in self._ids

    def neighbors(self, v: int) -> frozenset:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def adjacency_masks(self) -> list[int]:
        """Bitmask of neighbours per vertex, bit v-1 for vertex v (0-indexed list)."""
        masks = [0] * self.n
        for u, v in self.edges:
            masks[u - 1] |= 1 << (v - 1)
            masks[v - 1] |= 1 << (u - 1)
        return masks

    def components(self, removed: Iterable[int] = ()) -> list[set[int]]:
        gone = set(removed)
        seen = set(gone)
        comps = []
        for s in self.vertices:
            if s in seen:
                continue
            comp = {s}
            seen.add(s)
            queue = deque([s])
            while queue:
                x = queue.popleft()
                for y in self._adj[x]:
                    if y not in seen:
                        seen.add(y)
                        comp.add(y)
                        queue.append(y)
            comps.append(comp)
        return comps

    def is_connected(self) -> bool:
        return len(self.components()) <= 1

    def relabel(self, perm: Mapping[int, int]) -> "Graph":
        return Graph(self.n, [(perm[u], perm[v]) for u, v in self.edges])

    def __eq__(self, other):
        return isinstance(other, Graph) and self.n == other.n and self.edges == other.edges

    def __hash__(self):
        return hash((self.n, self.edges))

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"

    def to_gr(self) -> str:
        lines = [f"p gr {self.n} {self.m}"]
        lines += [f"e {u} {v}" for u, v in self.edges]
        return "\n".join(lines) + "\n"


def _data_lines(text: str):
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if line and not line.startswith("c"):
            yield no, line.split()


def parse_graph(text: str) -> Graph:
    """Parse the ``p gr n m`` / ``e u v`` format."""
    lines = _data_lines(text)
    try:
        no, head = next(lines)
    except StopIteration:
        raise MalformedHeader("missing 'p gr' header") from None
    if len(head) != 4 or head[0] != "p" or head[1] != "gr":
        raise MalformedHeader("expected 'p gr <n> <m>'", no)
    try:
        n, m = int(head[2]), int(head[3])
    except ValueError:
        raise MalformedHeader("non-integer header field", no) from None
    if n < 0 or m < 0:
        raise MalformedHeader("negative header field", no)
    seen = set()
    edges = []
    for no, tok in lines:
        if tok[0] == "e":
            tok = tok[1:]
        if len(tok) != 2:
            raise ParseError(f"bad edge line {' '.join(tok)!r}", no)
        try:
            u, v = int(tok[0]), int(tok[1])
        except ValueError:
            raise ParseError("non-integer vertex", no) from None
        if u == v:
            raise SelfLoop(f"self-loop at vertex {u}", no)
        if not (1 <= u <= n and 1 <= v <= n):
            raise VertexOutOfRange(f"edge {u}-{v} outside 1..{n}", no)
        key = (min(u, v), max(u, v))
        if key in seen:
            raise DuplicateEdge(f"edge {key[0]}-{key[1]} listed twice", no)
        seen.add(key)
        edges.append(key)
    if len(edges) != m:
        raise MalformedHeader(f"header announces {m} edges, found {len(edges)}")
    return Graph(n, edges)


class EliminationForest:
    """Rooted forest on 1..n given by parent pointers (0 marks a root)."""

    __slots__ = ("n", "parent", "lvl", "children", "roots")

    def __init__(self, parent: Mapping[int, int]):
        n = len(parent)
        if set(parent) != set(range(1, n + 1)):
            raise ForestError("forest must be defined on exactly 1..n")
        par = [0] * (n + 1)
        for v, p in parent.items():
            if not (0 <= p <= n) or p == v:
                raise CyclicForest(f"vertex {v} has invalid parent {p}")
            par[v] = p
        lvl = [-1] * (n + 1)
        for v in range(1, n + 1):
            chain = []
            x = v
            while x and lvl[x] < 0:
                chain.append(x)
                if len(chain) > n:
                    raise CyclicForest(f"parent chain from {v} does not reach a root")
                x = par[x]
            base = lvl[x] if x else -1
            for y in reversed(chain):
                base += 1
                lvl[y] = base
        children = [[] for _ in range(n + 1)]
        roots = []
        for v in range(1, n + 1):
            (children[par[v]] if par[v] else roots).append(v)
        self.n = n
        self.parent = tuple(par)
        self.lvl = tuple(lvl)
        self.children = tuple(tuple(c) for c in children)
        self.roots = tuple(roots)

    @property
    def height(self) -> int:
        return max(self.lvl[1:], default=-1) + 1

    def tail(self, v: int) -> set[int]:
        """Strict ancestors of v."""
        out = set()
        x = self.parent[v]
        while x:
            out.add(x)
            x = self.parent[x]
        return out

    def subtree(self, v: int) -> set[int]:
        out = {v}
        stack = [v]
        while stack:
            for c in self.children[stack.pop()]:
                out.add(c)
                stack.append(c)
        return out

    def is_ancestor(self, a: int, v: int) -> bool:
        """True if a is v or a strict ancestor of v."""
        while v and self.lvl[v] >= self.lvl[a]:
            if v == a:
                return True
            v = self.parent[v]
        return False

    def to_ef(self) -> str:
        return "".join(f"{v} {self.parent[v]}\n" for v in range(1, self.n + 1))

    def __eq__(self, other):
        return isinstance(other, EliminationForest) and self.parent == other.parent

    def __repr__(self):
        return f"EliminationForest(n={self.n}, height={self.height})"


def parse_ef(text: str) -> EliminationForest:
    parent = {}
    for no, tok in _data_lines(text):
        if len(tok) != 2:
            raise ParseError("expected '<v> <parent>'", no)
        try:
            v, p = int(tok[0]), int(tok[1])
        except ValueError:
            raise ParseError("non-integer field", no) from None
        if v in parent:
            raise ParseError(f"vertex {v} listed twice", no)
        parent[v] = p
    return EliminationForest(parent)


def validate_elim_forest(G: Graph, F) -> int:
    """Check that F is an elimination forest of G and return its height."""
    if not isinstance(F, EliminationForest):
        F = EliminationForest(F)
    if F.n != G.n:
        raise ForestError(f"forest covers {F.n} vertices, graph has {G.n}")
    for u, v in G.edges:
        if not (F.is_ancestor(u, v) or F.is_ancestor(v, u)):
            raise IncomparableEdge((u, v))
    return F.height


def treedepth_exact(G: Graph, bound: int = 12) -> tuple[int, EliminationForest]:
    """Minimum-height elimination forest by memoised search over vertex subsets."""
    if G.n > bound:
        raise RefusalError(f"treedepth_exact refuses n={G.n} > {bound}")
    from .kernels import components_mask

    adj = G.adjacency_masks()
    memo: dict[int, tuple[int, int]] = {}

    def solve(mask: int) -> int:
        # mask is connected and nonempty; returns depth, remembers best root
        hit = memo.get(mask)
        if hit is not None:
            return hit[0]
        size = bin(mask).count("1")
        if size <= 2:
            memo[mask] = (size, (mask & -mask).bit_length())
            return size
        best, root = size + 1, 0
        m = mask
        while m:
            low = m & -m
            m ^= low
            rest = mask ^ low
            depth = 1
            for comp in components_mask(adj, rest):
                depth = max(depth, 1 + solve(comp))
                if depth >= best:
                    break
            if depth < best:
                best, root = depth, low.bit_length()
        memo[mask] = (best, root)
        return best

    parent = {}

    def build(mask: int, above: int):
        for comp in components_mask(adj, mask):
            solve(comp)
            r = memo[comp][1]
            parent[r] = above
            build(comp ^ (1 << (r - 1)), r)

    full = (1 << G.n) - 1
    d = max((solve(c) for c in components_mask(adj, full)), default=0)
    build(full, 0)
    F = EliminationForest(parent)
    assert F.height == d
    return d, F


class TreeDecomposition:
    """Bags on the nodes of a tree, plus an edge-to-node assignment."""

    __slots__ = ("bags", "tree", "n_vertices")

    def __init__(self, bags: Mapping[int, Iterable[int]], tree_edges: Iterable[tuple[int, int]], n_vertices: int | None = None):
        self.bags = {x: frozenset(b) for x, b in bags.items()}
        adj = {x: set() for x in self.bags}
        for x, y in tree_edges:
            if x not in adj or y not in adj:
                raise DecompositionError(f"tree edge {x}-{y} names an unknown bag")
            if x == y or y in adj[x]:
                raise DecompositionError(f"bad tree edge {x}-{y}")
            adj[x].add(y)
            adj[y].add(x)
        self.tree = {x: frozenset(a) for x, a in adj.items()}
        if n_vertices is None:
            n_vertices = max((max(b) for b in self.bags.values() if b), default=0)
        self.n_vertices = n_vertices

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags.values()), default=0) - 1

    def tree_edges(self) -> list[tuple[int, int]]:
        return sorted((x, y) for x in self.tree for y in self.tree[x] if x < y)

    def validate(self, G: Graph) -> int:
        """Check the three decomposition conditions; return the width."""
        nodes = list(self.bags)
        if nodes:
            if len(self.tree_edges()) != len(nodes) - 1 or not _connected(self.tree, nodes[0], set(nodes)):
                raise DecompositionError("decomposition tree is not a tree")
        holders: dict[int, set] = {v: set() for v in G.vertices}
        for x, b in self.bags.items():
            for v in b:
                if v not in holders:
                    raise DecompositionError(f"bag {x} holds unknown vertex {v}")
                holders[v].add(x)
        for v, xs in holders.items():
            if not xs:
                raise DecompositionError(f"vertex {v} in no bag")
            if not _connected(self.tree, next(iter(xs)), xs):
                raise DecompositionError(f"bags holding vertex {v} are disconnected")
        self.edge_assignment(G)
        return self.width

    def edge_assignment(self, G: Graph) -> dict[int, int]:
        """eta: edge id -> smallest node whose bag covers the edge."""
        eta = {}
        order = sorted(self.bags)
        for eid, (u, v) in enumerate(G.edges, 1):
            for x in order:
                b = self.bags[x]
                if u in b and v in b:
                    eta[eid] = x
                    break
            else:
                raise DecompositionError(f"edge {u}-{v} covered by no bag")
        return eta

    def make_injective(self, G: Graph) -> tuple["TreeDecomposition", dict[int, int]]:
        """Duplicate nodes so that every node is assigned at most one edge.

        A node x carrying j > 1 edges gets j-1 fresh leaf copies of its bag
        attached to it; the extra edges move onto the copies.
        """
        eta = self.edge_assignment(G)
        per_node: dict[int, list[int]] = {}
        for eid, x in sorted(eta.items()):
            per_node.setdefault(x, []).append(eid)
        bags = dict(self.bags)
        edges = self.tree_edges()
        fresh = max(bags, default=0) + 1
        new_eta = {}
        for x, eids in sorted(per_node.items()):
            new_eta[eids[0]] = x
            for eid in eids[1:]:
                bags[fresh] = self.bags[x]
                edges.append((x, fresh))
                new_eta[eid] = fresh
                fresh += 1
        return TreeDecomposition(bags, edges, self.n_vertices), new_eta

    def to_td(self) -> str:
        lines = [f"s td {len(self.bags)} {self.width + 1} {self.n_vertices}"]
        for x in sorted(self.bags):
            lines.append(" ".join(["b", str(x)] + [str(v) for v in sorted(self.bags[x])]))
        lines += [f"{x} {y}" for x, y in self.tree_edges()]
        return "\n".join(lines) + "\n"

    @classmethod
    def path(cls, bags: list[Iterable[int]], n_vertices: int | None = None) -> "TreeDecomposition":
        """Path decomposition from a bag sequence; nodes are numbered 1..len."""
        return cls({i: b for i, b in enumerate(bags, 1)},
                   [(i, i + 1) for i in range(1, len(bags))], n_vertices)


def _connected(adj, start, allowed: set) -> bool:
    seen = {start}
    stack = [start]
    while stack:
        for y in adj[stack.pop()]:
            if y in allowed and y not in seen:
                seen.add(y)
                stack.append(y)
    return seen == set(allowed)


def parse_td(text: str) -> TreeDecomposition:
    lines = _data_lines(text)
    try:
        no, head = next(lines)
    except StopIteration:
        raise MalformedHeader("missing 's td' header") from None
    if len(head) != 5 or head[:2] != ["s", "td"]:
        raise MalformedHeader("expected 's td <#bags> <width+1> <n>'", no)
    try:
        nb, _w1, n = (int(t) for t in head[2:])
    except ValueError:
        raise MalformedHeader("non-integer header field", no) from None
    bags = {}
    edges = []
    for no, tok in lines:
        try:
            if tok[0] == "b":
                x = int(tok[1])
                if x in bags:
                    raise ParseError(f"bag {x} listed twice", no)
                verts = [int(t) for t in tok[2:]]
                for v in verts:
                    if not 1 <= v <= n:
                        raise VertexOutOfRange(f"vertex {v} outside 1..{n}", no)
                bags[x] = verts
            elif len(tok) == 2:
                edges.append((int(tok[0]), int(tok[1])))
            else:
                raise ParseError(f"unrecognised line {' '.join(tok)!r}", no)
        except (ValueError, IndexError) as exc:
            if isinstance(exc, ParseError):
                raise
            raise ParseError("non-integer field", no) from None
    if len(bags) != nb:
        raise MalformedHeader(f"header announces {nb} bags, found {len(bags)}")
    return TreeDecomposition(bags, edges, n)
