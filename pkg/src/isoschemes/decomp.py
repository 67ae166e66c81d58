"""Segment splitting in trees, balanced separators and generalized elimination forests."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping

from . import kernels
from .errors import DecompositionError, IntegrityError, PreconditionError
from .graph import EliminationForest, Graph, TreeDecomposition, ceil_log2

# --------------------------------------------------------------------------
# segments


def tree_adjacency(T) -> dict:
    """Adjacency dict of a tree given as TreeDecomposition, Graph or mapping."""
    if isinstance(T, TreeDecomposition):
        return {x: set(a) for x, a in T.tree.items()}
    if isinstance(T, Graph):
        return {v: set(T.neighbors(v)) for v in T.vertices}
    return {x: set(a) for x, a in T.items()}


@dataclass(frozen=True)
class Segment:
    nodes: frozenset
    edges: frozenset
    boundary: frozenset

    @property
    def size(self) -> int:
        return len(self.edges)


def make_segment(tree: Mapping, nodes: Iterable, strict: bool = True) -> Segment:
    """Segment on a connected node set; ``strict`` enforces at most two boundary nodes."""
    nodes = frozenset(nodes)
    if not nodes:
        raise PreconditionError("segment must be nonempty")
    edges = frozenset((x, y) for x in nodes for y in tree[x] if y in nodes and x < y)
    if len(edges) != len(nodes) - 1 or not _reaches(tree, nodes):
        raise PreconditionError("segment does not induce a connected subtree")
    boundary = frozenset(x for x in nodes if any(y not in nodes for y in tree[x]))
    if strict and len(boundary) > 2:
        raise PreconditionError(f"segment has {len(boundary)} boundary nodes (at most 2 allowed)")
    return Segment(nodes, edges, boundary)


def _reaches(tree, nodes) -> bool:
    start = next(iter(nodes))
    seen = {start}
    stack = [start]
    while stack:
        for y in tree[stack.pop()]:
            if y in nodes and y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == len(nodes)


def _branch(sub, start, blocked) -> set:
    seen = {start, blocked}
    stack = [start]
    while stack:
        for y in sub[stack.pop()]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    seen.discard(blocked)
    return seen


def _tree_path(sub, a, b) -> list:
    prev = {a: None}
    stack = [a]
    while stack:
        x = stack.pop()
        for y in sub[x]:
            if y not in prev:
                prev[y] = x
                stack.append(y)
    path = [b]
    while path[-1] != a:
        path.append(prev[path[-1]])
    return path


def _split_three(tree, piece: Segment) -> list[set]:
    """Cut a subtree with three boundary nodes at their median node d."""
    nodes = piece.nodes
    sub = {x: [y for y in tree[x] if y in nodes] for x in nodes}
    a, b, c = sorted(piece.boundary)
    d = (set(_tree_path(sub, a, b)) & set(_tree_path(sub, a, c)) & set(_tree_path(sub, b, c))).pop()
    groups = []
    spare = []
    for y in sorted(sub[d]):
        comp = _branch(sub, y, d)
        if comp & piece.boundary:
            groups.append(comp | {d})
        else:
            spare.append(comp)
    for comp in spare:
        groups[0] |= comp
    return groups


def split_segment(T, I) -> list[Segment]:
    """Split a segment of size l >= 2 into at most five segments of size <= l/2.

    Follows the constructive halving argument: find a node z whose every
    branch holds at most (l-1)/2 edges, group branches around z, then cut
    the (at most one) group with three boundary nodes at its median.
    """
    tree = tree_adjacency(T)
    if not isinstance(I, Segment):
        I = make_segment(tree, I)
    ell = I.size
    if ell < 2:
        raise PreconditionError(f"segment of size {ell} cannot be split (need >= 2)")
    nodes = I.nodes
    sub = {x: sorted(y for y in tree[x] if y in nodes) for x in nodes}

    # edge counts of rooted subtrees give every branch size around every node
    root = min(nodes)
    order, par = [root], {root: None}
    for x in order:
        for y in sub[x]:
            if y != par[x]:
                par[y] = x
                order.append(y)
    below = {x: 0 for x in nodes}
    for x in reversed(order):
        if par[x] is not None:
            below[par[x]] += below[x] + 1

    def branch_sizes(z):
        out = {}
        for y in sub[z]:
            out[y] = below[y] if par.get(y) == z else ell - below[z] - 1
        return out

    z = next(x for x in sorted(nodes) if all(2 * b <= ell - 1 for b in branch_sizes(x).values()))
    sizes = branch_sizes(z)
    pieces: list[set]
    big = [x for x in sorted(sizes) if 2 * (sizes[x] + 1) > ell]
    if big:
        x = big[0]
        far = _branch(sub, x, z)
        pieces = [far, set(nodes) - far, {x, z}]
    else:
        parts = [(_branch(sub, x, z) | {z}) for x in sorted(sizes)]
        parts = [(len(p) - 1, min(p), p) for p in parts]
        while len(parts) >= 2:
            parts.sort(key=lambda t: (t[0], t[1]))
            (s1, m1, p1), (s2, m2, p2) = parts[0], parts[1]
            if s1 + s2 > ell / 2:
                break
            parts = parts[2:] + [(s1 + s2, min(m1, m2), p1 | p2)]
        pieces = [p for _, _, p in sorted(parts, key=lambda t: t[1])]

    out = []
    for p in pieces:
        seg = make_segment(tree, p, strict=False)
        if len(seg.boundary) <= 2:
            out.append(seg)
        elif len(seg.boundary) == 3:
            out.extend(make_segment(tree, g) for g in _split_three(tree, seg))
        else:
            raise DecompositionError(f"piece with {len(seg.boundary)} boundary nodes")
    return out


# --------------------------------------------------------------------------
# balanced separators


def _mask(vs) -> int:
    m = 0
    for v in vs:
        m |= 1 << (v - 1)
    return m


def _unmask(m: int) -> set[int]:
    out = set()
    while m:
        low = m & -m
        out.add(low.bit_length())
        m ^= low
    return out


def is_balanced_separator(G: Graph, S, X, universe=None) -> bool:
    S = set(S)
    keep = set(G.vertices) if universe is None else set(universe)
    X = set(X)
    half = len(S & keep) // 2
    removed = (set(G.vertices) - keep) | X
    return all(len(c & S) <= half for c in G.components(removed))


def balanced_separator(G: Graph, S, universe=None) -> set[int]:
    """Minimum X such that each component of G[universe] - X holds <= |S|/2 of S.

    Exhaustive search by increasing size; ties broken lexicographically.
    """
    uni = (1 << G.n) - 1 if universe is None else _mask(universe)
    x = kernels.balanced_separator(G.adjacency_masks(), uni, _mask(S))
    return _unmask(x)


# --------------------------------------------------------------------------
# generalized elimination forests


@dataclass
class GEFStep:
    """Bookkeeping of one recursive call: sizes needed for the structural checks."""

    node: int
    depth: int
    a_size: int
    s_size: int
    host_size: int
    x_size: int
    y_size: int
    z_size: int
    groups: list  # (|B cap A|, |B cap S|) per group


@dataclass
class GeneralizedEliminationForest:
    n: int
    parent: list = field(default_factory=list)  # node -> parent node or -1
    preimage: list = field(default_factory=list)  # node -> sorted vertex list
    depth: list = field(default_factory=list)
    steps: list = field(default_factory=list)

    @property
    def eta(self) -> dict[int, int]:
        return {v: x for x, pre in enumerate(self.preimage) for v in pre}

    def children(self, x: int) -> list[int]:
        return [y for y, p in enumerate(self.parent) if p == x]

    @property
    def roots(self) -> list[int]:
        return [x for x, p in enumerate(self.parent) if p < 0]

    @property
    def topological_height(self) -> int:
        return max(self.depth, default=-1) + 1

    @property
    def height(self) -> int:
        best = 0
        for x in range(len(self.parent)):
            total, y = 0, x
            while y >= 0:
                total += len(self.preimage[y])
                y = self.parent[y]
            best = max(best, total)
        return best

    def subtree_vertices(self, x: int) -> set[int]:
        out = set(self.preimage[x])
        for y in self.children(x):
            out |= self.subtree_vertices(y)
        return out

    def _is_ancestor(self, a: int, x: int) -> bool:
        while x >= 0:
            if x == a:
                return True
            x = self.parent[x]
        return False

    def validate(self, G: Graph) -> None:
        eta = self.eta
        if sorted(eta) != list(G.vertices):
            raise IntegrityError("eta is not defined on exactly V(G)")
        for u, v in G.edges:
            if not (self._is_ancestor(eta[u], eta[v]) or self._is_ancestor(eta[v], eta[u])):
                raise IntegrityError(f"edge {u}-{v} maps to incomparable nodes")

    def condition_report(self, G: Graph) -> dict:
        """Evaluate the structural conditions; values are booleans or observed numbers."""
        n = G.n
        kids = [len(self.children(x)) for x in range(len(self.parent))]
        sizes_ok = all(len(self.subtree_vertices(x)) * 2 ** self.depth[x] <= n
                       for x in range(len(self.parent)))
        grouping_ok = all(2 * ba <= st.a_size and 2 * bs <= st.s_size
                          for st in self.steps for ba, bs in st.groups)
        return {
            "one_root": len(self.roots) == 1,
            "max_children": max(kids, default=0),
            "children_ok": max(kids, default=0) <= 7,
            "topological_height": self.topological_height,
            "height_ok": self.topological_height <= 1 + ceil_log2(n) if n > 1 else self.topological_height <= 1,
            "subtree_sizes_ok": sizes_ok,
            "grouping_ok": grouping_ok,
        }

    def observed_constants(self, alpha: float) -> tuple[float, float]:
        """Smallest K, L consistent with this run for separators of size K*|H'|^alpha
        and neighbourhoods of size L*(n/2^i)^alpha."""
        K = max((max(s.x_size, s.y_size) / s.host_size ** alpha for s in self.steps), default=0.0)
        L = max((s.s_size / (self.n / 2 ** s.depth) ** alpha for s in self.steps), default=0.0)
        return K, L

    def to_elimination_forest(self) -> EliminationForest:
        """Replace every node by a path through its preimage."""
        parent = {}
        bottom = {}

        def attach(x):
            p = self.parent[x]
            above = 0
            while p >= 0 and above == 0:
                above = bottom.get(p, 0)
                p = self.parent[p]
            return above

        order = sorted(range(len(self.parent)), key=lambda x: self.depth[x])
        for x in order:
            above = attach(x)
            for v in self.preimage[x]:
                parent[v] = above
                above = v
            if self.preimage[x]:
                bottom[x] = above
        return EliminationForest(parent)

    def to_text(self) -> str:
        lines = [f"g gef {len(self.parent)} {self.n}"]
        for x, (p, pre) in enumerate(zip(self.parent, self.preimage)):
            lines.append(" ".join(["x", str(x), str(p)] + [str(v) for v in pre]))
        return "\n".join(lines) + "\n"


SeparatorOracle = Callable[[Graph, set, set], set]


def bruteforce_oracle(G: Graph, S, universe) -> set[int]:
    return balanced_separator(G, S, universe)


def group_components(comps, A: set, S: set) -> list[set]:
    """Merge components into at most seven groups, each holding at most half
    of A and half of S. Two parts that are not 'bad' (more than a quarter of
    A or of S) are merged while more than seven parts remain."""
    a, s = len(A), len(S)
    parts = [set(c) for c in comps]

    def bad(p):
        return 4 * len(p & A) > a or (s > 0 and 4 * len(p & S) > s)

    while len(parts) > 7:
        light = sorted((p for p in parts if not bad(p)), key=lambda p: (len(p & A), len(p & S), min(p)))
        if len(light) < 2:
            raise IntegrityError("grouping invariant broken: fewer than two light parts")
        p, q = light[0], light[1]
        parts = [r for r in parts if r is not p and r is not q] + [p | q]
    return sorted(parts, key=min)


def build_gef(G: Graph, separator_oracle: SeparatorOracle = bruteforce_oracle) -> GeneralizedEliminationForest:
    """Recursive separator hierarchy compressed into a generalized elimination forest."""
    if G.n == 0:
        raise PreconditionError("graph must be nonempty")
    gef = GeneralizedEliminationForest(n=G.n)

    def closed_nbhd(A):
        out = set(A)
        for v in A:
            out |= G.neighbors(v)
        return out

    def call(A: set, parent: int, depth: int) -> None:
        host = closed_nbhd(A)
        S = host - A
        X = set(separator_oracle(G, set(A), host))
        Y = set(separator_oracle(G, set(S), host))
        for sep, target in ((X, A), (Y, S)):
            if not sep <= host or not is_balanced_separator(G, target, sep, host):
                raise IntegrityError(f"oracle returned an invalid separator {sorted(sep)}")
        Z = X | Y
        removed = (set(G.vertices) - host) | Z
        groups = group_components(G.components(removed), A, S)
        x = len(gef.parent)
        gef.parent.append(parent)
        gef.preimage.append(sorted(Z & A))
        gef.depth.append(depth)
        gef.steps.append(GEFStep(x, depth, len(A), len(S), len(host), len(X), len(Y), len(Z),
                                 [(len(B & A), len(B & S)) for B in groups]))
        for B in groups:
            if B & A:
                call(B & A, x, depth + 1)

    call(set(G.vertices), -1, 0)
    gef.validate(G)
    return gef
