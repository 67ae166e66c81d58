"""Graph generators and independent brute-force oracles shared by the tests."""

from functools import lru_cache
from itertools import combinations, permutations

from isoschemes.graph import Graph


def random_graph(rng, n, p=0.5, connected=False):
    while True:
        edges = [(u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1) if rng.random() < p]
        G = Graph(n, edges)
        if not connected or n <= 1 or G.is_connected():
            return G


def from_nx(H):
    nodes = sorted(H.nodes())
    pos = {v: i + 1 for i, v in enumerate(nodes)}
    return Graph(len(nodes), [(pos[u], pos[v]) for u, v in H.edges()])


def atlas_connected(max_n=7):
    """Connected graphs on 1..max_n vertices, one per isomorphism class."""
    import networkx as nx
    out = []
    for H in nx.graph_atlas_g()[1:]:
        if H.number_of_nodes() <= max_n and nx.is_connected(H):
            out.append(from_nx(H))
    return out


def path(n):
    return Graph(n, [(i, i + 1) for i in range(1, n)])


def cycle(n):
    return Graph(n, [(i, i % n + 1) for i in range(1, n + 1)])


def complete(n):
    return Graph(n, [(u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1)])


def treedepth_oracle(G):
    """td(empty) = 0; td = max over components; td(connected) = 1 + min_v td(H - v)."""
    nbr = {v: set(G.neighbors(v)) for v in G.vertices}

    def comps(vs):
        left, out = set(vs), []
        while left:
            stack = [left.pop()]
            comp = set(stack)
            while stack:
                for y in nbr[stack.pop()]:
                    if y in left:
                        left.discard(y)
                        comp.add(y)
                        stack.append(y)
            out.append(frozenset(comp))
        return out

    @lru_cache(maxsize=None)
    def td(vs):
        if not vs:
            return 0
        cs = comps(vs)
        if len(cs) > 1:
            return max(td(c) for c in cs)
        return 1 + min(td(vs - {v}) for v in vs)

    return td(frozenset(G.vertices))


def hc_edge_sets(G):
    """Hamiltonian cycles by permutations of 2..n (first vertex fixed)."""
    n = G.n
    if n < 3:
        return []
    found = set()
    for perm in permutations(range(2, n + 1)):
        if perm[0] > perm[-1]:
            continue
        cyc = (1,) + perm
        pairs = [(cyc[i], cyc[(i + 1) % n]) for i in range(n)]
        if all(G.has_edge(u, v) for u, v in pairs):
            found.add(tuple(sorted(G.edge_id(u, v) for u, v in pairs)))
    return sorted(list(s) for s in found)


def mis_oracle(G):
    best, out = -1, []
    for r in range(G.n, -1, -1):
        for S in combinations(G.vertices, r):
            if all(not G.has_edge(u, v) for u, v in combinations(S, 2)):
                out.append(list(S))
        if out:
            return sorted(out)
    return [[]]


def matchings_oracle(G):
    """All matchings as sorted edge-id tuples."""
    out = []
    m = G.m
    for r in range(m + 1):
        for S in combinations(range(1, m + 1), r):
            ends = [x for e in S for x in G.edge(e)]
            if len(ends) == len(set(ends)):
                out.append(list(S))
    return out


def max_matchings_oracle(G):
    ms = matchings_oracle(G)
    top = max(len(s) for s in ms)
    return sorted(s for s in ms if len(s) == top)


def min_maximal_matchings_oracle(G):
    maximal = []
    for s in matchings_oracle(G):
        covered = {x for e in s for x in G.edge(e)}
        if all(u in covered or v in covered for u, v in G.edges):
            maximal.append(s)
    low = min(len(s) for s in maximal)
    return sorted(s for s in maximal if len(s) == low)
