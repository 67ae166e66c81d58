import random
from itertools import combinations

import networkx as nx
import pytest

from isoschemes.errors import PreconditionError, RefusalError
from isoschemes.graph import EliminationForest, Graph, treedepth_exact
from isoschemes.solutions import (Configuration, Subgraph, all_configurations, compliant_sets, configuration_of,
                                  enumerate_family, exchange_check, format_family, is_compliant,
                                  is_partial_solution, min_compliant, pair_weights, parse_family,
                                  perfect_matchings, pivotal_vertices)

from helpers import (complete, cycle, hc_edge_sets, max_matchings_oracle, min_maximal_matchings_oracle,
                     mis_oracle, path, random_graph)


def test_family_examples():
    assert len(enumerate_family("HC", complete(4))) == 3
    mis = enumerate_family("MIS", cycle(5))
    assert len(mis) == 5 and all(len(s) == 2 for s in mis)
    assert enumerate_family("MaxMatching", path(3)) == [[1], [2]]


def test_families_match_oracles():
    rng = random.Random(12)
    for _ in range(80):
        G = random_graph(rng, rng.randint(1, 8), rng.choice([0.3, 0.5, 0.7]))
        assert enumerate_family("HC", G) == hc_edge_sets(G)
        assert enumerate_family("MIS", G) == mis_oracle(G)
        if 0 < G.m <= 14:  # the matching oracles walk every edge subset
            assert enumerate_family("MaxMatching", G) == max_matchings_oracle(G)
            assert enumerate_family("MinMaxMatching", G) == min_maximal_matchings_oracle(G)


def test_steiner_matches_networkx_connectivity():
    rng = random.Random(5)
    for _ in range(40):
        G = random_graph(rng, rng.randint(2, 8), 0.4, connected=True)
        T = rng.sample(list(G.vertices), rng.randint(1, G.n))
        H = nx.Graph(G.edges)
        H.add_nodes_from(G.vertices)
        best = None
        found = []
        rest = [v for v in G.vertices if v not in T]
        for r in range(len(rest) + 1):
            for extra in combinations(rest, r):
                S = set(T) | set(extra)
                if nx.is_connected(H.subgraph(S)):
                    found.append(sorted(S))
            if found:
                break
        assert enumerate_family("MinSteiner", G, terminals=T) == sorted(found)


def test_family_refusal_and_format():
    with pytest.raises(RefusalError):
        enumerate_family("HC", complete(15))
    fam = enumerate_family("HC", complete(4))
    assert parse_family(format_family(fam)) == fam


def test_configuration_examples():
    assert configuration_of([(1, 2)], {1, 2, 3}) == Configuration({3}, {1, 2}, set(), {(1, 2)})
    assert configuration_of([], {1, 2, 3}) == Configuration({1, 2, 3}, set(), set(), set())
    assert configuration_of([(1, 2), (2, 3)], {1, 3}) == Configuration(set(), {1, 3}, set(), {(1, 3)})
    with pytest.raises(PreconditionError):
        configuration_of([(1, 2), (2, 3), (1, 3)], {1})
    with pytest.raises(PreconditionError):
        Configuration({1}, {1, 2}, set(), {(1, 2)})


def test_compliance_examples():
    K3 = complete(3)
    empty = Configuration(set(), set(), set(), set())
    assert is_compliant([(1, 2), (2, 3), (1, 3)], Subgraph.of(K3), empty)
    assert not is_compliant([(1, 2), (2, 3)], Subgraph.of(K3), empty)
    P3 = Subgraph.of(path(3))
    c = Configuration(set(), {1, 3}, set(), {(1, 3)})
    assert is_compliant([(1, 2), (2, 3)], P3, c)
    assert not is_compliant([(1, 2)], P3, c)
    # nothing outside V2: only the empty set qualifies
    allv = Configuration(set(), set(), {1, 2, 3}, set())
    assert is_compliant([], P3, allv) and not is_compliant([(1, 2)], P3, allv)


def test_min_compliant_examples():
    K3 = complete(3)
    w = pair_weights(K3, {1: 5, 2: 7, 3: 11})
    empty = Configuration(set(), set(), set(), set())
    assert min_compliant(w, Subgraph.of(K3), empty) == [((1, 2), (1, 3), (2, 3))]
    C4 = Subgraph.of(cycle(4))
    c = Configuration(set(), {1, 2}, set(), {(1, 2)})
    flat = {e: 1 for e in C4.edges}
    assert min_compliant(flat, C4, c) == [((1, 4), (2, 3), (3, 4))]
    # two equal-weight compliant sets are both reported
    K4 = Subgraph.of(complete(4))
    both = min_compliant({e: 1 for e in K4.edges}, K4, empty)
    assert len(both) == 3


def independent_compliance(S, H, c):
    U = set(H.vertices) - set(c.V2)
    if set(S) & set(c.M) or not set(S) <= set(H.edges):
        return False
    if not U:
        return not S and not c.M
    M = nx.MultiGraph()
    M.add_nodes_from(U)
    for u, v in list(S) + list(c.M):
        if u not in U or v not in U:
            return False
        M.add_edge(u, v)
    return (len(U) >= 3 and all(d == 2 for _, d in M.degree()) and nx.is_connected(M))


def test_compliant_sets_match_exhaustive_oracle():
    rng = random.Random(3)
    for _ in range(25):
        G = random_graph(rng, rng.randint(3, 6), 0.6)
        H = Subgraph.of(G)
        X = rng.sample(list(G.vertices), rng.randint(0, min(4, G.n)))
        for c in all_configurations(X):
            want = sorted(tuple(S) for r in range(len(H.edges) + 1) for S in combinations(H.edges, r)
                          if independent_compliance(S, H, c))
            assert sorted(compliant_sets(H, c)) == want


def test_configuration_determines_compliance():
    """Partial solutions with equal configurations and saturated interiors comply with the same configurations."""
    rng = random.Random(8)
    for _ in range(20):
        G = random_graph(rng, rng.randint(4, 7), 0.55)
        H = Subgraph.of(G)
        X = set(rng.sample(list(G.vertices), rng.randint(1, 4)))
        groups = {}
        for r in range(len(H.edges) + 1):
            for S in combinations(H.edges, r):
                if not is_partial_solution(S):
                    continue
                deg = {}
                for u, v in S:
                    deg[u] = deg.get(u, 0) + 1
                    deg[v] = deg.get(v, 0) + 1
                if any(deg.get(v, 0) != 2 for v in G.vertices if v not in X):
                    continue
                try:
                    key = configuration_of(S, X).key()
                except PreconditionError:
                    continue
                groups.setdefault(key, []).append(S)
        configs = all_configurations(X)
        for members in groups.values():
            verdicts = {tuple(is_compliant(S, H, d) for d in configs) for S in members}
            assert len(verdicts) == 1


def test_minimum_cycle_splits_into_minimum_parts():
    rng = random.Random(31)
    checked = 0
    while checked < 25:
        n = rng.randint(5, 8)
        G = random_graph(rng, n, 0.6)
        fam = enumerate_family("HC", G)
        if not fam:
            continue
        omega = {i: rng.randint(1, 10 ** 9) for i in range(1, G.m + 1)}
        best = min(fam, key=lambda S: sum(omega[i] for i in S))
        A = set(rng.sample(list(G.vertices), rng.randint(2, n - 2)))
        B = set(G.vertices) - A
        X = {a for a in A if G.neighbors(a) & B}
        E1 = [e for e in G.edges if e[0] in A and e[1] in A]
        E2 = [e for e in G.edges if e not in E1]
        S = [G.edge(i) for i in best]
        S1 = [e for e in S if e in E1]
        S2 = [e for e in S if e in E2]
        if not S1 or not S2:  # one side holds the whole cycle, nothing to split
            continue
        H1 = Subgraph(frozenset(A), tuple(E1))
        H2 = Subgraph(frozenset(B | X), tuple(E2))
        c1, c2 = configuration_of(S1, X), configuration_of(S2, X)
        if set(c2.M) & set(S1) or set(c1.M) & set(S2):
            continue
        d1 = Configuration(c1.V2, c1.V1, c1.V0, c2.M)
        d2 = Configuration(c2.V2, c2.V1, c2.V0, c1.M)
        w = pair_weights(G, omega)
        assert min_compliant(w, H1, d1) == [tuple(sorted(S1))]
        assert min_compliant(w, H2, d2) == [tuple(sorted(S2))]
        checked += 1


def test_perfect_matching_counts():
    assert [len(perfect_matchings(range(k))) for k in (0, 2, 4, 6, 8)] == [1, 1, 3, 15, 105]


def test_pivotal_examples():
    F = EliminationForest({1: 0, 2: 1})
    assert pivotal_vertices({1}, {2}, F) == {1}
    root = EliminationForest({1: 0, 2: 1, 3: 1})
    assert pivotal_vertices({1, 2}, {2}, root) == {1}
    chain = EliminationForest({1: 0, 2: 1, 3: 2})
    assert pivotal_vertices({1, 3}, {2, 3}, chain) == {1}
    with pytest.raises(PreconditionError):
        pivotal_vertices({1}, {1}, F)


def test_exchange_property_random():
    rng = random.Random(77)
    for _ in range(40):
        G = random_graph(rng, rng.randint(2, 8), 0.4)
        _, F = treedepth_exact(G)
        om_v = {v: rng.randint(1, 3) for v in G.vertices}  # small range: ties are common
        assert exchange_check("MIS", G, F, om_v)
        if G.m:
            om_e = {i: rng.randint(1, 3) for i in range(1, G.m + 1)}
            ok, info = exchange_check("MaxMatching", G, F, om_e, detail=True)
            assert ok, info


def test_exchange_unique_minimizer_vacuous():
    G = path(3)
    F = EliminationForest({2: 0, 1: 2, 3: 2})
    assert exchange_check("MIS", G, F, {1: 1, 2: 1, 3: 1})
    with pytest.raises(PreconditionError):
        exchange_check("HC", G, F, {})
