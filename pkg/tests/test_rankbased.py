import random
from itertools import combinations

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from isoschemes.errors import MinNotUnique, PreconditionError
from isoschemes.rankbased import (block_rank_bound, compat_matrix, expected_rank, explicit_bound_holds,
                                  format_matrix, gf2_rank, hhat_entry, min_solution_count_check,
                                  min_solution_report, parse_matrix)
from isoschemes.solutions import Configuration, Subgraph, all_configurations, configuration_of, min_compliant, pair_weights

from helpers import random_graph


def union_is_one_cycle(M1, M2, X):
    G = nx.MultiGraph()
    G.add_nodes_from(X)
    G.add_edges_from(list(M1) + list(M2))
    return nx.is_connected(G) and all(d == 2 for _, d in G.degree())


def double_factorial(x):
    out = 1
    for k in range(x - 1, 0, -2):
        out *= k
    return out


@pytest.mark.parametrize("x,rank", [(2, 1), (4, 2), (6, 4), (8, 8), (10, 16)])
def test_rank_identity(x, rank):
    H = compat_matrix(range(1, x + 1))
    assert H.dim == double_factorial(x)
    assert gf2_rank(H) == rank == expected_rank(x)


@pytest.mark.parametrize("x", [2, 4, 6, 8])
def test_entries_match_cycle_oracle(x):
    H = compat_matrix(range(1, x + 1))
    X = list(range(1, x + 1))
    for i, M1 in enumerate(H.matchings):
        for j, M2 in enumerate(H.matchings):
            assert H[i, j] == union_is_one_cycle(M1, M2, X)
            assert H[i, j] == H[j, i]
        if x >= 4:
            assert H[i, i] == 0


def test_small_matrices():
    assert compat_matrix({5, 9}).to_lists() == [[1]]
    assert compat_matrix(range(4)).to_lists() == [[0, 1, 1], [1, 0, 1], [1, 1, 0]]
    assert compat_matrix([]).dim == 1
    # canonical order: lexicographic by sorted pair list
    assert list(compat_matrix(range(4)).matchings) == sorted(compat_matrix(range(4)).matchings)


def test_errors():
    with pytest.raises(PreconditionError):
        compat_matrix(range(3))
    with pytest.raises(PreconditionError):
        compat_matrix(range(14))
    with pytest.raises(PreconditionError):
        parse_matrix("x 1 1\n1\n")


def test_rank_trivial():
    for n in range(0, 40, 7):
        assert gf2_rank([1 << i for i in range(n)]) == n
        assert gf2_rank([[0] * n for _ in range(n)]) == 0


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(st.integers(0, 1), min_size=6, max_size=6), min_size=1, max_size=8))
def test_rank_matches_float_free_oracle(rows):
    # oracle: size of the GF(2) span, computed by closure
    span = {0}
    for r in rows:
        v = sum(b << j for j, b in enumerate(r))
        span |= {s ^ v for s in span}
    assert 1 << gf2_rank(rows) == len(span)


def test_dump_round_trip():
    H = compat_matrix(range(6))
    rows, cols = parse_matrix(H.dump())
    assert rows == list(H.rows) and cols == 15
    assert H.dump() == compat_matrix(range(6)).dump()
    assert format_matrix([5, 0], 3) == "d 2 3\n5\n0\n"


def test_bounds():
    assert block_rank_bound(0) == 1
    for x in range(0, 13, 2):
        assert block_rank_bound(x) <= 3 ** x * max(1, 2 ** (x / 2 - 1))
    assert explicit_bound_holds(1, 0) and not explicit_bound_holds(2, 0)
    assert explicit_bound_holds(162, 4) and not explicit_bound_holds(163, 4)


def test_empty_boundary_count():
    rng = random.Random(2)
    for _ in range(10):
        G = random_graph(rng, rng.randint(3, 6), 0.6)
        omega = {i: rng.randint(1, 10 ** 9) for i in range(1, G.m + 1)}
        rep = min_solution_report(G, [], omega)
        assert rep["count"] <= 1


def test_count_bound_random_graphs():
    rng = random.Random(9)
    done = 0
    while done < 15:
        G = random_graph(rng, rng.randint(5, 8), 0.5)
        if G.m > 16:
            continue
        X = rng.sample(list(G.vertices), 4)
        omega = dict(zip(range(1, G.m + 1), rng.sample(range(1, 10 ** 9), G.m)))
        assert min_solution_count_check(G, X, omega)
        done += 1


def test_constant_weights_violate_precondition():
    from helpers import complete
    G = complete(5)
    with pytest.raises(MinNotUnique):
        min_solution_report(G, [1, 2], {i: 0 for i in range(1, G.m + 1)})


def test_hhat_rows_of_min_solutions_independent():
    rng = random.Random(4)
    done = 0
    while done < 12:
        G = random_graph(rng, rng.randint(5, 7), 0.55)
        if G.m > 14:
            continue
        X = sorted(rng.sample(list(G.vertices), rng.choice([2, 4, 5, 6][: G.n - 2])))
        omega = dict(zip(range(1, G.m + 1), rng.sample(range(1, 10 ** 9), G.m)))
        report = min_solution_report(G, X, omega)
        configs = all_configurations(X)
        w = pair_weights(G, omega)
        sols = {min_compliant(w, Subgraph.of(G), c)[0] for c in report["realized"]}
        rows = []
        for S in sols:
            try:
                own = configuration_of(S, X)
            except PreconditionError:  # a closed cycle: the block with no degree-1 boundary vertices
                deg = {x: sum(x in e for e in S) for x in X}
                own = Configuration({x for x in X if deg[x] == 0}, set(), {x for x in X if deg[x] == 2}, set())
            rows.append([hhat_entry(own, d) for d in configs])
        assert gf2_rank(rows) == len(rows) == report["count"]
        done += 1
