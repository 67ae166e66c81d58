import random
from itertools import combinations

import pytest

from isoschemes.decomp import (balanced_separator, build_gef, is_balanced_separator, make_segment,
                               split_segment, tree_adjacency)
from isoschemes.errors import IntegrityError, PreconditionError
from isoschemes.graph import Graph, ceil_log2, validate_elim_forest

from helpers import cycle, path, random_graph
from treegen import random_segment, random_tree


def check_split(tree, seg, parts):
    ell = seg.size
    assert 1 <= len(parts) <= 5
    seen = set()
    for p in parts:
        assert 2 * p.size <= ell
        assert not (p.edges & seen)
        seen |= p.edges
        boundary = {x for x in p.nodes if any(y not in p.nodes for y in tree[x])}
        assert len(boundary) <= 2 and boundary == set(p.boundary)
        make_segment(tree, p.nodes)  # connected, at most two boundary nodes
    assert seen == set(seg.edges)


def test_split_path_of_two_edges():
    tree = {1: {2}, 2: {1, 3}, 3: {2}}
    parts = split_segment(tree, [1, 2, 3])
    assert sorted(sorted(p.edges) for p in parts) == [[(1, 2)], [(2, 3)]]


def test_split_star():
    tree = {0: {1, 2, 3, 4}, 1: {0}, 2: {0}, 3: {0}, 4: {0}}
    seg = make_segment(tree, tree)
    check_split(tree, seg, split_segment(tree, seg))


def test_split_single_edge_refused():
    with pytest.raises(PreconditionError):
        split_segment({1: {2}, 2: {1}}, [1, 2])


def test_segment_with_three_boundary_nodes_rejected():
    tree = {1: {2, 3, 4}, 2: {1, 5}, 3: {1, 6}, 4: {1, 7}, 5: {2}, 6: {3}, 7: {4}}
    with pytest.raises(PreconditionError):
        make_segment(tree, [1, 2, 3, 4])


def test_split_random_trees():
    rng = random.Random(17)
    for _ in range(200):
        tree = random_tree(rng, rng.randint(3, 120))
        seg = make_segment(tree, random_segment(rng, tree))
        if seg.size < 2:
            continue
        check_split(tree, seg, split_segment(tree, seg))


def test_separator_examples():
    assert balanced_separator(path(3), {1, 2, 3}) == {2}
    assert balanced_separator(Graph(1), {1}) == {1}
    X = balanced_separator(cycle(4), {1, 2, 3, 4})
    assert len(X) == 2 and is_balanced_separator(cycle(4), {1, 2, 3, 4}, X)
    assert balanced_separator(path(3), set()) == set()


def test_separator_is_minimum():
    rng = random.Random(4)
    for _ in range(40):
        G = random_graph(rng, rng.randint(1, 8), 0.4)
        S = {v for v in G.vertices if rng.random() < 0.7}
        X = balanced_separator(G, S)
        assert is_balanced_separator(G, S, X)
        half = len(S) // 2
        for smaller in combinations(G.vertices, len(X) - 1) if X else []:
            comps = G.components(set(smaller))
            assert any(len(c & S) > half for c in comps)


def check_gef(G, gef):
    rep = gef.condition_report(G)
    assert rep["one_root"] and rep["children_ok"] and rep["max_children"] <= 7
    assert rep["topological_height"] <= 1 + ceil_log2(G.n)
    assert rep["subtree_sizes_ok"] and rep["grouping_ok"] and rep["height_ok"]
    gef.validate(G)
    F = gef.to_elimination_forest()
    assert validate_elim_forest(G, F) == gef.height


def test_gef_single_vertex():
    gef = build_gef(Graph(1))
    assert gef.parent == [-1] and gef.preimage == [[1]]


def test_gef_path_and_disconnected():
    check_gef(path(8), build_gef(path(8)))
    G = Graph(4, [(1, 2), (3, 4)])
    gef = build_gef(G)
    check_gef(G, gef)
    assert len(gef.roots) == 1


def test_gef_random_graphs():
    rng = random.Random(8)
    for _ in range(15):
        G = random_graph(rng, rng.randint(2, 14), 0.25)
        check_gef(G, build_gef(G))


def test_gef_rejects_bad_oracle():
    with pytest.raises(IntegrityError):
        build_gef(path(6), lambda G, S, U: set())


def test_tree_adjacency_from_graph():
    assert tree_adjacency(path(3)) == {1: {2}, 2: {1, 3}, 3: {2}}
