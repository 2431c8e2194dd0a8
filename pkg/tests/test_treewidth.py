import itertools
import random

import pytest

from ppm.perm import Permutation, incidence_graph
from ppm.treewidth import (
    Graph,
    NiceDecomposition,
    TreeDecomposition,
    dump_decomposition,
    exact_treewidth,
    make_nice,
    min_fill_decomposition,
    parse_decomposition,
    td_from_elimination_order,
    validate_decomposition,
)


def path(n):
    return Graph.from_edges([(i, i + 1) for i in range(1, n)], vertices=range(1, n + 1))


def cycle(n):
    return Graph.from_edges([(i, i % n + 1) for i in range(1, n + 1)])


def clique(n):
    return Graph.from_edges(
        [(a, b) for a in range(1, n + 1) for b in range(a + 1, n + 1)],
        vertices=range(1, n + 1),
    )


def grid(rows, cols):
    edges = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c + 1
            if c + 1 < cols:
                edges.append((v, v + 1))
            if r + 1 < rows:
                edges.append((v, v + cols))
    return Graph.from_edges(edges, vertices=range(1, rows * cols + 1))


def random_graph(n, p, seed):
    rng = random.Random(seed)
    edges = [
        (a, b)
        for a in range(1, n + 1)
        for b in range(a + 1, n + 1)
        if rng.random() < p
    ]
    return Graph.from_edges(edges, vertices=range(1, n + 1))


def test_graph_rejects_bad_edges():
    with pytest.raises(ValueError):
        Graph([1, 2], [(1, 1)])
    with pytest.raises(ValueError):
        Graph([1, 2], [(1, 3)])


def test_min_fill_on_standard_graphs():
    for g, expected_width in [
        (path(6), 1),
        (cycle(6), 2),
        (clique(5), 4),
        (Graph([1], []), 0),
    ]:
        td = min_fill_decomposition(g)
        assert validate_decomposition(g, td)
        assert td.width == expected_width  # min-fill is exact on these


def test_min_fill_tie_break_is_deterministic():
    g = cycle(8)
    a = min_fill_decomposition(g)
    b = min_fill_decomposition(g)
    assert a == b


def test_td_from_elimination_order_always_valid():
    rng = random.Random(3)
    for seed in range(20):
        g = random_graph(rng.randint(1, 9), rng.random(), seed)
        order = list(g.vertices)
        rng.shuffle(order)
        td = td_from_elimination_order(g, order)
        assert validate_decomposition(g, td)


def test_validate_rejects_broken_decompositions():
    g = path(4)
    good = min_fill_decomposition(g)
    assert validate_decomposition(g, good)
    # missing vertex
    bad1 = TreeDecomposition((frozenset({1, 2}), frozenset({2, 3})), ((0, 1),))
    assert not validate_decomposition(g, bad1)
    # missing edge (3, 4)
    bad2 = TreeDecomposition(
        (frozenset({1, 2}), frozenset({2, 3}), frozenset({4})), ((0, 1), (1, 2))
    )
    assert not validate_decomposition(g, bad2)
    # disconnected occurrence of vertex 2
    bad3 = TreeDecomposition(
        (frozenset({1, 2}), frozenset({3, 4, 1}), frozenset({2, 3})),
        ((0, 1), (1, 2)),
    )
    assert not validate_decomposition(g, bad3)
    # not a tree (cycle needs bag count - 1 edges)
    bad4 = TreeDecomposition(
        (frozenset({1, 2}), frozenset({2, 3}), frozenset({3, 4})),
        ((0, 1), (1, 2), (2, 0)),
    )
    assert not validate_decomposition(g, bad4)


def test_exact_treewidth_known_values():
    assert exact_treewidth(path(7))[0] == 1
    assert exact_treewidth(cycle(7))[0] == 2
    assert exact_treewidth(clique(6))[0] == 5
    assert exact_treewidth(grid(2, 4))[0] == 2
    assert exact_treewidth(grid(3, 4))[0] == 3
    assert exact_treewidth(Graph([1], []))[0] == 0
    assert exact_treewidth(Graph([1, 2, 3], []))[0] == 0


def test_exact_treewidth_returns_witness():
    for g in [path(5), cycle(6), clique(4), grid(3, 3), random_graph(9, 0.4, 1)]:
        w, td = exact_treewidth(g)
        assert validate_decomposition(g, td)
        assert td.width == w


def test_exact_treewidth_respects_vertex_limit():
    with pytest.raises(ValueError):
        exact_treewidth(clique(17))
    # explicit override admits larger graphs
    w, td = exact_treewidth(grid(2, 9), vertex_limit=18)
    assert w == 2
    assert validate_decomposition(grid(2, 9), td)


def test_exact_is_at_most_min_fill():
    for seed in range(15):
        g = random_graph(8, 0.35, seed + 100)
        w, _ = exact_treewidth(g)
        assert w <= min_fill_decomposition(g).width


def test_incidence_graphs_exact_vs_min_fill():
    # incidence graphs are unions of two paths; their treewidth is NOT
    # bounded by a constant, but exact <= min-fill always holds and both
    # must produce valid decompositions
    rng = random.Random(9)
    for n in (4, 6, 8, 10):
        p = Permutation.random(n, rng)
        ig = incidence_graph(p)
        g = Graph.from_edges(ig.edge_set(), vertices=range(1, n + 1))
        w, td = exact_treewidth(g)
        assert validate_decomposition(g, td)
        mf = min_fill_decomposition(g)
        assert validate_decomposition(g, mf)
        assert 1 <= w <= mf.width


def _check_nice(nd: NiceDecomposition, g: Graph, td: TreeDecomposition):
    nodes = nd.nodes
    assert nodes[-1].bag == ()
    seen_children = set()
    for i, nd_node in enumerate(nodes):
        for c in nd_node.children:
            assert c < i
            seen_children.add(c)
        if nd_node.kind == "leaf":
            assert nd_node.bag == () and not nd_node.children
        elif nd_node.kind == "introduce":
            (c,) = nd_node.children
            assert set(nodes[c].bag) | {nd_node.var} == set(nd_node.bag)
            assert nd_node.var not in nodes[c].bag
        elif nd_node.kind == "forget":
            (c,) = nd_node.children
            assert set(nodes[c].bag) - {nd_node.var} == set(nd_node.bag)
            assert nd_node.var in nodes[c].bag
        elif nd_node.kind == "join":
            a, b = nd_node.children
            assert nodes[a].bag == nodes[b].bag == nd_node.bag
        else:
            raise AssertionError(nd_node.kind)
    # exactly one root (the last node)
    assert seen_children == set(range(len(nodes))) - {len(nodes) - 1}
    assert nd.width <= td.width
    # rebuild a plain decomposition from the nice nodes and validate it
    rebuilt = TreeDecomposition(
        tuple(frozenset(nd_node.bag) for nd_node in nodes),
        tuple(
            (c, i)
            for i, nd_node in enumerate(nodes)
            for c in nd_node.children
        ),
    )
    assert validate_decomposition(g, rebuilt)


def test_make_nice_on_standard_graphs():
    for g in [path(6), cycle(6), clique(4), grid(3, 3), Graph([1], [])]:
        td = min_fill_decomposition(g)
        nd = make_nice(td)
        _check_nice(nd, g, td)


def test_make_nice_on_random_graphs():
    for seed in range(12):
        g = random_graph(seed % 7 + 2, 0.45, seed + 50)
        td = min_fill_decomposition(g)
        _check_nice(make_nice(td), g, td)


def test_dump_parse_round_trip():
    td = min_fill_decomposition(grid(3, 3))
    text = dump_decomposition(td)
    back = parse_decomposition(text)
    assert back.bags == td.bags
    assert set(back.tree_edges) == set(td.tree_edges)
