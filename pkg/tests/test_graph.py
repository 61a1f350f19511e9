"""Edge realization, Euler characteristic, connectivity, coverings."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from isograph.enhanced import GraphBuilder, sigma1
from isograph.graph import (
    CoveringError,
    Graph,
    GraphRealizationError,
    adjacency_csv,
    covering_map,
    euler_characteristic,
    graph_from_adjacency,
    graph_from_enhanced,
    is_bipartite,
    is_connected,
    to_dot,
    verify_covering,
)


def builder(p, l):
    return GraphBuilder(p, l, seed=0)


# ------------------------------------------------------- plain realization


def test_double_edge_realization():
    g = graph_from_adjacency([[0, 2], [2, 0]])
    assert g.oriented_edge_count == 4
    assert g.geometric_edge_count == 2
    assert g.fixed_edges == ()
    assert euler_characteristic(g) == 0
    assert is_connected(g)
    assert is_bipartite(g)
    for e in range(4):
        assert g.src[g.inv[e]] == g.dst[e]


def test_loop_realization():
    g = graph_from_adjacency([[2]])
    assert g.oriented_edge_count == 2
    assert g.inv == (1, 0)
    assert g.fixed_edges == ()
    assert not is_bipartite(g)
    assert euler_characteristic(g) == 0


def test_from_adjacency_rejections():
    with pytest.raises(GraphRealizationError):
        graph_from_adjacency([[1]])  # odd loop count
    with pytest.raises(GraphRealizationError):
        graph_from_adjacency([[0, 1], [2, 0]])  # asymmetric
    with pytest.raises(GraphRealizationError):
        graph_from_adjacency([[0, -1], [-1, 0]])
    with pytest.raises(GraphRealizationError):
        graph_from_adjacency([[0, 1]])


def test_post_init_rejects_inconsistent_edges():
    with pytest.raises(GraphRealizationError):
        Graph(
            n=2,
            src=(0, 1),
            dst=(1, 0),
            inv=(1, 0),
            adjacency=((0, 0), (0, 0)),  # disagrees with edge list
        )
    with pytest.raises(GraphRealizationError):
        Graph(
            n=2,
            src=(0, 1),
            dst=(1, 0),
            inv=(0, 1),  # fixes a non-loop
            adjacency=((0, 1), (1, 0)),
        )


def test_connectivity_and_bipartite_small_cases():
    two_parts = [[0, 2, 0, 0], [2, 0, 0, 0], [0, 0, 0, 2], [0, 0, 2, 0]]
    g = graph_from_adjacency(two_parts)
    assert not is_connected(g)
    assert is_bipartite(g)

    path = graph_from_adjacency([[0, 1, 0], [1, 0, 1], [0, 1, 0]])
    assert is_connected(path) and is_bipartite(path)

    triangle = graph_from_adjacency([[0, 1, 1], [1, 0, 1], [1, 1, 0]])
    assert is_connected(triangle) and not is_bipartite(triangle)

    square = graph_from_adjacency(
        [[0, 1, 0, 1], [1, 0, 1, 0], [0, 1, 0, 1], [1, 0, 1, 0]]
    )
    assert is_bipartite(square)


@settings(max_examples=60, deadline=None)
@given(
    st.integers(min_value=1, max_value=5).flatmap(
        lambda n: st.lists(
            st.lists(st.integers(min_value=0, max_value=3), min_size=n, max_size=n),
            min_size=n,
            max_size=n,
        )
    )
)
def test_symmetrized_matrices_always_realize(rows):
    n = len(rows)
    M = [[rows[i][j] + rows[j][i] for j in range(n)] for i in range(n)]
    g = graph_from_adjacency(M)
    total = sum(sum(r) for r in M)
    assert g.oriented_edge_count == total
    assert euler_characteristic(g) == n - total // 2
    assert g.fixed_edges == ()


# --------------------------------------------------- isogeny graph realization


def test_realized_13_5_level1():
    g = graph_from_enhanced(builder(13, 5).build(1))
    assert g.n == 1
    assert g.oriented_edge_count == 6
    # the dual involution fixes two loops; re-pairing clears them
    assert g.fixed_edges == ()
    assert euler_characteristic(g) == -2  # (13-1)(1-5)/24
    assert is_connected(g)
    assert not is_bipartite(g)
    assert g.is_regular() == 6


def test_realized_37_5_level1_keeps_forced_fixed_loops():
    g = graph_from_enhanced(builder(37, 5).build(1))
    assert g.n == 3
    fixed = g.fixed_edges
    assert len(fixed) == 2
    assert sorted(g.src[e] for e in fixed) == [0, 1]  # the odd-diagonal vertices
    for e in fixed:
        assert g.src[e] == g.dst[e]
    assert euler_characteristic(g) == -6  # (37-1)(1-5)/24
    assert g.is_regular() == 6


def test_euler_characteristic_formula_across_levels():
    for p, l, N in ((13, 5, 2), (13, 5, 6), (13, 7, 3), (37, 3, 2), (61, 7, 1)):
        eg = builder(p, l).build(N)
        g = graph_from_enhanced(eg)
        nu = eg.n
        assert euler_characteristic(g) == nu * (1 - l) // 2
        if N == 1:
            assert euler_characteristic(g) == (p - 1) * (1 - l) // 24


def test_realized_graphs_connected_nonbipartite():
    for p, l, N in ((13, 5, 6), (37, 7, 1), (61, 3, 1)):
        g = graph_from_enhanced(builder(p, l).build(N))
        assert is_connected(g)
        assert not is_bipartite(g)


# --------------------------------------------------------------- coverings


def test_covering_chain_1_2_6():
    b = builder(13, 5)
    g1, g2, g6 = b.build(1), b.build(2), b.build(6)
    c62 = covering_map(g6, g2)
    assert c62.fiber_size == sigma1(3)
    verify_covering(g6, g2, c62)
    c21 = covering_map(g2, g1)
    assert c21.fiber_size == sigma1(2)
    verify_covering(g2, g1, c21)
    c61 = covering_map(g6, g1)
    assert c61.fiber_size == sigma1(6)
    verify_covering(g6, g1, c61)
    # composition of the chain equals the direct projection
    comp = tuple(c21.vertex_map[v] for v in c62.vertex_map)
    assert comp == c61.vertex_map


def test_covering_chain_1_3_6():
    b = builder(13, 5)
    g1, g3, g6 = b.build(1), b.build(3), b.build(6)
    c63 = covering_map(g6, g3)
    assert c63.fiber_size == sigma1(2)
    verify_covering(g6, g3, c63)
    c31 = covering_map(g3, g1)
    verify_covering(g3, g1, c31)


def test_covering_with_parity_violations():
    # the covering conditions do not involve the involution, so the
    # odd-diagonal graphs cover just as well
    b = builder(37, 5)
    g1, g2 = b.build(1), b.build(2)
    verify_covering(g2, g1, covering_map(g2, g1))


def test_covering_rejections():
    b = builder(13, 5)
    g2, g3 = b.build(2), b.build(3)
    with pytest.raises(CoveringError):
        covering_map(g2, g3)
    g7 = builder(13, 7).build(2)
    with pytest.raises(CoveringError):
        covering_map(g7, g2)


# ----------------------------------------------------------------- exports


def test_to_dot_and_csv():
    eg = builder(13, 5).build(2)
    g = graph_from_enhanced(eg)
    dot = to_dot(g)
    assert dot.startswith("graph isograph {")
    # a self-paired loop draws as its own stroke, so it counts fully here
    f = len(g.fixed_edges)
    assert dot.count(" -- ") == (g.oriented_edge_count - f) // 2 + f
    assert 'label="j=5 C[2:0]"' in dot
    csv = adjacency_csv(g)
    parsed = [[int(x) for x in line.split(",")] for line in csv.strip().splitlines()]
    assert tuple(tuple(r) for r in parsed) == eg.brandt
