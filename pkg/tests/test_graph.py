import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from floydhull.errors import BallTooLarge, Disconnected, LengthBudgetExceeded
from floydhull.graph import (
    LabeledGraph,
    VertexLabel,
    arc_counts_from,
    cayley_ball,
    count_geodesics,
    cycle_graph,
    fineness_growth,
    fineness_profile,
    geodesics_between,
    grid_graph,
    interval,
    simple_arcs_count,
)
from floydhull.words import Alphabet

from oracles import all_geodesics, arc_count, fineness_max_counts, nx_graph


def test_cayley_ball_examples(F2):
    g = cayley_ball(F2, 2)
    assert (g.n, g.m) == (17, 16)
    assert cayley_ball(F2, 0).n == 1 and cayley_ball(F2, 0).m == 0
    p = cayley_ball(Alphabet.free(1), 3)
    assert (p.n, p.m) == (7, 6)
    assert sorted(p.degree(v) for v in range(7)) == [1, 1, 2, 2, 2, 2, 2]


@pytest.mark.parametrize("rank, radius", [(1, 6), (2, 6), (3, 4)])
def test_cayley_ball_is_tree_with_word_length_distance(rank, radius):
    g = cayley_ball(Alphabet.free(rank), radius)
    assert g.is_tree()
    d = g.distances_from(g.root)
    assert all(d[i] == len(lab.word) for i, lab in enumerate(g.vertices))


def test_ball_cap():
    with pytest.raises(BallTooLarge):
        cayley_ball(Alphabet.free(2), 12, cap=1000)


def test_graph_rejects_bad_edges():
    labs = [VertexLabel.point(str(i)) for i in range(3)]
    for edges in ([(0, 0)], [(0, 1), (1, 0)], [(0, 5)]):
        with pytest.raises(ValueError):
            LabeledGraph(labs, edges)


def test_adjacency_consistent(coned3):
    g = coned3.graph
    pairs = {(u, v) for u in range(g.n) for v in g.adjacency[u]}
    assert pairs == {(u, v) for u, v in g.edges} | {(v, u) for u, v in g.edges}


def test_geodesics_examples(tree2, square):
    a, b = tree2.element("a"), tree2.element("b")
    paths, trunc = geodesics_between(tree2, a, b)
    assert paths == [(a, tree2.root, b)] and not trunc
    assert geodesics_between(tree2, a, a).paths == [(a,)]
    ps = geodesics_between(square, 0, 2).paths
    assert sorted(ps) == [(0, 1, 2), (0, 3, 2)]


def test_geodesics_match_networkx(coned3):
    g = coned3.graph
    G = nx_graph(g)
    rng = np.random.default_rng(7)
    for u, v in rng.integers(0, g.n, size=(60, 2)):
        u, v = int(u), int(v)
        ours = sorted(geodesics_between(g, u, v).paths)
        assert ours == sorted(all_geodesics(G, u, v))
        assert all(len(p) - 1 == g.distance(u, v) for p in ours)
        assert count_geodesics(g, u, v) == len(ours)


def test_geodesics_cap_flags_truncation():
    g = grid_graph(4)
    paths, trunc = geodesics_between(g, 0, 15, cap=5)
    assert trunc and len(paths) == 5
    assert count_geodesics(g, 0, 15) == 20


def test_disconnected():
    g = LabeledGraph([VertexLabel.point("x"), VertexLabel.point("y")], [])
    with pytest.raises(Disconnected):
        geodesics_between(g, 0, 1)


def test_interval_is_union_of_geodesics():
    g = grid_graph(3, 4)
    G = nx_graph(g)
    for u, v in [(0, 11), (1, 8), (5, 5)]:
        mask, edges = interval(g, u, v)
        verts = {x for p in all_geodesics(G, u, v) for x in p}
        es = {tuple(sorted(e)) for p in all_geodesics(G, u, v) for e in zip(p, p[1:])}
        assert set(np.flatnonzero(mask)) == verts
        assert set(edges) == es


def test_simple_arcs_examples(tree2, coned4):
    e, a, aa = tree2.root, tree2.element("a"), tree2.element("a a")
    assert simple_arcs_count(tree2, e, aa, 2) == 1
    assert simple_arcs_count(tree2, e, a, 2) == 0
    g = coned4.graph
    assert simple_arcs_count(g, g.element(""), g.element("a"), 2) == 1


def test_simple_arcs_match_networkx(coned3):
    g = coned3.graph
    G = nx_graph(g)
    rng = np.random.default_rng(3)
    for u, v in rng.integers(0, g.n, size=(25, 2)):
        u, v = int(u), int(v)
        if u == v:
            continue
        for L in range(1, 6):
            c = simple_arcs_count(g, u, v, L)
            assert c == arc_count(G, u, v, L)
            assert c == simple_arcs_count(g, v, u, L)


def test_arc_budget():
    g = grid_graph(5)
    with pytest.raises(LengthBudgetExceeded) as exc:
        simple_arcs_count(g, 0, 24, 12, budget=50)
    assert exc.value.partial is not None


def test_fineness_trees(tree3):
    prof = fineness_profile(tree3, 6)
    assert max(prof.max_counts.values()) <= 1


def test_fineness_grid():
    assert fineness_profile(grid_graph(3), 4).max_counts[4] >= 2


def test_fineness_coned_matches_networkx(coned3):
    g = coned3.graph
    prof = fineness_profile(g, 4)
    assert prof.max_counts == fineness_max_counts(nx_graph(g), 4)
    for L, (u, v) in prof.argmax.items():
        assert simple_arcs_count(g, u, v, L) == prof.max_counts[L]


def theta_graph(k):
    # two poles joined by k paths of length 2: not fine as k grows
    labs = [VertexLabel.point(f"p{i}") for i in range(k + 2)]
    edges = [(0, i) for i in range(2, k + 2)] + [(1, i) for i in range(2, k + 2)]
    return LabeledGraph(labs, edges)


def test_fineness_growth_flags_growing_lengths():
    profs = {k: fineness_profile(theta_graph(k), 3) for k in (2, 3, 4)}
    assert [profs[k].max_counts[2] for k in (2, 3, 4)] == [2, 3, 4]
    assert fineness_growth(profs) == [2, 3]
    grids = {n: fineness_profile(grid_graph(n), 4) for n in (3, 4, 5)}
    assert fineness_growth(grids) == []
    trees = {r: fineness_profile(cayley_ball(Alphabet.free(2), r), 3) for r in (1, 2, 3)}
    assert fineness_growth(trees) == []


@settings(max_examples=25)
@given(st.integers(2, 5), st.integers(2, 5), st.data())
def test_arc_counts_from_rows_match_pairwise(rows, cols, data):
    g = grid_graph(rows, cols)
    u = data.draw(st.integers(0, g.n - 1))
    counts = arc_counts_from(g, u, 4)
    for v in range(g.n):
        if v != u:
            for L in range(1, 5):
                assert counts[L, v] == simple_arcs_count(g, u, v, L)


def test_cycle_and_grid_shapes():
    c = cycle_graph(8)
    assert c.m == 8 and all(c.degree(v) == 2 for v in range(8))
    gr = grid_graph(3)
    assert (gr.n, gr.m) == (9, 12)
    assert gr.point("1,1") == 4


def test_trusted_margin(tree4):
    assert len(tree4.trusted()) == 53  # default margin radius // 4 = 1
    assert len(tree4.trusted(0)) == tree4.n
