from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from floydhull.errors import CapExceeded, NoWitnessFound
from floydhull.floyd import ScalingFunction
from floydhull.flow import (
    AltHyperbolicity,
    EntourageCache,
    EventualGeodesicSegment,
    alt_hyperbolicity_delta,
    alt_property_holds,
    horocycle_scan,
    hull,
    require_witnesses,
    thin_triangle_delta,
    thin_triangles,
    ue_small,
    visibility_witness,
    witness_hit_rate,
)
from floydhull.errors import NotGeodesic
from floydhull.graph import cayley_ball, cycle_graph, edge_key, geodesics_between, grid_graph
from floydhull.words import Alphabet

import oracles
from oracles import nx_graph

HALF = ScalingFunction.geometric("1/2")


# hulls


def test_hull_axis_segment(tree3):
    g = tree3
    B = [g.element("a a"), g.element("A A")]
    h = hull(g, B)
    axis = ["A A", "A", "", "a", "a a"]
    assert h.vertices == {g.element(x) for x in axis}
    assert len(h.edges) == 4


def test_hull_singleton_and_square(tree3, square):
    p = tree3.element("a b")
    assert hull(tree3, [p]) == (frozenset({p}), frozenset())
    h = hull(square, [0, 2])
    assert h.vertices == set(range(4)) and h.edges == set(square.edges)


@pytest.mark.parametrize("fixture", ["tree3", "coned3", "grid"])
def test_hull_matches_enumeration_oracle(fixture, request):
    g = grid_graph(4) if fixture == "grid" else request.getfixturevalue(fixture)
    g = getattr(g, "graph", g)
    G = nx_graph(g)
    rng = np.random.default_rng(11)
    for _ in range(15):
        B = sorted(set(int(x) for x in rng.choice(g.n, size=rng.integers(1, 5))))
        verts, edges = oracles.hull(G, B)
        h = hull(g, B)
        assert h.vertices == verts and h.edges == edges
        assert hull(g, B, method="enumerate") == h


def test_hull_enumerate_cap():
    g = grid_graph(5)
    with pytest.raises(CapExceeded) as exc:
        hull(g, [0, 24], method="enumerate", cap=10)
    partial = exc.value.partial
    assert partial.vertices <= hull(g, [0, 24]).vertices


def test_hull_margin(tree4):
    with pytest.raises(ValueError):
        hull(tree4, [tree4.element("a a a a")], margin=1)


@pytest.mark.parametrize("fixture", ["tree3", "coned3", "grid"])
def test_hull_monotone_random_pairs(fixture, request):
    g = grid_graph(5) if fixture == "grid" else request.getfixturevalue(fixture)
    g = getattr(g, "graph", g)
    rng = np.random.default_rng(5)
    for _ in range(100):
        B2 = set(int(x) for x in rng.choice(g.n, size=rng.integers(2, 6), replace=False))
        B1 = set(list(B2)[: rng.integers(1, len(B2))])
        h1, h2 = hull(g, B1), hull(g, B2)
        assert B1 <= h1.vertices
        assert h1.vertices <= h2.vertices and h1.edges <= h2.edges


def test_tree_hull_of_pair_is_geodesic(tree3):
    for u, v in [(1, 30), (5, 44), (0, 52)]:
        (p,) = geodesics_between(tree3, u, v).paths
        assert hull(tree3, [u, v]).vertices == set(p)


# u_e smallness


def test_ue_small_examples(tree2, square):
    a, b = tree2.element("a"), tree2.element("b")
    e = edge_key(tree2.root, a)
    assert not ue_small(tree2, e, a, b)
    assert all(ue_small(tree2, f, a, a) for f in tree2.edges)
    assert all(ue_small(square, f, 0, 2) for f in square.edges)


@pytest.mark.parametrize("fixture", ["tree2", "square", "coned"])
def test_ue_small_symmetric_and_matches_oracle(fixture, request, F2):
    if fixture == "coned":
        from conftest import coned_axis

        g = coned_axis(F2, 2).graph
    else:
        g = request.getfixturevalue(fixture)
    G = nx_graph(g)
    cache = EntourageCache(g)
    for e in g.edges:
        S = cache.small(e)
        assert (S == S.T).all() and S.diagonal().all()
        for a in range(g.n):
            for b in range(a, g.n):
                want = oracles.small(G, e, a, b)
                assert S[a, b] == want == ue_small(g, e, a, b)


# visibility


def test_visibility_examples(tree2, square):
    g = tree2
    F = visibility_witness(g, [g.element("a a")], [g.element("b b")])
    assert len(F) == 1 and next(iter(F)) in {edge_key(g.root, g.element("a")), edge_key(g.root, g.element("b")),
                                            edge_key(g.element("a"), g.element("a a")), edge_key(g.element("b"), g.element("b b"))}
    u, v = g.root, g.element("a")
    assert visibility_witness(g, [u], [v]) == {edge_key(u, v)}
    assert len(visibility_witness(square, [0], [2])) >= 2
    with pytest.raises(ValueError):
        visibility_witness(g, [u], [u])


@pytest.mark.parametrize("fixture", ["tree3", "coned3", "grid"])
def test_visibility_hits_every_geodesic(fixture, request):
    g = grid_graph(4) if fixture == "grid" else request.getfixturevalue(fixture)
    g = getattr(g, "graph", g)
    G = nx_graph(g)
    rng = np.random.default_rng(2)
    for _ in range(20):
        pts = [int(x) for x in rng.choice(g.n, size=4, replace=False)]
        A, B = pts[:2], pts[2:]
        F = visibility_witness(g, A, B)
        for a in A:
            for b in B:
                assert all(oracles.path_edges(p) & F for p in oracles.all_geodesics(G, a, b))
        assert witness_hit_rate(g, A, B, F) == 1.0
        # reverse-delete leaves no redundant edge
        for f in F:
            assert witness_hit_rate(g, A, B, F - {f}) < 1.0


# thin triangles


def test_trees_have_zero_delta(tree4):
    assert thin_triangle_delta(tree4, margin=0) == 0
    assert thin_triangle_delta(cayley_ball(Alphabet.free(3), 2), margin=0) == 0


def test_grid_delta_grows():
    ds = [thin_triangle_delta(grid_graph(n)) for n in (3, 4, 5)]
    assert ds[0] < ds[1] < ds[2]
    assert ds == [2, 3, 4]


@pytest.mark.parametrize("n", [2, 3])
def test_grid_delta_matches_bruteforce(n):
    g = grid_graph(n)
    triples = [(x, y, z) for x in range(g.n) for y in range(g.n) for z in range(g.n)]
    assert thin_triangle_delta(g) == oracles.triangle_delta(nx_graph(g), triples)


def test_coned_delta_matches_bruteforce(F2):
    from conftest import coned_axis

    g = coned_axis(F2, 2).graph
    trip = list(combinations(range(g.n), 3))[::7]
    assert thin_triangles(g, sample=trip).delta == oracles.triangle_delta(nx_graph(g), trip)


def test_coned_delta_frozen(coned4):
    # regression: exhaustive scan of the radius-4 coned ball
    assert thin_triangle_delta(coned4.graph) == 1
    assert thin_triangle_delta(coned4.graph, margin=0) == 1


def test_sampled_delta_never_exceeds_exhaustive(square):
    g = grid_graph(4)
    full = thin_triangle_delta(g)
    rng = np.random.default_rng(1)
    trip = [tuple(int(x) for x in rng.choice(g.n, 3)) for _ in range(50)]
    assert thin_triangle_delta(g, sample=trip) <= full


# alt-hyperbolicity


def test_alt_trees(tree3):
    res = alt_hyperbolicity_delta(tree3, tree3.edges, margin=0)
    assert all(r.verified and r.F == {r.edge} and r.delta == 1 for r in res)


def test_alt_square_matches_bruteforce(square):
    G = nx_graph(square)
    verts = list(range(4))
    res = alt_hyperbolicity_delta(square, square.edges)
    D = square.distance_matrix()
    for r in res:
        assert r.delta == 2
        assert oracles.alt_holds(G, r.edge, r.F, verts)
        # brute force: the smallest spread over all working subsets is 1
        best = None
        for k in range(1, 5):
            for F in combinations(square.edges, k):
                if oracles.alt_holds(G, r.edge, F, verts):
                    spread = max(min(D[x, r.edge[0]], D[x, r.edge[1]]) for f in F for x in f)
                    best = spread if best is None else min(best, spread)
        assert 1 + best == r.delta
    # a lone edge is not enough on the square
    assert not oracles.alt_holds(G, (0, 1), [(0, 1)], verts)


def test_alt_property_matches_oracle_on_coned(F2):
    from conftest import coned_axis

    g = coned_axis(F2, 1).graph
    G = nx_graph(g)
    cache = EntourageCache(g)
    verts = list(range(g.n))
    for e in g.edges[:6]:
        for F in ([e], [f for f in g.edges if set(f) & set(e)]):
            assert alt_property_holds(cache, e, F, verts) == oracles.alt_holds(G, e, F, verts)


def test_alt_coned_cone_star_frozen(coned3):
    g = coned3.graph
    e = edge_key(g.root, g.cone("", 0))
    (r,) = alt_hyperbolicity_delta(g, [e])
    assert r.verified and r.spread == 1 and r.delta == 2


def test_alt_no_witness_reported():
    g = grid_graph(5)
    (r,) = alt_hyperbolicity_delta(g, [g.edges[0]], search_radius=0)
    assert not r.verified
    with pytest.raises(NoWitnessFound):
        require_witnesses([r])
    require_witnesses([AltHyperbolicity((0, 1), frozenset({(0, 1)}), 0, 1, True)])


# horocycles and eventual geodesics


def test_horocycle_tree_empty(tree4):
    for depth in (2, 3, 4):
        assert horocycle_scan(tree4, tree4.root, HALF, depth).empty


def test_horocycle_cycle_flags_antipodal_arcs():
    g = cycle_graph(8)
    rep = horocycle_scan(g, 0, HALF, 4)
    assert len(rep.candidates) == 1
    r1, r2 = rep.candidates[0]
    assert r1[-1] == r2[-1] == 4 and set(r1[1:-1]).isdisjoint(r2[1:-1])


def test_horocycle_coned_frozen(coned4):
    g = coned4.graph
    assert horocycle_scan(g, g.root, HALF, 4).empty
    shallow = horocycle_scan(g, g.root, HALF, 2)
    assert len(shallow.candidates) == 9 and shallow.eps == 2


def test_horocycle_window_validation(tree3):
    with pytest.raises(ValueError):
        horocycle_scan(tree3, tree3.root, HALF, 2, window=3)


def test_eventual_geodesic_segment(tree2):
    seg = EventualGeodesicSegment((tree2.element("a"), tree2.root, tree2.element("b")), right_stop=True)
    assert seg.validate(tree2).endpoints == (tree2.element("a"), tree2.element("b"))
    with pytest.raises(NotGeodesic):
        EventualGeodesicSegment((tree2.root, tree2.element("a a"))).validate(tree2)


@settings(max_examples=30)
@given(st.integers(3, 6), st.integers(3, 6), st.data())
def test_grid_hull_is_rectangle(rows, cols, data):
    g = grid_graph(rows, cols)
    i1, i2 = sorted(data.draw(st.lists(st.integers(0, rows - 1), min_size=2, max_size=2)))
    j1, j2 = sorted(data.draw(st.lists(st.integers(0, cols - 1), min_size=2, max_size=2)))
    h = hull(g, [g.point(f"{i1},{j1}"), g.point(f"{i2},{j2}")])
    assert len(h.vertices) == (i2 - i1 + 1) * (j2 - j1 + 1)
