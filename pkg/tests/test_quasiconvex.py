import pytest

from floydhull.errors import EmptyShadow
from floydhull.graph import cayley_ball, grid_graph
from floydhull.quasiconvex import (
    GROWING,
    INCONCLUSIVE,
    STABLE,
    QCRecord,
    classify_edges,
    default_w,
    freeinf_alphabets,
    freeinf_scenario,
    grid_diagonal_record,
    grid_diagonal_sweep,
    grid_point,
    limit_shadow,
    qc_sweep,
    quasiconvexity_verdict,
    subgroup_hull_orbit_count,
    word_translation_relation,
)
from floydhull.flow import hull
from floydhull.words import Alphabet, Subgroup, Word, evaluate, iter_reduced_words, product

import oracles

A = Subgroup.free_factor([0])


@pytest.fixture(scope="module")
def ball6(F2):
    return cayley_ball(F2, 6)


def texts(g, vs):
    return sorted(g.label_text(v) for v in vs)


def test_shadow_examples(ball6, F2):
    assert texts(ball6, limit_shadow(ball6, A, 5)) == ["A A A A A", "A A A A A A", "a a a a a", "a a a a a a"]
    ab = Subgroup.parse(F2, ["a b"])
    assert texts(ball6, limit_shadow(ball6, ab, 5)) == ["B A B A B A", "a b a b a b"]
    whole = Subgroup.free_factor([0, 1])
    b3 = cayley_ball(F2, 3)
    assert limit_shadow(b3, whole, 3) == {v for v in range(b3.n) if b3.depth[v] == 3}


def test_shadow_errors(F2):
    b = cayley_ball(F2, 3)
    with pytest.raises(ValueError):
        limit_shadow(b, A, 4)
    big = Subgroup.parse(F2, ["a b a b"])
    with pytest.raises(EmptyShadow):
        limit_shadow(b, big, 1)


def test_thickened_shadow_contains_orbit(F2):
    b = cayley_ball(F2, 4)
    thin = limit_shadow(b, A, 3)
    thick = limit_shadow(b, A, 3, thicken=True)
    assert thin <= thick
    assert all(b.depth[v] >= 3 for v in thick)


def axis_oracle_count(ball, H_letter=1):
    # apply every a^k with |k| <= 2r to every hull edge
    shadow = limit_shadow(ball, A, ball.radius - 1)
    C = hull(ball, shadow)
    idx = ball.index
    words = [lab.word for lab in ball.vertices]

    def mover(h):
        def m(e):
            from floydhull.graph import VertexLabel, edge_key

            u = idx.get(VertexLabel.element(product(h, words[e[0]])))
            v = idx.get(VertexLabel.element(product(h, words[e[1]])))
            return None if u is None or v is None else edge_key(u, v)

        return m

    maps = [mover(h) for h in oracles.word_powers(H_letter, 2 * ball.radius)]
    return oracles.edge_orbits(sorted(C.edges), maps)


@pytest.mark.parametrize("radius", [4, 5, 6])
def test_axis_count_matches_oracle(radius, F2):
    b = cayley_ball(F2, radius)
    rec = subgroup_hull_orbit_count(b, A)
    assert rec.orbit_classes == axis_oracle_count(b) == 1
    assert rec.hull_edges == 2 * radius


def grid_oracle_count(n):
    g = grid_graph(n)
    C = hull(g, [g.point("0,0"), g.point(f"{n - 1},{n - 1}")])

    def shift(k):
        def m(e):
            from floydhull.graph import edge_key

            (a, b), (c, d) = grid_point(g.vertices[e[0]].name), grid_point(g.vertices[e[1]].name)
            try:
                return edge_key(g.point(f"{a + k},{b + k}"), g.point(f"{c + k},{d + k}"))
            except KeyError:
                return None

        return m

    return oracles.edge_orbits(sorted(C.edges), [shift(k) for k in range(-n, n + 1)])


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_grid_count_matches_oracle(n):
    rec = grid_diagonal_record(n)
    assert rec.orbit_classes == grid_oracle_count(n) == 4 * n - 4
    assert rec.hull_edges == 2 * n * (n - 1)


def test_whole_group_count_is_rank(F2):
    G3 = Alphabet.free(3)
    for alpha, rank in ((F2, 2), (G3, 3)):
        b = cayley_ball(alpha, 3)
        rec = subgroup_hull_orbit_count(b, Subgroup.free_factor(range(rank)), depth=3)
        assert rec.hull_edges == b.m and rec.orbit_classes == rank


def test_cyclic_ab_axis(ball6, F2):
    rec = subgroup_hull_orbit_count(ball6, Subgroup.parse(F2, ["a b"]))
    assert (rec.hull_edges, rec.orbit_classes) == (12, 2)


def test_classification_is_equivalence(ball6, F2):
    for H in (A, Subgroup.parse(F2, ["a b"])):
        C = hull(ball6, limit_shadow(ball6, H, 5))
        rel = word_translation_relation(ball6, H, 12)
        es = sorted(C.edges)
        for e in es:
            assert rel(e, e)
            for f in es:
                assert rel(e, f) == rel(f, e)
        classes = classify_edges(es, rel)
        # transitivity: members of a class are pairwise related (translations form a group)
        for c in classes:
            assert all(rel(c[0], f) for f in c)
        assert sorted(e for c in classes for e in c) == es


def test_offshadow_degree_bounded(F2):
    # finite-degree diagnostic, frozen on the fixtures
    for r in (4, 5, 6):
        assert subgroup_hull_orbit_count(cayley_ball(F2, r), A).max_offshadow_degree == 2
    assert all(grid_diagonal_record(n).max_offshadow_degree == 4 for n in (3, 4, 5))


def test_verdicts():
    rec = lambda r, c: QCRecord(r, 0, 0, 0, c, 0)  # noqa: E731
    assert quasiconvexity_verdict([rec(1, 5), rec(2, 1), rec(3, 1), rec(4, 1)]).verdict == STABLE
    assert quasiconvexity_verdict([rec(1, 1), rec(2, 2), rec(3, 3)]).verdict == GROWING
    assert quasiconvexity_verdict([rec(1, 1), rec(2, 3), rec(3, 2)]).verdict == INCONCLUSIVE
    assert quasiconvexity_verdict([rec(1, 1), rec(2, 2), rec(3, 2)], window=2).verdict == STABLE
    with pytest.raises(ValueError):
        quasiconvexity_verdict([rec(1, 1), rec(2, 1)])
    with pytest.raises(ValueError):
        quasiconvexity_verdict([rec(1, 1), rec(1, 1), rec(2, 1)])


def test_sweeps(F2):
    rep = qc_sweep(F2, A, [4, 5, 6, 7, 8])
    assert rep.verdict == STABLE and rep.counts == [1] * 5
    assert [r.radius for r in rep.records] == [4, 5, 6, 7, 8]
    grid = grid_diagonal_sweep([3, 4, 5, 6])
    assert grid.verdict == GROWING and grid.counts == [8, 12, 16, 20]
    assert "verdict: GROWING" in grid.table()


def test_default_w_is_free_basis():
    G, _ = freeinf_alphabets(2, 4)
    ws = [default_w(G, i) for i in range(1, 5)]
    assert G.format(ws[0]) == "x1 x2"
    for u in iter_reduced_words(4, 4, min_length=1):
        assert evaluate(u, ws)


@pytest.fixture(scope="module")
def freeinf_report():
    return freeinf_scenario(2, 3, 4, 6)


def test_freeinf_frozen(freeinf_report):
    rep = freeinf_report
    assert rep.intersection_verdict == "CONSISTENT" and rep.witnesses == []
    assert rep.R == []
    assert rep.nielsen_roundtrip and rep.basis_inverse_check and rep.retraction_on_z
    assert not rep.w_relation_found
    assert (rep.intersection_samples, rep.intersection_conjugators) == (23436, 8201)
    assert rep.z == ["y1 x1 x2", "y2 x2 x1", "y3 x2 x2 x1 X2"]
    for t in ("T1", "T2"):
        tree = rep.trees[t]
        assert tree["connected"] and tree["tree"]
        assert (tree["vertices"], tree["edges"], tree["cone_vertices"]) == (142, 141, 41)
        assert tree["equivariance_violations"] == 0


def test_freeinf_substitution_example():
    G, _ = freeinf_alphabets(2, 1)
    w1 = default_w(G, 1)
    z1 = product(G.parse("y1"), w1)
    assert G.format(product(z1, Word(tuple(-x for x in reversed(w1.letters))))) == "y1"


def test_freeinf_degenerate_and_validation():
    rep = freeinf_scenario(2, 0)
    assert rep.trivial and rep.intersection_verdict is None and rep.R == []
    with pytest.raises(ValueError):
        freeinf_scenario(1, 2)


def test_freeinf_direct_membership_oracle():
    # no g^-1 q g with g, q at small bounds lands in P = <Y> (letter check, no retraction)
    G, _ = freeinf_alphabets(2, 2)
    ws = [default_w(G, i) for i in (1, 2)]
    zs = [product(G.parse(f"y{k + 1}"), w) for k, w in enumerate(ws)]
    ys = {2, 3}
    qs = [evaluate(u, zs) for u in iter_reduced_words(2, 3, min_length=1)]
    for g in iter_reduced_words(G.rank, 2):
        ginv = Word(tuple(-x for x in reversed(g.letters)))
        for q in qs:
            c = product(product(ginv, q), g)
            assert not c.generators_used() <= ys
