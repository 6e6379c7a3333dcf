"""Limit-set shadows, hull orbit counts and quasiconvexity verdicts.

H is dynamically quasiconvex iff the hull C of its limit
set has finitely many H-orbits of edges.  On a truncated ball the limit
set is shadowed by the deep part of the orbit H*1, and the count of edge
orbits is tracked as the radius grows.  Verdicts are evidence, not proof.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Callable, Iterable, Sequence

from .conedoff import PARABOLIC, ConeSpec, PeripheralStructure, build_coned_graph, peripheral_intersections
from .errors import EmptyShadow
from .flow import hull
from .floyd import ScalingFunction, default_cluster_eps, sphere_clusters
from .graph import ELEMENT, Edge, LabeledGraph, VertexLabel, cayley_ball, grid_graph
from .words import (
    IDENTITY,
    Alphabet,
    Endomorphism,
    Subgroup,
    Word,
    apply_endomorphism,
    evaluate,
    inverse,
    iter_reduced_words,
    product,
)

STABLE = "STABLE"
GROWING = "GROWING"
INCONCLUSIVE = "INCONCLUSIVE"

# back-compat alias: a subgroup descriptor is a generating list of words
SubgroupDescriptor = Subgroup


def limit_shadow(
    ball: LabeledGraph,
    H: Subgroup,
    depth: int,
    thicken: bool = False,
    f: ScalingFunction | None = None,
    eps=None,
) -> frozenset[int]:
    """Orbit points h*1 of the ball at word length >= depth.

    With ``thicken`` the shadow grows to the Floyd clusters (based at the
    identity) of the deep shell that contain orbit points.
    """
    if ball.radius is None or depth > ball.radius:
        raise ValueError("depth must not exceed the ball radius")
    pts = []
    for h in H.elements(ball.radius):
        if len(h) >= depth:
            i = ball.index.get(VertexLabel.element(h))
            if i is not None:
                pts.append(i)
    if not pts:
        raise EmptyShadow(f"orbit does not reach depth {depth} within radius {ball.radius}")
    if not thicken:
        return frozenset(pts)
    f = f or ScalingFunction.geometric()
    if eps is None:
        eps = default_cluster_eps(f, ball.radius)
    shell = [i for i, d in enumerate(ball.depth) if d >= depth]
    out = set(pts)
    for cluster in sphere_clusters(ball, ball.root, f, ball.radius, eps, vertices=shell):
        if out.intersection(cluster):
            out.update(cluster)
    return frozenset(out)


def classify_edges(edges: Sequence[Edge], related: Callable[[Edge, Edge], bool]) -> list[list[Edge]]:
    """Partition edges into classes of the equivalence generated by ``related``."""
    edges = sorted(edges)
    parent = list(range(len(edges)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, e1 in enumerate(edges):
        for j in range(i + 1, len(edges)):
            if find(i) != find(j) and related(e1, edges[j]):
                parent[find(j)] = find(i)
    groups: dict[int, list[Edge]] = {}
    for i, e in enumerate(edges):
        groups.setdefault(find(i), []).append(e)
    return sorted(groups.values(), key=lambda c: c[0])


def word_translation_relation(
    ball: LabeledGraph, H: Subgroup, max_length: int
) -> Callable[[Edge, Edge], bool]:
    """e1 ~ e2 iff h*e1 = e2 for some h in H of length <= max_length."""
    if H.is_free_factor:
        letters = H.letters

        def member(h: Word) -> bool:
            return len(h) <= max_length and h.generators_used() <= letters

    else:
        hs = set(H.elements(max_length))
        member = hs.__contains__
    words = [lab.word for lab in ball.vertices]

    def related(e1: Edge, e2: Edge) -> bool:
        a, b = words[e1[0]], words[e1[1]]
        inv_a = inverse(a)
        for c, d in ((words[e2[0]], words[e2[1]]), (words[e2[1]], words[e2[0]])):
            h = product(c, inv_a)
            if member(h) and product(h, b) == d:
                return True
        return False

    return related


@dataclass
class QCRecord:
    radius: int
    shadow_size: int
    hull_vertices: int
    hull_edges: int
    orbit_classes: int
    max_offshadow_degree: int


@dataclass
class QCReport:
    records: list[QCRecord]
    verdict: str
    window: int

    @property
    def counts(self) -> list[int]:
        return [r.orbit_classes for r in self.records]

    def to_json(self):
        return {"verdict": self.verdict, "window": self.window, "records": [asdict(r) for r in self.records]}

    def table(self) -> str:
        lines = ["radius  shadow  hull_V  hull_E  classes  max_deg"]
        for r in self.records:
            lines.append(
                f"{r.radius:>6}  {r.shadow_size:>6}  {r.hull_vertices:>6}  {r.hull_edges:>6}  "
                f"{r.orbit_classes:>7}  {r.max_offshadow_degree:>7}"
            )
        lines.append(f"verdict: {self.verdict} (window {self.window})")
        return "\n".join(lines)


def _record(radius, shadow, C, classes) -> QCRecord:
    deg: dict[int, int] = {}
    for u, v in C.edges:
        deg[u] = deg.get(u, 0) + 1
        deg[v] = deg.get(v, 0) + 1
    off = [deg.get(v, 0) for v in C.vertices if v not in shadow]
    return QCRecord(radius, len(shadow), len(C.vertices), len(C.edges), len(classes), max(off, default=0))


def subgroup_hull_orbit_count(ball: LabeledGraph, H: Subgroup, depth: int | None = None) -> QCRecord:
    """Hull of the limit shadow and the number of H-orbits of its edges.

    Translating elements are the h in H of length <= 2 * radius.
    """
    if depth is None:
        depth = ball.radius - 1 if ball.radius else 0
    shadow = limit_shadow(ball, H, depth)
    C = hull(ball, shadow)
    related = word_translation_relation(ball, H, 2 * ball.radius)
    classes = classify_edges(sorted(C.edges), related)
    return _record(ball.radius, shadow, C, classes)


def quasiconvexity_verdict(records: Sequence[QCRecord], window: int = 3) -> QCReport:
    """STABLE if the orbit count is constant over the last ``window`` radii,
    GROWING if it strictly increases there, INCONCLUSIVE otherwise."""
    records = sorted(records, key=lambda r: r.radius)
    if len(records) < 3:
        raise ValueError("a verdict needs at least 3 radii")
    radii = [r.radius for r in records]
    if len(set(radii)) != len(radii):
        raise ValueError("radii must be distinct")
    tail = [r.orbit_classes for r in records[-window:]]
    if len(set(tail)) == 1:
        verdict = STABLE
    elif all(a < b for a, b in zip(tail, tail[1:])):
        verdict = GROWING
    else:
        verdict = INCONCLUSIVE
    return QCReport(list(records), verdict, window)


def qc_sweep(
    alphabet: Alphabet, H: Subgroup, radii: Sequence[int], depth_margin: int = 1, window: int = 3
) -> QCReport:
    """Orbit counts over Cayley balls of increasing radius; shadow depth = radius - depth_margin."""
    records = []
    for r in radii:
        ball = cayley_ball(alphabet, r)
        records.append(subgroup_hull_orbit_count(ball, H, r - depth_margin))
    return quasiconvexity_verdict(records, window)


def grid_point(name: str) -> tuple[int, int]:
    i, j = name.split(",")
    return int(i), int(j)


def grid_diagonal_record(n: int) -> QCRecord:
    """Non-hyperbolic stand-in: the n x n grid with H = diagonal translations.

    The shadow is the pair of extreme diagonal orbit points (0,0) and
    (n-1,n-1); their hull is the whole grid.
    """
    g = grid_graph(n)
    shadow = frozenset({g.point("0,0"), g.point(f"{n - 1},{n - 1}")})
    C = hull(g, shadow)
    pts = [grid_point(lab.name) for lab in g.vertices]

    def related(e1: Edge, e2: Edge) -> bool:
        (a, b), (c, d) = (pts[e1[0]], pts[e1[1]]), (pts[e2[0]], pts[e2[1]])
        for x, y in ((c, d), (d, c)):
            k = x[0] - a[0]
            if x[1] - a[1] == k and y[0] - b[0] == k and y[1] - b[1] == k:
                return True
        return False

    classes = classify_edges(sorted(C.edges), related)
    return _record(n, shadow, C, classes)


def grid_diagonal_sweep(sizes: Sequence[int], window: int = 3) -> QCReport:
    return quasiconvexity_verdict([grid_diagonal_record(n) for n in sizes], window)


def default_w(alphabet: Alphabet, i: int) -> Word:
    """i-th free basis element of H <= A (1-based): x2^(i-1) (x1 x2) x2^-(i-1)."""
    x1 = Word((alphabet.index("x1") + 1,))
    x2 = Word((alphabet.index("x2") + 1,))
    c = x2 ** (i - 1)
    return product(product(c, product(x1, x2)), inverse(c))


@dataclass
class FreeinfReport:
    n: int
    m: int
    conj_bound: int
    word_bound: int
    radius: int
    trivial: bool
    w: list[str] = field(default_factory=list)
    z: list[str] = field(default_factory=list)
    phi_images: dict[str, str] = field(default_factory=dict)
    nielsen_roundtrip: bool = True
    basis_inverse_check: bool = True
    retraction_on_z: bool = True
    w_free_to_length: int = 0
    w_relation_found: bool = False
    intersection_verdict: str | None = None
    intersection_samples: int = 0
    intersection_conjugators: int = 0
    witnesses: list[list[str]] = field(default_factory=list)
    kernel_contains_p: bool = True
    injective_on_sample: bool = True
    R: list[list[str]] = field(default_factory=list)
    trees: dict[str, dict] = field(default_factory=dict)
    narrative: str = ""

    def to_json(self):
        return asdict(self)


def freeinf_alphabets(n: int, m: int) -> tuple[Alphabet, Alphabet]:
    xs = tuple(f"x{i + 1}" for i in range(n))
    ys = tuple(f"y{k + 1}" for k in range(m))
    zs = tuple(f"z{k + 1}" for k in range(m))
    return Alphabet((xs, ys) if m else (xs,)), Alphabet((xs, zs) if m else (xs,))


def _coned_tree_summary(alphabet: Alphabet, n: int, radius: int) -> dict:
    # The Bass-Serre tree of G = A * P with A-vertices blown up to Cayley
    # trees: A-letter edges plus one cone star per coset gP.
    ball = cayley_ball(alphabet, radius, edge_generators=range(n))
    peripheral = Subgroup.free_factor(range(n, alphabet.rank))
    bundle = build_coned_graph(ball, [ConeSpec(peripheral, PARABOLIC, inner=())])
    g = bundle.graph
    return {
        "vertices": g.n,
        "edges": g.m,
        "cone_vertices": len(bundle.coset_index),
        "connected": g.is_connected(),
        "tree": g.is_tree(),
        "partition": bundle.partition_counts(),
        "equivariance_violations": len(bundle.equivariance_violations()),
    }


def freeinf_scenario(
    n: int = 2, m: int = 3, conj_bound: int = 4, word_bound: int = 6, radius: int = 2, w_check_length: int = 4
) -> FreeinfReport:
    """Free-group scenario with two splittings G = A*P = A*Q and P ∩ g^-1 Q g = 1.

    G is free on X = {x1..xn} and the first m letters of Y; A = <X>,
    P = <Y>, Q = <Z> with z_k = y_k w_k for the free basis w_k of H <= A.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    if m < 0:
        raise ValueError("m must be non-negative")
    G, GZ = freeinf_alphabets(n, m)
    rep = FreeinfReport(n, m, conj_bound, word_bound, radius, trivial=(m == 0))
    if m == 0:
        rep.narrative = "trivial scenario: Y and Z are empty, so P = Q = 1 and no peripheral structure exists"
        rep.trees["T1"] = rep.trees["T2"] = {}
        return rep

    xs = [Word((i + 1,)) for i in range(n)]
    ys = [Word((n + k + 1,)) for k in range(m)]
    ws = [default_w(G, k + 1) for k in range(m)]
    zs = [product(y, w) for y, w in zip(ys, ws)]
    rep.w = [G.format(w) for w in ws]
    rep.z = [G.format(z) for z in zs]

    phi = Endomorphism({**{i: xs[i] for i in range(n)}, **{n + k: zs[k] for k in range(m)}})
    phi_inv = Endomorphism(
        {**{i: xs[i] for i in range(n)}, **{n + k: product(ys[k], inverse(ws[k])) for k in range(m)}}
    )
    gens = xs + ys
    rep.phi_images = {G.format(g): G.format(phi.apply(g)) for g in gens}
    rep.nielsen_roundtrip = all(product(z, inverse(w)) == y for y, z, w in zip(ys, zs, ws))
    rep.basis_inverse_check = all(phi_inv.apply(phi.apply(g)) == g and phi.apply(phi_inv.apply(g)) == g for g in gens)

    f = Endomorphism({**{i: xs[i] for i in range(n)}, **{n + k: IDENTITY for k in range(m)}})
    rep.retraction_on_z = all(apply_endomorphism(f, z) == w for z, w in zip(zs, ws))

    # bounded freeness check of W: no nontrivial reduced W-word collapses
    rep.w_free_to_length = w_check_length
    rep.w_relation_found = any(
        not evaluate(u, ws) for u in iter_reduced_words(m, w_check_length, min_length=1)
    )

    # the bounded witness search runs inside peripheral_intersections; its report is the evidence
    P = PeripheralStructure((Subgroup(tuple(ys)),))
    Q = PeripheralStructure((Subgroup(tuple(zs)),))
    R = peripheral_intersections(P, Q, conj_bound, retraction=f, word_bound=word_bound, rank=G.rank)
    (report,) = R.evidence
    rep.intersection_verdict = report.verdict
    rep.intersection_samples = report.samples
    rep.intersection_conjugators = report.conjugators
    rep.witnesses = [[G.format(x) for x in wit] for wit in report.witnesses]
    rep.kernel_contains_p = report.kernel_contains_p
    rep.injective_on_sample = report.injective_on_sample
    rep.R = [[G.format(w) for w in s.generators] for s in R]

    rep.trees["T1"] = _coned_tree_summary(G, n, radius)
    rep.trees["T2"] = _coned_tree_summary(GZ, n, radius)

    if not rep.R and report.consistent:
        rep.narrative = (
            "R is empty: no infinite intersection P ∩ g^-1 Q g was found, so the pullback-graph "
            "construction has no cone vertices and hence no parabolic points, although both "
            "splittings G = A*P and G = A*Q have parabolic points"
        )
    else:
        rep.narrative = "nontrivial intersection witnesses found; see witnesses"
    return rep
