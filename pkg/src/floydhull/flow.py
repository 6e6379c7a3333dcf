"""Geodesic hulls, edge-avoidance entourages, visibility and hyperbolicity.

A pair (a, b) is u_e-small when some geodesic from a to b avoids the edge
e; u_F is the intersection of u_e over e in F.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

from .errors import CapExceeded, NoWitnessFound
from .floyd import ScalingFunction, check_geodesic, default_cluster_eps, sphere_clusters
from .graph import DEFAULT_GEODESIC_CAP, Edge, LabeledGraph, distance_rows, edge_key, geodesics_between, interval

EXHAUSTIVE = "exhaustive"


class Hull(NamedTuple):
    vertices: frozenset[int]
    edges: frozenset[Edge]


def _check_trusted(g: LabeledGraph, B: Iterable[int], margin: int | None) -> None:
    if margin is None:
        return
    ok = set(g.trusted(margin))
    outside = [b for b in B if b not in ok]
    if outside:
        raise ValueError(f"vertices {outside[:5]} lie outside the trusted depth (margin {margin})")


def hull(
    g: LabeledGraph,
    B: Iterable[int],
    margin: int | None = None,
    method: str = "interval",
    cap: int = DEFAULT_GEODESIC_CAP,
) -> Hull:
    """Union of all geodesics with both endpoints in B, constants included.

    ``method="interval"`` uses the distance characterization (x lies on an
    a-b geodesic iff d(a,x) + d(x,b) = d(a,b)) and never truncates;
    ``method="enumerate"`` walks every geodesic and raises CapExceeded (with
    the partial hull) when a pair has more than ``cap`` geodesics.
    """
    B = sorted(set(B))
    if not B:
        raise ValueError("hull of an empty set")
    _check_trusted(g, B, margin)
    verts: set[int] = set(B)
    edges: set[Edge] = set()
    if method == "interval":
        rows = distance_rows(g, B)
        for i, a in enumerate(B):
            for j in range(i + 1, len(B)):
                mask, es = interval(g, a, B[j], rows=(rows[i], rows[j]))
                verts.update(int(x) for x in np.flatnonzero(mask))
                edges.update(es)
    elif method == "enumerate":
        truncated = False
        for i, a in enumerate(B):
            for b in B[i + 1 :]:
                paths, trunc = geodesics_between(g, a, b, cap)
                truncated |= trunc
                for p in paths:
                    verts.update(p)
                    edges.update(edge_key(x, y) for x, y in zip(p, p[1:]))
        if truncated:
            raise CapExceeded("geodesic enumeration truncated", partial=Hull(frozenset(verts), frozenset(edges)))
    else:
        raise ValueError(f"unknown method {method!r}")
    return Hull(frozenset(verts), frozenset(edges))


@dataclass(frozen=True)
class EventualGeodesicSegment:
    """A geodesic core whose flagged ends stand for constant tails."""

    core: tuple[int, ...]
    left_stop: bool = False
    right_stop: bool = False

    def validate(self, g: LabeledGraph) -> "EventualGeodesicSegment":
        check_geodesic(g, self.core)
        return self

    @property
    def endpoints(self) -> tuple[int, int]:
        return self.core[0], self.core[-1]


def _distances_without(g: LabeledGraph, e: Edge) -> np.ndarray:
    n = g.n
    es = [x for x in g.edges if x != e]
    if not es:
        d = np.full((n, n), np.inf)
        np.fill_diagonal(d, 0)
        return d
    arr = np.array(es)
    rows = np.concatenate([arr[:, 0], arr[:, 1]])
    cols = np.concatenate([arr[:, 1], arr[:, 0]])
    mat = csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(n, n))
    return shortest_path(mat, method="D", unweighted=True)


class EntourageCache:
    """u_e-smallness matrices, computed once per edge."""

    def __init__(self, g: LabeledGraph):
        self.g = g
        self._small: dict[Edge, np.ndarray] = {}

    def small(self, e: Edge) -> np.ndarray:
        e = edge_key(*e)
        m = self._small.get(e)
        if m is None:
            if e not in self.g.edge_index:
                raise KeyError(f"{e} is not an edge")
            m = _distances_without(self.g, e) == self.g.distance_matrix()
            m.setflags(write=False)
            self._small[e] = m
        return m

    def small_F(self, F: Iterable[Edge]) -> np.ndarray:
        out = np.ones((self.g.n, self.g.n), dtype=bool)
        for e in F:
            out &= self.small(e)
        return out


def ue_small(g: LabeledGraph, e: Edge, a: int, b: int) -> bool:
    """True iff some geodesic from a to b avoids the edge e."""
    if a == b:
        return True
    e = edge_key(*e)
    if e not in g.edge_index:
        raise KeyError(f"{e} is not an edge")
    d = g.distances_from(a)
    target = d[b]
    # BFS from a without e, stopping at the target depth
    dist = {a: 0}
    frontier = [a]
    depth = 0
    while frontier and depth < target:
        nxt = []
        for x in frontier:
            for y in g.adjacency[x]:
                if y not in dist and edge_key(x, y) != e:
                    dist[y] = depth + 1
                    nxt.append(y)
        frontier = nxt
        depth += 1
    return dist.get(b) == target


def visibility_witness(
    g: LabeledGraph, A: Iterable[int], B: Iterable[int], cap: int = DEFAULT_GEODESIC_CAP
) -> frozenset[Edge]:
    """A finite edge set F met by every geodesic from A to B.

    Greedy set cover over the enumerated geodesics followed by a
    reverse-delete pass; small but not necessarily minimum.
    """
    A, B = sorted(set(A)), sorted(set(B))
    if not A or not B:
        raise ValueError("A and B must be nonempty")
    if set(A) & set(B):
        raise ValueError("A and B must be disjoint")
    paths = _geodesic_edge_sets(g, A, B, cap)
    uncovered = set(range(len(paths)))
    chosen: list[Edge] = []
    hits: dict[Edge, set[int]] = {}
    for k, es in enumerate(paths):
        for e in es:
            hits.setdefault(e, set()).add(k)
    while uncovered:
        best = max(sorted(hits), key=lambda e: len(hits[e] & uncovered))
        chosen.append(best)
        uncovered -= hits[best]
    for e in reversed(list(chosen)):
        rest = set(chosen) - {e}
        if all(es & rest for es in paths):
            chosen.remove(e)
    return frozenset(chosen)


def _geodesic_edge_sets(g, A, B, cap) -> list[frozenset[Edge]]:
    out = []
    for a in A:
        for b in B:
            paths, truncated = geodesics_between(g, a, b, cap)
            if truncated:
                raise CapExceeded(f"more than {cap} geodesics between {a} and {b}")
            out.extend(frozenset(edge_key(x, y) for x, y in zip(p, p[1:])) for p in paths)
    return out


def witness_hit_rate(g: LabeledGraph, A, B, F, cap: int = DEFAULT_GEODESIC_CAP) -> float:
    paths = _geodesic_edge_sets(g, sorted(set(A)), sorted(set(B)), cap)
    F = set(F)
    return sum(1 for es in paths if es & F) / len(paths) if paths else 1.0


class TriangleDelta(NamedTuple):
    delta: int
    witness: tuple[int, int, int] | None
    triangles: int


class _FarthestGeodesic:
    """far(y, z)[p] = max over geodesics gamma from y to z of d(p, gamma)."""

    def __init__(self, g: LabeledGraph):
        self.g = g
        self.D = g.distance_matrix()
        self._cache: dict[tuple[int, int], np.ndarray] = {}

    def __call__(self, y: int, z: int) -> np.ndarray:
        key = (y, z) if y <= z else (z, y)
        out = self._cache.get(key)
        if out is not None:
            return out
        y, z = key
        D = self.D
        dy, dz = D[y], D[z]
        total = dy[z]
        on = np.flatnonzero(dy + dz == total)
        order = on[np.argsort(-dy[on], kind="stable")]
        best: dict[int, np.ndarray] = {}
        for w in order:
            w = int(w)
            if w == z:
                best[w] = D[:, z]
                continue
            nxt = None
            for s in self.g.adjacency[w]:
                if dy[s] == dy[w] + 1 and dy[s] + dz[s] == total:
                    nxt = best[s] if nxt is None else np.maximum(nxt, best[s])
            best[w] = np.minimum(D[:, w], nxt)
        out = best[y]
        self._cache[key] = out
        return out


def thin_triangles(
    g: LabeledGraph,
    sample: str | Iterable[tuple[int, int, int]] = EXHAUSTIVE,
    margin: int | None = None,
) -> TriangleDelta:
    """Largest one-sided Hausdorff defect over geodesic triangles.

    For each triangle the defect of side [x, y] is the max over points p of
    [x, y] of d(p, [y, z] ∪ [x, z]), maximized over every choice of
    geodesic for each side.  The max over the other two sides' choices is
    computed exactly by a bottleneck pass over the geodesic DAG, so no
    geodesic enumeration (and no cap) is involved.
    """
    D = g.distance_matrix()
    far = _FarthestGeodesic(g)
    best, witness, count = 0, None, 0
    if isinstance(sample, str):
        if sample != EXHAUSTIVE:
            raise ValueError(f"unknown sample {sample!r}")
        V = g.trusted(margin)
        if (D[np.ix_(V, V)] < 0).any():
            raise ValueError("triangle scan needs a connected vertex set")
        table = np.stack([np.stack([far(y, z) for z in V]) for y in V]) if V else None
        for i, x in enumerate(V):
            for j, y in enumerate(V):
                mask = D[x] + D[y] == D[x, y]
                vals = np.minimum(table[j][:, mask], table[i][:, mask]).max(axis=1)
                k = int(np.argmax(vals))
                count += len(V)
                if vals[k] > best:
                    best, witness = int(vals[k]), (x, y, V[k])
        return TriangleDelta(best, witness, count)
    for x, y, z in sample:
        for a, b, c in ((x, y, z), (y, z, x), (z, x, y)):
            mask = D[a] + D[b] == D[a, b]
            v = int(np.minimum(far(b, c)[mask], far(a, c)[mask]).max())
            if v > best:
                best, witness = v, (a, b, c)
        count += 1
    return TriangleDelta(best, witness, count)


def thin_triangle_delta(g: LabeledGraph, sample=EXHAUSTIVE, margin: int | None = None) -> int:
    return thin_triangles(g, sample, margin).delta


@dataclass
class AltHyperbolicity:
    edge: Edge
    F: frozenset[Edge] | None
    spread: int | None  # max distance from e to a vertex of F
    delta: int | None
    verified: bool


def _edge_vertex_distance(D: np.ndarray, e: Edge) -> np.ndarray:
    return np.minimum(D[e[0]], D[e[1]])


def alt_property_holds(cache: EntourageCache, e: Edge, F: Iterable[Edge], verts: Sequence[int]) -> bool:
    """u_F^2 ⊂ u_e over all triples x, y, z in ``verts``."""
    sF = cache.small_F(F)[np.ix_(verts, verts)].astype(np.int64)
    se = cache.small(e)[np.ix_(verts, verts)]
    comp = (sF @ sF) > 0
    return not (comp & ~se).any()


def alt_hyperbolicity_delta(
    g: LabeledGraph,
    probe_edges: Iterable[Edge],
    margin: int | None = None,
    search_radius: int = 3,
    cache: EntourageCache | None = None,
) -> list[AltHyperbolicity]:
    """Per probe edge e, a set F with u_F^2 ⊂ u_e and delta = 1 + spread(F).

    u_F shrinks as F grows, so the smallest workable spread is found by
    testing the full edge ball F_r = {f : both ends within r of e} for
    r = 0, 1, ...; the winner is then thinned edge by edge while the
    property still holds.  Triples range over the trusted vertices.
    """
    cache = cache or EntourageCache(g)
    D = g.distance_matrix()
    verts = g.trusted(margin)
    out = []
    for e in probe_edges:
        e = edge_key(*e)
        de = _edge_vertex_distance(D, e)
        found = None
        for r in range(search_radius + 1):
            F = [f for f in g.edges if de[f[0]] <= r and de[f[1]] <= r]
            if alt_property_holds(cache, e, F, verts):
                found = F
                break
        if found is None:
            out.append(AltHyperbolicity(e, None, None, None, False))
            continue
        F = sorted(found, key=lambda f: (-max(de[f[0]], de[f[1]]), f))
        for f in list(F):
            trial = [x for x in F if x != f]
            if trial and alt_property_holds(cache, e, trial, verts):
                F = trial
        spread = int(max(max(de[f[0]], de[f[1]]) for f in F))
        out.append(AltHyperbolicity(e, frozenset(F), spread, 1 + spread, True))
    return out


def require_witnesses(results: Sequence[AltHyperbolicity]) -> None:
    missing = [r.edge for r in results if not r.verified]
    if missing:
        raise NoWitnessFound(f"no alt-hyperbolicity witness for edges {missing}")


@dataclass
class HorocycleReport:
    base: int
    ray_depth: int
    window: int
    eps: Fraction | float
    rays: int
    clusters: list[list[int]]
    candidates: list[tuple[tuple[int, ...], tuple[int, ...]]] = field(default_factory=list)

    @property
    def empty(self) -> bool:
        return not self.candidates


def horocycle_scan(
    g: LabeledGraph,
    base: int,
    f: ScalingFunction,
    ray_depth: int,
    cluster_eps: Fraction | float | None = None,
    window: int | None = None,
    cap: int = DEFAULT_GEODESIC_CAP,
) -> HorocycleReport:
    """Flag pairs of geodesic rays from ``base`` that end in one Floyd
    cluster yet leave the base in opposite directions.

    Rays run from the base to the sphere of radius ``ray_depth``.  A pair
    (r1, r2) is a candidate when its endpoints share a cluster and the
    concatenation r1^-1 r2 is geodesic on the window, i.e.
    d(r1[w], r2[w]) = 2w for w = ``window`` (default ray_depth // 2).
    """
    if window is None:
        window = max(ray_depth // 2, 1)
    if not 1 <= window <= ray_depth:
        raise ValueError("window must lie in [1, ray_depth]")
    if cluster_eps is None:
        cluster_eps = default_cluster_eps(f, ray_depth)
    d = g.distances_from(base)
    sphere = [int(v) for v in np.flatnonzero(d == ray_depth)]
    rays: list[tuple[int, ...]] = []
    for p in sphere:
        paths, truncated = geodesics_between(g, base, p, cap)
        if truncated or len(rays) + len(paths) > cap:
            raise CapExceeded(f"more than {cap} rays")
        rays.extend(paths)
    clusters = sphere_clusters(g, base, f, ray_depth, cluster_eps, vertices=sphere)
    cluster_of = {v: k for k, c in enumerate(clusters) for v in c}
    D = g.distance_matrix()
    by_cluster: dict[int, list[tuple[int, ...]]] = {}
    for r in rays:
        by_cluster.setdefault(cluster_of[r[-1]], []).append(r)
    candidates = []
    for k in sorted(by_cluster):
        rs = by_cluster[k]
        for i, r1 in enumerate(rs):
            for r2 in rs[i + 1 :]:
                if D[r1[window], r2[window]] == 2 * window:
                    candidates.append((r1, r2))
    return HorocycleReport(base, ray_depth, window, cluster_eps, len(rays), clusters, candidates)
