"""Floyd scaling functions and Floyd metrics on finite graphs.

Edge e gets length f(d(v, e)) where d(v, e) is the distance from the base
vertex v to the nearer endpoint of e.  Geometric scaling with a rational
ratio is computed exactly; polynomial scaling uses floats.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components, dijkstra
from scipy.special import zeta

from .errors import Disconnected, NotGeodesic
from .graph import LabeledGraph

FLOAT_TOL = 1e-12
_EXACT_FLOAT_LIMIT = 2**53


def _as_number(x) -> Fraction | float:
    if isinstance(x, (Fraction, float)):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x)
        except ValueError:
            return float(x)
    return float(x)


@dataclass(frozen=True)
class ScalingFunction:
    """Summable f with 1 >= f(n+1)/f(n) >= lam.

    geometric: f(n) = mu**n, 0 < mu < 1, lam = mu.
    polynomial: f(n) = (1 + n)**(-s), s > 1, lam = 2**(-s).
    """

    kind: str
    param: Fraction | float
    lam_override: Fraction | float | None = field(default=None)

    def __post_init__(self):
        object.__setattr__(self, "param", _as_number(self.param))
        if self.lam_override is not None:
            object.__setattr__(self, "lam_override", _as_number(self.lam_override))
        if self.kind == "geometric":
            if not 0 < self.param < 1:
                raise ValueError("geometric ratio must lie in (0, 1)")
        elif self.kind == "polynomial":
            if not self.param > 1:
                raise ValueError("polynomial exponent must exceed 1")
            object.__setattr__(self, "param", float(self.param))
        else:
            raise ValueError(f"unknown scaling kind {self.kind!r}")
        if self.lam_override is not None:
            if not 0 < self.lam_override <= self.certified_lambda:
                raise ValueError(
                    f"lambda {self.lam_override} exceeds the certified ratio bound {self.certified_lambda}"
                )

    @classmethod
    def geometric(cls, mu="1/2") -> "ScalingFunction":
        return cls("geometric", mu)

    @classmethod
    def polynomial(cls, s=2.0) -> "ScalingFunction":
        return cls("polynomial", s)

    @property
    def exact(self) -> bool:
        return self.kind == "geometric" and isinstance(self.param, Fraction)

    @property
    def certified_lambda(self) -> Fraction | float:
        if self.kind == "geometric":
            return self.param
        return 2.0 ** (-self.param)

    @property
    def lam(self) -> Fraction | float:
        return self.certified_lambda if self.lam_override is None else self.lam_override

    def __call__(self, n: int) -> Fraction | float:
        if self.kind == "geometric":
            return self.param**n
        return (1.0 + n) ** (-self.param)

    def tail(self, k: int) -> Fraction | float:
        """Sum of f(n) over n >= k."""
        k = max(k, 0)
        if self.kind == "geometric":
            return self.param**k / (1 - self.param)
        return float(zeta(self.param, k + 1))

    def to_json(self):
        d = {"kind": self.kind, "param": str(self.param)}
        if self.lam_override is not None:
            d["lambda"] = str(self.lam_override)
        return d


def edge_depths(g: LabeledGraph, base: int) -> np.ndarray:
    """d(base, e) for every edge: distance to the nearer endpoint."""
    d = g.distances_from(base)
    if (d < 0).any():
        raise Disconnected("Floyd metric needs a connected graph")
    if not g.edges:
        return np.zeros(0, dtype=np.int64)
    e = np.array(g.edges)
    return np.minimum(d[e[:, 0]], d[e[:, 1]])


def floyd_weights(g: LabeledGraph, base: int, f: ScalingFunction) -> list:
    return [f(int(k)) for k in edge_depths(g, base)]


def floyd_distance(g: LabeledGraph, base: int, f: ScalingFunction, a: int, b: int) -> Fraction | float:
    """Floyd distance delta_{base,f}(a, b) by Dijkstra (exact for rational geometric f)."""
    weights = floyd_weights(g, base, f)
    return _dijkstra_to(g, weights, a, b)


def _dijkstra(g: LabeledGraph, weights: Sequence, source: int) -> dict[int, Fraction | float]:
    zero = weights[0] * 0 if weights else 0
    dist = {source: zero}
    heap = [(zero, source)]
    done = set()
    ei = g.edge_index
    while heap:
        dx, x = heapq.heappop(heap)
        if x in done:
            continue
        done.add(x)
        for y in g.adjacency[x]:
            nd = dx + weights[ei[(x, y) if x < y else (y, x)]]
            if y not in dist or nd < dist[y]:
                dist[y] = nd
                heapq.heappush(heap, (nd, y))
    return dist


def _dijkstra_to(g, weights, a, b):
    dist = _dijkstra(g, weights, a)
    if b not in dist:
        raise Disconnected(f"{a} and {b} are not connected")
    return dist[b]


@dataclass
class FloydMatrix:
    """All-pairs Floyd distances from one base.

    Exact mode: ``values`` holds integers and the true distance is
    values / denominator.  Float mode: ``denominator`` is None.
    """

    base: int
    values: np.ndarray
    denominator: int | None

    def __getitem__(self, ij) -> Fraction | float:
        i, j = ij
        x = self.values[i, j]
        if self.denominator is None:
            return float(x)
        return Fraction(int(x), self.denominator)

    def as_float(self) -> np.ndarray:
        if self.denominator is None:
            return self.values
        return self.values.astype(float) / self.denominator


def _scaled_integer_weights(depths: np.ndarray, f: ScalingFunction, scale_depth: int) -> tuple[list[int], int]:
    p, q = f.param.numerator, f.param.denominator
    weights = [p ** int(k) * q ** (scale_depth - int(k)) for k in depths]
    return weights, q**scale_depth


def floyd_matrix(
    g: LabeledGraph, base: int, f: ScalingFunction, scale_depth: int | None = None
) -> FloydMatrix:
    """All-pairs Floyd distances based at ``base``.

    In exact mode every edge weight is scaled by q**scale_depth (mu = p/q) so
    all weights are integers; scipy's float Dijkstra is then exact as long as
    every path sum stays below 2**53, otherwise a pure-Python integer
    Dijkstra runs instead.
    """
    depths = edge_depths(g, base)
    n = g.n
    if not f.exact:
        w = np.array([f(int(k)) for k in depths], dtype=float)
        vals = _all_pairs_float(g, w)
        return FloydMatrix(base, vals, None)
    if scale_depth is None:
        scale_depth = int(depths.max()) if len(depths) else 0
    if len(depths) and scale_depth < int(depths.max()):
        raise ValueError("scale_depth below the deepest edge")
    weights, denom = _scaled_integer_weights(depths, f, scale_depth)
    if sum(weights) < _EXACT_FLOAT_LIMIT:
        vals = _all_pairs_float(g, np.array(weights, dtype=float))
        if np.isinf(vals).any():
            raise Disconnected("Floyd metric needs a connected graph")
        return FloydMatrix(base, np.rint(vals).astype(np.int64), denom)
    vals = np.empty((n, n), dtype=object)
    for a in range(n):
        dist = _dijkstra(g, weights, a)
        if len(dist) != n:
            raise Disconnected("Floyd metric needs a connected graph")
        for b, x in dist.items():
            vals[a, b] = x
    return FloydMatrix(base, vals, denom)


def _all_pairs_float(g: LabeledGraph, w: np.ndarray) -> np.ndarray:
    n = g.n
    if not g.edges:
        out = np.full((n, n), np.inf)
        np.fill_diagonal(out, 0.0)
        return out
    e = np.array(g.edges)
    rows = np.concatenate([e[:, 0], e[:, 1]])
    cols = np.concatenate([e[:, 1], e[:, 0]])
    mat = csr_matrix((np.concatenate([w, w]), (rows, cols)), shape=(n, n))
    return dijkstra(mat, directed=False)


@dataclass
class BaseChangeReport:
    u: int
    v: int
    base_distance: int
    bound: Fraction | float
    checked: int
    violations: list[tuple[int, int]]
    min_ratio: Fraction | float | None

    @property
    def ok(self) -> bool:
        return not self.violations


def base_change_check(
    g: LabeledGraph,
    f: ScalingFunction,
    u: int,
    v: int,
    pairs: Iterable[tuple[int, int]] | None = None,
    scale_depth: int | None = None,
) -> BaseChangeReport:
    """Check delta_u(a, b) >= lam**d(u, v) * delta_v(a, b) on the given pairs."""
    d = g.distance(u, v)
    if d < 0:
        raise Disconnected(f"bases {u} and {v} are not connected")
    if scale_depth is None and f.exact:
        scale_depth = int(max(edge_depths(g, u).max(initial=0), edge_depths(g, v).max(initial=0)))
    mu_ = floyd_matrix(g, u, f, scale_depth)
    mv = floyd_matrix(g, v, f, scale_depth)
    if pairs is None:
        ia, ib = np.triu_indices(g.n, 1)
    else:
        pl = list(pairs)
        ia = np.array([p[0] for p in pl], dtype=np.int64)
        ib = np.array([p[1] for p in pl], dtype=np.int64)
    du = mu_.values[ia, ib]
    dv = mv.values[ia, ib]
    lam = f.lam
    bound = lam**d
    if f.exact and isinstance(lam, Fraction):
        # integers: du * q^d >= p^d * dv
        lhs = du * (lam.denominator**d)
        rhs = dv * (lam.numerator**d)
        bad = np.flatnonzero(lhs < rhs)
    else:
        du_f, dv_f = np.asarray(du, dtype=float), np.asarray(dv, dtype=float)
        scale = 1.0 if mu_.denominator is None else 1.0 / mu_.denominator
        bad = np.flatnonzero(du_f * scale < float(bound) * dv_f * scale - FLOAT_TOL)
    violations = [(int(ia[k]), int(ib[k])) for k in bad]
    min_ratio = _min_ratio(du, dv, exact=mu_.denominator is not None)
    return BaseChangeReport(u, v, d, bound, len(ia), violations, min_ratio)


def _min_ratio(du: np.ndarray, dv: np.ndarray, exact: bool):
    nz = np.flatnonzero(np.asarray(dv, dtype=float) > 0)
    if not len(nz):
        return None
    r = np.asarray(du, dtype=float)[nz] / np.asarray(dv, dtype=float)[nz]
    k = int(nz[np.argmin(r)])
    if not exact:
        return float(r.min())
    best = Fraction(int(du[k]), int(dv[k]))
    while True:
        # confirm no pair beats the float argmin: du/dv < best  <=>  du*den < num*dv
        below = nz[du[nz] * best.denominator < best.numerator * dv[nz]]
        if not len(below):
            return best
        best = min(Fraction(int(du[j]), int(dv[j])) for j in below)


@dataclass
class BaseChangeScan:
    max_base_distance: int
    base_pairs: int
    checked: int
    violations: list[tuple[int, int, int, int]]  # (u, v, a, b)
    min_ratio: dict[int, Fraction | float]

    @property
    def ok(self) -> bool:
        return not self.violations


def base_change_scan(g: LabeledGraph, f: ScalingFunction, max_base_distance: int = 2) -> BaseChangeScan:
    """Base-change inequality over every base pair with 0 < d(u, v) <= max_base_distance
    and every vertex pair, using one all-pairs Floyd matrix per base."""
    n = g.n
    D = g.distance_matrix()
    if (D < 0).any():
        raise Disconnected("Floyd metric needs a connected graph")
    scale_depth = int(D.max()) if f.exact else None
    ia, ib = np.triu_indices(n, 1)
    condensed = []
    for b in range(n):
        fm = floyd_matrix(g, b, f, scale_depth)
        condensed.append(fm.values[ia, ib])
    lam = f.lam
    exact = f.exact and isinstance(lam, Fraction)
    violations = []
    min_ratio: dict[int, Fraction | float] = {}
    base_pairs = 0
    checked = 0
    for u in range(n):
        for v in np.flatnonzero((D[u] > 0) & (D[u] <= max_base_distance)):
            v = int(v)
            d = int(D[u, v])
            base_pairs += 1
            du, dv = condensed[u], condensed[v]
            if exact:
                lhs = du * (lam.denominator**d)
                rhs = dv * (lam.numerator**d)
                bad = np.flatnonzero(lhs < rhs)
            else:
                bad = np.flatnonzero(du < float(lam) ** d * dv - FLOAT_TOL)
            checked += len(du)
            for k in bad[:100]:
                violations.append((u, v, int(ia[k]), int(ib[k])))
            r = _min_ratio(du, dv, exact=f.exact)
            if r is not None and (d not in min_ratio or r < min_ratio[d]):
                min_ratio[d] = r
    return BaseChangeScan(max_base_distance, base_pairs, checked, violations, min_ratio)


class RayTail(NamedTuple):
    diameter: Fraction | float
    bound: Fraction | float
    offset: int


def check_geodesic(g: LabeledGraph, path: Sequence[int]) -> None:
    d = g.distances_from(path[0])
    for i, (x, y) in enumerate(zip(path, path[1:])):
        if not g.has_edge(x, y):
            raise NotGeodesic(f"vertices {x}, {y} at position {i} are not adjacent")
    for i, x in enumerate(path):
        if d[x] != i:
            raise NotGeodesic(f"position {i} is at distance {d[x]} from the start")


def ray_tail_diameter(g: LabeledGraph, base: int, f: ScalingFunction, ray: Sequence[int], k: int) -> RayTail:
    """Floyd diameter of ray[k:] with the summable-tail upper bound.

    Edge i of a geodesic ray starting at distance c from the base lies at
    depth >= i - c, so the tail diameter is at most
    (c - k)^+ f(0) + sum_{n >= max(k - c, 0)} f(n); the reported bound is
    twice that.
    """
    check_geodesic(g, ray)
    if not 0 <= k < len(ray):
        raise ValueError("k must index into the ray")
    c = g.distance(base, ray[0])
    weights = floyd_weights(g, base, f)
    tail = list(ray[k:])
    zero = weights[0] * 0 if weights else 0
    diam = zero
    for i, a in enumerate(tail[:-1]):
        dist = _dijkstra(g, weights, a)
        for b in tail[i + 1 :]:
            if dist[b] > diam:
                diam = dist[b]
    extra = max(c - k, 0)
    bound = 2 * (extra * f(0) + f.tail(max(k - c, 0)))
    return RayTail(diam, bound, c)


def default_cluster_eps(f: ScalingFunction, radius: int) -> Fraction | float:
    return 2 * f.tail(radius // 2)


def sphere_clusters(
    g: LabeledGraph,
    base: int,
    f: ScalingFunction,
    radius: int,
    eps: Fraction | float | None = None,
    vertices: Sequence[int] | None = None,
) -> list[list[int]]:
    """Single-linkage clusters of sphere vertices at Floyd distance <= eps.

    The sphere defaults to the vertices at hop distance ``radius`` from the
    base.  Clusters are sorted lists, ordered by their smallest vertex.
    """
    if eps is None:
        eps = default_cluster_eps(f, radius)
    d = g.distances_from(base)
    pts = list(vertices) if vertices is not None else [int(x) for x in np.flatnonzero(d == radius)]
    if not pts:
        return []
    fm = floyd_matrix(g, base, f)
    sub = fm.values[np.ix_(pts, pts)]
    if fm.denominator is None:
        close = sub <= float(eps) + FLOAT_TOL
    else:
        e = Fraction(eps)
        # values/denom <= e  <=>  values * e.den <= e.num * denom
        close = sub * e.denominator <= e.numerator * fm.denominator
    _, lab = connected_components(csr_matrix(close.astype(np.int8)), directed=False)
    groups: dict[int, list[int]] = {}
    for p, c in zip(pts, lab):
        groups.setdefault(int(c), []).append(p)
    return sorted((sorted(v) for v in groups.values()), key=lambda c: c[0])
