"""Finite labeled graphs, Cayley balls, geodesic enumeration and fineness."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

from .errors import BallTooLarge, Disconnected, LengthBudgetExceeded
from .words import Alphabet, Word, ball_size, iter_reduced_words, product

ELEMENT = "element"
CONE = "cone"
TAG = "tag"
POINT = "point"

DEFAULT_BALL_CAP = 200_000
DEFAULT_GEODESIC_CAP = 100_000
DEFAULT_ARC_BUDGET = 20_000_000


@dataclass(frozen=True)
class VertexLabel:
    """Group element, cone vertex over a coset, parabolic tag, or a plain point.

    Plain points carry only a name; they label fixture graphs (grids,
    cycles) that are not Cayley balls.
    """

    kind: str
    word: Word | None = None
    peripheral: int | None = None
    name: str | None = None

    @classmethod
    def element(cls, w: Word) -> "VertexLabel":
        return cls(ELEMENT, word=w)

    @classmethod
    def cone(cls, rep: Word, peripheral: int) -> "VertexLabel":
        return cls(CONE, word=rep, peripheral=peripheral)

    @classmethod
    def tag(cls, peripheral: int) -> "VertexLabel":
        return cls(TAG, peripheral=peripheral)

    @classmethod
    def point(cls, name: str) -> "VertexLabel":
        return cls(POINT, name=name)


Path = tuple[int, ...]
Edge = tuple[int, int]


def edge_key(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


class LabeledGraph:
    """Immutable simple graph with labeled vertices.

    ``depth`` (optional) is the trusted-depth coordinate: word length for
    group elements of a Cayley ball, coset-representative length for cone
    vertices.  ``radius`` is the truncation radius it was built with.
    """

    def __init__(
        self,
        vertices: Sequence[VertexLabel],
        edges: Iterable[tuple[int, int]],
        alphabet: Alphabet | None = None,
        root: int | None = None,
        radius: int | None = None,
        depth: Sequence[int] | None = None,
    ):
        self.vertices: tuple[VertexLabel, ...] = tuple(vertices)
        self.alphabet = alphabet
        self.root = root
        self.radius = radius
        self.depth = None if depth is None else tuple(depth)
        self.index = {lab: i for i, lab in enumerate(self.vertices)}
        if len(self.index) != len(self.vertices):
            raise ValueError("duplicate vertex labels")
        n = len(self.vertices)
        es = set()
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range")
            k = edge_key(u, v)
            if k in es:
                raise ValueError(f"duplicate edge {k}")
            es.add(k)
        self.edges: tuple[Edge, ...] = tuple(sorted(es))
        self.edge_index = {e: k for k, e in enumerate(self.edges)}
        adj: list[list[int]] = [[] for _ in range(n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        self.adjacency: tuple[tuple[int, ...], ...] = tuple(tuple(sorted(a)) for a in adj)
        self._dist: np.ndarray | None = None
        self._edge_array: np.ndarray | None = None

    def __len__(self) -> int:
        return len(self.vertices)

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def m(self) -> int:
        return len(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return edge_key(u, v) in self.edge_index

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def edge_array(self) -> np.ndarray:
        if self._edge_array is None:
            self._edge_array = np.array(self.edges, dtype=np.int64).reshape(-1, 2)
        return self._edge_array

    def csgraph(self) -> csr_matrix:
        n = self.n
        if not self.edges:
            return csr_matrix((n, n))
        e = np.array(self.edges)
        rows = np.concatenate([e[:, 0], e[:, 1]])
        cols = np.concatenate([e[:, 1], e[:, 0]])
        return csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(n, n))

    def distance_matrix(self) -> np.ndarray:
        """All-pairs hop distances; -1 marks disconnected pairs."""
        if self._dist is None:
            d = shortest_path(self.csgraph(), method="D", unweighted=True)
            d[np.isinf(d)] = -1
            self._dist = d.astype(np.int64)
            self._dist.setflags(write=False)
        return self._dist

    def distances_from(self, u: int) -> np.ndarray:
        if self._dist is not None:
            return self._dist[u]
        dist = np.full(self.n, -1, dtype=np.int64)
        dist[u] = 0
        queue = deque([u])
        while queue:
            x = queue.popleft()
            for y in self.adjacency[x]:
                if dist[y] < 0:
                    dist[y] = dist[x] + 1
                    queue.append(y)
        return dist

    def distance(self, u: int, v: int) -> int:
        return int(self.distance_matrix()[u, v])

    def is_connected(self) -> bool:
        return self.n == 0 or bool((self.distances_from(0) >= 0).all())

    def is_tree(self) -> bool:
        return self.is_connected() and self.m == self.n - 1

    def label_text(self, i: int) -> str:
        lab = self.vertices[i]
        if lab.kind == POINT:
            return lab.name or ""
        if lab.kind == TAG:
            return str(lab.peripheral)
        assert lab.word is not None
        if self.alphabet is not None:
            return self.alphabet.format(lab.word)
        return " ".join(str(x) for x in lab.word.letters)

    def element(self, text: str | Word) -> int:
        """Index of a group-element vertex, by word or its text form."""
        w = text if isinstance(text, Word) else self.alphabet.parse(text)
        try:
            return self.index[VertexLabel.element(w)]
        except KeyError:
            raise KeyError(f"element {text!r} not in graph") from None

    def point(self, name: str) -> int:
        return self.index[VertexLabel.point(name)]

    def cone(self, rep: str | Word, peripheral: int) -> int:
        w = rep if isinstance(rep, Word) else self.alphabet.parse(rep)
        return self.index[VertexLabel.cone(w, peripheral)]

    def trusted(self, margin: int | None = None) -> list[int]:
        """Vertices at depth <= radius - margin (all vertices if no depth)."""
        if self.depth is None or self.radius is None:
            return list(range(self.n))
        if margin is None:
            margin = self.radius // 4
        limit = self.radius - margin
        return [i for i, d in enumerate(self.depth) if d <= limit]


def cayley_ball(
    alphabet: Alphabet,
    radius: int,
    cap: int = DEFAULT_BALL_CAP,
    edge_generators: Iterable[int] | None = None,
) -> LabeledGraph:
    """Ball of the given radius in the Cayley graph of the free group.

    Vertices are all reduced words of length <= radius in shortlex order
    (identity first); edges join g and g*s for each generator s.
    ``edge_generators`` restricts which generators contribute edges.
    """
    if radius < 0:
        raise ValueError("radius must be non-negative")
    if alphabet.rank == 0:
        raise ValueError("empty basis")
    size = ball_size(alphabet.rank, radius)
    if size > cap:
        raise BallTooLarge(f"ball of radius {radius} has {size} vertices (cap {cap})")
    words = list(iter_reduced_words(alphabet.rank, radius))
    index = {w: i for i, w in enumerate(words)}
    gens = range(alphabet.rank) if edge_generators is None else sorted(set(edge_generators))
    edges = []
    for i, w in enumerate(words):
        for g in gens:
            j = index.get(product(w, Word((g + 1,))))
            if j is not None:
                edges.append((i, j))
    return LabeledGraph(
        [VertexLabel.element(w) for w in words],
        edges,
        alphabet=alphabet,
        root=0,
        radius=radius,
        depth=[len(w) for w in words],
    )


def grid_graph(rows: int, cols: int | None = None) -> LabeledGraph:
    cols = rows if cols is None else cols
    names = [f"{i},{j}" for i in range(rows) for j in range(cols)]
    edges = []
    for i in range(rows):
        for j in range(cols):
            k = i * cols + j
            if i + 1 < rows:
                edges.append((k, k + cols))
            if j + 1 < cols:
                edges.append((k, k + 1))
    return LabeledGraph([VertexLabel.point(s) for s in names], edges, root=0)


def cycle_graph(n: int) -> LabeledGraph:
    return LabeledGraph(
        [VertexLabel.point(str(i)) for i in range(n)],
        [(i, (i + 1) % n) for i in range(n)],
        root=0,
    )


class Geodesics(NamedTuple):
    paths: list[Path]
    truncated: bool


def geodesics_between(g: LabeledGraph, u: int, v: int, cap: int = DEFAULT_GEODESIC_CAP) -> Geodesics:
    """All geodesics from u to v, walking the distance-layered DAG."""
    du = g.distances_from(u)
    dv = g.distances_from(v)
    if du[v] < 0:
        raise Disconnected(f"no path between {u} and {v}")
    total = int(du[v])
    paths: list[Path] = []
    path = [u]

    def walk(x: int) -> bool:
        if x == v:
            paths.append(tuple(path))
            return len(paths) <= cap
        for y in g.adjacency[x]:
            if du[y] == du[x] + 1 and dv[y] == total - du[y]:
                path.append(y)
                ok = walk(y)
                path.pop()
                if not ok:
                    return False
        return True

    walk(u)
    truncated = len(paths) > cap
    return Geodesics(paths[:cap], truncated)


def count_geodesics(g: LabeledGraph, u: int, v: int) -> int:
    du = g.distances_from(u)
    dv = g.distances_from(v)
    if du[v] < 0:
        raise Disconnected(f"no path between {u} and {v}")
    total = int(du[v])
    on = [x for x in range(g.n) if du[x] + dv[x] == total]
    on.sort(key=lambda x: du[x])
    ways = {u: 1}
    for x in on:
        if x == u:
            continue
        ways[x] = sum(ways.get(y, 0) for y in g.adjacency[x] if du[y] == du[x] - 1)
    return ways[v]


def distance_rows(g: LabeledGraph, sources: Sequence[int]) -> np.ndarray:
    """Hop distances from each source (-1 if unreachable), without forcing the full matrix."""
    if g._dist is not None:
        return g._dist[list(sources)]
    d = shortest_path(g.csgraph(), method="D", unweighted=True, indices=list(sources))
    d = np.atleast_2d(d)
    d[np.isinf(d)] = -1
    return d.astype(np.int64)


def interval(
    g: LabeledGraph, u: int, v: int, rows: tuple[np.ndarray, np.ndarray] | None = None
) -> tuple[np.ndarray, list[Edge]]:
    """Union of all u-v geodesics: vertex mask and edge list."""
    du, dv = rows if rows is not None else distance_rows(g, [u, v])
    total = du[v]
    if total < 0:
        raise Disconnected(f"no path between {u} and {v}")
    mask = (du + dv) == total
    if not g.edges:
        return mask, []
    e = g.edge_array()
    a, b = e[:, 0], e[:, 1]
    on = (du[a] + 1 + dv[b] == total) | (du[b] + 1 + dv[a] == total)
    return mask, [g.edges[k] for k in np.flatnonzero(on)]


class ArcCount(NamedTuple):
    count: int
    exact: bool


def simple_arcs_count(
    g: LabeledGraph, u: int, v: int, length: int, budget: int = DEFAULT_ARC_BUDGET
) -> int:
    """Number of simple arcs with exactly ``length`` edges from u to v.

    Raises LengthBudgetExceeded (with the lower bound in ``partial``) if the
    search expands more than ``budget`` nodes.
    """
    if length < 1:
        raise ValueError("length must be >= 1")
    dv = g.distances_from(v)
    if dv[u] < 0 or dv[u] > length:
        return 0
    adj = g.adjacency
    on_path = bytearray(g.n)
    on_path[u] = 1
    count = 0
    expanded = 0

    def dfs(x: int, remaining: int) -> None:
        nonlocal count, expanded
        expanded += 1
        if expanded > budget:
            raise LengthBudgetExceeded(f"arc search budget {budget} exhausted", partial=count)
        if remaining == 0:
            if x == v:
                count += 1
            return
        if x == v:
            return
        for y in adj[x]:
            if not on_path[y] and 0 <= dv[y] <= remaining - 1:
                on_path[y] = 1
                dfs(y, remaining - 1)
                on_path[y] = 0

    dfs(u, length)
    return count


def arc_counts_from(g: LabeledGraph, u: int, max_length: int, budget: int = DEFAULT_ARC_BUDGET) -> np.ndarray:
    """counts[L, w] = number of simple arcs of length L from u to w."""
    counts = np.zeros((max_length + 1, g.n), dtype=np.int64)
    adj = g.adjacency
    on_path = bytearray(g.n)
    on_path[u] = 1
    expanded = 0

    def dfs(x: int, length: int) -> None:
        nonlocal expanded
        expanded += 1
        if expanded > budget:
            raise LengthBudgetExceeded(f"arc search budget {budget} exhausted", partial=counts)
        counts[length, x] += 1
        if length == max_length:
            return
        for y in adj[x]:
            if not on_path[y]:
                on_path[y] = 1
                dfs(y, length + 1)
                on_path[y] = 0

    dfs(u, 0)
    return counts


@dataclass
class FinenessProfile:
    max_counts: dict[int, int]
    argmax: dict[int, tuple[int, int]]

    def to_json(self):
        return {
            "max_counts": {str(k): v for k, v in sorted(self.max_counts.items())},
            "argmax": {str(k): list(v) for k, v in sorted(self.argmax.items())},
        }


def fineness_profile(g: LabeledGraph, max_length: int, budget: int = DEFAULT_ARC_BUDGET) -> FinenessProfile:
    """For each length L <= max_length, the max simple-arc count over vertex pairs."""
    if max_length < 1:
        raise ValueError("max_length must be >= 1")
    best = {L: 0 for L in range(1, max_length + 1)}
    arg: dict[int, tuple[int, int]] = {}
    for u in range(g.n):
        counts = arc_counts_from(g, u, max_length, budget)
        counts[:, u] = 0
        for L in range(1, max_length + 1):
            w = int(np.argmax(counts[L]))
            c = int(counts[L, w])
            if c > best[L]:
                best[L] = c
                arg[L] = (u, w)
    return FinenessProfile(best, arg)


def fineness_growth(profiles: dict[int, FinenessProfile]) -> list[int]:
    """Lengths whose max arc count strictly increases with every radius step."""
    radii = sorted(profiles)
    if len(radii) < 2:
        return []
    lengths = set.intersection(*(set(profiles[r].max_counts) for r in radii))
    flagged = []
    for L in sorted(lengths):
        vals = [profiles[r].max_counts[L] for r in radii]
        if all(a < b for a, b in zip(vals, vals[1:])):
            flagged.append(L)
    return flagged
