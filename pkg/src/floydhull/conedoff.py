"""Peripheral structures and the coned-off pullback graph.

Edge provenance tags follow the four-part decomposition of the pullback
graph's edge set:

    G1_cone               cone-star edges over cosets gR
    G2_hyperbolic         translated inner edges of a hyperbolic-case subgroup
    G3_parabolic          translated edges of a parabolic-case subgroup's own
                          coned graph (its Cayley edges plus cones over its
                          sub-peripheral subgroups)
    G4_nonhorospherical   remaining edges of the input ball

An edge claimed by several parts keeps the first tag in that order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import DisconnectedResult, UnsupportedSubgroup
from .graph import CONE, ELEMENT, Edge, LabeledGraph, VertexLabel, edge_key
from .words import (
    Endomorphism,
    IntersectionReport,
    Subgroup,
    Word,
    coset_rep,
    iter_reduced_words,
    product,
    verify_trivial_intersection,
)

G1 = "G1_cone"
G2 = "G2_hyperbolic"
G3 = "G3_parabolic"
G4 = "G4_nonhorospherical"
TAGS = (G1, G2, G3, G4)

HYPERBOLIC = "hyperbolic"
PARABOLIC = "parabolic"


@dataclass(frozen=True)
class PeripheralStructure:
    """One subgroup per conjugacy class of peripheral subgroups."""

    subgroups: tuple[Subgroup, ...] = ()
    evidence: tuple = field(default=(), compare=False)

    def __post_init__(self):
        subs = tuple(self.subgroups)
        object.__setattr__(self, "subgroups", subs)
        for s in subs:
            if not s.generators:
                raise ValueError("peripheral subgroups must be infinite (nonempty generating set)")
        ff = [s.letters for s in subs if s.is_free_factor]
        if len(set(ff)) != len(ff):
            raise ValueError("peripheral subgroups must be pairwise non-conjugate")

    def __len__(self) -> int:
        return len(self.subgroups)

    def __iter__(self):
        return iter(self.subgroups)


def peripheral_intersections(
    P: PeripheralStructure,
    Q: PeripheralStructure,
    conj_bound: int,
    retraction: Endomorphism | None = None,
    word_bound: int = 6,
    rank: int | None = None,
) -> PeripheralStructure:
    """The structure R of infinite intersections P ∩ Q.

    Two free-factor subgroups of a common basis meet, up to conjugacy, only
    in the free factor on their shared letters.  Pairs that are not both
    free factors are handled when ``retraction`` kills one side: a bounded
    witness search over conjugators of length <= ``conj_bound`` (in an
    ambient basis of ``rank`` generators) must come back clean, and the
    intersection is then taken to be trivial.
    """
    found: list[Subgroup] = []
    evidence: list[IntersectionReport] = []
    conjugators: list[Word] | None = None
    for p in P:
        for q in Q:
            if p.is_free_factor and q.is_free_factor:
                common = p.letters & q.letters
                if common:
                    s = Subgroup.free_factor(common)
                    if s not in found:
                        found.append(s)
                continue
            if retraction is None:
                raise UnsupportedSubgroup("intersection of non-free-factor subgroups needs a retraction")
            if rank is None:
                raise UnsupportedSubgroup("retraction search needs the ambient rank")
            if conjugators is None:
                conjugators = list(iter_reduced_words(rank, conj_bound))
            killed, other = _killed_side(p, q, retraction)
            report = verify_trivial_intersection(
                killed.generators, other.generators, retraction, conjugators, word_bound
            )
            evidence.append(report)
            if not report.consistent or not report.injective_on_sample:
                raise UnsupportedSubgroup(
                    "nontrivial intersection found for a non-free-factor pair; cannot describe it"
                )
    return PeripheralStructure(tuple(found), tuple(evidence))


def _killed_side(p: Subgroup, q: Subgroup, f: Endomorphism) -> tuple[Subgroup, Subgroup]:
    if all(not f.apply(w) for w in p.generators):
        return p, q
    if all(not f.apply(w) for w in q.generators):
        return q, p
    raise UnsupportedSubgroup("retraction kills neither subgroup")


@dataclass(frozen=True)
class ConeSpec:
    """One cone subgroup with its case (hyperbolic or parabolic).

    ``inner``: words of the subgroup whose translates g*{r, r*w} form the
    subgroup's inner edges (default: its generators).  ``sub``: peripheral
    subgroups of a parabolic-case subgroup, coned inside its own graph.
    """

    subgroup: Subgroup
    mode: str = HYPERBOLIC
    inner: tuple[Word, ...] | None = None
    sub: tuple[Subgroup, ...] = ()

    def __post_init__(self):
        if self.mode not in (HYPERBOLIC, PARABOLIC):
            raise ValueError(f"unknown mode {self.mode!r}")
        if not self.subgroup.is_free_factor:
            raise UnsupportedSubgroup("cones are built over free-factor subgroups only")
        if self.inner is not None:
            object.__setattr__(self, "inner", tuple(self.inner))
            for w in self.inner:
                if not self.subgroup.contains(w):
                    raise ValueError("inner edge generator outside its subgroup")
        object.__setattr__(self, "sub", tuple(self.sub))
        if self.sub and self.mode != PARABOLIC:
            raise ValueError("sub-peripheral subgroups only apply to the parabolic case")
        for t in self.sub:
            if not t.is_free_factor or not t.letters <= self.subgroup.letters:
                raise UnsupportedSubgroup("sub-peripheral subgroups must be free factors inside their parent")

    @property
    def inner_words(self) -> tuple[Word, ...]:
        return self.subgroup.generators if self.inner is None else self.inner


@dataclass
class ConedGraphBundle:
    graph: LabeledGraph
    provenance: dict[Edge, str]
    coset_index: dict[int, tuple[Word, int]]
    specs: tuple[ConeSpec, ...]
    cone_subgroups: tuple[Subgroup, ...]  # by peripheral index (specs first, then sub-cones)

    def partition_counts(self) -> dict[str, int]:
        counts = {t: 0 for t in TAGS}
        for t in self.provenance.values():
            counts[t] += 1
        return counts

    def partition_exact(self) -> bool:
        return set(self.provenance) == set(self.graph.edges) and all(t in TAGS for t in self.provenance.values())

    def translate(self, s: Word, v: int) -> int | None:
        """Left translation of a vertex by s, or None if it leaves the graph."""
        lab = self.graph.vertices[v]
        if lab.kind == ELEMENT:
            return self.graph.index.get(VertexLabel.element(product(s, lab.word)))
        if lab.kind == CONE:
            sub = self.cone_subgroups[lab.peripheral]
            rep = coset_rep(product(s, lab.word), sub.letters)
            return self.graph.index.get(VertexLabel.cone(rep, lab.peripheral))
        return None

    def equivariance_violations(self, translations: Iterable[Word] | None = None) -> list[tuple[Word, Edge]]:
        """Edges whose in-graph translate is missing or carries another tag."""
        g = self.graph
        if translations is None:
            translations = [Word((i + 1,)) for i in range(g.alphabet.rank)]
            translations += [Word((-(i + 1),)) for i in range(g.alphabet.rank)]
        bad = []
        for s in translations:
            for e in g.edges:
                a, b = self.translate(s, e[0]), self.translate(s, e[1])
                if a is None or b is None:
                    continue
                k = edge_key(a, b)
                if self.provenance.get(k) != self.provenance[e]:
                    bad.append((s, e))
        return bad

    def cone_degree_mismatches(self) -> list[int]:
        """Cone vertices whose degree differs from the count of their coset elements in the ball."""
        g = self.graph
        members: dict[int, int] = {}
        for v, lab in enumerate(g.vertices):
            if lab.kind != ELEMENT:
                continue
            for idx, sub in enumerate(self.cone_subgroups):
                c = g.index.get(VertexLabel.cone(coset_rep(lab.word, sub.letters), idx))
                if c is not None:
                    members[c] = members.get(c, 0) + 1
        return [c for c in self.coset_index if g.degree(c) != members.get(c, 0)]


def build_coned_graph(ball: LabeledGraph, specs: Sequence[ConeSpec]) -> ConedGraphBundle:
    """Coned-off graph over the cosets of each subgroup in ``specs``.

    Vertices: the ball's group elements plus one cone vertex per coset gR
    meeting the ball (and, for parabolic-case subgroups, one per coset of
    each sub-peripheral subgroup).  Cone vertices are labeled by their
    shortest coset representative.
    """
    specs = tuple(specs)
    if ball.alphabet is None:
        raise ValueError("ball must carry its alphabet")
    elements = [v for v in ball.vertices if v.kind == ELEMENT]
    if len(elements) != ball.n:
        raise ValueError("input must be a Cayley ball of group elements")

    cone_subgroups = [s.subgroup for s in specs]
    sub_owner: list[int | None] = [None] * len(specs)
    for i, s in enumerate(specs):
        for t in s.sub:
            cone_subgroups.append(t)
            sub_owner.append(i)

    vertices = list(ball.vertices)
    depth = list(ball.depth) if ball.depth is not None else [len(v.word) for v in vertices]
    index = {lab: i for i, lab in enumerate(vertices)}
    coset_index: dict[int, tuple[Word, int]] = {}
    provenance: dict[Edge, str] = {}

    def claim(u: int, v: int, tag: str) -> None:
        provenance.setdefault(edge_key(u, v), tag)

    # cone vertices and their stars: G1 for the top-level subgroups, G3 for sub-cones
    stars = []
    for idx, sub in enumerate(cone_subgroups):
        letters = sub.letters
        for v, lab in enumerate(ball.vertices):
            rep = coset_rep(lab.word, letters)
            key = VertexLabel.cone(rep, idx)
            c = index.get(key)
            if c is None:
                c = len(vertices)
                vertices.append(key)
                index[key] = c
                depth.append(len(rep))
                coset_index[c] = (rep, idx)
            stars.append((c, v, G1 if sub_owner[idx] is None else G3))
    for c, v, tag in sorted(stars, key=lambda t: TAGS.index(t[2])):
        claim(c, v, tag)

    # inner edges g*{r, r*w}: G2 (hyperbolic) or G3 (parabolic)
    for spec in specs:
        tag = G2 if spec.mode == HYPERBOLIC else G3
        for w in spec.inner_words:
            for v, lab in enumerate(ball.vertices):
                j = ball.index.get(VertexLabel.element(product(lab.word, w)))
                if j is not None:
                    claim(v, j, tag)

    for u, v in ball.edges:
        claim(u, v, G4)

    graph = LabeledGraph(
        vertices,
        list(provenance),
        alphabet=ball.alphabet,
        root=ball.root,
        radius=ball.radius,
        depth=depth,
    )
    provenance = {e: provenance[e] for e in graph.edges}
    if not graph.is_connected():
        raise DisconnectedResult("coned graph is disconnected")
    return ConedGraphBundle(graph, provenance, coset_index, specs, tuple(cone_subgroups))


def cone_specs(
    structure: PeripheralStructure,
    modes: Sequence[str] | None = None,
    inner: Sequence[Sequence[Word] | None] | None = None,
) -> list[ConeSpec]:
    n = len(structure)
    modes = list(modes) if modes is not None else [HYPERBOLIC] * n
    inner = list(inner) if inner is not None else [None] * n
    return [
        ConeSpec(s, m, None if i is None else tuple(i))
        for s, m, i in zip(structure.subgroups, modes, inner)
    ]
