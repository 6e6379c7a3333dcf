"""Independent brute-force oracles, built on networkx and plain enumeration."""

from fractions import Fraction
from itertools import product as cartesian

import networkx as nx

from floydhull.words import Word


def nx_graph(g, weights=None):
    G = nx.Graph()
    G.add_nodes_from(range(g.n))
    for k, (u, v) in enumerate(g.edges):
        if weights is None:
            G.add_edge(u, v)
        else:
            G.add_edge(u, v, weight=weights[k])
    return G


def all_geodesics(G, u, v):
    return [tuple(p) for p in nx.all_shortest_paths(G, u, v)]


def path_edges(p):
    return {tuple(sorted(e)) for e in zip(p, p[1:])}


def arc_count(G, u, v, length):
    return sum(1 for p in nx.all_simple_paths(G, u, v, cutoff=length) if len(p) == length + 1)


def fineness_max_counts(G, max_length):
    best = {L: 0 for L in range(1, max_length + 1)}
    nodes = list(G.nodes)
    for u in nodes:
        counts = {}
        others = set(nodes) - {u}
        for p in nx.all_simple_paths(G, u, others, cutoff=max_length):
            key = (p[-1], len(p) - 1)
            counts[key] = counts.get(key, 0) + 1
        for (w, L), c in counts.items():
            best[L] = max(best[L], c)
    return best


def hull(G, B):
    verts, edges = set(B), set()
    B = sorted(B)
    for i, a in enumerate(B):
        for b in B[i + 1 :]:
            for p in all_geodesics(G, a, b):
                verts.update(p)
                edges |= path_edges(p)
    return verts, edges


def triangle_delta(G, triples):
    """Max over triangles, sides and geodesic choices of the one-sided defect."""
    dist = dict(nx.all_pairs_shortest_path_length(G))
    best = 0
    for x, y, z in triples:
        sides = {}
        for a, b in ((x, y), (y, z), (z, x)):
            sides[(a, b)] = all_geodesics(G, a, b)
        for g1, g2, g3 in cartesian(sides[(x, y)], sides[(y, z)], sides[(z, x)]):
            for side, others in ((g1, g2 + g3), (g2, g1 + g3), (g3, g1 + g2)):
                for p in side:
                    best = max(best, min(dist[p][q] for q in others))
    return best


def small(G, e, a, b):
    """Some a-b geodesic avoids e."""
    if a == b:
        return True
    return any(e not in path_edges(p) for p in all_geodesics(G, a, b))


def alt_holds(G, e, F, verts):
    sF = {(a, b) for a in verts for b in verts if all(small(G, f, a, b) for f in F)}
    return all(
        small(G, e, x, z) for x in verts for y in verts for z in verts if (x, y) in sF and (y, z) in sF
    )


def floyd_distances(g, base, f, source):
    d = nx.single_source_shortest_path_length(nx_graph(g), base)
    w = [f(min(d[u], d[v])) for u, v in g.edges]
    return nx.single_source_dijkstra_path_length(nx_graph(g, w), source)


def edge_orbits(edges, maps):
    """Union-find of edges under every map (an edge -> edge or None)."""
    parent = {e: e for e in edges}

    def find(e):
        while parent[e] != e:
            e = parent[e]
        return e

    for m in maps:
        for e in edges:
            t = m(e)
            if t is not None and t in parent:
                parent[find(t)] = find(e)
    return len({find(e) for e in edges})


def word_powers(letter, bound):
    return [Word((letter,) * k) if k >= 0 else Word((-letter,) * -k) for k in range(-bound, bound + 1)]


def exact(x):
    return Fraction(x)
