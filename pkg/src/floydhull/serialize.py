"""JSON graph schema and DOT export.

A graph document is a JSON object::

    {"format": "floydhull-graph", "version": 1,
     "alphabet": [["a", "b"]] | null, "root": 0, "radius": 2,
     "vertices": [{"id": 0, "kind": "element", "label": "", "letters": [], "depth": 0}, ...],
     "edges": [[0, 1], ...],
     "provenance": ["G1_cone", ...] | null}

``provenance`` is aligned with ``edges``.  Output is canonical (sorted keys,
fixed indentation), so export -> import -> export is byte-identical.
"""

from __future__ import annotations

import json
from typing import Mapping

from .errors import ConfigError
from .graph import CONE, ELEMENT, POINT, TAG, Edge, LabeledGraph, VertexLabel
from .words import Alphabet, Word

FORMAT = "floydhull-graph"
VERSION = 1


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=1, ensure_ascii=False) + "\n"


def graph_to_json(g: LabeledGraph, provenance: Mapping[Edge, str] | None = None) -> dict:
    verts = []
    for i, lab in enumerate(g.vertices):
        v = {"id": i, "kind": lab.kind, "label": g.label_text(i)}
        if lab.word is not None:
            v["letters"] = list(lab.word.letters)
        if lab.peripheral is not None:
            v["peripheral"] = lab.peripheral
        if lab.name is not None:
            v["name"] = lab.name
        if g.depth is not None:
            v["depth"] = g.depth[i]
        verts.append(v)
    return {
        "format": FORMAT,
        "version": VERSION,
        "alphabet": None if g.alphabet is None else g.alphabet.to_json(),
        "root": g.root,
        "radius": g.radius,
        "vertices": verts,
        "edges": [list(e) for e in g.edges],
        "provenance": None if provenance is None else [provenance[e] for e in g.edges],
    }


def graph_from_json(data) -> tuple[LabeledGraph, dict[Edge, str] | None]:
    if not isinstance(data, dict) or data.get("format") != FORMAT:
        raise ConfigError("not a graph document")
    if data.get("version") != VERSION:
        raise ConfigError(f"unsupported graph document version {data.get('version')!r}")
    try:
        alphabet = None if data["alphabet"] is None else Alphabet.from_json(data["alphabet"])
        labels = []
        depth = []
        for k, v in enumerate(data["vertices"]):
            if v["id"] != k:
                raise ConfigError("vertex ids must be 0..n-1 in order")
            kind = v["kind"]
            word = Word(tuple(v["letters"])) if "letters" in v else None
            if kind == ELEMENT:
                labels.append(VertexLabel.element(word))
            elif kind == CONE:
                labels.append(VertexLabel.cone(word, v["peripheral"]))
            elif kind == TAG:
                labels.append(VertexLabel.tag(v["peripheral"]))
            elif kind == POINT:
                labels.append(VertexLabel.point(v["name"]))
            else:
                raise ConfigError(f"unknown vertex kind {kind!r}")
            if "depth" in v:
                depth.append(v["depth"])
        edges = [tuple(e) for e in data["edges"]]
        g = LabeledGraph(
            labels,
            edges,
            alphabet=alphabet,
            root=data["root"],
            radius=data["radius"],
            depth=depth if len(depth) == len(labels) else None,
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"malformed graph document: {exc}") from exc
    prov = data.get("provenance")
    if prov is None:
        return g, None
    if len(prov) != len(edges):
        raise ConfigError("provenance must align with edges")
    return g, {tuple(sorted(e)): t for e, t in zip(edges, prov)}


def load_graph(path) -> tuple[LabeledGraph, dict[Edge, str] | None]:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path} is not valid JSON: {exc}") from exc
    return graph_from_json(data)


EDGE_STYLES = {
    "G1_cone": 'style=dashed, color="gray40"',
    "G2_hyperbolic": 'color="blue"',
    "G3_parabolic": 'color="darkgreen", penwidth=2',
    "G4_nonhorospherical": 'color="black"',
}


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(g: LabeledGraph, provenance: Mapping[Edge, str] | None = None, name: str = "G") -> str:
    """Undirected DOT; cone vertices are boxes, edges styled by provenance tag."""
    lines = [f"graph {_quote(name)} {{", "  node [shape=circle, fontsize=10];"]
    for i, lab in enumerate(g.vertices):
        text = g.label_text(i)
        if lab.kind in (ELEMENT, CONE) and not text:
            text = "1"
        attrs = [f"label={_quote(text)}"]
        if lab.kind == CONE:
            attrs.append('shape=box, style=filled, fillcolor="lightsalmon"')
            attrs.append(f"peripheral={lab.peripheral}")
        elif lab.kind == TAG:
            attrs.append("shape=diamond")
        lines.append(f"  n{i} [{', '.join(attrs)}];")
    for u, v in g.edges:
        attrs = ""
        if provenance is not None:
            tag = provenance[(u, v)]
            attrs = f" [{EDGE_STYLES.get(tag, '')}, tag={_quote(tag)}]"
        lines.append(f"  n{u} -- n{v}{attrs};")
    lines.append("}")
    return "\n".join(lines) + "\n"
