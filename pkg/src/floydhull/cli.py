"""Command-line driver.

Every subcommand accepts ``--config FILE`` (a scenario file, see
``load_config``) and flags that override it.  Output goes to stdout or
``--out``; it depends only on the inputs, so repeated runs are
byte-identical.
"""

from __future__ import annotations

import argparse
import configparser
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import conedoff, flow, floyd, graph, quasiconvex, serialize
from .errors import ConfigError, FloydHullError, InvariantViolation
from .words import Alphabet, Subgroup

COMMANDS = ("cayley", "coned", "floyd", "fine", "delta", "hull", "vis", "qc", "freeinf", "export-dot")

SCHEMA = {
    "scenario": {"description", "command"},
    "basis": {"rank", "factors"},
    "ball": {"radius", "cap", "edge_generators"},
    "input": {"graph"},
    "scaling": {"kind", "param", "lambda"},
    "peripheral": {"subgroups", "modes", "inner", "sub"},
    "qc": {"subgroup", "radii", "window", "depth_margin", "grid_sizes"},
    "freeinf": {"n", "m", "conj_bound", "word_bound", "radius", "w_check_length"},
    "bounds": {"geodesic_cap", "arc_budget", "max_length", "margin", "max_base_distance", "search_radius"},
    "sets": {"hull", "a", "b"},
    "floyd": {"base", "pair"},
    "output": {"out"},
}


@dataclass
class ConeEntry:
    letters: tuple[str, ...]
    mode: str = conedoff.HYPERBOLIC
    inner: tuple[str, ...] | None = None
    sub: tuple[tuple[str, ...], ...] = ()


@dataclass
class ScenarioConfig:
    description: str = ""
    command: str | None = None
    factors: tuple[tuple[str, ...], ...] | None = None
    radius: int | None = None
    ball_cap: int = graph.DEFAULT_BALL_CAP
    edge_generators: tuple[str, ...] | None = None
    graph_in: str | None = None
    scaling: floyd.ScalingFunction = field(default_factory=floyd.ScalingFunction.geometric)
    cones: list[ConeEntry] = field(default_factory=list)
    qc_subgroup: tuple[str, ...] = ()
    radii: tuple[int, ...] = ()
    window: int = 3
    depth_margin: int = 1
    grid_sizes: tuple[int, ...] = ()
    n: int = 2
    m: int = 3
    conj_bound: int = 4
    word_bound: int = 6
    freeinf_radius: int = 2
    w_check_length: int = 4
    geodesic_cap: int = graph.DEFAULT_GEODESIC_CAP
    arc_budget: int = graph.DEFAULT_ARC_BUDGET
    max_length: int = 6
    margin: int | None = None
    max_base_distance: int = 2
    search_radius: int = 3
    hull_set: tuple[str, ...] = ()
    vis_a: tuple[str, ...] = ()
    vis_b: tuple[str, ...] = ()
    floyd_base: str | None = None
    floyd_pair: tuple[str, str] | None = None
    out: str | None = None

    @property
    def alphabet(self) -> Alphabet | None:
        return None if self.factors is None else Alphabet(self.factors)

    def validate(self) -> None:
        if self.command is not None and self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        for name in ("ball_cap", "geodesic_cap", "arc_budget", "window", "search_radius"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name} must be positive")
        if self.radius is not None and self.radius < 0:
            raise ConfigError("radius must be non-negative")
        if any(b <= a for a, b in zip(self.radii, self.radii[1:])):
            raise ConfigError("radii must be strictly increasing")
        if any(b <= a for a, b in zip(self.grid_sizes, self.grid_sizes[1:])):
            raise ConfigError("grid sizes must be strictly increasing")
        alpha = self.alphabet
        if alpha is None:
            return
        declared = set(alpha.names)
        refs = list(self.edge_generators or ())
        for c in self.cones:
            refs += list(c.letters) + [x for s in c.sub for x in s]
        for r in refs:
            if r not in declared:
                raise ConfigError(f"generator {r!r} is not declared")
        words = list(self.qc_subgroup) + [w for c in self.cones for w in (c.inner or ())]
        for w in words:
            try:
                alpha.parse(w)
            except FloydHullError as exc:
                raise ConfigError(f"bad word {w!r}: {exc}") from exc


def _int(section, key, value) -> int:
    try:
        return int(value)
    except ValueError:
        raise ConfigError(f"[{section}] {key}: expected an integer, got {value!r}") from None


def _ints(section, key, value) -> tuple[int, ...]:
    return tuple(_int(section, key, x) for x in value.replace(",", " ").split())


def _split(value: str, sep: str) -> list[str]:
    return [x.strip() for x in value.split(sep)]


def parse_factors(text: str) -> tuple[tuple[str, ...], ...]:
    """"a b ; c" -> two free factors."""
    factors = tuple(tuple(f.split()) for f in _split(text, ";"))
    if not all(factors):
        raise ConfigError(f"empty free factor in {text!r}")
    return factors


def parse_cone(text: str) -> ConeEntry:
    """"a b" or "a b:parabolic"."""
    letters, _, mode = text.partition(":")
    mode = mode.strip() or conedoff.HYPERBOLIC
    if mode not in (conedoff.HYPERBOLIC, conedoff.PARABOLIC):
        raise ConfigError(f"unknown cone mode {mode!r}")
    names = tuple(letters.split())
    if not names:
        raise ConfigError("cone needs at least one generator")
    return ConeEntry(names, mode)


def parse_scaling(text: str) -> floyd.ScalingFunction:
    """"geometric:1/2" or "polynomial:2"."""
    kind, _, param = text.partition(":")
    try:
        if kind == "geometric":
            return floyd.ScalingFunction.geometric(param or "1/2")
        if kind == "polynomial":
            return floyd.ScalingFunction.polynomial(float(param or 2))
    except ValueError as exc:
        raise ConfigError(f"bad scaling {text!r}: {exc}") from exc
    raise ConfigError(f"unknown scaling kind {kind!r}")


def load_config(path: str) -> ScenarioConfig:
    """Parse a scenario file strictly: unknown sections or keys are errors.

    Relative input paths are resolved against the file's directory.
    """
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#",))
    parser.optionxform = str
    try:
        with open(path, encoding="utf-8") as fh:
            parser.read_file(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    except configparser.Error as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    if parser.defaults():
        raise ConfigError("keys outside a section are not allowed")
    for sec in parser.sections():
        if sec not in SCHEMA:
            raise ConfigError(f"unknown section [{sec}]")
        for key in parser[sec]:
            if key not in SCHEMA[sec]:
                raise ConfigError(f"unknown key {key!r} in [{sec}]")
    cfg = ScenarioConfig()
    get = lambda s, k: parser.get(s, k) if parser.has_option(s, k) else None  # noqa: E731
    base_dir = os.path.dirname(os.path.abspath(path))

    if (v := get("scenario", "description")) is not None:
        cfg.description = v
    if (v := get("scenario", "command")) is not None:
        cfg.command = v
    rank, factors = get("basis", "rank"), get("basis", "factors")
    if rank is not None and factors is not None:
        raise ConfigError("[basis] takes rank or factors, not both")
    if rank is not None:
        cfg.factors = Alphabet.free(_int("basis", "rank", rank)).factors
    elif factors is not None:
        cfg.factors = parse_factors(factors)
    if (v := get("ball", "radius")) is not None:
        cfg.radius = _int("ball", "radius", v)
    if (v := get("ball", "cap")) is not None:
        cfg.ball_cap = _int("ball", "cap", v)
    if (v := get("ball", "edge_generators")) is not None:
        cfg.edge_generators = tuple(v.split())
    if (v := get("input", "graph")) is not None:
        cfg.graph_in = os.path.join(base_dir, v)
    if parser.has_section("scaling"):
        kind = get("scaling", "kind") or "geometric"
        param = get("scaling", "param")
        lam = get("scaling", "lambda")
        try:
            cfg.scaling = floyd.ScalingFunction(kind, param if param is not None else "1/2", lam)
        except ValueError as exc:
            raise ConfigError(f"[scaling] {exc}") from exc

    if (v := get("peripheral", "subgroups")) is not None:
        groups = _split(v, "|")
        n = len(groups)

        def aligned(key, default):
            raw = get("peripheral", key)
            if raw is None:
                return [default] * n
            vals = _split(raw, "|")
            if len(vals) != n:
                raise ConfigError(f"[peripheral] {key} must list {n} entries")
            return vals

        modes, inner, sub = aligned("modes", conedoff.HYPERBOLIC), aligned("inner", "default"), aligned("sub", "-")
        for g_, mode, inn, sb in zip(groups, modes, inner, sub):
            entry = parse_cone(f"{g_}:{mode}")
            if inn == "-":
                entry.inner = ()
            elif inn != "default":
                entry.inner = tuple(_split(inn, ","))
            if sb != "-":
                entry.sub = tuple(tuple(s.split()) for s in _split(sb, ","))
            cfg.cones.append(entry)

    if (v := get("qc", "subgroup")) is not None:
        cfg.qc_subgroup = tuple(_split(v, ","))
    if (v := get("qc", "radii")) is not None:
        cfg.radii = _ints("qc", "radii", v)
    if (v := get("qc", "grid_sizes")) is not None:
        cfg.grid_sizes = _ints("qc", "grid_sizes", v)
    for key, attr in (("window", "window"), ("depth_margin", "depth_margin")):
        if (v := get("qc", key)) is not None:
            setattr(cfg, attr, _int("qc", key, v))
    for key, attr in (
        ("n", "n"),
        ("m", "m"),
        ("conj_bound", "conj_bound"),
        ("word_bound", "word_bound"),
        ("radius", "freeinf_radius"),
        ("w_check_length", "w_check_length"),
    ):
        if (v := get("freeinf", key)) is not None:
            setattr(cfg, attr, _int("freeinf", key, v))
    for key in SCHEMA["bounds"]:
        if (v := get("bounds", key)) is not None:
            setattr(cfg, key, _int("bounds", key, v))
    if (v := get("sets", "hull")) is not None:
        cfg.hull_set = tuple(_split(v, ","))
    if (v := get("sets", "a")) is not None:
        cfg.vis_a = tuple(_split(v, ","))
    if (v := get("sets", "b")) is not None:
        cfg.vis_b = tuple(_split(v, ","))
    if (v := get("floyd", "base")) is not None:
        cfg.floyd_base = v
    if (v := get("floyd", "pair")) is not None:
        pair = _split(v, ",")
        if len(pair) != 2:
            raise ConfigError("[floyd] pair needs two comma-separated vertices")
        cfg.floyd_pair = (pair[0], pair[1])
    if (v := get("output", "out")) is not None:
        cfg.out = v
    cfg.validate()
    return cfg


# -- graph assembly ---------------------------------------------------------


def cone_specs_for(cfg: ScenarioConfig) -> list[conedoff.ConeSpec]:
    alpha = cfg.alphabet
    specs = []
    for c in cfg.cones:
        sub = Subgroup.free_factor(alpha.index(x) for x in c.letters)
        inner = None if c.inner is None else tuple(alpha.parse(w) for w in c.inner)
        subs = tuple(Subgroup.free_factor(alpha.index(x) for x in s) for s in c.sub)
        specs.append(conedoff.ConeSpec(sub, c.mode, inner, subs))
    return specs


def build_ball(cfg: ScenarioConfig) -> graph.LabeledGraph:
    if cfg.factors is None or cfg.radius is None:
        raise ConfigError("a basis and a radius are required to build a ball")
    alpha = cfg.alphabet
    gens = None if cfg.edge_generators is None else [alpha.index(x) for x in cfg.edge_generators]
    return graph.cayley_ball(alpha, cfg.radius, cfg.ball_cap, gens)


def build_coned(cfg: ScenarioConfig) -> conedoff.ConedGraphBundle:
    return conedoff.build_coned_graph(build_ball(cfg), cone_specs_for(cfg))


def scenario_graph(cfg: ScenarioConfig, path: str | None = None):
    """Graph and provenance from --in, [input], or the configured ball (coned if cones are set)."""
    path = path or cfg.graph_in
    if path is not None:
        return serialize.load_graph(path)
    if cfg.cones:
        b = build_coned(cfg)
        return b.graph, b.provenance
    return build_ball(cfg), None


def find_vertex(g: graph.LabeledGraph, text: str) -> int:
    """Vertex by index ("#12"), point name, word text, or cone ("cone:P:word")."""
    text = text.strip()
    try:
        if text.startswith("#"):
            i = int(text[1:])
            if not 0 <= i < g.n:
                raise IndexError
            return i
        if text.startswith("cone:"):
            _, p, rep = text.split(":", 2)
            return g.cone(rep, int(p))
        if g.alphabet is None:
            return g.point(text)
        return g.element("" if text == "1" else text)
    except (KeyError, ValueError, IndexError, FloydHullError):
        raise ConfigError(f"no vertex {text!r} in the graph") from None


# -- output -----------------------------------------------------------------


def plain(obj):
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, dict):
        return {str(k): plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = [plain(x) for x in obj]
        return sorted(items, key=repr) if isinstance(obj, (set, frozenset)) else items
    return obj


def edge_labels(g, edges) -> list[list[str]]:
    return [[g.label_text(u) or "1", g.label_text(v) or "1"] for u, v in sorted(edges)]


def emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    try:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise ConfigError(f"cannot write {out}: {exc}") from exc


# -- commands ---------------------------------------------------------------


def cmd_cayley(cfg, args):
    return serialize.dumps(serialize.graph_to_json(build_ball(cfg)))


def cmd_coned(cfg, args):
    if not cfg.cones:
        raise ConfigError("coned needs at least one cone (--cone or [peripheral])")
    bundle = build_coned(cfg)
    g = bundle.graph
    if not args.summary:
        return serialize.dumps(serialize.graph_to_json(g, bundle.provenance))
    translations = [lab.word for lab in g.vertices if lab.kind == graph.ELEMENT]
    summary = {
        "vertices": g.n,
        "edges": g.m,
        "cone_vertices": len(bundle.coset_index),
        "connected": g.is_connected(),
        "partition": bundle.partition_counts(),
        "partition_exact": bundle.partition_exact(),
        "equivariance_translations": len(translations),
        "equivariance_violations": len(bundle.equivariance_violations(translations)),
        "cone_degree_mismatches": len(bundle.cone_degree_mismatches()),
    }
    return serialize.dumps(summary)


def cmd_floyd(cfg, args):
    g, _ = scenario_graph(cfg, args.input)
    f = cfg.scaling
    out = {"scaling": f.to_json(), "vertices": g.n}
    base = g.root if cfg.floyd_base is None else find_vertex(g, cfg.floyd_base)
    if base is None:
        base = 0
    if cfg.floyd_pair is not None:
        a, b = (find_vertex(g, x) for x in cfg.floyd_pair)
        out["pair"] = {"base": base, "a": a, "b": b, "distance": floyd.floyd_distance(g, base, f, a, b)}
    if not args.no_scan:
        scan = floyd.base_change_scan(g, f, cfg.max_base_distance)
        out["base_change"] = {
            "max_base_distance": scan.max_base_distance,
            "base_pairs": scan.base_pairs,
            "checked": scan.checked,
            "violations": len(scan.violations),
            "first_violations": scan.violations[:10],
            "min_ratio": scan.min_ratio,
            "lambda": f.lam,
        }
        if scan.violations:
            emit(serialize.dumps(plain(out)), cfg.out)
            raise InvariantViolation(f"base-change inequality fails on {len(scan.violations)} pairs")
    return serialize.dumps(plain(out))


def cmd_fine(cfg, args):
    g, _ = scenario_graph(cfg, args.input)
    prof = graph.fineness_profile(g, cfg.max_length, cfg.arc_budget)
    return serialize.dumps(plain({"max_length": cfg.max_length, **prof.to_json()}))


def cmd_delta(cfg, args):
    g, _ = scenario_graph(cfg, args.input)
    res = flow.thin_triangles(g, margin=cfg.margin)
    if not args.alt and not args.json:
        return f"{res.delta}\n"
    out = {"delta": res.delta, "witness": res.witness, "triangles": res.triangles}
    if args.alt:
        root = g.root if g.root is not None else 0
        probes = [graph.edge_key(root, v) for v in g.adjacency[root]]
        alts = flow.alt_hyperbolicity_delta(g, probes, cfg.margin, cfg.search_radius)
        out["alt"] = [
            {"edge": a.edge, "F": None if a.F is None else sorted(a.F), "spread": a.spread, "delta": a.delta}
            for a in alts
        ]
    return serialize.dumps(plain(out))


def cmd_hull(cfg, args):
    g, _ = scenario_graph(cfg, args.input)
    if not cfg.hull_set:
        raise ConfigError("hull needs a vertex set (--set or [sets] hull)")
    B = [find_vertex(g, x) for x in cfg.hull_set]
    h = flow.hull(g, B, margin=cfg.margin)
    out = {
        "set": [g.label_text(b) or "1" for b in sorted(set(B))],
        "vertices": sorted(g.label_text(v) or "1" for v in h.vertices),
        "edges": edge_labels(g, h.edges),
    }
    return serialize.dumps(out)


def cmd_vis(cfg, args):
    g, _ = scenario_graph(cfg, args.input)
    if not cfg.vis_a or not cfg.vis_b:
        raise ConfigError("vis needs both --a and --b")
    A = [find_vertex(g, x) for x in cfg.vis_a]
    B = [find_vertex(g, x) for x in cfg.vis_b]
    F = flow.visibility_witness(g, A, B, cfg.geodesic_cap)
    out = {"F": edge_labels(g, F), "hit_rate": flow.witness_hit_rate(g, A, B, F, cfg.geodesic_cap)}
    return serialize.dumps(plain(out))


def cmd_qc(cfg, args):
    reports = {}
    if cfg.qc_subgroup:
        if cfg.factors is None:
            raise ConfigError("qc needs a basis")
        if len(cfg.radii) < 3:
            raise ConfigError("qc needs at least 3 radii")
        H = Subgroup.parse(cfg.alphabet, cfg.qc_subgroup)
        reports["subgroup"] = quasiconvex.qc_sweep(cfg.alphabet, H, cfg.radii, cfg.depth_margin, cfg.window)
    if cfg.grid_sizes:
        reports["grid_diagonal"] = quasiconvex.grid_diagonal_sweep(cfg.grid_sizes, cfg.window)
    if not reports:
        raise ConfigError("qc needs a subgroup with radii, or grid sizes")
    if args.table:
        return "\n\n".join(f"[{k}]\n{r.table()}" for k, r in reports.items()) + "\n"
    return serialize.dumps({k: r.to_json() for k, r in reports.items()})


def cmd_freeinf(cfg, args):
    rep = quasiconvex.freeinf_scenario(
        cfg.n, cfg.m, cfg.conj_bound, cfg.word_bound, cfg.freeinf_radius, cfg.w_check_length
    )
    return serialize.dumps(plain(rep.to_json()))


def cmd_export_dot(cfg, args):
    g, prov = scenario_graph(cfg, args.input)
    return serialize.export_dot(g, prov)


HANDLERS = {
    "cayley": cmd_cayley,
    "coned": cmd_coned,
    "floyd": cmd_floyd,
    "fine": cmd_fine,
    "delta": cmd_delta,
    "hull": cmd_hull,
    "vis": cmd_vis,
    "qc": cmd_qc,
    "freeinf": cmd_freeinf,
    "export-dot": cmd_export_dot,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="floydhull", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, graph_input=True):
        sp.add_argument("--config", help="scenario file")
        sp.add_argument("--out", help="output file (default stdout)")
        if graph_input:
            sp.add_argument("--in", dest="input", help="graph JSON (default: build from the config)")
        sp.add_argument("--rank", type=int, help="free group rank (generators a, b, ...)")
        sp.add_argument("--basis", help='free factors, e.g. "a b ; c"')
        sp.add_argument("--radius", type=int)
        sp.add_argument("--cone", action="append", help='cone subgroup, e.g. "a" or "a b:parabolic"')
        sp.add_argument("--margin", type=int)

    sp = sub.add_parser("cayley", help="Cayley ball as graph JSON")
    common(sp, graph_input=False)
    sp.add_argument("--cap", type=int)
    sp.add_argument("--edge-generators", help="restrict edges to these generators")

    sp = sub.add_parser("coned", help="coned-off ball with edge provenance")
    common(sp, graph_input=False)
    sp.add_argument("--summary", action="store_true", help="counts and checks instead of the graph")

    sp = sub.add_parser("floyd", help="Floyd distances and the base-change scan")
    common(sp)
    sp.add_argument("--scaling", help='"geometric:1/2" or "polynomial:2"')
    sp.add_argument("--base")
    sp.add_argument("--pair", nargs=2, metavar=("A", "B"))
    sp.add_argument("--max-base-distance", type=int)
    sp.add_argument("--no-scan", action="store_true")

    sp = sub.add_parser("fine", help="fineness profile")
    common(sp)
    sp.add_argument("--max-length", type=int)
    sp.add_argument("--budget", type=int)

    sp = sub.add_parser("delta", help="thin-triangle delta")
    common(sp)
    sp.add_argument("--alt", action="store_true", help="also alt-hyperbolicity at the root's edges")
    sp.add_argument("--json", action="store_true")
    sp.add_argument("--search-radius", type=int)

    sp = sub.add_parser("hull", help="geodesic hull of a vertex set")
    common(sp)
    sp.add_argument("--set", action="append", help="vertex (repeatable)")

    sp = sub.add_parser("vis", help="visibility witness between two vertex sets")
    common(sp)
    sp.add_argument("--a", action="append")
    sp.add_argument("--b", action="append")
    sp.add_argument("--geodesic-cap", type=int)

    sp = sub.add_parser("qc", help="hull orbit counts and quasiconvexity verdicts")
    common(sp, graph_input=False)
    sp.add_argument("--subgroup", action="append", help="generating word (repeatable)")
    sp.add_argument("--radii", help="e.g. 4,5,6,7,8")
    sp.add_argument("--window", type=int)
    sp.add_argument("--grid", help="grid sizes for the diagonal stand-in, e.g. 3,4,5")
    sp.add_argument("--table", action="store_true")

    sp = sub.add_parser("freeinf", help="the two-splittings free-group scenario")
    common(sp, graph_input=False)
    sp.add_argument("--n", type=int)
    sp.add_argument("--m", type=int)
    sp.add_argument("--conj-bound", type=int)
    sp.add_argument("--word-bound", type=int)
    sp.add_argument("--tree-radius", type=int)

    sp = sub.add_parser("export-dot", help="graph as DOT")
    common(sp)
    return p


def merge_args(cfg: ScenarioConfig, args) -> ScenarioConfig:
    if args.rank is not None and args.basis is not None:
        raise ConfigError("--rank and --basis are exclusive")
    if args.rank is not None:
        cfg.factors = Alphabet.free(args.rank).factors
    if args.basis is not None:
        cfg.factors = parse_factors(args.basis)
    if args.radius is not None:
        cfg.radius = args.radius
    if args.cone:
        cfg.cones = [parse_cone(c) for c in args.cone]
    if args.margin is not None:
        cfg.margin = args.margin
    if args.out is not None:
        cfg.out = args.out
    simple = {
        "cap": "ball_cap",
        "max_length": "max_length",
        "budget": "arc_budget",
        "search_radius": "search_radius",
        "geodesic_cap": "geodesic_cap",
        "window": "window",
        "max_base_distance": "max_base_distance",
        "n": "n",
        "m": "m",
        "conj_bound": "conj_bound",
        "word_bound": "word_bound",
        "tree_radius": "freeinf_radius",
        "base": "floyd_base",
    }
    for flag, attr in simple.items():
        v = getattr(args, flag, None)
        if v is not None:
            setattr(cfg, attr, v)
    if getattr(args, "edge_generators", None):
        cfg.edge_generators = tuple(args.edge_generators.split())
    if getattr(args, "scaling", None):
        cfg.scaling = parse_scaling(args.scaling)
    if getattr(args, "pair", None):
        cfg.floyd_pair = tuple(args.pair)
    if getattr(args, "set", None):
        cfg.hull_set = tuple(args.set)
    if getattr(args, "a", None):
        cfg.vis_a = tuple(args.a)
    if getattr(args, "b", None):
        cfg.vis_b = tuple(args.b)
    if getattr(args, "subgroup", None):
        cfg.qc_subgroup = tuple(args.subgroup)
    if getattr(args, "radii", None):
        cfg.radii = _ints("qc", "radii", args.radii)
    if getattr(args, "grid", None):
        cfg.grid_sizes = _ints("qc", "grid_sizes", args.grid)
    for name in ("n", "m", "conj_bound", "word_bound", "freeinf_radius", "max_length", "margin"):
        v = getattr(cfg, name)
        if v is not None and v < 0:
            raise ConfigError(f"{name} must be non-negative")
    cfg.validate()
    return cfg


def run_command(argv: Sequence[str] | None = None) -> int:
    """Run one subcommand; returns the process exit status."""
    try:
        args = build_parser().parse_args(argv)
        cfg = load_config(args.config) if args.config else ScenarioConfig()
        if cfg.command is not None and cfg.command != args.command:
            raise ConfigError(f"config is for {cfg.command!r}, not {args.command!r}")
        cfg = merge_args(cfg, args)
        text = HANDLERS[args.command](cfg, args)
        emit(text, cfg.out)
        return 0
    except FloydHullError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code


def main() -> None:
    sys.exit(run_command())


if __name__ == "__main__":
    main()
