"""Graph and problem-instance data model, file formats, bundled datasets
and random instance generators.

Two persistence formats exist: DIMACS max-flow text and a canonical JSON
schema whose top-level ``kind`` selects the instance family.  Uncertain
scalars are tagged objects, e.g.::

    {"trfn": [4, 6, 9, 11]}          {"rough": [[6, 10], [2, 14]]}
    {"tfn": [6, 8, 10]}              {"zigzag": [10, 12, 17]}
    {"gfn": [5, 2]}                  {"normal": [10, 2]}
    {"it2": {"umf": [a, b, c, d, w], "lmf": [a, b, c, d, w]}}
    {"rfn": {"mean": {...}, "sigma": 43.883}}
    {"roughfuzzy": {"tfn": [9, 11.5, 12.7], "offsets": [0, 2, -1, 3]}}

JSON is written with sorted keys and a fixed layout so serialization is
byte-stable: ``write(parse(write(x))) == write(x)``.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from .crisp.graphs import is_connected
from .errors import ParseError
from .hybrid import IT2Trapezoidal, RandomFuzzyNormal, RoughFuzzy
from .measures import (
    GaussianFuzzy,
    GeneralizedTrapezoidalFuzzy,
    LinearUncertain,
    NormalUncertain,
    RoughVariable,
    TrapezoidalFuzzy,
    TriangularFuzzy,
    ZigzagUncertain,
)

__all__ = [
    "Network", "STPInstance", "parse_dimacs_max", "write_dimacs_max",
    "parse_instance_json", "write_instance_json", "load_instance",
    "gen_rough_wcdn", "gen_qmst_wheel", "data_path", "load_bundled",
    "scalar_to_json", "scalar_from_json",
]

KINDS = ("spp-it2", "mst-it2", "stp-it2", "maxflow", "maxflow-rf",
         "wcdn-rough", "ummfstpwb", "qmst-roughfuzzy")


@dataclass
class Network:
    """Weighted graph with 1-based vertices and per-edge payload dicts."""

    kind: str
    directed: bool
    vertex_count: int
    edges: list  # (u, v, payload-dict)
    source: int | None = None
    sink: int | None = None
    name: str = ""
    quadratic: dict = field(default_factory=dict)  # frozenset{i, j} -> RoughFuzzy

    def __post_init__(self):
        seen = set()
        for u, v, _ in self.edges:
            if not (1 <= u <= self.vertex_count and 1 <= v <= self.vertex_count):
                raise ParseError(f"edge ({u},{v}) endpoint out of range")
            if u == v:
                raise ParseError(f"self-loop at vertex {u}")
            key = (u, v) if self.directed else (min(u, v), max(u, v))
            if not self.directed and key in seen:
                raise ParseError(f"parallel undirected edge ({u},{v})")
            seen.add(key)
        for pair in self.quadratic:
            for e in pair:
                if not 1 <= e <= len(self.edges):
                    raise ParseError(f"quadratic pair references missing edge {e}")
        if not is_connected(self.vertex_count, [(u, v) for u, v, _ in self.edges]):
            raise ParseError("network is disconnected")

    def payloads(self, key):
        return [payload[key] for _, _, payload in self.edges]


@dataclass
class STPInstance:
    """Solid transportation instance; optional fields cover both the
    single-item IT2 variant and the multi-item fixed-charge variant."""

    kind: str
    m: int
    n: int
    K: int
    r: int = 1
    # single-item IT2 variant: crisp cost[i][j][k], IT2 capacities
    cost_crisp: list | None = None
    availability_it2: list | None = None
    demand_it2: list | None = None
    conveyance_it2: list | None = None
    # multi-item variant: crisp prices plus one uncertain family per name
    selling: list | None = None    # s[p][j]
    purchase: list | None = None   # v[p][i]
    families: dict | None = None   # family -> dict of uncertain parameter tables

    def family(self, name):
        if self.families is None or name not in self.families:
            raise ParseError(f"instance has no uncertain family {name!r}")
        return self.families[name]


# ---------------------------------------------------------------------------
# tagged uncertain scalars
# ---------------------------------------------------------------------------

def scalar_to_json(value):
    if isinstance(value, (int, float)):
        return value
    if isinstance(value, TrapezoidalFuzzy):
        return {"trfn": [value.a, value.b, value.c, value.d]}
    if isinstance(value, TriangularFuzzy):
        return {"tfn": [value.lo, value.mode, value.hi]}
    if isinstance(value, GaussianFuzzy):
        return {"gfn": [value.rho, value.delta]}
    if isinstance(value, RoughVariable):
        return {"rough": [[value.a, value.b], [value.c, value.d]]}
    if isinstance(value, LinearUncertain):
        return {"linear": [value.a, value.b]}
    if isinstance(value, ZigzagUncertain):
        return {"zigzag": [value.a, value.b, value.c]}
    if isinstance(value, NormalUncertain):
        return {"normal": [value.rho, value.sigma]}
    if isinstance(value, GeneralizedTrapezoidalFuzzy):
        return {"gtrfn": [value.a, value.b, value.c, value.d, value.w]}
    if isinstance(value, IT2Trapezoidal):
        return {"it2": {"umf": [value.umf.a, value.umf.b, value.umf.c, value.umf.d, value.umf.w],
                        "lmf": [value.lmf.a, value.lmf.b, value.lmf.c, value.lmf.d, value.lmf.w]}}
    if isinstance(value, RandomFuzzyNormal):
        return {"rfn": {"mean": scalar_to_json(value.mean), "sigma": value.sigma}}
    if isinstance(value, RoughFuzzy):
        return {"roughfuzzy": {"tfn": [value.core.lo, value.core.mode, value.core.hi],
                               "offsets": [value.o_m, value.o_n, value.o_p, value.o_q]}}
    raise ParseError(f"cannot serialize scalar of type {type(value).__name__}")


def scalar_from_json(obj, path="scalar"):
    if isinstance(obj, (int, float)):
        return float(obj)
    if not isinstance(obj, dict) or len(obj) != 1:
        raise ParseError("tagged scalar must be a single-key object", path=path)
    tag, body = next(iter(obj.items()))
    try:
        if tag == "trfn":
            return TrapezoidalFuzzy(*body)
        if tag == "tfn":
            return TriangularFuzzy(*body)
        if tag == "gfn":
            return GaussianFuzzy(*body)
        if tag == "gtrfn":
            return GeneralizedTrapezoidalFuzzy(*body)
        if tag == "rough":
            (a, b), (c, d) = body
            return RoughVariable(a, b, c, d)
        if tag == "linear":
            return LinearUncertain(*body)
        if tag == "zigzag":
            return ZigzagUncertain(*body)
        if tag == "normal":
            return NormalUncertain(*body)
        if tag == "it2":
            return IT2Trapezoidal(GeneralizedTrapezoidalFuzzy(*body["umf"]),
                                  GeneralizedTrapezoidalFuzzy(*body["lmf"]))
        if tag == "rfn":
            return RandomFuzzyNormal(scalar_from_json(body["mean"], path + ".mean"),
                                     float(body["sigma"]))
        if tag == "roughfuzzy":
            return RoughFuzzy(TriangularFuzzy(*body["tfn"]), *body["offsets"])
    except (TypeError, ValueError, KeyError) as exc:
        raise ParseError(f"malformed {tag!r} scalar: {exc}", path=path) from exc
    raise ParseError(f"unknown scalar tag {tag!r}", path=path)


def _map_scalars(node, to_json, path="$"):
    convert = scalar_to_json if to_json else scalar_from_json
    if isinstance(node, dict) and not to_json and len(node) == 1 and \
            next(iter(node)) in ("trfn", "tfn", "gfn", "gtrfn", "rough", "linear",
                                 "zigzag", "normal", "it2", "rfn", "roughfuzzy"):
        return convert(node, path)
    if isinstance(node, dict):
        return {k: _map_scalars(v, to_json, f"{path}.{k}") for k, v in node.items()}
    if isinstance(node, list):
        return [_map_scalars(v, to_json, f"{path}[{i}]") for i, v in enumerate(node)]
    if not to_json and isinstance(node, (int, float)):
        return float(node)
    if to_json and not isinstance(node, (int, float, str, bool, type(None))):
        return convert(node)
    return node


# ---------------------------------------------------------------------------
# DIMACS max-flow format
# ---------------------------------------------------------------------------

def parse_dimacs_max(text: str) -> Network:
    """Parse DIMACS max-flow text into a crisp-capacity network."""
    n = m = None
    source = sink = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if len(parts) != 4 or parts[1] != "max":
                raise ParseError("problem line must read 'p max <n> <m>'", line=lineno)
            n, m = int(parts[2]), int(parts[3])
        elif parts[0] == "n":
            if n is None:
                raise ParseError("node designation before problem line", line=lineno)
            vid, role = int(parts[1]), parts[2]
            if role == "s":
                if source is not None:
                    raise ParseError("duplicate source designation", line=lineno)
                source = vid
            elif role == "t":
                if sink is not None:
                    raise ParseError("duplicate sink designation", line=lineno)
                sink = vid
            else:
                raise ParseError(f"unknown node role {role!r}", line=lineno)
        elif parts[0] == "a":
            if n is None:
                raise ParseError("arc before problem line", line=lineno)
            u, v, cap = int(parts[1]), int(parts[2]), float(parts[3])
            if not (1 <= u <= n and 1 <= v <= n):
                raise ParseError(f"arc endpoint out of range in {line!r}", line=lineno)
            if cap < 0:
                raise ParseError("negative capacity", line=lineno)
            edges.append((u, v, {"capacity": cap}))
        else:
            raise ParseError(f"unknown record {parts[0]!r}", line=lineno)
    if n is None:
        raise ParseError("missing problem line")
    if source is None or sink is None:
        raise ParseError("missing source or sink designation")
    if len(edges) != m:
        raise ParseError(f"problem line declares {m} arcs, file has {len(edges)}")
    return Network("maxflow", True, n, edges, source, sink)


def write_dimacs_max(net: Network) -> str:
    lines = [f"p max {net.vertex_count} {len(net.edges)}",
             f"n {net.source} s", f"n {net.sink} t"]
    for u, v, payload in net.edges:
        cap = payload["capacity"]
        cap_text = str(int(cap)) if float(cap).is_integer() else repr(float(cap))
        lines.append(f"a {u} {v} {cap_text}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# canonical JSON
# ---------------------------------------------------------------------------

def _network_to_dict(net: Network) -> dict:
    out = {
        "kind": net.kind,
        "name": net.name,
        "directed": net.directed,
        "vertices": net.vertex_count,
        "edges": [
            {"u": u, "v": v, **{k: scalar_to_json(val) for k, val in payload.items()}}
            for u, v, payload in net.edges
        ],
    }
    if net.source is not None:
        out["source"] = net.source
    if net.sink is not None:
        out["sink"] = net.sink
    if net.quadratic:
        out["quadratic"] = [
            {"edges": sorted(pair), "weight": scalar_to_json(w)}
            for pair, w in sorted(net.quadratic.items(), key=lambda kv: sorted(kv[0]))
        ]
    return out


def _network_from_dict(data: dict) -> Network:
    edges = []
    for i, e in enumerate(data["edges"]):
        payload = {k: scalar_from_json(v, f"edges[{i}].{k}")
                   for k, v in e.items() if k not in ("u", "v")}
        edges.append((int(e["u"]), int(e["v"]), payload))
    quadratic = {}
    for i, q in enumerate(data.get("quadratic", [])):
        pair = frozenset(int(x) for x in q["edges"])
        if len(pair) != 2:
            raise ParseError("quadratic pair must name two distinct edges",
                             path=f"quadratic[{i}]")
        if pair in quadratic:
            raise ParseError("quadratic pair listed twice", path=f"quadratic[{i}]")
        quadratic[pair] = scalar_from_json(q["weight"], f"quadratic[{i}].weight")
    return Network(data["kind"], bool(data["directed"]), int(data["vertices"]),
                   edges, data.get("source"), data.get("sink"),
                   data.get("name", ""), quadratic)


def _stp_to_dict(inst: STPInstance) -> dict:
    out = {"kind": inst.kind, "m": inst.m, "n": inst.n, "K": inst.K, "r": inst.r}
    if inst.cost_crisp is not None:
        out["cost"] = inst.cost_crisp
        out["availability"] = [scalar_to_json(v) for v in inst.availability_it2]
        out["demand"] = [scalar_to_json(v) for v in inst.demand_it2]
        out["conveyance"] = [scalar_to_json(v) for v in inst.conveyance_it2]
    if inst.selling is not None:
        out["selling"] = inst.selling
        out["purchase"] = inst.purchase
        out["families"] = {name: _map_scalars(tables, True)
                           for name, tables in inst.families.items()}
    return out


def _stp_from_dict(data: dict) -> STPInstance:
    kind = data["kind"]
    inst = STPInstance(kind, int(data["m"]), int(data["n"]), int(data["K"]),
                       int(data.get("r", 1)))
    if "cost" in data:
        inst.cost_crisp = data["cost"]
        inst.availability_it2 = [scalar_from_json(v, f"availability[{i}]")
                                 for i, v in enumerate(data["availability"])]
        inst.demand_it2 = [scalar_from_json(v, f"demand[{i}]")
                           for i, v in enumerate(data["demand"])]
        inst.conveyance_it2 = [scalar_from_json(v, f"conveyance[{i}]")
                               for i, v in enumerate(data["conveyance"])]
        _check_dims(inst)
    if "selling" in data:
        inst.selling = data["selling"]
        inst.purchase = data["purchase"]
        inst.families = {name: _map_scalars(tables, False)
                         for name, tables in data["families"].items()}
    return inst


def _check_dims(inst: STPInstance):
    if len(inst.cost_crisp) != inst.m or len(inst.availability_it2) != inst.m:
        raise ParseError("availability/cost dimension mismatch", path="m")
    if len(inst.demand_it2) != inst.n or len(inst.conveyance_it2) != inst.K:
        raise ParseError("demand/conveyance dimension mismatch", path="n/K")
    for row in inst.cost_crisp:
        if len(row) != inst.n or any(len(cell) != inst.K for cell in row):
            raise ParseError("cost table must be m x n x K", path="cost")


def parse_instance_json(text: str):
    """Parse canonical instance JSON into a Network or STPInstance."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    kind = data.get("kind")
    if kind not in KINDS:
        raise ParseError(f"unknown kind {kind!r}", path="kind")
    if kind in ("stp-it2", "ummfstpwb"):
        return _stp_from_dict(data)
    return _network_from_dict(data)


def write_instance_json(inst) -> str:
    """Serialize an instance canonically (sorted keys, fixed layout)."""
    data = _network_to_dict(inst) if isinstance(inst, Network) else _stp_to_dict(inst)
    return json.dumps(data, sort_keys=True, indent=1) + "\n"


def load_instance(path: str):
    """Load an instance from a .json or .max file path."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    if path.endswith(".max"):
        return parse_dimacs_max(text)
    return parse_instance_json(text)


def data_path(filename: str) -> str:
    """Resolve a bundled dataset, honouring the NETOPT_DATA override."""
    override = os.environ.get("NETOPT_DATA")
    if override:
        candidate = os.path.join(override, filename)
        if os.path.exists(candidate):
            return candidate
    return str(resources.files("netopt").joinpath("data", filename))


def load_bundled(filename: str):
    return load_instance(data_path(filename))


# ---------------------------------------------------------------------------
# random instance generators
# ---------------------------------------------------------------------------

def _sub_rng(seed: int, stream: int) -> np.random.Generator:
    # per-edge substream; draw order between edges is immaterial
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(stream,)))


DEFAULT_ROUGH_RANGES = {"distance": (3.0, 42.0), "cost": (3.0, 47.0), "time": (3.0, 39.0)}


def gen_rough_wcdn(n: int, m: int, seed: int, ranges=None) -> Network:
    """Random connected directed network with rough (distance, cost, time)
    edge triples; deterministic for a given seed."""
    if m < n - 1 or m > n * (n - 1):
        raise ValueError(f"edge count {m} infeasible for {n} vertices")
    ranges = dict(DEFAULT_ROUGH_RANGES, **(ranges or {}))
    rng = _sub_rng(seed, 0)
    order = rng.permutation(n) + 1
    pairs = []
    seen = set()
    for i in range(1, n):
        u = int(order[rng.integers(0, i)])
        v = int(order[i])
        if rng.random() < 0.5:
            u, v = v, u
        pairs.append((u, v))
        seen.add((u, v))
    while len(pairs) < m:
        u = int(rng.integers(1, n + 1))
        v = int(rng.integers(1, n + 1))
        if u != v and (u, v) not in seen:
            pairs.append((u, v))
            seen.add((u, v))
    edges = []
    for idx, (u, v) in enumerate(pairs):
        erng = _sub_rng(seed, idx + 1)
        payload = {}
        for crit in ("distance", "cost", "time"):
            lo, hi = ranges[crit]
            c, a, b, d = np.sort(erng.uniform(lo, hi, size=4))
            payload[crit] = RoughVariable(float(a), float(b), float(c), float(d))
        edges.append((u, v, payload))
    return Network("wcdn-rough", True, n, edges, 1, n,
                   name=f"wcdn_{n}_{m}_seed{seed}")


def _random_roughfuzzy(rng, lo=8.0, hi=15.0) -> RoughFuzzy:
    core = np.sort(rng.uniform(lo, hi, size=3))
    o_m = 0.0
    o_n = float(rng.uniform(0.2, 2.5))
    o_p = -float(rng.uniform(0.2, 2.0))
    o_q = o_n + float(rng.uniform(0.1, 1.5))
    return RoughFuzzy(TriangularFuzzy(*map(float, core)), o_m, o_n, o_p, o_q)


def gen_qmst_wheel(n: int, seed: int) -> Network:
    """Wheel graph on n vertices plus two extra chords, rough-fuzzy linear
    weights on every edge and quadratic weights on adjacent edge pairs."""
    if n < 5:
        raise ValueError("wheel instance needs n >= 5")
    rng = _sub_rng(seed, 0)
    hub = 1
    rim = list(range(2, n + 1))
    pairs = [(hub, r) for r in rim]
    pairs += [(rim[i], rim[(i + 1) % len(rim)]) for i in range(len(rim))]
    existing = {frozenset(p) for p in pairs}
    extra = 0
    while extra < 2:
        u = int(rng.integers(2, n + 1))
        v = int(rng.integers(2, n + 1))
        if u != v and frozenset((u, v)) not in existing:
            pairs.append((u, v))
            existing.add(frozenset((u, v)))
            extra += 1
    edges = []
    for idx, (u, v) in enumerate(pairs):
        erng = _sub_rng(seed, idx + 1)
        edges.append((u, v, {"weight": _random_roughfuzzy(erng)}))
    quadratic = {}
    m = len(pairs)
    stream = m + 1
    for i in range(m):
        for j in range(i + 1, m):
            if set(pairs[i]) & set(pairs[j]):
                quadratic[frozenset((i + 1, j + 1))] = _random_roughfuzzy(
                    _sub_rng(seed, stream), 8.0, 16.0)
                stream += 1
    return Network("qmst-roughfuzzy", False, n, edges, name=f"QMST_{n}_{m}",
                   quadratic=quadratic)
