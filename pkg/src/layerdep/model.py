"""Layered system model and its JSON document form.

Layers are numbered from 1 (physical) upwards; the top layer of a four-layer model
is the functional layer. Projections map each component of layer ``n`` onto a
nonempty set of components of layer ``n - 1``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from types import MappingProxyType
from typing import Any, Iterable, Mapping

from .errors import ModelError, ModelSyntaxError

FUNCTIONAL_LAYER = 4
MAX_LAYERS = 4

_TOP_KEYS = {"name", "layers", "projections", "probabilities", "requirements", "quorums"}
_REQUIRED_TOP_KEYS = {"name", "layers"}
_LAYER_KEYS = {"index", "name", "components", "links", "access_points"}
_COMPONENT_KEYS = {"id", "kind"}
_PROJECTION_KEYS = {"upper", "lower", "map"}
_REQUIREMENT_KEYS = {"name", "layer", "source", "destination", "characteristics"}
_QUORUM_KEYS = {"members", "k"}


@dataclass(frozen=True, order=True)
class Component:
    id: str
    layer: int
    kind: str = ""


@dataclass(frozen=True)
class Layer:
    index: int
    name: str
    components: tuple[Component, ...]
    links: tuple[tuple[str, str], ...] = ()
    access_points: frozenset[str] = frozenset()

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(c.id for c in self.components)


@dataclass(frozen=True)
class Projection:
    upper: int
    lower: int
    map: Mapping[str, frozenset[str]]


@dataclass(frozen=True)
class Requirement:
    """A required interaction between endpoint components named on ``layer``.

    ``source`` and ``destination`` are tuples so that a family of interchangeable
    endpoints (e.g. every web client) can be named in one requirement; each
    (source, destination) combination is its own subsystem.
    """

    name: str
    layer: int
    source: tuple[str, ...]
    destination: tuple[str, ...]
    characteristics: Mapping[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class Quorum:
    """Number of operational members ``k`` a redundant group needs."""

    members: frozenset[str]
    k: int


@dataclass(frozen=True)
class Graph:
    vertices: tuple[str, ...]
    edges: frozenset[frozenset[str]]

    @cached_property
    def adjacency(self) -> Mapping[str, frozenset[str]]:
        adj: dict[str, set[str]] = {v: set() for v in self.vertices}
        for edge in self.edges:
            a, b = tuple(edge)
            adj[a].add(b)
            adj[b].add(a)
        return MappingProxyType({v: frozenset(n) for v, n in adj.items()})

    def neighbors(self, v: str) -> frozenset[str]:
        return self.adjacency[v]

    def has_edge(self, a: str, b: str) -> bool:
        return frozenset((a, b)) in self.edges


@dataclass(frozen=True)
class LayeredModel:
    name: str
    layers: tuple[Layer, ...]
    projections: tuple[Projection, ...] = ()
    requirements: tuple[Requirement, ...] = ()
    probabilities: Mapping[str, float] = field(default_factory=dict)
    quorums: tuple[Quorum, ...] = ()

    @property
    def depth(self) -> int:
        return len(self.layers)

    def layer(self, n: int) -> Layer:
        for layer in self.layers:
            if layer.index == n:
                return layer
        raise ModelError(f"layer {n} out of range 1..{self.depth}")

    @cached_property
    def component_layer(self) -> Mapping[str, int]:
        return MappingProxyType({c.id: layer.index for layer in self.layers for c in layer.components})

    def probability(self, component: str) -> float:
        return float(self.probabilities.get(component, 1.0))

    def projection(self, upper: int) -> Projection | None:
        for proj in self.projections:
            if proj.upper == upper:
                return proj
        return None

    def analyzed_layers(self) -> tuple[int, ...]:
        """Layers that carry real components (the functional layer is excluded)."""
        return tuple(layer.index for layer in self.layers if layer.index < FUNCTIONAL_LAYER)

    def quorum_overrides(self) -> dict[frozenset[str], int]:
        return {q.members: q.k for q in self.quorums}


@dataclass(frozen=True)
class Violation:
    kind: str
    message: str
    layer: int | None = None
    component: str | None = None

    def __str__(self) -> str:
        return f"{self.kind}: {self.message}"


def layer_graph(m: LayeredModel, n: int) -> Graph:
    if not 1 <= n <= m.depth:
        raise ModelError(f"layer {n} out of range 1..{m.depth}")
    layer = m.layer(n)
    return Graph(layer.ids, frozenset(frozenset(e) for e in layer.links))


# -- parsing ---------------------------------------------------------------


def _check_keys(obj: Any, allowed: set[str], where: str, required: Iterable[str] = ()) -> None:
    if not isinstance(obj, dict):
        raise ModelError(f"{where}: expected an object, got {type(obj).__name__}")
    unknown = sorted(set(obj) - allowed)
    if unknown:
        raise ModelError(f"{where}: unknown field {unknown[0]!r}")
    for key in required:
        if key not in obj:
            raise ModelError(f"{where}: missing field {key!r}")


def _expect(value: Any, kind: type | tuple[type, ...], where: str) -> Any:
    if isinstance(value, bool) or not isinstance(value, kind):
        raise ModelError(f"{where}: unexpected value {value!r}")
    return value


def _endpoints(value: Any, where: str) -> tuple[str, ...]:
    if isinstance(value, str):
        return (value,)
    _expect(value, list, where)
    if not value:
        raise ModelError(f"{where}: empty endpoint list")
    return tuple(sorted(_expect(v, str, where) for v in value))


def parse_model(document: str) -> LayeredModel:
    """Parse a JSON model document.

    Raises :class:`ModelSyntaxError` for malformed JSON and :class:`ModelError`
    for schema problems (unknown or missing fields, duplicate component ids,
    probabilities outside (0, 1]).
    """
    try:
        raw = json.loads(document)
    except json.JSONDecodeError as exc:
        raise ModelSyntaxError(exc.msg, exc.lineno, exc.colno) from None

    _check_keys(raw, _TOP_KEYS, "model", _REQUIRED_TOP_KEYS)
    name = _expect(raw["name"], str, "model.name")

    seen: set[str] = set()
    layers = []
    for i, raw_layer in enumerate(_expect(raw["layers"], list, "model.layers")):
        where = f"layers[{i}]"
        _check_keys(raw_layer, _LAYER_KEYS, where, ("index", "components"))
        index = _expect(raw_layer["index"], int, f"{where}.index")
        components = []
        for j, raw_comp in enumerate(_expect(raw_layer["components"], list, f"{where}.components")):
            cwhere = f"{where}.components[{j}]"
            _check_keys(raw_comp, _COMPONENT_KEYS, cwhere, ("id",))
            cid = _expect(raw_comp["id"], str, f"{cwhere}.id")
            if not cid:
                raise ModelError(f"{cwhere}: empty component id")
            if cid in seen:
                raise ModelError(f"duplicate component id {cid!r}")
            seen.add(cid)
            components.append(Component(cid, index, _expect(raw_comp.get("kind", ""), str, f"{cwhere}.kind")))
        links = []
        for k, raw_link in enumerate(_expect(raw_layer.get("links", []), list, f"{where}.links")):
            if not isinstance(raw_link, list) or len(raw_link) != 2:
                raise ModelError(f"{where}.links[{k}]: a link is a pair of component ids")
            a, b = (_expect(v, str, f"{where}.links[{k}]") for v in raw_link)
            links.append((min(a, b), max(a, b)))
        aps = frozenset(_expect(v, str, f"{where}.access_points") for v in
                        _expect(raw_layer.get("access_points", []), list, f"{where}.access_points"))
        layers.append(Layer(
            index=index,
            name=_expect(raw_layer.get("name", f"layer {index}"), str, f"{where}.name"),
            components=tuple(sorted(components, key=lambda c: c.id)),
            links=tuple(sorted(set(links))),
            access_points=aps,
        ))

    projections = []
    for i, raw_proj in enumerate(_expect(raw.get("projections", []), list, "model.projections")):
        where = f"projections[{i}]"
        _check_keys(raw_proj, _PROJECTION_KEYS, where, _PROJECTION_KEYS)
        mapping = {}
        for key, image in _expect(raw_proj["map"], dict, f"{where}.map").items():
            mapping[key] = frozenset(_expect(v, str, f"{where}.map[{key}]") for v in
                                     _expect(image, list, f"{where}.map[{key}]"))
        projections.append(Projection(
            upper=_expect(raw_proj["upper"], int, f"{where}.upper"),
            lower=_expect(raw_proj["lower"], int, f"{where}.lower"),
            map=dict(sorted(mapping.items())),
        ))

    probabilities = {}
    for cid, p in _expect(raw.get("probabilities", {}), dict, "model.probabilities").items():
        p = float(_expect(p, (int, float), f"probabilities[{cid}]"))
        if not 0.0 < p <= 1.0:
            raise ModelError(f"probability out of range for {cid!r}: {p}")
        probabilities[cid] = p

    requirements = []
    for i, raw_req in enumerate(_expect(raw.get("requirements", []), list, "model.requirements")):
        where = f"requirements[{i}]"
        _check_keys(raw_req, _REQUIREMENT_KEYS, where, ("name", "layer", "source", "destination"))
        requirements.append(Requirement(
            name=_expect(raw_req["name"], str, f"{where}.name"),
            layer=_expect(raw_req["layer"], int, f"{where}.layer"),
            source=_endpoints(raw_req["source"], f"{where}.source"),
            destination=_endpoints(raw_req["destination"], f"{where}.destination"),
            characteristics=_expect(raw_req.get("characteristics", {}), dict, f"{where}.characteristics"),
        ))

    quorums = []
    for i, raw_q in enumerate(_expect(raw.get("quorums", []), list, "model.quorums")):
        where = f"quorums[{i}]"
        _check_keys(raw_q, _QUORUM_KEYS, where, _QUORUM_KEYS)
        members = frozenset(_expect(v, str, f"{where}.members") for v in _expect(raw_q["members"], list, where))
        quorums.append(Quorum(members, _expect(raw_q["k"], int, f"{where}.k")))

    return LayeredModel(
        name=name,
        layers=tuple(sorted(layers, key=lambda layer: layer.index)),
        projections=tuple(sorted(projections, key=lambda p: p.upper)),
        requirements=tuple(requirements),
        probabilities=dict(sorted(probabilities.items())),
        quorums=tuple(sorted(quorums, key=lambda q: sorted(q.members))),
    )


def load_model(path: str | Path) -> LayeredModel:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ModelError(f"cannot read model {path}: {exc.strerror or exc}") from exc
    return parse_model(text)


def _endpoint_value(ids: tuple[str, ...]) -> str | list[str]:
    return ids[0] if len(ids) == 1 else list(ids)


def serialize_model(m: LayeredModel) -> str:
    """Canonical JSON form: components, links and map keys sorted, layers by index."""
    doc: dict[str, Any] = {
        "name": m.name,
        "layers": [
            {
                "index": layer.index,
                "name": layer.name,
                "components": [{"id": c.id, "kind": c.kind} for c in sorted(layer.components)],
                "links": [list(link) for link in sorted(layer.links)],
                "access_points": sorted(layer.access_points),
            }
            for layer in sorted(m.layers, key=lambda layer: layer.index)
        ],
        "projections": [
            {"upper": p.upper, "lower": p.lower, "map": {k: sorted(v) for k, v in sorted(p.map.items())}}
            for p in sorted(m.projections, key=lambda p: p.upper)
        ],
        "probabilities": dict(sorted(m.probabilities.items())),
        "requirements": [
            {
                "name": r.name,
                "layer": r.layer,
                "source": _endpoint_value(r.source),
                "destination": _endpoint_value(r.destination),
                "characteristics": dict(r.characteristics),
            }
            for r in m.requirements
        ],
    }
    if m.quorums:
        doc["quorums"] = [{"members": sorted(q.members), "k": q.k} for q in m.quorums]
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


# -- validation ------------------------------------------------------------


def validate_model(m: LayeredModel) -> list[Violation]:
    """Return every structural violation found; an empty list means the model is valid."""
    out: list[Violation] = []
    indices = [layer.index for layer in m.layers]
    if sorted(indices) != list(range(1, len(indices) + 1)):
        out.append(Violation("layer indices", f"layer indices {indices} are not contiguous from 1"))
    if not 2 <= len(indices) <= MAX_LAYERS:
        out.append(Violation("layer count", f"model has {len(indices)} layers, expected 2..{MAX_LAYERS}"))

    owner: dict[str, int] = {}
    for layer in m.layers:
        if not layer.components:
            out.append(Violation("empty layer", f"layer {layer.index} has no components", layer.index))
        for c in layer.components:
            if not c.id:
                out.append(Violation("empty id", f"empty component id on layer {layer.index}", layer.index))
            if c.id in owner:
                out.append(Violation("duplicate component",
                                     f"{c.id} declared on layers {owner[c.id]} and {layer.index}",
                                     layer.index, c.id))
            owner.setdefault(c.id, layer.index)

    for layer in m.layers:
        ids = set(layer.ids)
        for a, b in layer.links:
            if a == b:
                out.append(Violation("self-loop", f"{a} is linked to itself", layer.index, a))
                continue
            for end in (a, b):
                if end not in owner:
                    out.append(Violation("unknown component", f"link {a}-{b} references unknown {end}",
                                         layer.index, end))
                elif end not in ids:
                    out.append(Violation("cross-layer link",
                                         f"link {a}-{b} on layer {layer.index} references {end} "
                                         f"from layer {owner[end]}", layer.index, end))
        for ap in sorted(layer.access_points - ids):
            out.append(Violation("access point", f"access point {ap} is not a component of layer "
                                 f"{layer.index}", layer.index, ap))

    layer_ids = {layer.index: set(layer.ids) for layer in m.layers}
    mapped: dict[int, set[str]] = {}
    for proj in m.projections:
        if proj.lower != proj.upper - 1 or proj.upper not in layer_ids or proj.lower not in layer_ids:
            out.append(Violation("projection layers",
                                 f"projection {proj.upper}->{proj.lower} does not join adjacent layers"))
            continue
        for src, image in sorted(proj.map.items()):
            if src not in layer_ids[proj.upper]:
                out.append(Violation("projection domain", f"{src} is not a component of layer {proj.upper}",
                                     proj.upper, src))
            if not image:
                out.append(Violation("unmapped component", f"{src} has an empty projection image",
                                     proj.upper, src))
                continue
            mapped.setdefault(proj.upper, set()).add(src)
            for dst in sorted(image - layer_ids[proj.lower]):
                out.append(Violation("projection image",
                                     f"{src} projects to {dst}, not a component of layer {proj.lower}",
                                     proj.upper, dst))
    for n, ids in sorted(layer_ids.items()):
        if n == 1:
            continue
        for cid in sorted(ids - mapped.get(n, set())):
            out.append(Violation("unmapped component", f"{cid} has no projection onto layer {n - 1}", n, cid))

    for cid, p in sorted(m.probabilities.items()):
        if cid not in owner:
            out.append(Violation("unknown component", f"probability given for unknown {cid}", component=cid))
        if not 0.0 < p <= 1.0:
            out.append(Violation("probability out of range", f"p({cid}) = {p}", component=cid))

    for req in m.requirements:
        ids = layer_ids.get(req.layer)
        if ids is None:
            out.append(Violation("requirement layer", f"requirement {req.name!r} anchored at missing layer "
                                 f"{req.layer}"))
            continue
        for end in req.source + req.destination:
            if end not in ids:
                out.append(Violation("requirement endpoint", f"requirement {req.name!r}: {end} is not on "
                                     f"layer {req.layer}", req.layer, end))
        if set(req.source) & set(req.destination):
            out.append(Violation("requirement endpoint", f"requirement {req.name!r} has identical source "
                                 "and destination", req.layer))

    for q in m.quorums:
        if len({owner.get(v) for v in q.members}) != 1 or None in {owner.get(v) for v in q.members}:
            out.append(Violation("quorum", f"quorum group {sorted(q.members)} is not on a single layer"))
        if not 1 <= q.k < len(q.members):
            out.append(Violation("quorum", f"quorum k={q.k} outside 1..{len(q.members) - 1} for "
                                 f"{sorted(q.members)}"))
    return out
