"""Requirement projection and data-flow (simple path) enumeration per layer."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import PathExplosionError, UnmappedEndpointError
from .model import Graph, LayeredModel, Requirement, layer_graph

DEFAULT_PATH_CAP = 10_000

Path = tuple[str, ...]


@dataclass(frozen=True, order=True)
class EndpointPair:
    layer: int
    source: str
    destination: str
    requirement: str
    # (source, destination) on the requirement's own layer this pair descends from
    anchor: tuple[str, str]


@dataclass(frozen=True)
class PathSet:
    layer: int
    requirement: str
    flows: tuple[tuple[EndpointPair, tuple[Path, ...]], ...]

    @property
    def paths(self) -> tuple[Path, ...]:
        return tuple(p for _, paths in self.flows for p in paths)

    @property
    def pairs(self) -> tuple[EndpointPair, ...]:
        return tuple(pair for pair, _ in self.flows)

    def subsystems(self) -> dict[tuple[str, str], tuple[Path, ...]]:
        """Paths grouped by anchor pair; each group is an independent subsystem."""
        out: dict[tuple[str, str], list[Path]] = {}
        for pair, paths in self.flows:
            out.setdefault(pair.anchor, []).extend(paths)
        return {k: tuple(v) for k, v in sorted(out.items())}

    def unsatisfied(self) -> tuple[EndpointPair, ...]:
        return tuple(pair for pair, paths in self.flows if not paths)


def _image(m: LayeredModel, component: str, start: int, n: int) -> frozenset[str]:
    current = frozenset([component])
    for upper in range(start, n, -1):
        proj = m.projection(upper)
        nxt: set[str] = set()
        for v in current:
            nxt |= proj.map.get(v, frozenset()) if proj else frozenset()
        if not nxt:
            raise UnmappedEndpointError(
                f"{component} has no projection image on layer {upper - 1}")
        current = frozenset(nxt)
    return current


def project_endpoints(m: LayeredModel, r: Requirement, n: int) -> list[EndpointPair]:
    """Endpoint pairs of ``r`` on layer ``n``, composed through the projections.

    Pairs whose projected endpoints coincide are dropped.
    """
    if n > r.layer or n < 1:
        raise ValueError(f"layer {n} is not at or below requirement layer {r.layer}")
    out = []
    for src, dst in itertools.product(r.source, r.destination):
        if src == dst:
            continue
        for a, b in itertools.product(sorted(_image(m, src, r.layer, n)), sorted(_image(m, dst, r.layer, n))):
            if a != b:
                out.append(EndpointPair(n, a, b, r.name, (src, dst)))
    return sorted(out)


def enumerate_simple_paths(g: Graph, src: str, dst: str, cap: int = DEFAULT_PATH_CAP,
                           avoid: frozenset[str] | set[str] = frozenset()) -> list[Path]:
    """All simple paths from ``src`` to ``dst`` in lexicographic order.

    Vertices in ``avoid`` may not appear as intermediate hops (they may still be
    the endpoints). Raises :class:`PathExplosionError` once more than ``cap``
    paths are found.
    """
    if src == dst:
        raise ValueError("source and destination must differ")
    for v in (src, dst):
        if v not in g.adjacency:
            raise ValueError(f"{v} is not a vertex of the graph")

    paths: list[Path] = []
    stack = [src]
    on_path = {src}
    iters = [iter(sorted(g.neighbors(src)))]
    while iters:
        nxt = next(iters[-1], None)
        if nxt is None:
            iters.pop()
            on_path.discard(stack.pop())
            continue
        if nxt in on_path:
            continue
        if nxt == dst:
            paths.append((*stack, dst))
            if len(paths) > cap:
                raise PathExplosionError(f"more than {cap} paths between {src} and {dst}")
            continue
        if nxt in avoid:
            continue
        stack.append(nxt)
        on_path.add(nxt)
        iters.append(iter(sorted(g.neighbors(nxt))))
    return sorted(paths)


def terminal_components(m: LayeredModel, n: int) -> frozenset[str]:
    """Components of layer ``n`` that end flows and never relay them.

    These are the access points plus every projected requirement endpoint.
    """
    out = set(m.layer(n).access_points)
    for r in m.requirements:
        if r.layer >= n:
            for pair in project_endpoints(m, r, n):
                out.update((pair.source, pair.destination))
    return frozenset(out)


def coverage_flows(m: LayeredModel, cap: int = DEFAULT_PATH_CAP) -> dict[tuple[str, int], PathSet]:
    """Data flows for every requirement on its own layer and every layer below it."""
    graphs = {}
    terminals = {}
    out = {}
    for r in m.requirements:
        for n in range(r.layer, 0, -1):
            if n not in graphs:
                graphs[n] = layer_graph(m, n)
                terminals[n] = terminal_components(m, n)
            flows = tuple(
                (pair, tuple(enumerate_simple_paths(graphs[n], pair.source, pair.destination, cap,
                                                    avoid=terminals[n])))
                for pair in project_endpoints(m, r, n)
            )
            out[(r.name, n)] = PathSet(n, r.name, flows)
    return out
