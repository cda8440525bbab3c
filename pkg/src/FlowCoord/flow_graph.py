"""
Properly layered, ordered DAGs.

A LayeredGraph is the input of coordinate assignment: every node sits in one
layer at one position, and (once properized) every edge joins consecutive
layers. Layers and positions are 0-based. Graphs are immutable; every
operation here returns a new graph.

Features:
    - validate(): lists every invariant violation as data
    - properize(): subdivides long edges through caller-placed dummy nodes
    - fig1_family(): the k-layer staircase fixture (width vs. length trade-off)
    - generate_random(): seeded corpus generator
"""

import logging
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, Mapping, Optional, Sequence

import numpy as np

from FlowCoord.flow_errors import GraphError

logger = logging.getLogger(__name__)

NodeId = str
Edge = tuple[NodeId, NodeId]


class ViolationKind(Enum):
    NOT_PROPER = "NotProper"
    DUPLICATE_NODE = "DuplicateNode"
    UNKNOWN_ENDPOINT = "UnknownEndpoint"
    SAME_LAYER_EDGE = "SameLayerEdge"
    SELF_LOOP = "SelfLoop"
    WRONG_DIRECTION = "WrongDirection"
    DUPLICATE_EDGE = "DuplicateEdge"


@dataclass(frozen=True)
class Violation:
    kind: ViolationKind
    element: object

    def __str__(self) -> str:
        return f"{self.kind.value}: {self.element!r}"


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def kinds(self) -> set[ViolationKind]:
        return {violation.kind for violation in self.violations}


@dataclass(frozen=True, eq=False)
class LayeredGraph:
    """Layers top to bottom, each an ordered tuple of node labels.

    `dummy_map` maps every original long edge to the chain of dummy nodes that
    replaced it, in top-to-bottom order.
    """

    layers: tuple[tuple[NodeId, ...], ...]
    edges: tuple[Edge, ...]
    dummy_map: Mapping[Edge, tuple[NodeId, ...]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        # normalise containers so graphs built from lists compare equal
        object.__setattr__(self, "layers", tuple(tuple(layer) for layer in self.layers))
        object.__setattr__(self, "edges", tuple((u, v) for u, v in self.edges))
        object.__setattr__(
            self, "dummy_map", {edge: tuple(chain) for edge, chain in self.dummy_map.items()}
        )

        index: dict[NodeId, tuple[int, int]] = {}
        for i, layer in enumerate(self.layers):
            for p, node in enumerate(layer):
                index.setdefault(node, (i, p))
        object.__setattr__(self, "_index", index)
        object.__setattr__(self, "_edge_set", frozenset(self.edges))
        object.__setattr__(self, "_between", {})
        object.__setattr__(self, "_in_degree", Counter(v for _, v in self.edges))
        object.__setattr__(self, "_out_degree", Counter(u for u, _ in self.edges))
        object.__setattr__(
            self, "_dummies", frozenset(d for chain in self.dummy_map.values() for d in chain)
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LayeredGraph):
            return NotImplemented
        return (
            self.layers == other.layers
            and self.edges == other.edges
            and dict(self.dummy_map) == dict(other.dummy_map)
        )

    __hash__ = None  # type: ignore[assignment]

    # LOOKUPS
    @property
    def layer_count(self) -> int:
        return len(self.layers)

    @property
    def node_count(self) -> int:
        return sum(len(layer) for layer in self.layers)

    def layer_sizes(self) -> tuple[int, ...]:
        return tuple(len(layer) for layer in self.layers)

    def nodes(self) -> Iterator[NodeId]:
        for layer in self.layers:
            yield from layer

    def __contains__(self, node: object) -> bool:
        return node in self._index  # type: ignore[attr-defined]

    def locate(self, node: NodeId) -> tuple[int, int]:
        try:
            return self._index[node]  # type: ignore[attr-defined]
        except KeyError as error:
            raise GraphError(f"unknown node {node!r}") from error

    def layer_of(self, node: NodeId) -> int:
        return self.locate(node)[0]

    def position_of(self, node: NodeId) -> int:
        return self.locate(node)[1]

    def node_at(self, layer: int, position: int) -> NodeId:
        return self.layers[layer][position]

    def in_degree(self, node: NodeId) -> int:
        return self._in_degree[node]  # type: ignore[attr-defined]

    def out_degree(self, node: NodeId) -> int:
        return self._out_degree[node]  # type: ignore[attr-defined]

    def has_edge(self, edge: Edge) -> bool:
        return edge in self._edge_set  # type: ignore[attr-defined]

    def edges_between(self, layer: int) -> list[tuple[int, int]]:
        """(source position, target position) for every edge from `layer` to `layer + 1`."""
        cached = self._between.get(layer)  # type: ignore[attr-defined]
        if cached is not None:
            return list(cached)
        pairs = []
        for u, v in self.edges:
            lu, pu = self.locate(u)
            if lu != layer:
                continue
            lv, pv = self.locate(v)
            if lv == layer + 1:
                pairs.append((pu, pv))
        self._between[layer] = tuple(pairs)  # type: ignore[attr-defined]
        return pairs

    def is_dummy(self, node: NodeId) -> bool:
        return node in self._dummies  # type: ignore[attr-defined]

    def chain_segments(self) -> dict[Edge, list[Edge]]:
        """Segments of each dummy chain, keyed by the original long edge."""
        segments = {}
        for (u, v), chain in self.dummy_map.items():
            path = [u, *chain, v]
            segments[(u, v)] = list(zip(path, path[1:]))
        return segments

    def segments_of(self, edge: Edge) -> list[Edge]:
        """The proper edges that draw `edge`: its dummy chain when it was long, else itself."""
        if edge in self.dummy_map:
            path = [edge[0], *self.dummy_map[edge], edge[1]]
            return list(zip(path, path[1:]))
        if self.has_edge(edge):
            return [edge]
        raise GraphError(f"{edge[0]} -> {edge[1]} is not an edge of the graph")


def validate(graph: LayeredGraph) -> ValidationReport:
    violations: list[Violation] = []

    seen: set[NodeId] = set()
    for i, layer in enumerate(graph.layers):
        for p, node in enumerate(layer):
            if node in seen:
                violations.append(Violation(ViolationKind.DUPLICATE_NODE, (node, i, p)))
            seen.add(node)

    seen_edges: set[Edge] = set()
    for edge in graph.edges:
        u, v = edge
        if edge in seen_edges:
            violations.append(Violation(ViolationKind.DUPLICATE_EDGE, edge))
            continue
        seen_edges.add(edge)

        if u == v:
            violations.append(Violation(ViolationKind.SELF_LOOP, edge))
            continue
        if u not in graph or v not in graph:
            violations.append(Violation(ViolationKind.UNKNOWN_ENDPOINT, edge))
            continue

        lu, lv = graph.layer_of(u), graph.layer_of(v)
        if lu == lv:
            violations.append(Violation(ViolationKind.SAME_LAYER_EDGE, edge))
        elif lv < lu:
            violations.append(Violation(ViolationKind.WRONG_DIRECTION, edge))
        elif lv > lu + 1:
            violations.append(Violation(ViolationKind.NOT_PROPER, edge))

    return ValidationReport(tuple(violations))


def _dummy_label(edge: Edge, layer: int) -> NodeId:
    return f"{edge[0]}~{edge[1]}~{layer}"


def properize(
    graph: LayeredGraph,
    dummy_positions: Optional[Mapping[Edge, Sequence[int]]] = None,
) -> LayeredGraph:
    """Replace every long edge by a chain through one dummy per intermediate layer.

    `dummy_positions[edge]` gives, for each intermediate layer from top to
    bottom, the index the dummy takes in the resulting layer order.
    """
    report = validate(graph)
    blocking = report.kinds() - {ViolationKind.NOT_PROPER}
    if blocking:
        first = next(v for v in report.violations if v.kind in blocking)
        raise GraphError(f"cannot properize an illegal layering ({first})")
    if report.ok:
        return graph

    dummy_positions = dummy_positions or {}
    requests: dict[int, list[tuple[int, NodeId]]] = {}
    new_edges: list[Edge] = []
    dummy_map = dict(graph.dummy_map)

    for edge in graph.edges:
        u, v = edge
        lu, lv = graph.layer_of(u), graph.layer_of(v)
        span = lv - lu
        if span == 1:
            new_edges.append(edge)
            continue

        positions = list(dummy_positions.get(edge, ()))
        if len(positions) < span - 1:
            missing = lu + 1 + len(positions)
            raise GraphError(
                f"missing order position for dummy of {u}->{v} in layer {missing}",
                layer=missing,
            )
        if len(positions) > span - 1:
            raise GraphError(f"too many dummy positions for {u}->{v}", layer=lv)

        chain = []
        for offset, position in enumerate(positions, start=1):
            layer = lu + offset
            dummy = _dummy_label(edge, layer)
            if dummy in graph:
                raise GraphError(f"dummy label {dummy!r} clashes with a node", layer=layer)
            requests.setdefault(layer, []).append((position, dummy))
            chain.append(dummy)

        path = [u, *chain, v]
        new_edges.extend(zip(path, path[1:]))
        dummy_map[edge] = tuple(chain)

    layers = [list(layer) for layer in graph.layers]
    for layer, wanted in requests.items():
        wanted.sort()
        taken = [position for position, _ in wanted]
        if len(set(taken)) != len(taken):
            raise GraphError(f"two dummies requested the same position in layer {layer}", layer=layer)
        for position, dummy in wanted:
            if not 0 <= position <= len(layers[layer]):
                raise GraphError(
                    f"dummy position {position} out of range in layer {layer}", layer=layer
                )
            layers[layer].insert(position, dummy)

    result = LayeredGraph(tuple(map(tuple, layers)), tuple(new_edges), dummy_map)
    logger.debug(
        "properized %d long edges into %d dummies",
        len(dummy_map) - len(graph.dummy_map),
        sum(len(r) for r in requests.values()),
    )
    return result


def fig1_family(k: int) -> LayeredGraph:
    """k-layer staircase: a, then pairs (l_i, r_i), then h.

    Drawn in two columns it has width 1 and length k-3; drawn as a staircase it
    has length 0 and width k-2.
    """
    if k < 4:
        raise GraphError(f"fig1_family needs k >= 4, got {k}")

    layers: list[tuple[NodeId, ...]] = [("a",)]
    layers.extend((f"l{i}", f"r{i}") for i in range(2, k))
    layers.append(("h",))

    edges: list[Edge] = [("a", "l2")]
    edges.extend((f"r{i}", f"l{i + 1}") for i in range(2, k - 1))
    edges.append((f"r{k - 1}", "h"))
    return LayeredGraph(tuple(layers), tuple(edges))


def generate_random(
    layer_count: int,
    size_range: tuple[int, int],
    edge_density: float,
    seed: int,
) -> LayeredGraph:
    """Seeded proper layered graph; each consecutive pair is a Bernoulli bipartite graph."""
    low, high = size_range
    if layer_count < 1:
        raise GraphError(f"layer_count must be >= 1, got {layer_count}")
    if low < 1 or high < low:
        raise GraphError(f"size_range must satisfy 1 <= low <= high, got {size_range}")
    if not 0.0 <= edge_density <= 1.0:
        raise GraphError(f"edge_density must lie in [0, 1], got {edge_density}")

    rng = np.random.default_rng(seed)
    sizes = rng.integers(low, high + 1, size=layer_count)
    layers = tuple(
        tuple(f"n{i}_{p}" for p in range(int(size))) for i, size in enumerate(sizes)
    )

    edges: list[Edge] = []
    for i in range(layer_count - 1):
        upper, lower = layers[i], layers[i + 1]
        draws = rng.random((len(upper), len(lower)))
        chosen = [
            (upper[p], lower[q])
            for p in range(len(upper))
            for q in range(len(lower))
            if draws[p, q] < edge_density
        ]
        if not chosen and edge_density > 0:
            p = int(rng.integers(len(upper)))
            q = int(rng.integers(len(lower)))
            chosen = [(upper[p], lower[q])]
        edges.extend(chosen)

    return LayeredGraph(layers, tuple(edges))
