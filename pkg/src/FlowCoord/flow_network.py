"""
The auxiliary min-cost-flow network for horizontal coordinate assignment.

Flow represents horizontal distance and travels top to bottom through the
layers. For layer i with n nodes there are gap nodes W(i, 0..n) above the layer
and Z(i, 0..n) below it; gap j lies left of node position j. The A-edge
W(i, j) -> Z(i, j) carries the width of gap j. B-edges move flow sideways
within a row and pay for the graph edges they cross over; C-edges hand flow
down to the next layer, at the two boundaries and wherever the edges form a
hug.

Width cap:
    A gate node s' sits between the source and the top row; the gate arc's
    upper bound of W + 2 limits the drawing to width W (every layer spends two
    units on its boundary gaps).

Vertical edges:
    Removing every network edge that crosses over a graph edge forces that
    edge to be drawn vertically.
"""

import logging
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Iterable, Mapping, NamedTuple, Optional

from FlowCoord.flow_errors import GraphError, OptionsError
from FlowCoord.flow_graph import Edge, LayeredGraph, validate
from FlowCoord.flow_settings import (
    BOUNDARY_MARGIN_LOWER,
    DEFAULT_BACKEND,
    DEFAULT_MAX_DIST,
    DEFAULT_MIN_DIST,
    DEFAULT_NORMALIZE,
)

logger = logging.getLogger(__name__)


class NodeKind(Enum):
    W = "w"
    Z = "z"
    SOURCE = "s"
    SINK = "t"
    GATE = "s'"


class NetNode(NamedTuple):
    kind: NodeKind
    layer: int = -1
    slot: int = -1

    def __str__(self) -> str:
        if self.kind in (NodeKind.W, NodeKind.Z):
            return f"{self.kind.value}({self.layer},{self.slot})"
        return self.kind.value


def W(layer: int, slot: int) -> NetNode:  # pylint: disable=invalid-name
    return NetNode(NodeKind.W, layer, slot)


def Z(layer: int, slot: int) -> NetNode:  # pylint: disable=invalid-name
    return NetNode(NodeKind.Z, layer, slot)


SOURCE = NetNode(NodeKind.SOURCE)
SINK = NetNode(NodeKind.SINK)
GATE = NetNode(NodeKind.GATE)


class EdgeKind(Enum):
    A = "A"
    BW_RIGHT = "BW_right"
    BW_LEFT = "BW_left"
    BZ_RIGHT = "BZ_right"
    BZ_LEFT = "BZ_left"
    C = "C"
    SOURCE_ARC = "SourceArc"
    SINK_ARC = "SinkArc"
    GATE_ARC = "GateArc"


B_KINDS = frozenset({EdgeKind.BW_RIGHT, EdgeKind.BW_LEFT, EdgeKind.BZ_RIGHT, EdgeKind.BZ_LEFT})
COSTED_KINDS = B_KINDS | {EdgeKind.C}


@dataclass(frozen=True)
class NetEdge:
    id: int
    tail: NetNode
    head: NetNode
    lower: int
    upper: Optional[int]  # None = unbounded
    cost: int
    kind: EdgeKind
    index: tuple[int, ...] = ()

    @property
    def label(self) -> str:
        return f"{self.kind.value}{self.index}" if self.index else self.kind.value

    def capacity(self, big_upper: int) -> int:
        return big_upper if self.upper is None else self.upper


@dataclass(frozen=True)
class LayoutOptions:
    """Per-run constraints.

    min_dist / max_dist are keyed by (layer, gap) for interior gaps only,
    1 <= gap <= |L_i| - 1; unlisted gaps use the defaults.
    """

    width_cap: Optional[int] = None
    min_dist: Mapping[tuple[int, int], int] = field(default_factory=dict)
    max_dist: Mapping[tuple[int, int], int] = field(default_factory=dict)
    default_min_dist: int = DEFAULT_MIN_DIST
    default_max_dist: Optional[int] = DEFAULT_MAX_DIST
    vertical_edges: frozenset[Edge] = frozenset()
    normalize: bool = DEFAULT_NORMALIZE
    big_upper: Optional[int] = None
    backend: str = DEFAULT_BACKEND

    def min_gap(self, layer: int, gap: int) -> int:
        return self.min_dist.get((layer, gap), self.default_min_dist)

    def max_gap(self, layer: int, gap: int) -> Optional[int]:
        return self.max_dist.get((layer, gap), self.default_max_dist)

    def with_width_cap(self, width_cap: Optional[int]) -> "LayoutOptions":
        return replace(self, width_cap=width_cap)

    def with_vertical(self, edges: Iterable[Edge]) -> "LayoutOptions":
        return replace(self, vertical_edges=frozenset(self.vertical_edges) | frozenset(edges))

    def check(self, graph: LayeredGraph) -> None:
        if self.width_cap is not None and self.width_cap < 0:
            raise OptionsError(f"width cap must be non-negative, got {self.width_cap}")
        if self.big_upper is not None and self.big_upper < 1:
            raise OptionsError(f"big_upper must be positive, got {self.big_upper}")
        if self.default_min_dist < 1:
            raise OptionsError(f"minimum distance must be >= 1, got {self.default_min_dist}")
        if self.default_max_dist is not None and self.default_max_dist < self.default_min_dist:
            raise OptionsError(
                f"default max_dist {self.default_max_dist} < default min_dist {self.default_min_dist}"
            )

        sizes = graph.layer_sizes()
        for key in set(self.min_dist) | set(self.max_dist):
            layer, gap = key
            if not 0 <= layer < len(sizes) or not 1 <= gap <= sizes[layer] - 1:
                raise OptionsError(f"gap {key} is not an interior gap of the graph")
            low, high = self.min_gap(layer, gap), self.max_gap(layer, gap)
            if low < 1:
                raise OptionsError(f"min_dist at {key} must be >= 1, got {low}")
            if high is not None and high < low:
                raise OptionsError(f"max_dist {high} < min_dist {low} at gap {key}")

        for edge in self.vertical_edges:
            if not graph.has_edge(edge):
                raise OptionsError(f"vertical edge {edge} is not an edge of the graph")


@dataclass(frozen=True, eq=False)
class FlowNetwork:
    nodes: tuple[NetNode, ...]
    edges: tuple[NetEdge, ...]
    origin: LayeredGraph
    big_upper: int
    gated: bool = False
    removed: frozenset[int] = frozenset()

    def __post_init__(self) -> None:
        object.__setattr__(self, "_by_id", {edge.id: edge for edge in self.edges})
        object.__setattr__(
            self,
            "_a_edges",
            {edge.index: edge for edge in self.edges if edge.kind is EdgeKind.A},
        )

    @property
    def root(self) -> NetNode:
        """The node source arcs leave from."""
        return GATE if self.gated else SOURCE

    def edge(self, edge_id: int) -> NetEdge:
        return self._by_id[edge_id]  # type: ignore[attr-defined]

    def has_edge(self, edge_id: int) -> bool:
        return edge_id in self._by_id  # type: ignore[attr-defined]

    def a_edge(self, layer: int, gap: int) -> NetEdge:
        return self._a_edges[(layer, gap)]  # type: ignore[attr-defined]

    def edges_of_kind(self, *kinds: EdgeKind) -> list[NetEdge]:
        return [edge for edge in self.edges if edge.kind in kinds]

    def find(self, kind: EdgeKind, *index: int) -> Optional[NetEdge]:
        for edge in self.edges:
            if edge.kind is kind and edge.index == index:
                return edge
        return None

    def without(self, edge_ids: Iterable[int]) -> "FlowNetwork":
        drop = frozenset(edge_ids) & frozenset(self._by_id)  # type: ignore[attr-defined]
        if not drop:
            return self
        return FlowNetwork(
            nodes=self.nodes,
            edges=tuple(edge for edge in self.edges if edge.id not in drop),
            origin=self.origin,
            big_upper=self.big_upper,
            gated=self.gated,
            removed=self.removed | drop,
        )

    def summary(self) -> dict[str, int]:
        counts = {kind.value: 0 for kind in EdgeKind}
        for edge in self.edges:
            counts[edge.kind.value] += 1
        counts["nodes"] = len(self.nodes)
        return counts


def detect_hugs(graph: LayeredGraph, layer: int) -> set[tuple[int, int]]:
    """Gap pairs (j, k) with a hug between Z(layer, j) and W(layer + 1, k).

    A hug needs e1 out of node p, e2 out of p' (next node right of p with an
    outgoing edge), e3 into q, e4 into q' (next node right of q with an
    incoming edge) such that
        start(e3) <= p < p' <= start(e4)  and  target(e1) <= q < q' <= target(e2).
    Each edge only meets one inequality, so it suffices to compare the extreme
    neighbour positions of p, p', q and q'. The gap right of p is p + 1.
    """
    if not 0 <= layer < graph.layer_count - 1:
        return set()

    out_min: dict[int, int] = {}
    out_max: dict[int, int] = {}
    in_min: dict[int, int] = {}
    in_max: dict[int, int] = {}
    for p, q in graph.edges_between(layer):
        out_min[p] = min(out_min.get(p, q), q)
        out_max[p] = max(out_max.get(p, q), q)
        in_min[q] = min(in_min.get(q, p), p)
        in_max[q] = max(in_max.get(q, p), p)

    sources = sorted(out_min)
    targets = sorted(in_min)
    hugs = set()
    for p, p_next in zip(sources, sources[1:]):
        for q, q_next in zip(targets, targets[1:]):
            if (
                in_min[q] <= p
                and out_min[p] <= q
                and in_max[q_next] >= p_next
                and out_max[p_next] >= q_next
            ):
                hugs.add((p + 1, q + 1))
    return hugs


def compute_c_cost(graph: LayeredGraph, layer: int, j: int, k: int) -> int:
    """Number of edges between `layer` and `layer + 1` that C(layer, j, k) crosses over.

    Z(layer, j) is left of source positions >= j and W(layer + 1, k) is left of
    target positions >= k.
    """
    return sum(
        1
        for p, q in graph.edges_between(layer)
        if (p < j and q >= k) or (p >= j and q < k)
    )


def big_upper_for(graph: LayeredGraph, options: LayoutOptions) -> int:
    if options.big_upper is not None:
        return options.big_upper
    if options.width_cap is not None:
        return options.width_cap + 2 * BOUNDARY_MARGIN_LOWER
    # an optimal drawing spans at most one tight bound per interior gap
    interior = sum(
        options.min_gap(i, gap) if options.max_gap(i, gap) is None else options.max_gap(i, gap)
        for i, size in enumerate(graph.layer_sizes())
        for gap in range(1, size)
    )
    return 2 * BOUNDARY_MARGIN_LOWER + graph.node_count + interior


def build_network(graph: LayeredGraph, options: Optional[LayoutOptions] = None) -> FlowNetwork:
    options = options or LayoutOptions()
    report = validate(graph)
    if not report.ok:
        raise GraphError(f"graph is not a proper layered DAG: {report.violations[0]}")
    if graph.layer_count == 0:
        raise GraphError("graph has no layers")
    options.check(graph)

    big_upper = big_upper_for(graph, options)
    sizes = graph.layer_sizes()
    last = len(sizes) - 1
    gated = options.width_cap is not None

    nodes: list[NetNode] = [SOURCE]
    if gated:
        nodes.append(GATE)
    for i, size in enumerate(sizes):
        nodes.extend(W(i, j) for j in range(size + 1))
        nodes.extend(Z(i, j) for j in range(size + 1))
    nodes.append(SINK)

    edges: list[NetEdge] = []

    def add(tail, head, lower, upper, cost, kind, *index) -> None:
        edges.append(NetEdge(len(edges), tail, head, lower, upper, cost, kind, tuple(index)))

    root = SOURCE
    if gated:
        add(SOURCE, GATE, 0, options.width_cap + 2 * BOUNDARY_MARGIN_LOWER, 0, EdgeKind.GATE_ARC)
        root = GATE
    for j in range(sizes[0] + 1):
        add(root, W(0, j), 0, None, 0, EdgeKind.SOURCE_ARC, j)

    for i, size in enumerate(sizes):
        for j in range(size + 1):
            if 0 < j < size:
                add(W(i, j), Z(i, j), options.min_gap(i, j), options.max_gap(i, j), 0, EdgeKind.A, i, j)
            else:
                add(W(i, j), Z(i, j), BOUNDARY_MARGIN_LOWER, None, 0, EdgeKind.A, i, j)

        for p, node in enumerate(graph.layers[i]):
            indeg, outdeg = graph.in_degree(node), graph.out_degree(node)
            add(W(i, p), W(i, p + 1), 0, None, indeg, EdgeKind.BW_RIGHT, i, p)
            add(W(i, p + 1), W(i, p), 0, None, indeg, EdgeKind.BW_LEFT, i, p)
            add(Z(i, p), Z(i, p + 1), 0, None, outdeg, EdgeKind.BZ_RIGHT, i, p)
            add(Z(i, p + 1), Z(i, p), 0, None, outdeg, EdgeKind.BZ_LEFT, i, p)

        if i < last:
            pairs = {(0, 0), (size, sizes[i + 1])} | detect_hugs(graph, i)
            for j, k in sorted(pairs):
                add(Z(i, j), W(i + 1, k), 0, None, compute_c_cost(graph, i, j, k), EdgeKind.C, i, j, k)

    for k in range(sizes[last] + 1):
        add(Z(last, k), SINK, 0, None, 0, EdgeKind.SINK_ARC, k)

    network = FlowNetwork(tuple(nodes), tuple(edges), graph, big_upper, gated)

    for edge in graph.edges:
        if edge in options.vertical_edges:
            network = enforce_vertical(network, graph, edge)

    logger.debug("built network %s (big_upper=%d)", network.summary(), big_upper)
    return network


def crossing_sets(
    graph: LayeredGraph, network: FlowNetwork, edge: Edge
) -> tuple[frozenset[int], frozenset[int]]:
    """Ids of the network edges crossing over `edge` left-to-right and right-to-left.

    With gap slot a and node position p of the same row, the gap node is left of
    the graph node iff a <= p and right of it iff a > p.
    """
    u, v = edge
    layer, p = graph.locate(u)
    q = graph.position_of(v)

    right: set[int] = set()
    left: set[int] = set()
    for net_edge in network.edges:
        tail, head = net_edge.tail, net_edge.head
        if net_edge.kind is EdgeKind.C:
            if tail.layer != layer:
                continue
            if tail.slot <= p and head.slot > q:
                right.add(net_edge.id)
            elif tail.slot > p and head.slot <= q:
                left.add(net_edge.id)
            continue

        if net_edge.kind in (EdgeKind.BW_RIGHT, EdgeKind.BW_LEFT) and tail.layer == layer + 1:
            pivot = q
        elif net_edge.kind in (EdgeKind.BZ_RIGHT, EdgeKind.BZ_LEFT) and tail.layer == layer:
            pivot = p
        else:
            continue

        if tail.slot <= pivot < head.slot:
            right.add(net_edge.id)
        elif head.slot <= pivot < tail.slot:
            left.add(net_edge.id)

    return frozenset(right), frozenset(left)


def enforce_vertical(network: FlowNetwork, graph: LayeredGraph, edge: Edge) -> FlowNetwork:
    right, left = crossing_sets(graph, network, edge)
    logger.debug("enforcing %s vertical: dropping %d network edges", edge, len(right | left))
    return network.without(right | left)


if __name__ == "__main__":
    from FlowCoord.flow_graph import fig1_family

    demo = build_network(fig1_family(5), LayoutOptions(width_cap=1))
    for counted, amount in demo.summary().items():
        print(f"{counted:>10}: {amount}")
