"""
From a flow to x-coordinates, and the identities a flow and its drawing obey.

x of the node at position p of layer i is the total flow over the A-edges of
gaps 0..p of that layer; y is the layer index.
"""

import logging
from dataclasses import dataclass
from typing import Any, Mapping, Optional

from FlowCoord.flow_errors import InfeasibleError
from FlowCoord.flow_graph import LayeredGraph, NodeId
from FlowCoord.flow_network import COSTED_KINDS, FlowNetwork, crossing_sets
from FlowCoord.flow_settings import BOUNDARY_MARGIN_LOWER, DEFAULT_NORMALIZE
from FlowCoord.flow_solver import Flow, check_feasibility, flow_cost, source_outflow

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Layout:
    x: Mapping[NodeId, int]
    y: Mapping[NodeId, int]
    total_length: int
    width: int

    @property
    def metrics(self) -> tuple[int, int]:
        return self.total_length, self.width

    def gap(self, left: NodeId, right: NodeId) -> int:
        return self.x[right] - self.x[left]

    def columns(self) -> list[int]:
        return sorted(set(self.x.values()))


def layout_metrics(layout: Layout, graph: LayeredGraph) -> tuple[int, int]:
    return _metrics(layout.x, graph)


def _metrics(x: Mapping[NodeId, int], graph: LayeredGraph) -> tuple[int, int]:
    total_length = sum(abs(x[v] - x[u]) for u, v in graph.edges)
    width = max(x.values()) - min(x.values()) if x else 0
    return total_length, width


def make_layout(graph: LayeredGraph, x: Mapping[NodeId, int], normalize: bool = False) -> Layout:
    x = dict(x)
    if normalize and x:
        shift = min(x.values())
        x = {node: value - shift for node, value in x.items()}
    y = {node: graph.layer_of(node) for node in graph.nodes()}
    total_length, width = _metrics(x, graph)
    return Layout(x=x, y=y, total_length=total_length, width=width)


def extract_coordinates(
    graph: LayeredGraph,
    network: FlowNetwork,
    flow: Flow,
    normalize: bool = DEFAULT_NORMALIZE,
) -> Layout:
    if not check_feasibility(network, flow):
        raise InfeasibleError("cannot extract coordinates from an infeasible flow")

    x: dict[NodeId, int] = {}
    for i, layer in enumerate(graph.layers):
        running = 0
        for p, node in enumerate(layer):
            running += flow.flow_on(network.a_edge(i, p).id)
            x[node] = running
    return make_layout(graph, x, normalize)


# PROPERTY CHECKS
@dataclass(frozen=True)
class PropertyCheck:
    name: str
    passed: bool
    asserted: bool = True
    witness: Optional[str] = None


@dataclass(frozen=True)
class PropertyReport:
    checks: tuple[PropertyCheck, ...]

    @property
    def ok(self) -> bool:
        return all(check.passed for check in self.checks if check.asserted)

    def get(self, name: str) -> PropertyCheck:
        return next(check for check in self.checks if check.name == name)

    def failures(self) -> list[PropertyCheck]:
        return [check for check in self.checks if check.asserted and not check.passed]

    def as_dict(self) -> dict[str, Any]:
        return {
            "ok": self.ok,
            "checks": [
                {
                    "name": check.name,
                    "passed": check.passed,
                    "asserted": check.asserted,
                    "witness": check.witness,
                }
                for check in self.checks
            ],
        }


def _layer_through_flow(network: FlowNetwork, flow: Flow, layer: int, size: int) -> list[int]:
    return [flow.flow_on(network.a_edge(layer, j).id) for j in range(size + 1)]


def verify_properties(
    graph: LayeredGraph,
    network: FlowNetwork,
    flow: Flow,
    is_optimal: bool,
) -> PropertyReport:
    """Exact integer checks of the cost/crossing identity, per-layer flow
    totals, the width bound, per-edge flow balance and cost_f >= length(E)
    (equality when is_optimal)."""
    checks: list[PropertyCheck] = []
    crossing = {edge: crossing_sets(graph, network, edge) for edge in graph.edges}
    sizes = graph.layer_sizes()
    f_s = source_outflow(network, flow.values)
    through = [_layer_through_flow(network, flow, i, size) for i, size in enumerate(sizes)]

    # cost of every B/C edge = number of graph edges it crosses over
    witness = None
    for net_edge in network.edges:
        if net_edge.kind not in COSTED_KINDS:
            continue
        crossed = sum(
            (net_edge.id in right) + (net_edge.id in left) for right, left in crossing.values()
        )
        if crossed != net_edge.cost:
            witness = f"{net_edge.label}: cost {net_edge.cost} but crosses {crossed}"
            break
    checks.append(PropertyCheck("crossing_cost", witness is None, witness=witness))

    # every layer passes exactly f(s) units through its A-edges
    witness = None
    for i, amounts in enumerate(through):
        if sum(amounts) != f_s:
            witness = f"layer {i}: {sum(amounts)} != f(s) = {f_s}"
            break
    checks.append(PropertyCheck("layer_totals", witness is None, witness=witness))

    # width <= f(s) - 2, and no layer's interior exceeds f(s)
    layout = extract_coordinates(graph, network, flow, normalize=False)
    witness = None
    for i, amounts in enumerate(through):
        interior = sum(amounts[1:-1])
        if interior > f_s:
            witness = f"layer {i}: interior flow {interior} > f(s) = {f_s}"
            break
    if witness is None and graph.node_count and layout.width > f_s - 2 * BOUNDARY_MARGIN_LOWER:
        witness = f"width {layout.width} > f(s) - 2 = {f_s - 2 * BOUNDARY_MARGIN_LOWER}"
    checks.append(PropertyCheck("width_bound", witness is None, witness=witness))

    # flow left of target = flow left of start + flow crossing right-to-left
    #     - flow crossing left-to-right
    witness = None
    for edge, (right, left) in crossing.items():
        layer, p = graph.locate(edge[0])
        q = graph.position_of(edge[1])
        below = sum(through[layer + 1][: q + 1])
        above = sum(through[layer][: p + 1])
        moved = sum(flow.flow_on(g) for g in left) - sum(flow.flow_on(g) for g in right)
        if below != above + moved:
            witness = f"edge {edge}: {below} != {above} + {moved}"
            break
    checks.append(PropertyCheck("edge_balance", witness is None, witness=witness))

    # cost_f >= length(E), with equality at the optimum
    cost_f = flow_cost(network, flow.values)
    length = layout.total_length
    checks.append(
        PropertyCheck(
            "cost_covers_length",
            cost_f >= length,
            witness=None if cost_f >= length else f"cost {cost_f} < length {length}",
        )
    )
    checks.append(
        PropertyCheck(
            "cost_equals_length",
            cost_f == length,
            asserted=is_optimal,
            witness=None if cost_f == length else f"cost {cost_f} != length {length}",
        )
    )

    report = PropertyReport(tuple(checks))
    if not report.ok:
        logger.debug("property failures: %s", [check.witness for check in report.failures()])
    return report
