"""
Independent ground truth for small instances.

brute_force_optimal enumerates every strictly increasing integer assignment of
each layer into columns [0, W] and combines consecutive layers by dynamic
programming (all edges are proper, so the total length splits into one term
per layer pair). flow_from_layout goes the other way: it turns a drawing into
a feasible flow of equal cost by pinning the A-edges to the drawing's gaps
and routing each layer pair with a min-cost transshipment.
"""

import itertools
import logging
import math
from dataclasses import dataclass
from typing import Optional

from FlowCoord.flow_coordinates import Layout, make_layout
from FlowCoord.flow_errors import (
    BudgetExceededError,
    GraphError,
    InfeasibleError,
    OptionsError,
    OracleError,
)
from FlowCoord.flow_graph import LayeredGraph, NodeId
from FlowCoord.flow_network import (
    B_KINDS,
    EdgeKind,
    FlowNetwork,
    LayoutOptions,
    NodeKind,
)
from FlowCoord.flow_settings import BOUNDARY_MARGIN_LOWER, oracle_budget
from FlowCoord.flow_solver import Flow, FlowStatus, make_flow, route_transshipment

logger = logging.getLogger(__name__)

Assignment = tuple[int, ...]


@dataclass(frozen=True)
class OracleResult:
    optimal_length: int
    witness: Layout
    explored: int


def _layer_assignments(
    options: LayoutOptions, layer: int, size: int, width: int
) -> list[Assignment]:
    assignments = []
    for xs in itertools.combinations(range(width + 1), size):
        fits = True
        for gap in range(1, size):
            distance = xs[gap] - xs[gap - 1]
            high = options.max_gap(layer, gap)
            if distance < options.min_gap(layer, gap) or (high is not None and distance > high):
                fits = False
                break
        if fits:
            assignments.append(xs)
    return assignments


def brute_force_optimal(
    graph: LayeredGraph,
    options: LayoutOptions,
    budget: Optional[int] = None,
) -> OracleResult:
    """Minimum total edge length over all drawings of width <= options.width_cap.

    The witness is the lexicographically smallest optimum by (layer, position, x).
    """
    width = options.width_cap
    if width is None:
        raise OptionsError("the oracle needs a finite width cap")
    if graph.layer_count == 0:
        raise GraphError("graph has no layers")
    options.check(graph)
    budget = oracle_budget() if budget is None else budget

    sizes = graph.layer_sizes()
    space = math.prod(math.comb(width + 1, size) for size in sizes)
    if space > budget:
        raise BudgetExceededError(space, budget)

    per_layer = [_layer_assignments(options, i, size, width) for i, size in enumerate(sizes)]
    if any(not assignments for assignments in per_layer):
        raise InfeasibleError(f"no assignment of some layer fits width {width}")

    vertical = [
        [
            (graph.position_of(u), graph.position_of(v))
            for u, v in options.vertical_edges
            if graph.layer_of(u) == i
        ]
        for i in range(len(sizes))
    ]

    explored = len(per_layer[-1])
    best: list[list[float]] = [[0] * len(per_layer[-1])]
    choice: list[list[int]] = [[-1] * len(per_layer[-1])]
    for i in range(len(sizes) - 2, -1, -1):
        pairs = graph.edges_between(i)
        below = best[0]
        layer_best: list[float] = []
        layer_choice: list[int] = []
        for upper in per_layer[i]:
            top, picked = math.inf, -1
            for b, lower in enumerate(per_layer[i + 1]):
                explored += 1
                if below[b] == math.inf:
                    continue
                if any(upper[p] != lower[q] for p, q in vertical[i]):
                    continue
                total = below[b] + sum(abs(upper[p] - lower[q]) for p, q in pairs)
                if total < top:
                    top, picked = total, b
            layer_best.append(top)
            layer_choice.append(picked)
        best.insert(0, layer_best)
        choice.insert(0, layer_choice)

    first = min(range(len(per_layer[0])), key=lambda a: (best[0][a], a))
    if best[0][first] == math.inf:
        raise InfeasibleError("vertical edges admit no drawing within the width cap")

    x: dict[NodeId, int] = {}
    pick = first
    for i, layer in enumerate(graph.layers):
        for node, value in zip(layer, per_layer[i][pick]):
            x[node] = value
        pick = choice[i][pick]

    witness = make_layout(graph, x)
    logger.debug("oracle: width %d, optimum %d, %d assignments explored", width, witness.total_length, explored)
    return OracleResult(optimal_length=witness.total_length, witness=witness, explored=explored)


def _pinned_a_flows(graph: LayeredGraph, layout: Layout) -> tuple[list[list[int]], int]:
    """Gap widths of the drawing shifted so that min x = BOUNDARY_MARGIN_LOWER."""
    if not layout.x:
        return [[BOUNDARY_MARGIN_LOWER] for _ in graph.layers], BOUNDARY_MARGIN_LOWER
    low, high = min(layout.x.values()), max(layout.x.values())
    units = high - low + 2 * BOUNDARY_MARGIN_LOWER

    flows = []
    for i, layer in enumerate(graph.layers):
        xs = [layout.x[node] - low + BOUNDARY_MARGIN_LOWER for node in layer]
        if any(b <= a for a, b in zip(xs, xs[1:])):
            raise OracleError(f"layout is not strictly increasing in layer {i}")
        if not xs:
            flows.append([units])
            continue
        gaps = [xs[0]] + [b - a for a, b in zip(xs, xs[1:])] + [units - xs[-1]]
        flows.append(gaps)
    return flows, units


def flow_from_layout(graph: LayeredGraph, network: FlowNetwork, layout: Layout) -> Flow:
    """A feasible flow inducing `layout` whose cost is the layout's total length."""
    if network.removed:
        raise OracleError("flow_from_layout needs a network without vertical-edge removals")

    a_flows, units = _pinned_a_flows(graph, layout)
    values: dict[int, int] = {}

    for edge in network.edges_of_kind(EdgeKind.A):
        i, j = edge.index
        amount = a_flows[i][j]
        if amount < edge.lower or (edge.upper is not None and amount > edge.upper):
            raise OracleError(f"layout violates the bounds of {edge.label}: {amount}")
        values[edge.id] = amount

    last = graph.layer_count - 1
    for edge in network.edges_of_kind(EdgeKind.SOURCE_ARC):
        values[edge.id] = a_flows[0][edge.index[0]]
    for edge in network.edges_of_kind(EdgeKind.SINK_ARC):
        values[edge.id] = a_flows[last][edge.index[0]]
    for edge in network.edges_of_kind(EdgeKind.GATE_ARC):
        if edge.upper is not None and units > edge.upper:
            raise OracleError(f"layout needs {units} units but the gate admits {edge.upper}")
        values[edge.id] = units

    for i in range(last):
        values.update(_route_layer_pair(network, a_flows, i))

    flow = make_flow(network, values, FlowStatus.FEASIBLE, backend="layout")
    logger.debug("flow_from_layout: cost %d for length %d", flow.total_cost, layout.total_length)
    return flow


def _route_layer_pair(network: FlowNetwork, a_flows: list[list[int]], layer: int) -> dict[int, int]:
    """Route the Z-row of `layer` into the W-row of `layer + 1` at minimum cost."""
    local: dict = {}
    for j in range(len(a_flows[layer])):
        local[(NodeKind.Z, j)] = len(local)
    for k in range(len(a_flows[layer + 1])):
        local[(NodeKind.W, k)] = len(local)

    supplies = [0] * len(local)
    for j, amount in enumerate(a_flows[layer]):
        supplies[local[(NodeKind.Z, j)]] = amount
    for k, amount in enumerate(a_flows[layer + 1]):
        supplies[local[(NodeKind.W, k)]] = -amount

    used = []
    arcs = []
    for edge in network.edges:
        in_z_row = edge.kind in B_KINDS and edge.tail.kind is NodeKind.Z and edge.tail.layer == layer
        in_w_row = edge.kind in B_KINDS and edge.tail.kind is NodeKind.W and edge.tail.layer == layer + 1
        between = edge.kind is EdgeKind.C and edge.tail.layer == layer
        if not (in_z_row or in_w_row or between):
            continue
        tail = local[(edge.tail.kind, edge.tail.slot)]
        head = local[(edge.head.kind, edge.head.slot)]
        used.append(edge)
        arcs.append((tail, head, edge.capacity(network.big_upper), edge.cost))

    routed, stuck = route_transshipment(len(local), arcs, supplies)
    if routed is None:
        raise OracleError(f"cannot route layer {layer} into layer {layer + 1} (stuck at {stuck})")
    return {edge.id: amount for edge, amount in zip(used, routed)}
