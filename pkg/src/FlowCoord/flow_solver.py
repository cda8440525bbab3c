"""
Integral minimum-cost flow with lower bounds and a free flow value.

The network's s-t flow becomes a circulation through an internal return edge
t -> s. Lower bounds are eliminated the usual way (push the lower bound, record
the resulting excess/deficit as node supplies), and the remaining
transshipment problem goes to one of two backends:

    "ssp"              successive shortest paths, Dijkstra on reduced costs
    "network_simplex"  networkx.network_simplex

Among flows of minimum cost the solver prefers the smallest flow value f(s):
costs are scaled by big_upper + 1 and the return edge charges one unit per
unit of flow. Reported costs are always unscaled.
"""

import heapq
import logging
from dataclasses import dataclass
from enum import Enum
from typing import Mapping, Optional, Sequence

import networkx as nx

from FlowCoord.flow_network import SINK, SOURCE, FlowNetwork, NetNode
from FlowCoord.flow_settings import BACKENDS, DEFAULT_BACKEND

logger = logging.getLogger(__name__)

Arc = tuple[int, int, int, int]  # tail, head, capacity, cost
INF = float("inf")


class FlowStatus(Enum):
    OPTIMAL = "optimal"
    FEASIBLE = "feasible"
    INFEASIBLE = "infeasible"


@dataclass(frozen=True)
class Flow:
    values: Mapping[int, int]
    status: FlowStatus
    total_cost: int = 0
    value: int = 0  # f(s)
    unsatisfied: tuple[NetNode, ...] = ()
    backend: str = DEFAULT_BACKEND

    @property
    def is_optimal(self) -> bool:
        return self.status is FlowStatus.OPTIMAL

    @property
    def is_infeasible(self) -> bool:
        return self.status is FlowStatus.INFEASIBLE

    def flow_on(self, edge_id: int) -> int:
        return self.values.get(edge_id, 0)


def flow_cost(network: FlowNetwork, values: Mapping[int, int]) -> int:
    return sum(values.get(edge.id, 0) * edge.cost for edge in network.edges)


def source_outflow(network: FlowNetwork, values: Mapping[int, int]) -> int:
    return sum(values.get(edge.id, 0) for edge in network.edges if edge.tail == SOURCE)


def make_flow(
    network: FlowNetwork,
    values: Mapping[int, int],
    status: FlowStatus = FlowStatus.FEASIBLE,
    backend: str = "manual",
) -> Flow:
    """Wrap raw edge values, computing cost and f(s)."""
    values = {edge.id: int(values.get(edge.id, 0)) for edge in network.edges}
    return Flow(
        values=values,
        status=status,
        total_cost=flow_cost(network, values),
        value=source_outflow(network, values),
        backend=backend,
    )


# SUCCESSIVE SHORTEST PATHS
class _Residual:
    def __init__(self, node_count: int) -> None:
        self.head: list[int] = []
        self.cap: list[int] = []
        self.cost: list[int] = []
        self.adjacent: list[list[int]] = [[] for _ in range(node_count)]

    def add(self, tail: int, head: int, capacity: int, cost: int) -> int:
        index = len(self.head)
        self.head += [head, tail]
        self.cap += [capacity, 0]
        self.cost += [cost, -cost]
        self.adjacent[tail].append(index)
        self.adjacent[head].append(index + 1)
        return index

    def shortest_paths(self, start: int, potential: list[int]) -> tuple[list, list[int]]:
        """Dijkstra on reduced costs; ties keep the first arc found, in arc order."""
        dist: list = [INF] * len(self.adjacent)
        pred = [-1] * len(self.adjacent)
        dist[start] = 0
        heap = [(0, start)]
        while heap:
            d, node = heapq.heappop(heap)
            if d > dist[node]:
                continue
            for arc in self.adjacent[node]:
                if self.cap[arc] <= 0:
                    continue
                head = self.head[arc]
                nd = d + self.cost[arc] + potential[node] - potential[head]
                if nd < dist[head]:
                    dist[head] = nd
                    pred[head] = arc
                    heapq.heappush(heap, (nd, head))
        return dist, pred


def _ssp(node_count: int, arcs: Sequence[Arc], supplies: Sequence[int]) -> tuple[Optional[list[int]], list[int]]:
    super_source, super_sink = node_count, node_count + 1
    residual = _Residual(node_count + 2)
    handles = [residual.add(tail, head, capacity, cost) for tail, head, capacity, cost in arcs]

    supply_arcs = {}
    required = 0
    for node, supply in enumerate(supplies):
        if supply > 0:
            supply_arcs[node] = residual.add(super_source, node, supply, 0)
            required += supply
        elif supply < 0:
            residual.add(node, super_sink, -supply, 0)

    potential = [0] * (node_count + 2)
    sent = 0
    augmentations = 0
    while sent < required:
        dist, pred = residual.shortest_paths(super_source, potential)
        if dist[super_sink] == INF:
            break
        for node, d in enumerate(dist):
            if d != INF:
                potential[node] += d

        push = required - sent
        node = super_sink
        while node != super_source:
            arc = pred[node]
            push = min(push, residual.cap[arc])
            node = residual.head[arc ^ 1]
        node = super_sink
        while node != super_source:
            arc = pred[node]
            residual.cap[arc] -= push
            residual.cap[arc ^ 1] += push
            node = residual.head[arc ^ 1]
        sent += push
        augmentations += 1

    logger.debug("ssp: %d augmentations, %d/%d units routed", augmentations, sent, required)
    unsatisfied = [node for node, arc in supply_arcs.items() if residual.cap[arc] > 0]
    if sent < required:
        return None, unsatisfied
    flows = [arcs[i][2] - residual.cap[handle] for i, handle in enumerate(handles)]
    return flows, []


def _network_simplex(
    node_count: int, arcs: Sequence[Arc], supplies: Sequence[int]
) -> tuple[Optional[list[int]], list[int]]:
    graph = nx.MultiDiGraph()
    for node in range(node_count):
        graph.add_node(node, demand=-supplies[node])
    for key, (tail, head, capacity, cost) in enumerate(arcs):
        graph.add_edge(tail, head, key=key, capacity=capacity, weight=cost)
    try:
        _, flow_dict = nx.network_simplex(graph)
    except nx.NetworkXUnfeasible:
        return None, [node for node, supply in enumerate(supplies) if supply > 0]
    return [flow_dict[tail][head][key] for key, (tail, head, _, _) in enumerate(arcs)], []


def route_transshipment(
    node_count: int,
    arcs: Sequence[Arc],
    supplies: Sequence[int],
    backend: str = DEFAULT_BACKEND,
) -> tuple[Optional[list[int]], list[int]]:
    """Min-cost flow meeting node supplies (positive = excess to send out).

    Returns (flow per arc, []) or (None, nodes whose supply could not be
    routed). All costs must be non-negative.
    """
    if sum(supplies) != 0:
        return None, [node for node, supply in enumerate(supplies) if supply > 0]
    if backend == "ssp":
        return _ssp(node_count, arcs, supplies)
    if backend == "network_simplex":
        return _network_simplex(node_count, arcs, supplies)
    raise ValueError(f"unknown backend {backend!r}; choose from {BACKENDS}")


def solve_min_cost_flow(network: FlowNetwork, backend: Optional[str] = None) -> Flow:
    backend = backend or DEFAULT_BACKEND
    index = {node: i for i, node in enumerate(network.nodes)}
    scale = network.big_upper + 1
    supplies = [0] * len(network.nodes)
    arcs: list[Arc] = []

    for edge in network.edges:
        capacity = edge.capacity(network.big_upper) - edge.lower
        if capacity < 0:
            logger.debug("edge %s has lower bound above its capacity", edge.label)
            return Flow({}, FlowStatus.INFEASIBLE, unsatisfied=(edge.head,), backend=backend)
        arcs.append((index[edge.tail], index[edge.head], capacity, edge.cost * scale))
        supplies[index[edge.head]] += edge.lower
        supplies[index[edge.tail]] -= edge.lower

    # return edge t -> s; one scaled unit per unit of flow value
    arcs.append((index[SINK], index[SOURCE], network.big_upper, 1))

    routed, unsatisfied = route_transshipment(len(network.nodes), arcs, supplies, backend)
    if routed is None:
        stuck = tuple(network.nodes[node] for node in unsatisfied)
        logger.debug("infeasible network; unsatisfied supply at %s", ", ".join(map(str, stuck)))
        return Flow({}, FlowStatus.INFEASIBLE, unsatisfied=stuck, backend=backend)

    values = {edge.id: edge.lower + routed[i] for i, edge in enumerate(network.edges)}
    flow = make_flow(network, values, FlowStatus.OPTIMAL, backend)
    logger.debug("solved (%s): cost=%d f(s)=%d", backend, flow.total_cost, flow.value)
    return flow


def check_feasibility(network: FlowNetwork, flow: Flow) -> bool:
    if flow.is_infeasible:
        return False
    balance = {node: 0 for node in network.nodes}
    for edge in network.edges:
        if edge.id not in flow.values:
            return False
        amount = flow.values[edge.id]
        if amount < edge.lower or (edge.upper is not None and amount > edge.upper):
            return False
        balance[edge.tail] -= amount
        balance[edge.head] += amount
    return all(total == 0 for node, total in balance.items() if node not in (SOURCE, SINK))


def check_optimality(network: FlowNetwork, flow: Flow) -> bool:
    """True iff the residual network has no negative-cost cycle (Bellman-Ford)."""
    index = {node: i for i, node in enumerate(network.nodes)}
    residual: list[tuple[int, int, int]] = []
    for edge in network.edges:
        amount = flow.flow_on(edge.id)
        tail, head = index[edge.tail], index[edge.head]
        if amount < edge.capacity(network.big_upper):
            residual.append((tail, head, edge.cost))
        if amount > edge.lower:
            residual.append((head, tail, -edge.cost))

    returned = source_outflow(network, flow.values)
    if returned < network.big_upper:
        residual.append((index[SINK], index[SOURCE], 0))
    if returned > 0:
        residual.append((index[SOURCE], index[SINK], 0))

    dist = [0] * len(network.nodes)
    for _ in range(len(network.nodes)):
        changed = False
        for tail, head, cost in residual:
            if dist[tail] + cost < dist[head]:
                dist[head] = dist[tail] + cost
                changed = True
        if not changed:
            return True
    return False
