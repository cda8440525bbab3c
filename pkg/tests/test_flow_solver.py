"""Tests for the min-cost-flow solver and its certificates."""

import itertools

import numpy as np
import pytest

from conftest import perturbed, small_corpus
from FlowCoord.flow_graph import LayeredGraph, fig1_family
from FlowCoord.flow_network import (
    SINK,
    SOURCE,
    EdgeKind,
    FlowNetwork,
    LayoutOptions,
    NetEdge,
    W,
    Z,
    build_network,
)
from FlowCoord.flow_solver import (
    FlowStatus,
    check_feasibility,
    check_optimality,
    make_flow,
    route_transshipment,
    solve_min_cost_flow,
)

HAND_CAPACITY = 3


def _hand_network(costs) -> FlowNetwork:
    """Eight edges: two source arcs, two A-edges, one B-edge per row, two sink arcs."""
    shape = [
        (SOURCE, W(0, 0), 0, None, EdgeKind.SOURCE_ARC, (0,)),
        (SOURCE, W(0, 1), 0, None, EdgeKind.SOURCE_ARC, (1,)),
        (W(0, 0), Z(0, 0), 1, None, EdgeKind.A, (0, 0)),
        (W(0, 1), Z(0, 1), 1, 2, EdgeKind.A, (0, 1)),
        (W(0, 0), W(0, 1), 0, None, EdgeKind.BW_RIGHT, (0, 0)),
        (Z(0, 1), Z(0, 0), 0, None, EdgeKind.BZ_LEFT, (0, 0)),
        (Z(0, 0), SINK, 0, None, EdgeKind.SINK_ARC, (0,)),
        (Z(0, 1), SINK, 0, None, EdgeKind.SINK_ARC, (1,)),
    ]
    edges = tuple(
        NetEdge(i, tail, head, lower, upper, int(cost), kind, index)
        for i, ((tail, head, lower, upper, kind, index), cost) in enumerate(zip(shape, costs))
    )
    nodes = (SOURCE, W(0, 0), W(0, 1), Z(0, 0), Z(0, 1), SINK)
    return FlowNetwork(nodes, edges, LayeredGraph((("v",),), ()), HAND_CAPACITY)


def _enumerated_minimum(network: FlowNetwork) -> int:
    best = None
    for values in itertools.product(range(HAND_CAPACITY + 1), repeat=len(network.edges)):
        if values[0] + values[1] > HAND_CAPACITY:
            continue
        flow = make_flow(network, dict(enumerate(values)))
        if check_feasibility(network, flow) and (best is None or flow.total_cost < best):
            best = flow.total_cost
    return best


class TestSolveMinCostFlow:
    def test_single_node(self, backend: str) -> None:
        network = build_network(LayeredGraph((("v",),), ()))
        flow = solve_min_cost_flow(network, backend)
        assert flow.status is FlowStatus.OPTIMAL
        assert flow.total_cost == 0
        assert [flow.flow_on(edge.id) for edge in network.edges_of_kind(EdgeKind.A)] == [1, 1]
        assert flow.value == 2

    def test_fig1_capped(self, fig1_4: LayeredGraph, backend: str) -> None:
        network = build_network(fig1_4, LayoutOptions(width_cap=1))
        flow = solve_min_cost_flow(network, backend)
        assert flow.is_optimal
        assert flow.total_cost == 1
        assert flow.value == 3

    def test_width_cap_too_small_is_infeasible(self, fig1_4: LayeredGraph, backend: str) -> None:
        flow = solve_min_cost_flow(build_network(fig1_4, LayoutOptions(width_cap=0)), backend)
        assert flow.is_infeasible
        assert flow.unsatisfied

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_matches_enumeration(self, seed: int, backend: str) -> None:
        costs = np.random.default_rng(seed).integers(0, 4, size=8)
        network = _hand_network(costs)
        flow = solve_min_cost_flow(network, backend)
        assert flow.is_optimal
        assert flow.total_cost == _enumerated_minimum(network)

    @pytest.mark.parametrize("graph", small_corpus(30, seed=21), ids=lambda g: str(g.layer_sizes()))
    def test_backends_agree(self, graph: LayeredGraph) -> None:
        network = build_network(graph)
        ssp = solve_min_cost_flow(network, "ssp")
        simplex = solve_min_cost_flow(network, "network_simplex")
        assert (ssp.total_cost, ssp.value) == (simplex.total_cost, simplex.value)

    def test_deterministic(self) -> None:
        network = build_network(fig1_family(7), LayoutOptions(width_cap=2))
        assert solve_min_cost_flow(network).values == solve_min_cost_flow(network).values

    @pytest.mark.parametrize("graph", small_corpus(20, seed=8), ids=lambda g: str(g.layer_sizes()))
    def test_output_is_certified(self, graph: LayeredGraph, backend: str) -> None:
        network = build_network(graph)
        flow = solve_min_cost_flow(network, backend)
        assert all(isinstance(value, int) and value >= 0 for value in flow.values.values())
        assert check_feasibility(network, flow)
        assert check_optimality(network, flow)

    def test_relaxing_never_costs_more(self) -> None:
        graph = fig1_family(6)
        tight = solve_min_cost_flow(build_network(graph, LayoutOptions(width_cap=1)))
        loose = solve_min_cost_flow(build_network(graph, LayoutOptions(width_cap=2)))
        assert loose.total_cost <= tight.total_cost

    @pytest.mark.parametrize(
        ("tight", "loose"),
        [
            (LayoutOptions(default_min_dist=2), LayoutOptions()),
            (LayoutOptions(min_dist={(1, 1): 3}), LayoutOptions()),
            (LayoutOptions(default_max_dist=1), LayoutOptions()),
            (LayoutOptions(width_cap=3, default_max_dist=2), LayoutOptions(width_cap=3)),
        ],
        ids=["min_default", "min_gap", "max_default", "max_with_cap"],
    )
    def test_relaxing_bounds_never_costs_more(self, tight: LayoutOptions, loose: LayoutOptions) -> None:
        graph = fig1_family(6)
        strict = solve_min_cost_flow(build_network(graph, tight))
        relaxed = solve_min_cost_flow(build_network(graph, loose))
        assert not strict.is_infeasible and not relaxed.is_infeasible
        assert relaxed.total_cost <= strict.total_cost


class TestCheckFeasibility:
    def test_zero_flow_violates_a_bounds(self, fig1_4: LayeredGraph) -> None:
        network = build_network(fig1_4)
        assert not check_feasibility(network, make_flow(network, {}))

    def test_single_extra_unit_breaks_conservation(self, fig1_4: LayeredGraph) -> None:
        network = build_network(fig1_4)
        flow = solve_min_cost_flow(network)
        values = dict(flow.values)
        values[network.a_edge(1, 1).id] += 1
        assert not check_feasibility(network, make_flow(network, values))


class TestCheckOptimality:
    def test_zero_cost_cycle_keeps_optimality(self, fig1_4: LayeredGraph) -> None:
        network = build_network(fig1_4)
        flow = solve_min_cost_flow(network)
        # "a" has no incoming edges, so its W-row B-edges are free
        cycled = perturbed(network, flow)[0]
        assert cycled.total_cost == flow.total_cost
        assert check_feasibility(network, cycled)
        assert check_optimality(network, cycled)

    def test_costly_detour_is_not_optimal(self, fig1_4: LayeredGraph) -> None:
        network = build_network(fig1_4)
        flow = solve_min_cost_flow(network)
        detour = perturbed(network, flow)[1]
        assert detour.total_cost > flow.total_cost
        assert check_feasibility(network, detour)
        assert not check_optimality(network, detour)

    def test_expensive_route_is_not_optimal(self) -> None:
        network = _hand_network([0, 5, 0, 0, 0, 0, 0, 0])
        values = {0: 1, 1: 1, 2: 1, 3: 1, 4: 0, 5: 0, 6: 1, 7: 1}
        flow = make_flow(network, values)
        assert check_feasibility(network, flow)
        assert not check_optimality(network, flow)


class TestRouteTransshipment:
    def test_unbalanced_supplies(self) -> None:
        routed, stuck = route_transshipment(2, [(0, 1, 5, 1)], [2, -1])
        assert routed is None
        assert stuck == [0]

    def test_picks_cheaper_arc(self, backend: str) -> None:
        routed, _ = route_transshipment(2, [(0, 1, 5, 3), (0, 1, 5, 1)], [2, -2], backend)
        assert routed == [0, 2]

    def test_unknown_backend(self) -> None:
        with pytest.raises(ValueError):
            route_transshipment(2, [(0, 1, 5, 1)], [1, -1], backend="magic")
