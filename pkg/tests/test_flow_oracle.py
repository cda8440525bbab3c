"""Tests for the exhaustive oracle and the drawing-to-flow constructor."""

import pytest

from conftest import small_corpus, staircase_x, two_column_x
from FlowCoord.flow_coordinates import extract_coordinates, make_layout, verify_properties
from FlowCoord.flow_errors import BudgetExceededError, InfeasibleError, OptionsError, OracleError
from FlowCoord.flow_graph import LayeredGraph, fig1_family
from FlowCoord.flow_network import LayoutOptions, build_network
from FlowCoord.flow_oracle import brute_force_optimal, flow_from_layout
from FlowCoord.flow_pipeline import minimum_feasible_width, solve_layout
from FlowCoord.flow_settings import ORACLE_BUDGET_ENV
from FlowCoord.flow_solver import check_feasibility


class TestBruteForceOptimal:
    def test_single_edge_one_column(self, single_edge: LayeredGraph) -> None:
        result = brute_force_optimal(single_edge, LayoutOptions(width_cap=0))
        assert result.optimal_length == 0
        assert result.explored > 0

    @pytest.mark.parametrize(("width", "length"), [(1, 2), (3, 0)])
    def test_fig1_k5(self, width: int, length: int) -> None:
        result = brute_force_optimal(fig1_family(5), LayoutOptions(width_cap=width))
        assert result.optimal_length == length
        assert result.witness.total_length == length
        assert result.witness.width <= width

    def test_witness_is_lexicographically_smallest(self, fig1_4: LayeredGraph) -> None:
        result = brute_force_optimal(fig1_4, LayoutOptions(width_cap=1))
        assert dict(result.witness.x) == two_column_x(4)

    def test_respects_distance_bounds(self) -> None:
        graph = LayeredGraph((("a", "b"), ("c", "d")), (("a", "d"), ("b", "c")))
        options = LayoutOptions(width_cap=4, min_dist={(0, 1): 3}, max_dist={(1, 1): 1})
        witness = brute_force_optimal(graph, options).witness
        assert witness.gap("a", "b") >= 3
        assert witness.gap("c", "d") == 1

    def test_needs_width_cap(self, fig1_4: LayeredGraph) -> None:
        with pytest.raises(OptionsError):
            brute_force_optimal(fig1_4, LayoutOptions())

    def test_width_too_small(self, fig1_4: LayeredGraph) -> None:
        with pytest.raises(InfeasibleError):
            brute_force_optimal(fig1_4, LayoutOptions(width_cap=0))

    def test_budget(self, fig1_4: LayeredGraph) -> None:
        with pytest.raises(BudgetExceededError):
            brute_force_optimal(fig1_4, LayoutOptions(width_cap=3), budget=10)

    def test_budget_from_environment(self, fig1_4: LayeredGraph, monkeypatch: pytest.MonkeyPatch) -> None:
        monkeypatch.setenv(ORACLE_BUDGET_ENV, "1")
        with pytest.raises(BudgetExceededError):
            brute_force_optimal(fig1_4, LayoutOptions(width_cap=3))

    @pytest.mark.parametrize("graph", small_corpus(10, seed=31), ids=lambda g: str(g.layer_sizes()))
    def test_non_increasing_in_width(self, graph: LayeredGraph) -> None:
        start = minimum_feasible_width(graph)
        lengths = [brute_force_optimal(graph, LayoutOptions(width_cap=w)).optimal_length for w in range(start, start + 4)]
        assert lengths == sorted(lengths, reverse=True)


class TestFlowFromLayout:
    @pytest.mark.parametrize(("drawing", "cost"), [(two_column_x, 1), (staircase_x, 0)])
    def test_fig1_drawings(self, fig1_4: LayeredGraph, drawing, cost: int) -> None:
        network = build_network(fig1_4)
        layout = make_layout(fig1_4, drawing(4))
        flow = flow_from_layout(fig1_4, network, layout)
        assert check_feasibility(network, flow)
        assert flow.total_cost == cost
        assert dict(extract_coordinates(fig1_4, network, flow).x) == drawing(4)

    def test_rejects_enforced_network(self, single_edge: LayeredGraph) -> None:
        network = build_network(single_edge, LayoutOptions(vertical_edges=frozenset({("u", "v")})))
        with pytest.raises(OracleError):
            flow_from_layout(single_edge, network, make_layout(single_edge, {"u": 0, "v": 0}))

    def test_rejects_drawing_wider_than_the_gate(self, fig1_4: LayeredGraph) -> None:
        network = build_network(fig1_4, LayoutOptions(width_cap=1))
        with pytest.raises(OracleError):
            flow_from_layout(fig1_4, network, make_layout(fig1_4, staircase_x(4)))

    def test_rejects_unordered_drawing(self, fig1_4: LayeredGraph) -> None:
        x = two_column_x(4)
        x["l2"], x["r2"] = x["r2"], x["l2"]
        with pytest.raises(OracleError):
            flow_from_layout(fig1_4, build_network(fig1_4), make_layout(fig1_4, x))


@pytest.mark.slow
class TestSolverAgainstOracle:
    """Solver optimum, oracle optimum and the constructed flow all agree."""

    @pytest.mark.parametrize("graph", small_corpus(200, seed=1000), ids=lambda g: str(g.layer_sizes()))
    def test_corpus(self, graph: LayeredGraph) -> None:
        start = minimum_feasible_width(graph)
        for width in range(start, start + 4):
            options = LayoutOptions(width_cap=width)
            oracle = brute_force_optimal(graph, options)
            run = solve_layout(graph, options)
            assert run.flow.total_cost == oracle.optimal_length
            assert run.layout.total_length == run.flow.total_cost
            assert run.layout.width <= width

            rebuilt = flow_from_layout(graph, run.network, oracle.witness)
            assert check_feasibility(run.network, rebuilt)
            assert rebuilt.total_cost == oracle.optimal_length
            assert extract_coordinates(graph, run.network, rebuilt).x == oracle.witness.x
            assert verify_properties(graph, run.network, rebuilt, is_optimal=True).ok

    @pytest.mark.parametrize("graph", small_corpus(40, seed=77), ids=lambda g: str(g.layer_sizes()))
    def test_with_a_vertical_edge(self, graph: LayeredGraph) -> None:
        if not graph.edges:
            pytest.skip("no edge to straighten")
        edge = graph.edges[len(graph.edges) // 2]
        start = minimum_feasible_width(graph)
        for width in range(start, start + 3):
            options = LayoutOptions(width_cap=width, vertical_edges=frozenset({edge}))
            try:
                oracle = brute_force_optimal(graph, options)
            except InfeasibleError:
                with pytest.raises(InfeasibleError):
                    solve_layout(graph, options)
                continue
            run = solve_layout(graph, options)
            assert run.flow.total_cost == oracle.optimal_length
            assert run.layout.x[edge[0]] == run.layout.x[edge[1]]
