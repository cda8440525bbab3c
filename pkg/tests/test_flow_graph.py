"""Tests for layered graphs: validation, properization and fixtures."""

import pytest

from FlowCoord.flow_errors import GraphError
from FlowCoord.flow_graph import (
    LayeredGraph,
    ViolationKind,
    fig1_family,
    generate_random,
    properize,
    validate,
)


class TestValidate:
    """Invariant violations are reported as data."""

    def test_minimal_proper_graph_is_ok(self, single_edge: LayeredGraph) -> None:
        assert validate(single_edge).ok

    @pytest.mark.parametrize(
        ("layers", "edges", "kind"),
        [
            ((("u", "v"),), (("u", "v"),), ViolationKind.SAME_LAYER_EDGE),
            ((("u",), (), ("v",)), (("u", "v"),), ViolationKind.NOT_PROPER),
            ((("u",), ("v",)), (("v", "u"),), ViolationKind.WRONG_DIRECTION),
            ((("u",), ("v",)), (("u", "u"),), ViolationKind.SELF_LOOP),
            ((("u",), ("v",)), (("u", "x"),), ViolationKind.UNKNOWN_ENDPOINT),
            ((("u",), ("u",)), (), ViolationKind.DUPLICATE_NODE),
            ((("u",), ("v",)), (("u", "v"), ("u", "v")), ViolationKind.DUPLICATE_EDGE),
        ],
    )
    def test_reports_violation(self, layers, edges, kind) -> None:
        report = validate(LayeredGraph(layers, edges))
        assert not report.ok
        assert kind in report.kinds()

    def test_lists_every_violation(self) -> None:
        graph = LayeredGraph((("u", "v"), ("w",)), (("u", "v"), ("w", "u"), ("u", "u")))
        assert validate(graph).kinds() == {
            ViolationKind.SAME_LAYER_EDGE,
            ViolationKind.WRONG_DIRECTION,
            ViolationKind.SELF_LOOP,
        }


class TestLookups:
    def test_positions_and_degrees(self, fig1_4: LayeredGraph) -> None:
        assert fig1_4.locate("r2") == (1, 1)
        assert fig1_4.node_at(2, 0) == "l3"
        assert fig1_4.in_degree("l3") == 1
        assert fig1_4.out_degree("l3") == 0
        assert fig1_4.edges_between(1) == [(1, 0)]

    def test_unknown_node_raises(self, fig1_4: LayeredGraph) -> None:
        with pytest.raises(GraphError):
            fig1_4.locate("nope")

    def test_equal_graphs_from_lists(self) -> None:
        assert LayeredGraph([["a"], ["b"]], [("a", "b")]) == LayeredGraph((("a",), ("b",)), (("a", "b"),))


class TestProperize:
    """Long edges become dummy chains at caller-chosen positions."""

    def test_single_long_edge(self) -> None:
        graph = LayeredGraph((("a",), ("b",), ("c",)), (("a", "c"),))
        proper = properize(graph, {("a", "c"): [1]})
        assert validate(proper).ok
        assert proper.layers[1] == ("b", "a~c~1")
        assert proper.edges == (("a", "a~c~1"), ("a~c~1", "c"))
        assert proper.dummy_map == {("a", "c"): ("a~c~1",)}
        assert proper.is_dummy("a~c~1")

    def test_dummies_take_requested_positions(self) -> None:
        graph = LayeredGraph(
            (("a", "b"), ("m",), ("n",), ("c", "d")),
            (("a", "d"), ("b", "c"), ("a", "m"), ("m", "n"), ("n", "c")),
        )
        proper = properize(graph, {("a", "d"): [0, 1], ("b", "c"): [2, 0]})
        assert proper.layers[1] == ("a~d~1", "m", "b~c~1")
        assert proper.layers[2] == ("b~c~2", "a~d~2", "n")
        assert validate(proper).ok

    def test_segments_of_long_and_proper_edges(self) -> None:
        graph = LayeredGraph((("a",), ("b",), ("c",)), (("a", "c"), ("a", "b")))
        proper = properize(graph, {("a", "c"): [0]})
        assert proper.segments_of(("a", "c")) == [("a", "a~c~1"), ("a~c~1", "c")]
        assert proper.segments_of(("a", "b")) == [("a", "b")]
        assert proper.segments_of(("a~c~1", "c")) == [("a~c~1", "c")]
        with pytest.raises(GraphError, match="not an edge"):
            proper.segments_of(("b", "c"))

    def test_edge_count_grows_by_dummy_count(self) -> None:
        graph = LayeredGraph((("a",), (), (), ("b",)), (("a", "b"),))
        proper = properize(graph, {("a", "b"): [0, 0]})
        assert len(proper.edges) == len(graph.edges) + 2

    def test_proper_graph_is_returned_unchanged(self, fig1_4: LayeredGraph) -> None:
        assert properize(fig1_4) is fig1_4
        assert properize(fig1_4).dummy_map == {}

    def test_is_idempotent(self) -> None:
        graph = LayeredGraph((("a",), ("b",), ("c",)), (("a", "c"), ("a", "b")))
        once = properize(graph, {("a", "c"): [0]})
        assert properize(once) == once

    def test_missing_position_names_layer(self) -> None:
        graph = LayeredGraph((("a",), ("b",), ("c",), ("d",)), (("a", "d"),))
        with pytest.raises(GraphError, match="layer 2") as caught:
            properize(graph, {("a", "d"): [0]})
        assert caught.value.layer == 2

    @pytest.mark.parametrize("positions", [[5], [0, 0]])
    def test_bad_positions_rejected(self, positions) -> None:
        graph = LayeredGraph((("a",), ("b",), ("c",)), (("a", "c"),))
        with pytest.raises(GraphError):
            properize(graph, {("a", "c"): positions})

    def test_illegal_layering_rejected(self) -> None:
        graph = LayeredGraph((("a",), ("b",)), (("b", "a"),))
        with pytest.raises(GraphError):
            properize(graph)


class TestFig1Family:
    def test_k4_structure(self, fig1_4: LayeredGraph) -> None:
        assert fig1_4.layer_sizes() == (1, 2, 2, 1)
        assert fig1_4.edges == (("a", "l2"), ("r2", "l3"), ("r3", "h"))

    def test_k5_counts(self) -> None:
        graph = fig1_family(5)
        assert graph.layer_count == 5
        assert len(graph.edges) == 4

    @pytest.mark.parametrize("k", range(4, 65, 6))
    def test_valid(self, k: int) -> None:
        assert validate(fig1_family(k)).ok

    def test_small_k_rejected(self) -> None:
        with pytest.raises(GraphError):
            fig1_family(3)


class TestGenerateRandom:
    def test_single_layer_has_no_edges(self) -> None:
        graph = generate_random(1, (3, 3), 0.5, seed=7)
        assert graph.layer_sizes() == (3,)
        assert graph.edges == ()

    def test_full_density_is_complete_bipartite(self) -> None:
        graph = generate_random(3, (2, 4), 1.0, seed=1)
        sizes = graph.layer_sizes()
        assert len(graph.edges) == sizes[0] * sizes[1] + sizes[1] * sizes[2]

    def test_seed_determinism(self) -> None:
        assert generate_random(4, (2, 5), 0.4, seed=42) == generate_random(4, (2, 5), 0.4, seed=42)

    @pytest.mark.parametrize("seed", range(20))
    def test_valid_and_connected_between_layers(self, seed: int) -> None:
        graph = generate_random(4, (1, 4), 0.1, seed)
        assert validate(graph).ok
        assert all(1 <= size <= 4 for size in graph.layer_sizes())
        assert all(graph.edges_between(i) for i in range(graph.layer_count - 1))

    @pytest.mark.parametrize(
        ("layers", "sizes", "density"),
        [(0, (1, 2), 0.5), (2, (0, 2), 0.5), (2, (3, 2), 0.5), (2, (1, 2), 1.5)],
    )
    def test_bad_arguments(self, layers, sizes, density) -> None:
        with pytest.raises(GraphError):
            generate_random(layers, sizes, density, seed=0)
