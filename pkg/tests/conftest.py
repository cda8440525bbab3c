"""Shared fixtures: small graphs, both solver backends, non-optimal flows."""

import logging
from typing import Iterator

import numpy as np
import pytest

from FlowCoord.flow_graph import LayeredGraph, fig1_family, generate_random
from FlowCoord.flow_network import EdgeKind, FlowNetwork
from FlowCoord.flow_settings import BACKENDS
from FlowCoord.flow_solver import Flow, FlowStatus, make_flow


@pytest.fixture(params=BACKENDS)
def backend(request: pytest.FixtureRequest) -> str:
    """Run the test once per min-cost-flow backend."""
    return request.param


@pytest.fixture(autouse=True)
def _restore_package_logger() -> Iterator[None]:
    """The CLI detaches the package logger from root; put it back for caplog."""
    logger = logging.getLogger("FlowCoord")
    yield
    for handler in list(logger.handlers):
        logger.removeHandler(handler)
    logger.setLevel(logging.NOTSET)
    logger.propagate = True


@pytest.fixture
def single_edge() -> LayeredGraph:
    return LayeredGraph((("u",), ("v",)), (("u", "v"),))


@pytest.fixture
def parallel_pair() -> LayeredGraph:
    return LayeredGraph((("u1", "u2"), ("v1", "v2")), (("u1", "v1"), ("u2", "v2")))


@pytest.fixture
def crossing_pair() -> LayeredGraph:
    return LayeredGraph((("u1", "u2"), ("v1", "v2")), (("u1", "v2"), ("u2", "v1")))


@pytest.fixture
def fig1_4() -> LayeredGraph:
    return fig1_family(4)


def small_corpus(count: int, seed: int = 0) -> list[LayeredGraph]:
    """Seeded proper graphs with at most 4 layers and 12 nodes."""
    return [
        generate_random(1 + (seed + index) % 4, (1, 3), 0.5, seed + index)
        for index in range(count)
    ]


def staircase_x(k: int) -> dict[str, int]:
    """fig1_family(k) drawn with every edge vertical."""
    x = {"a": 0, "h": k - 2}
    for i in range(2, k):
        x[f"l{i}"] = i - 2
        x[f"r{i}"] = i - 1
    return x


def two_column_x(k: int) -> dict[str, int]:
    """fig1_family(k) drawn in two columns."""
    x = {"a": 0, "h": 1}
    for i in range(2, k):
        x[f"l{i}"] = 0
        x[f"r{i}"] = 1
    return x


def perturbed(network: FlowNetwork, flow: Flow) -> list[Flow]:
    """Feasible flows that push one extra unit back and forth around each node's W-row B-edge pair.

    No A-edge changes, so every one of them induces the drawing of `flow`.
    """
    flows = []
    for right in network.edges_of_kind(EdgeKind.BW_RIGHT):
        left = network.find(EdgeKind.BW_LEFT, *right.index)
        if left is None:
            continue
        values = dict(flow.values)
        values[right.id] += 1
        values[left.id] += 1
        flows.append(make_flow(network, values, FlowStatus.FEASIBLE))
    return flows


def random_drawing(graph: LayeredGraph, seed: int) -> dict[str, int]:
    """Seeded drawing with gaps of 1 or 2 and a per-layer offset of 0 or 1."""
    rng = np.random.default_rng(seed)
    x = {}
    for layer in graph.layers:
        position = int(rng.integers(0, 2))
        for node in layer:
            x[node] = position
            position += int(rng.integers(1, 3))
    return x
