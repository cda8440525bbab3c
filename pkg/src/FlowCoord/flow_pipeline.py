"""
End-to-end entry points: graph + options in, drawing out.

Features:
    - layout_min_length(): minimum total edge length, width unconstrained
    - layout_prescribed_width(): minimum total edge length among drawings of width <= W
    - minimum_feasible_width() / layout_at_minimum_width(): the narrowest drawing
    - bench_compare(): unconstrained vs. minimum-width drawings over a seeded corpus
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from FlowCoord.flow_coordinates import Layout, extract_coordinates
from FlowCoord.flow_errors import FlowCoordError, InfeasibleError, OptionsError
from FlowCoord.flow_graph import Edge, LayeredGraph, fig1_family, generate_random
from FlowCoord.flow_network import FlowNetwork, LayoutOptions, big_upper_for, build_network
from FlowCoord.flow_settings import (
    BENCH_DENSITY,
    BENCH_FIG1_RANGE,
    BENCH_INSTANCES,
    BENCH_LAYER_RANGE,
    BENCH_PERCENTILE,
    BENCH_SIZE_RANGE,
    BENCH_TIME_BUDGET,
    BENCH_WORKERS,
)
from FlowCoord.flow_solver import Flow, solve_min_cost_flow
from FlowCoord.utilities.stopwatch import Stopwatch

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LayoutRun:
    graph: LayeredGraph
    options: LayoutOptions
    network: FlowNetwork
    flow: Flow
    layout: Layout


def solve_layout(graph: LayeredGraph, options: Optional[LayoutOptions] = None) -> LayoutRun:
    """Build, solve and extract; raises InfeasibleError if no drawing exists."""
    options = options or LayoutOptions()
    network = build_network(graph, options)
    flow = solve_min_cost_flow(network, options.backend)
    if flow.is_infeasible:
        minimum = None
        if options.width_cap is not None:
            minimum = minimum_feasible_width(graph, options)
        raise InfeasibleError(
            "no drawing satisfies the requested constraints",
            unsatisfied=flow.unsatisfied,
            minimum_width=minimum,
        )
    layout = extract_coordinates(graph, network, flow, options.normalize)
    return LayoutRun(graph, options, network, flow, layout)


def layout_min_length(graph: LayeredGraph, options: Optional[LayoutOptions] = None) -> Layout:
    options = options or LayoutOptions()
    if options.width_cap is not None:
        raise OptionsError("layout_min_length takes options without a width cap")
    return solve_layout(graph, options).layout


def minimum_feasible_width(graph: LayeredGraph, options: Optional[LayoutOptions] = None) -> int:
    """Widest sum of interior minimum distances over all layers.

    Vertical edges and max_dist bounds can push the true minimum higher; see
    layout_at_minimum_width.
    """
    options = options or LayoutOptions()
    return max(
        (sum(options.min_gap(i, gap) for gap in range(1, size)) for i, size in enumerate(graph.layer_sizes())),
        default=0,
    )


def layout_prescribed_width(
    graph: LayeredGraph, width: int, options: Optional[LayoutOptions] = None
) -> Layout:
    options = (options or LayoutOptions()).with_width_cap(width)
    minimum = minimum_feasible_width(graph, options)
    if width < minimum:
        raise InfeasibleError(
            f"width {width} is below the minimum feasible width {minimum}", minimum_width=minimum
        )
    try:
        return solve_layout(graph, options).layout
    except InfeasibleError as error:
        # the closed-form minimum ignores vertical edges and max_dist bounds
        try:
            _, minimum = layout_at_minimum_width(graph, options)
        except InfeasibleError:
            raise InfeasibleError(str(error), error.unsatisfied) from error
        raise InfeasibleError(
            f"width {width} is below the minimum feasible width {minimum}",
            unsatisfied=error.unsatisfied,
            minimum_width=minimum,
        ) from error


def _attempt(graph: LayeredGraph, options: LayoutOptions, width: int) -> Optional[LayoutRun]:
    try:
        return solve_layout(graph, options.with_width_cap(width))
    except InfeasibleError:
        return None


def layout_at_minimum_width(
    graph: LayeredGraph, options: Optional[LayoutOptions] = None
) -> tuple[LayoutRun, int]:
    """Minimum-length drawing at the smallest feasible width cap.

    Starts at minimum_feasible_width; if that is infeasible the cap is doubled
    at most ceil(log2(big_upper)) times, then binary-searched back down.
    """
    options = options or LayoutOptions()
    low = minimum_feasible_width(graph, options)
    run = _attempt(graph, options, low)
    if run is not None:
        return run, low

    retries = math.ceil(math.log2(max(big_upper_for(graph, options.with_width_cap(None)), 2)))
    high = low
    for retry in range(retries):
        low, high = high, max(2 * high, high + 1)
        logger.debug("width %d infeasible; retry %d at %d", low, retry + 1, high)
        run = _attempt(graph, options, high)
        if run is not None:
            break
    if run is None:
        raise InfeasibleError(f"no feasible width up to {high}")

    while high - low > 1:
        middle = (low + high) // 2
        candidate = _attempt(graph, options, middle)
        if candidate is None:
            low = middle
        else:
            high, run = middle, candidate
    logger.debug("minimum feasible width %d", high)
    return run, high


def straighten_inner_segments(graph: LayeredGraph) -> frozenset[Edge]:
    """Dummy-chain segments whose both endpoints are dummies."""
    return frozenset(
        (u, v)
        for segments in graph.chain_segments().values()
        for u, v in segments
        if graph.is_dummy(u) and graph.is_dummy(v)
    )


# BENCH
@dataclass(frozen=True)
class CorpusSpec:
    family: str = "random"  # "random" or "fig1"
    instances: int = BENCH_INSTANCES
    layer_range: tuple[int, int] = BENCH_LAYER_RANGE
    size_range: tuple[int, int] = BENCH_SIZE_RANGE
    density: float = BENCH_DENSITY
    fig1_range: tuple[int, int] = BENCH_FIG1_RANGE
    straight_inner_segments: bool = False


def build_corpus(spec: CorpusSpec, seed: int) -> list[tuple[str, LayeredGraph]]:
    if spec.family == "fig1":
        low, high = spec.fig1_range
        return [(f"fig1-{k}", fig1_family(k)) for k in range(low, high + 1)]
    if spec.family != "random":
        raise OptionsError(f"unknown corpus family {spec.family!r}")

    rng = np.random.default_rng(seed)
    low, high = spec.layer_range
    counts = rng.integers(low, high + 1, size=spec.instances)
    return [
        (f"random-{seed}-{index}", generate_random(int(count), spec.size_range, spec.density, seed + index))
        for index, count in enumerate(counts)
    ]


@dataclass(frozen=True)
class Overhead:
    value: float
    relative: bool  # False: absolute difference, the denominator optimum was 0


def _overhead(measured: int, optimum: int) -> Overhead:
    if optimum > 0:
        return Overhead(measured / optimum, True)
    return Overhead(float(measured - optimum), False)


@dataclass(frozen=True)
class BenchRecord:
    instance: str
    nodes: int
    edges: int
    layers: int
    unconstrained: Optional[tuple[int, int]] = None  # (length, width)
    constrained: Optional[tuple[int, int]] = None
    minimum_width: Optional[int] = None
    seconds: tuple[float, float] = (0.0, 0.0)
    error: Optional[str] = None
    over_budget: bool = False

    @property
    def ok(self) -> bool:
        return self.error is None

    @property
    def length_overhead(self) -> Optional[Overhead]:
        """Constrained length against the unconstrained minimum."""
        if not self.ok:
            return None
        return _overhead(self.constrained[0], self.unconstrained[0])

    @property
    def width_overhead(self) -> Optional[Overhead]:
        """Unconstrained width against the minimum width."""
        if not self.ok:
            return None
        return _overhead(self.unconstrained[1], self.minimum_width)

    def violations(self) -> list[str]:
        if not self.ok:
            return []
        problems = []
        if self.constrained[1] != self.minimum_width:
            problems.append(f"constrained width {self.constrained[1]} != minimum {self.minimum_width}")
        if self.unconstrained[0] > self.constrained[0]:
            problems.append(
                f"unconstrained length {self.unconstrained[0]} > constrained {self.constrained[0]}"
            )
        for overhead in (self.length_overhead, self.width_overhead):
            if overhead.value < (1.0 if overhead.relative else 0.0):
                problems.append(f"overhead {overhead} below its floor")
        return problems


@dataclass(frozen=True)
class OverheadStats:
    count: int
    mean: float
    p95: float
    maximum: float

    @classmethod
    def of(cls, values: Sequence[float]) -> Optional["OverheadStats"]:
        if not values:
            return None
        data = np.asarray(values, dtype=float)
        return cls(
            count=len(data),
            mean=float(np.mean(data)),
            p95=float(np.percentile(data, BENCH_PERCENTILE)),
            maximum=float(np.max(data)),
        )


@dataclass(frozen=True)
class BenchSummary:
    instances: int
    failures: int
    over_budget: int
    length_relative: Optional[OverheadStats] = None
    length_absolute: Optional[OverheadStats] = None
    width_relative: Optional[OverheadStats] = None
    width_absolute: Optional[OverheadStats] = None
    mean_seconds: float = 0.0
    notes: tuple[str, ...] = field(default_factory=tuple)

    @property
    def vacuous(self) -> bool:
        return self.instances - self.failures == 0


def summarize(records: Sequence[BenchRecord]) -> BenchSummary:
    solved = [record for record in records if record.ok]
    buckets: dict[tuple[str, bool], list[float]] = {}
    for record in solved:
        for name, overhead in (("length", record.length_overhead), ("width", record.width_overhead)):
            buckets.setdefault((name, overhead.relative), []).append(overhead.value)

    notes = []
    if buckets.get(("length", False)):
        notes.append("unconstrained minimum length 0 on some instances; length overhead reported as absolute")
    if buckets.get(("width", False)):
        notes.append("minimum width 0 on some instances; width overhead reported as absolute")

    return BenchSummary(
        instances=len(records),
        failures=len(records) - len(solved),
        over_budget=sum(record.over_budget for record in records),
        length_relative=OverheadStats.of(buckets.get(("length", True), [])),
        length_absolute=OverheadStats.of(buckets.get(("length", False), [])),
        width_relative=OverheadStats.of(buckets.get(("width", True), [])),
        width_absolute=OverheadStats.of(buckets.get(("width", False), [])),
        mean_seconds=float(np.mean([sum(r.seconds) for r in solved])) if solved else 0.0,
        notes=tuple(notes),
    )


def _bench_instance(
    instance: str,
    graph: LayeredGraph,
    options: LayoutOptions,
    time_budget: float,
) -> BenchRecord:
    shape = {"nodes": graph.node_count, "edges": len(graph.edges), "layers": graph.layer_count}
    try:
        with Stopwatch() as loose:
            unconstrained = layout_min_length(graph, options)
        with Stopwatch() as tight:
            run, minimum = layout_at_minimum_width(graph, options)
    except FlowCoordError as error:
        logger.warning("bench instance %s failed: %s", instance, error)
        return BenchRecord(instance, **shape, error=str(error))

    seconds = (loose.elapsed, tight.elapsed)
    if max(seconds) > time_budget:
        logger.warning("bench instance %s took %.2fs (budget %.2fs)", instance, max(seconds), time_budget)
    return BenchRecord(
        instance,
        **shape,
        unconstrained=unconstrained.metrics,
        constrained=run.layout.metrics,
        minimum_width=minimum,
        seconds=seconds,
        over_budget=max(seconds) > time_budget,
    )


def bench_compare(
    spec: CorpusSpec,
    seed: int,
    workers: int = BENCH_WORKERS,
    time_budget: float = BENCH_TIME_BUDGET,
    options: Optional[LayoutOptions] = None,
) -> tuple[list[BenchRecord], BenchSummary]:
    """Unconstrained vs. minimum-width drawing for every corpus instance.

    Records come back in corpus order whatever the worker count.
    """
    options = (options or LayoutOptions()).with_width_cap(None)
    corpus = build_corpus(spec, seed)

    def run(item: tuple[str, LayeredGraph]) -> BenchRecord:
        instance, graph = item
        instance_options = options
        if spec.straight_inner_segments:
            instance_options = options.with_vertical(straighten_inner_segments(graph))
        return _bench_instance(instance, graph, instance_options, time_budget)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            records = list(executor.map(run, corpus))
    else:
        records = [run(item) for item in corpus]

    summary = summarize(records)
    logger.info("bench: %d instances, %d failed", summary.instances, summary.failures)
    return records, summary


if __name__ == "__main__":
    for k in range(4, 8):
        staircase = fig1_family(k)
        print(k, layout_min_length(staircase).metrics, layout_prescribed_width(staircase, 1).metrics)
