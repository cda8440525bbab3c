"""
Command line: flowcoord {layout,oracle,bench,verify,generate}.

Exit codes: 0 success, 1 infeasible (or failed verification), 2 input error.
"""

import argparse
import json
import logging
import sys
from dataclasses import asdict, replace
from typing import Optional, Sequence

from FlowCoord.flow_coordinates import verify_properties
from FlowCoord.flow_document import emit_graph, emit_layout, load_graph, parse_graph
from FlowCoord.flow_errors import (
    BudgetExceededError,
    DocumentError,
    GraphError,
    InfeasibleError,
    OptionsError,
)
from FlowCoord.flow_graph import Edge, LayeredGraph, fig1_family, generate_random
from FlowCoord.flow_network import LayoutOptions
from FlowCoord.flow_oracle import brute_force_optimal
from FlowCoord.flow_pipeline import (
    CorpusSpec,
    bench_compare,
    layout_at_minimum_width,
    solve_layout,
    straighten_inner_segments,
)
from FlowCoord.flow_render import render_png, render_svg
from FlowCoord.flow_settings import (
    BACKENDS,
    BENCH_DENSITY,
    BENCH_FIG1_RANGE,
    BENCH_INSTANCES,
    BENCH_SIZE_RANGE,
    BENCH_TIME_BUDGET,
    BENCH_WORKERS,
    EXIT_INFEASIBLE,
    EXIT_INPUT_ERROR,
    EXIT_OK,
)
from FlowCoord.utilities.log_setup import configure_logging

logger = logging.getLogger(__name__)


def _read_document(path: str) -> tuple[LayeredGraph, LayoutOptions]:
    if path == "-":
        return parse_graph(sys.stdin.read())
    return load_graph(path)


def _write(text: str, path: Optional[str]) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(text)


def _width_argument(value: str) -> object:
    if value == "min":
        return value
    width = int(value)
    if width < 0:
        raise argparse.ArgumentTypeError(f"width must be non-negative, got {width}")
    return width


def _apply_overrides(graph: LayeredGraph, options: LayoutOptions, args: argparse.Namespace) -> LayoutOptions:
    changes = {}
    if args.min_dist is not None:
        changes["default_min_dist"] = args.min_dist
    if args.max_dist is not None:
        changes["default_max_dist"] = args.max_dist
    if args.backend is not None:
        changes["backend"] = args.backend
    if args.no_normalize:
        changes["normalize"] = False
    if isinstance(args.max_width, int):
        changes["width_cap"] = args.max_width
    options = replace(options, **changes)

    vertical: set[Edge] = set()
    for source, target in args.vertical or ():
        vertical.update(graph.segments_of((source, target)))
    if args.straight_inner_segments:
        vertical |= straighten_inner_segments(graph)
    options = options.with_vertical(vertical)
    options.check(graph)
    return options


def _solve(graph: LayeredGraph, options: LayoutOptions, args: argparse.Namespace):
    if args.max_width == "min":
        run, width = layout_at_minimum_width(graph, options.with_width_cap(None))
        logger.info("minimum feasible width %d", width)
        return run
    return solve_layout(graph, options)


# VERBS
def cmd_layout(args: argparse.Namespace) -> int:
    graph, options = _read_document(args.document)
    options = _apply_overrides(graph, options, args)
    run = _solve(graph, options, args)
    _write(emit_layout(run.layout, graph, run.flow.status.value), args.output)
    if args.svg:
        _write(render_svg(run.layout, graph), args.svg)
    if args.png:
        render_png(run.layout, graph).save(args.png)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    graph, options = _read_document(args.document)
    options = _apply_overrides(graph, options, args)
    run = _solve(graph, options, args)
    report = verify_properties(graph, run.network, run.flow, run.flow.is_optimal)
    _write(json.dumps(report.as_dict(), indent=2) + "\n", args.output)
    return EXIT_OK if report.ok else EXIT_INFEASIBLE


def cmd_oracle(args: argparse.Namespace) -> int:
    graph, options = _read_document(args.document)
    options = _apply_overrides(graph, options, args)
    result = brute_force_optimal(graph, options, budget=args.budget)
    solved = solve_layout(graph, options)
    document = json.loads(emit_layout(result.witness, graph, "oracle"))
    document["oracle"] = {
        "optimal_length": result.optimal_length,
        "explored": result.explored,
        "solver_length": solved.layout.total_length,
        "agrees": solved.layout.total_length == result.optimal_length,
    }
    _write(json.dumps(document, indent=2) + "\n", args.output)
    return EXIT_OK


def cmd_bench(args: argparse.Namespace) -> int:
    spec = CorpusSpec(
        family=args.family,
        instances=args.instances,
        size_range=tuple(args.sizes),
        density=args.density,
        fig1_range=tuple(args.fig1_range),
        straight_inner_segments=args.straight_inner_segments,
    )
    records, summary = bench_compare(spec, args.seed, workers=args.workers, time_budget=args.budget)
    document = {
        "summary": {**asdict(summary), "vacuous": summary.vacuous},
        "records": [asdict(record) for record in records] if args.records else [],
    }
    _write(json.dumps(document, indent=2) + "\n", args.output)
    return EXIT_OK


def cmd_generate(args: argparse.Namespace) -> int:
    if args.fig1 is not None:
        graph = fig1_family(args.fig1)
    else:
        graph = generate_random(args.layers, tuple(args.sizes), args.density, args.seed)
    _write(emit_graph(graph), args.output)
    return EXIT_OK


# PARSER
def _add_layout_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("document", help="instance document, '-' for stdin")
    parser.add_argument("--max-width", type=_width_argument, help="width cap, or 'min' for the narrowest drawing")
    parser.add_argument("--min-dist", type=int, help="default minimum distance of adjacent nodes")
    parser.add_argument("--max-dist", type=int, help="default maximum distance of adjacent nodes")
    parser.add_argument(
        "--vertical",
        nargs=2,
        action="append",
        metavar=("SOURCE", "TARGET"),
        help="draw this edge vertically; a long edge straightens its whole chain",
    )
    parser.add_argument("--straight-inner-segments", action="store_true", help="draw dummy-to-dummy segments vertically")
    parser.add_argument("--backend", choices=BACKENDS)
    parser.add_argument("--no-normalize", action="store_true", help="keep raw flow coordinates")
    parser.add_argument("-o", "--output", help="output file (default stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="flowcoord", description="Min-cost-flow coordinate assignment for layered drawings.")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v info, -vv debug")
    verbs = parser.add_subparsers(dest="verb", required=True)

    layout = verbs.add_parser("layout", help="compute a drawing")
    _add_layout_flags(layout)
    layout.add_argument("--svg", help="also write an SVG drawing")
    layout.add_argument("--png", help="also write a PNG preview")
    layout.set_defaults(handler=cmd_layout)

    verify = verbs.add_parser("verify", help="solve and check the flow properties")
    _add_layout_flags(verify)
    verify.set_defaults(handler=cmd_verify)

    oracle = verbs.add_parser("oracle", help="exhaustive optimum for small instances")
    _add_layout_flags(oracle)
    oracle.add_argument("--budget", type=int, help="max enumeration space")
    oracle.set_defaults(handler=cmd_oracle)

    bench = verbs.add_parser("bench", help="unconstrained vs. minimum-width comparison")
    bench.add_argument("--family", choices=("random", "fig1"), default="random")
    bench.add_argument("--instances", type=int, default=BENCH_INSTANCES)
    bench.add_argument("--seed", type=int, default=0)
    bench.add_argument("--sizes", type=int, nargs=2, default=list(BENCH_SIZE_RANGE), metavar=("LOW", "HIGH"))
    bench.add_argument("--density", type=float, default=BENCH_DENSITY)
    bench.add_argument("--fig1-range", type=int, nargs=2, default=list(BENCH_FIG1_RANGE), metavar=("LOW", "HIGH"))
    bench.add_argument("--workers", type=int, default=BENCH_WORKERS)
    bench.add_argument("--budget", type=float, default=BENCH_TIME_BUDGET, help="seconds per instance")
    bench.add_argument("--straight-inner-segments", action="store_true")
    bench.add_argument("--records", action="store_true", help="include per-instance records")
    bench.add_argument("-o", "--output")
    bench.set_defaults(handler=cmd_bench)

    generate = verbs.add_parser("generate", help="emit a fixture document")
    source = generate.add_mutually_exclusive_group()
    source.add_argument("--fig1", type=int, metavar="K")
    source.add_argument("--layers", type=int, default=4)
    generate.add_argument("--sizes", type=int, nargs=2, default=list(BENCH_SIZE_RANGE), metavar=("LOW", "HIGH"))
    generate.add_argument("--density", type=float, default=BENCH_DENSITY)
    generate.add_argument("--seed", type=int, default=0)
    generate.add_argument("-o", "--output")
    generate.set_defaults(handler=cmd_generate)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.verbose)

    try:
        return args.handler(args)
    except InfeasibleError as error:
        hint = f" (minimum feasible width {error.minimum_width})" if error.minimum_width is not None else ""
        print(f"flowcoord: infeasible: {error}{hint}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (DocumentError, GraphError, OptionsError, BudgetExceededError, OSError) as error:
        print(f"flowcoord: error: {error}", file=sys.stderr)
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
