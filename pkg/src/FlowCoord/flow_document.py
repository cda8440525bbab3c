"""
Plain-text instance documents and the JSON layout output.

    # comment
    flowcoord 1.0
    layer a b            one line per layer, top to bottom, dummies omitted
    layer c
    layer d e
    edge a d @ 0         long edge; one final order index per intermediate layer
    edge b c
    edge c e
    width_cap 3
    min_dist * 1         default for every interior gap
    min_dist 2 1 2       layer, gap, value (gaps count dummies)
    max_dist 2 1 4
    vertical c e         a long edge here straightens all of its segments

Layer lines must precede the edges that use their labels. Dummy labels
(u~v~layer) may appear in `vertical` lines to straighten single segments.
"""

import json
import logging
import re
from dataclasses import dataclass, field
from typing import Optional

from packaging.version import InvalidVersion, Version

from FlowCoord.flow_coordinates import Layout
from FlowCoord.flow_errors import DocumentError, GraphError, OptionsError
from FlowCoord.flow_graph import Edge, LayeredGraph, NodeId, ViolationKind, properize, validate
from FlowCoord.flow_network import LayoutOptions
from FlowCoord.flow_settings import (
    DEFAULT_MAX_DIST,
    DEFAULT_MIN_DIST,
    DOCUMENT_FORMAT,
    DOCUMENT_MAJOR_VERSION,
    DOCUMENT_VERSION,
    LAYOUT_FORMAT,
)

logger = logging.getLogger(__name__)

TOKEN = re.compile(r"\S+")


@dataclass(frozen=True)
class _Token:
    text: str
    line: int
    column: int

    def fail(self, message: str) -> DocumentError:
        return DocumentError(message, self.line, self.column)

    def integer(self, minimum: Optional[int] = None) -> int:
        try:
            value = int(self.text)
        except ValueError as error:
            raise self.fail(f"expected an integer, got {self.text!r}") from error
        if minimum is not None and value < minimum:
            raise self.fail(f"expected an integer >= {minimum}, got {value}")
        return value


@dataclass
class _Draft:
    layers: list[list[NodeId]] = field(default_factory=list)
    seen: dict[NodeId, _Token] = field(default_factory=dict)
    edges: list[Edge] = field(default_factory=list)
    edge_lines: dict[Edge, _Token] = field(default_factory=dict)
    positions: dict[Edge, tuple[int, ...]] = field(default_factory=dict)
    width_cap: Optional[_Token] = None
    defaults: dict[str, tuple[int, _Token]] = field(default_factory=dict)
    bounds: dict[str, dict[tuple[int, int], tuple[int, _Token, _Token]]] = field(
        default_factory=lambda: {"min_dist": {}, "max_dist": {}}
    )
    vertical: list[tuple[_Token, _Token]] = field(default_factory=list)


def _tokenize(text: str) -> list[list[_Token]]:
    lines = []
    for number, raw in enumerate(text.splitlines(), start=1):
        content = raw.split("#", 1)[0]
        tokens = [_Token(m.group(), number, m.start() + 1) for m in TOKEN.finditer(content)]
        if tokens:
            lines.append(tokens)
    return lines


def _check_header(tokens: list[_Token]) -> None:
    keyword = tokens[0]
    if keyword.text != DOCUMENT_FORMAT:
        raise keyword.fail(f"expected header '{DOCUMENT_FORMAT} <version>', got {keyword.text!r}")
    if len(tokens) != 2:
        raise keyword.fail("header takes exactly one version")
    try:
        version = Version(tokens[1].text)
    except InvalidVersion as error:
        raise tokens[1].fail(f"invalid version {tokens[1].text!r}") from error
    if version.major != DOCUMENT_MAJOR_VERSION:
        raise tokens[1].fail(f"unsupported document version {version}")


def _expect(tokens: list[_Token], count: int, usage: str) -> None:
    if len(tokens) != count:
        raise tokens[0].fail(f"usage: {usage}")


def _read_line(draft: _Draft, tokens: list[_Token]) -> None:
    keyword, args = tokens[0], tokens[1:]

    if keyword.text == "layer":
        for token in args:
            if token.text in draft.seen:
                first = draft.seen[token.text]
                raise token.fail(f"duplicate node {token.text!r} (first declared on line {first.line})")
            draft.seen[token.text] = token
        draft.layers.append([token.text for token in args])

    elif keyword.text == "edge":
        if len(args) < 2 or (len(args) > 2 and args[2].text != "@") or len(args) == 3:
            raise keyword.fail("usage: edge SOURCE TARGET [@ POSITION...]")
        for token in args[:2]:
            if token.text not in draft.seen:
                raise token.fail(f"unknown node {token.text!r}")
        edge = (args[0].text, args[1].text)
        if edge in draft.edge_lines:
            raise keyword.fail(f"duplicate edge {edge[0]} -> {edge[1]}")
        draft.edges.append(edge)
        draft.edge_lines[edge] = keyword
        if len(args) > 2:
            draft.positions[edge] = tuple(token.integer(0) for token in args[3:])

    elif keyword.text == "width_cap":
        _expect(tokens, 2, "width_cap N")
        if draft.width_cap is not None:
            raise keyword.fail(f"width_cap already set on line {draft.width_cap.line}")
        args[0].integer(0)
        draft.width_cap = args[0]

    elif keyword.text in ("min_dist", "max_dist"):
        if len(args) == 2 and args[0].text == "*":
            if keyword.text in draft.defaults:
                raise keyword.fail(f"default {keyword.text} already set")
            draft.defaults[keyword.text] = (args[1].integer(1), args[1])
            return
        _expect(tokens, 4, f"{keyword.text} (LAYER GAP | *) VALUE")
        key = (args[0].integer(0), args[1].integer(1))
        if key in draft.bounds[keyword.text]:
            raise keyword.fail(f"{keyword.text} for gap {key} already set")
        draft.bounds[keyword.text][key] = (args[2].integer(1), keyword, args[2])

    elif keyword.text == "vertical":
        _expect(tokens, 3, "vertical SOURCE TARGET")
        draft.vertical.append((args[0], args[1]))

    else:
        raise keyword.fail(f"unknown directive {keyword.text!r}")


def _build_graph(draft: _Draft) -> LayeredGraph:
    graph = LayeredGraph(tuple(map(tuple, draft.layers)), tuple(draft.edges))
    for violation in validate(graph).violations:
        if violation.kind is ViolationKind.NOT_PROPER:
            continue
        edge = violation.element
        line = draft.edge_lines.get(edge) if isinstance(edge, tuple) and len(edge) == 2 else None
        raise DocumentError(str(violation), line.line if line else 1, line.column if line else 1)

    for edge in draft.edges:
        span = graph.layer_of(edge[1]) - graph.layer_of(edge[0])
        given = len(draft.positions.get(edge, ()))
        if given != span - 1:
            raise draft.edge_lines[edge].fail(
                f"edge {edge[0]} -> {edge[1]} spans {span} layers and needs {span - 1} dummy positions, got {given}"
            )

    try:
        return properize(graph, draft.positions)
    except GraphError as error:
        culprit = next(
            (
                draft.edge_lines[edge]
                for edge in draft.positions
                if error.layer is not None
                and graph.layer_of(edge[0]) < error.layer < graph.layer_of(edge[1])
            ),
            None,
        )
        raise DocumentError(str(error), culprit.line if culprit else 1) from error


def _check_bounds(draft: _Draft) -> None:
    """max_dist >= min_dist wherever both apply; the later of the two clashing lines is blamed."""
    defaults: dict[str, tuple[Optional[int], Optional[_Token]]] = {
        "min_dist": draft.defaults.get("min_dist", (DEFAULT_MIN_DIST, None)),
        "max_dist": draft.defaults.get("max_dist", (DEFAULT_MAX_DIST, None)),
    }

    def bound(name: str, key: tuple[int, int]) -> tuple[Optional[int], Optional[_Token]]:
        if key in draft.bounds[name]:
            value, _, token = draft.bounds[name][key]
            return value, token
        return defaults[name]

    clashes = [(None, defaults["min_dist"], defaults["max_dist"])]
    keys = sorted(set(draft.bounds["min_dist"]) | set(draft.bounds["max_dist"]))
    clashes.extend((key, bound("min_dist", key), bound("max_dist", key)) for key in keys)

    for key, (low, low_token), (high, high_token) in clashes:
        if high is None or high >= low:
            continue
        culprit = max((t for t in (low_token, high_token) if t is not None), key=lambda t: t.line)
        where = "default" if key is None else f"gap {key}"
        raise culprit.fail(f"max_dist {high} < min_dist {low} ({where})")


def _build_options(draft: _Draft, graph: LayeredGraph) -> LayoutOptions:
    sizes = graph.layer_sizes()
    bounds: dict[str, dict[tuple[int, int], int]] = {}
    for name, entries in draft.bounds.items():
        bounds[name] = {}
        for (layer, gap), (value, keyword, _) in entries.items():
            if layer >= len(sizes) or gap > sizes[layer] - 1:
                raise keyword.fail(f"gap ({layer}, {gap}) is not an interior gap")
            bounds[name][(layer, gap)] = value
    _check_bounds(draft)

    vertical: set[Edge] = set()
    for source, target in draft.vertical:
        try:
            vertical.update(graph.segments_of((source.text, target.text)))
        except GraphError as error:
            raise source.fail(str(error)) from error

    options = LayoutOptions(
        width_cap=draft.width_cap.integer() if draft.width_cap else None,
        min_dist=bounds["min_dist"],
        max_dist=bounds["max_dist"],
        default_min_dist=draft.defaults.get("min_dist", (DEFAULT_MIN_DIST,))[0],
        default_max_dist=draft.defaults.get("max_dist", (DEFAULT_MAX_DIST,))[0],
        vertical_edges=frozenset(vertical),
    )
    try:
        options.check(graph)
    except OptionsError as error:
        raise DocumentError(str(error), 1) from error
    return options


def parse_graph(text: str) -> tuple[LayeredGraph, LayoutOptions]:
    lines = _tokenize(text)
    if not lines:
        raise DocumentError(f"empty document; expected '{DOCUMENT_FORMAT} {DOCUMENT_VERSION}'", 1)
    _check_header(lines[0])

    draft = _Draft()
    for tokens in lines[1:]:
        _read_line(draft, tokens)

    graph = _build_graph(draft)
    options = _build_options(draft, graph)
    logger.debug("parsed %d layers, %d nodes, %d edges", graph.layer_count, graph.node_count, len(graph.edges))
    return graph, options


def _folded_edges(graph: LayeredGraph) -> list[Edge]:
    """Graph edges in order, each dummy chain replaced by its original long edge."""
    first_segment = {(u, chain[0]): (u, v) for (u, v), chain in graph.dummy_map.items() if chain}
    folded = []
    for u, v in graph.edges:
        if (u, v) in first_segment:
            folded.append(first_segment[(u, v)])
        elif not (graph.is_dummy(u) or graph.is_dummy(v)):
            folded.append((u, v))
    return folded


def emit_graph(graph: LayeredGraph, options: Optional[LayoutOptions] = None) -> str:
    options = options or LayoutOptions()
    lines = [f"{DOCUMENT_FORMAT} {DOCUMENT_VERSION}"]

    for layer in graph.layers:
        lines.append(" ".join(["layer", *(node for node in layer if not graph.is_dummy(node))]))

    folded = _folded_edges(graph)
    for u, v in folded:
        chain = graph.dummy_map.get((u, v))
        if chain:
            positions = " ".join(str(graph.position_of(dummy)) for dummy in chain)
            lines.append(f"edge {u} {v} @ {positions}")
        else:
            lines.append(f"edge {u} {v}")

    if options.width_cap is not None:
        lines.append(f"width_cap {options.width_cap}")
    if options.default_min_dist != DEFAULT_MIN_DIST:
        lines.append(f"min_dist * {options.default_min_dist}")
    lines.extend(f"min_dist {i} {gap} {value}" for (i, gap), value in sorted(options.min_dist.items()))
    if options.default_max_dist != DEFAULT_MAX_DIST:
        lines.append(f"max_dist * {options.default_max_dist}")
    lines.extend(f"max_dist {i} {gap} {value}" for (i, gap), value in sorted(options.max_dist.items()))

    for u, v in folded:
        chain = graph.dummy_map.get((u, v))
        if not chain:
            if (u, v) in options.vertical_edges:
                lines.append(f"vertical {u} {v}")
            continue
        path = [u, *chain, v]
        segments = list(zip(path, path[1:]))
        if all(segment in options.vertical_edges for segment in segments):
            lines.append(f"vertical {u} {v}")
        else:
            lines.extend(f"vertical {a} {b}" for a, b in segments if (a, b) in options.vertical_edges)

    return "\n".join(lines) + "\n"


def emit_layout(layout: Layout, graph: LayeredGraph, status: str = "optimal") -> str:
    document = {
        "format": LAYOUT_FORMAT,
        "status": status,
        "metrics": {"total_length": layout.total_length, "width": layout.width},
        "nodes": [
            {"label": node, "x": layout.x[node], "y": layout.y[node], "dummy": graph.is_dummy(node)}
            for node in graph.nodes()
        ],
    }
    return json.dumps(document, indent=2) + "\n"


def load_graph(path: str) -> tuple[LayeredGraph, LayoutOptions]:
    with open(path, encoding="utf-8") as handle:
        return parse_graph(handle.read())
