# pylint: disable=missing-module-docstring

import logging
from dataclasses import dataclass
from typing import Optional
from xml.sax.saxutils import escape

from PIL import Image, ImageDraw, ImageFont

from FlowCoord.flow_coordinates import Layout
from FlowCoord.flow_graph import LayeredGraph, NodeId
from FlowCoord.flow_settings import (
    COLOR_BACKGROUND,
    COLOR_EDGE,
    COLOR_LABEL,
    COLOR_NODE_FILL,
    COLOR_NODE_OUTLINE,
    RENDER_FONT_FAMILY,
    RENDER_FONT_SIZE,
    RENDER_MARGIN,
    RENDER_NODE_RADIUS,
    RENDER_SHOW_LABELS,
    RENDER_STROKE_WIDTH,
    RENDER_UNIT,
)

logger = logging.getLogger(__name__)

SVG_HEADER = """<?xml version="1.0" standalone="no"?>
<!DOCTYPE svg PUBLIC "-//W3C//DTD SVG 1.1//EN" "http://www.w3.org/Graphics/SVG/1.1/DTD/svg11.dtd">
"""


@dataclass(frozen=True)
class RenderStyle:
    unit: int = RENDER_UNIT
    margin: int = RENDER_MARGIN
    node_radius: int = RENDER_NODE_RADIUS
    stroke_width: float = RENDER_STROKE_WIDTH
    background: str = COLOR_BACKGROUND
    node_fill: str = COLOR_NODE_FILL
    node_outline: str = COLOR_NODE_OUTLINE
    edge_color: str = COLOR_EDGE
    label_color: str = COLOR_LABEL
    font_family: str = RENDER_FONT_FAMILY
    font_size: int = RENDER_FONT_SIZE
    show_labels: bool = RENDER_SHOW_LABELS


class _Canvas:
    """Maps layout units to pixels; x is shifted so the leftmost node sits at the margin."""

    def __init__(self, layout: Layout, style: RenderStyle) -> None:
        self.style = style
        self.left = min(layout.x.values(), default=0)
        span_x = max(layout.x.values(), default=0) - self.left
        span_y = max(layout.y.values(), default=0)
        self.width = 2 * style.margin + span_x * style.unit
        self.height = 2 * style.margin + span_y * style.unit
        self.layout = layout

    def point(self, node: NodeId) -> tuple[float, float]:
        return (
            self.style.margin + (self.layout.x[node] - self.left) * self.style.unit,
            self.style.margin + self.layout.y[node] * self.style.unit,
        )


def _strokes(graph: LayeredGraph) -> list[list[NodeId]]:
    """One node path per drawn stroke: plain edges, and whole dummy chains."""
    strokes = [[u, *chain, v] for (u, v), chain in graph.dummy_map.items() if chain]
    strokes.extend([u, v] for u, v in graph.edges if not (graph.is_dummy(u) or graph.is_dummy(v)))
    return strokes


def _number(value: float) -> str:
    return f"{value:g}"


def render_svg(layout: Layout, graph: LayeredGraph, style: Optional[RenderStyle] = None) -> str:
    style = style or RenderStyle()
    canvas = _Canvas(layout, style)
    edge_style = f'stroke="{style.edge_color}" stroke-width="{_number(style.stroke_width)}"'

    parts = [
        SVG_HEADER,
        f'<svg width="{_number(canvas.width)}" height="{_number(canvas.height)}" '
        f'version="1.1" xmlns="http://www.w3.org/2000/svg">\n',
        f'  <rect width="100%" height="100%" fill="{style.background}"/>\n',
    ]

    for stroke in _strokes(graph):
        points = [canvas.point(node) for node in stroke]
        if len(points) == 2:
            (x1, y1), (x2, y2) = points
            parts.append(
                f'  <line x1="{_number(x1)}" y1="{_number(y1)}" x2="{_number(x2)}" y2="{_number(y2)}" {edge_style}/>\n'
            )
        else:
            joined = " ".join(f"{_number(x)},{_number(y)}" for x, y in points)
            parts.append(f'  <polyline points="{joined}" fill="none" {edge_style}/>\n')

    for node in graph.nodes():
        if graph.is_dummy(node):
            continue
        cx, cy = canvas.point(node)
        parts.append(
            f'  <circle cx="{_number(cx)}" cy="{_number(cy)}" r="{style.node_radius}" '
            f'fill="{style.node_fill}" stroke="{style.node_outline}" stroke-width="1"/>\n'
        )
        if style.show_labels:
            parts.append(
                f'  <text x="{_number(cx + style.node_radius + 2)}" y="{_number(cy - style.node_radius)}" '
                f'font-family="{style.font_family}" font-size="{style.font_size}" '
                f'fill="{style.label_color}">{escape(node)}</text>\n'
            )

    parts.append("</svg>\n")
    return "".join(parts)


def render_png(layout: Layout, graph: LayeredGraph, style: Optional[RenderStyle] = None) -> Image.Image:
    style = style or RenderStyle()
    canvas = _Canvas(layout, style)
    image = Image.new("RGB", (int(canvas.width) + 1, int(canvas.height) + 1), style.background)
    draw = ImageDraw.Draw(image)
    line_width = max(1, round(style.stroke_width))

    for stroke in _strokes(graph):
        draw.line([canvas.point(node) for node in stroke], fill=style.edge_color, width=line_width)

    font = ImageFont.load_default()
    radius = style.node_radius
    for node in graph.nodes():
        if graph.is_dummy(node):
            continue
        cx, cy = canvas.point(node)
        draw.ellipse(
            (cx - radius, cy - radius, cx + radius, cy + radius),
            fill=style.node_fill,
            outline=style.node_outline,
        )
        if style.show_labels:
            draw.text((cx + radius + 2, cy - 2 * radius), node, fill=style.label_color, font=font)

    logger.debug("rendered %dx%d preview", *image.size)
    return image
