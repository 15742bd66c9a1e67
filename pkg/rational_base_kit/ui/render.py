"""Graphviz and SVG/PNG renderings of depth-limited truncations."""
import logging
from dataclasses import dataclass
from fractions import Fraction

from PIL import Image, ImageDraw, ImageFont

from rational_base_kit.core.automata import DEFAULT_FRONTIER_CAP, AutomatonKind, iter_labels, levels, successors
from rational_base_kit.core.transducer import transitions
from rational_base_kit.core.words import EPSILON, eval_real_prefix, fraction_to_decimal, real_enclosure, word_to_str

LOG = logging.getLogger(__name__)

NODE_RADIUS = 3


def _gvquote(s):
    return '"{}"'.format(str(s).replace('"', r'\"'))


@dataclass(frozen=True)
class Layout:
    x_step: Fraction = Fraction(60)
    y_scale: Fraction = Fraction(400)
    margin: Fraction = Fraction(20)


@dataclass(frozen=True)
class FractalNode:
    word: tuple
    value: int
    rho: Fraction
    x: Fraction
    y: Fraction


def _header(name):
    return [
        f"digraph {_gvquote(name)} {{",
        "  rankdir=LR;",
        "  node [shape=circle];",
    ]


def automaton_dot(base, depth, kind=AutomatonKind.TREE, overlay=False, cap=DEFAULT_FRONTIER_CAP):
    """
    DOT source of the states reached within depth steps from 0.

    Nodes are ordered by the depth at which they are first reached, then by
    value. With overlay, T_z edges missing from S_z are dashed and S_z-only
    edges are drawn bold.
    """
    if overlay:
        kind = AutomatonKind.TREE
    layers = levels(base, kind, depth, cap)
    nodes = [n for layer in layers for n in layer]
    known = set(nodes)
    name = f"{'T' if kind is AutomatonKind.TREE else 'S'}_z {base}"
    lines = _header(name)
    for n in nodes:
        lines.append(f"  {_gvquote(n)};")
    for n in nodes:
        edges = dict(successors(base, kind, n))
        styles = {}
        if overlay:
            span = dict(successors(base, AutomatonKind.SPAN, n))
            for a in edges.keys() - span.keys():
                styles[a] = ' style=dashed'
            for a in span.keys() - edges.keys():
                styles[a] = ' penwidth=2'
            edges.update(span)
        for a in sorted(edges):
            if edges[a] in known:
                lines.append(f"  {_gvquote(n)} -> {_gvquote(edges[a])} [label={_gvquote(a)}{styles.get(a, '')}];")
    lines.append("}")
    LOG.debug("automaton %s: %d nodes", name, len(nodes))
    return "\n".join(lines) + "\n"


def transducer_dot(base, depth, cap=DEFAULT_FRONTIER_CAP):
    """DOT source of D_z on the states of S_z within depth steps from 0."""
    nodes = [n for layer in levels(base, AutomatonKind.SPAN, depth, cap) for n in layer]
    known = set(nodes)
    lines = _header(f"D_z {base}")
    for n in nodes:
        lines.append(f"  {_gvquote(n)};")
    for n in nodes:
        for letter, m in transitions(base, n):
            if m in known:
                label = f"({letter.input},{letter.output})"
                lines.append(f"  {_gvquote(n)} -> {_gvquote(m)} [label={_gvquote(label)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def fractal_nodes(base, depth, layout=Layout(), cap=DEFAULT_FRONTIER_CAP):
    """
    Nodes of the unfolded tree of T_z words up to depth.

    A word u sits at x = margin + x_step*|u| and y = margin + y_scale*ρ(u·0^ω).
    """
    nodes = []
    for length in range(depth + 1):
        for word, value in iter_labels(base, AutomatonKind.TREE, length, cap=cap):
            rho = eval_real_prefix(base, word)
            nodes.append(FractalNode(
                word=word,
                value=value,
                rho=rho,
                x=layout.margin + layout.x_step * length,
                y=layout.margin + layout.y_scale * rho,
            ))
    return nodes


def _canvas_size(base, depth, layout):
    highest = real_enclosure(base, (), 0, base.p - 1).hi
    return layout.margin * 2 + layout.x_step * depth, layout.margin * 2 + layout.y_scale * highest


class SvgCanvas:
    def __init__(self, width, height, precision):
        self.precision = precision
        self.elements = []
        self.width = self.number(width)
        self.height = self.number(height)

    def number(self, value):
        return fraction_to_decimal(value, self.precision)

    def line(self, x1, y1, x2, y2, extra=""):
        self.elements.append(
            f'<line x1="{self.number(x1)}" y1="{self.number(y1)}" x2="{self.number(x2)}" '
            f'y2="{self.number(y2)}" stroke="black"{extra}/>'
        )

    def node(self, node):
        self.elements.append(
            f'<circle cx="{self.number(node.x)}" cy="{self.number(node.y)}" r="{NODE_RADIUS}" '
            f'data-word="{word_to_str(node.word, EPSILON)}" data-value="{node.value}" '
            f'data-rho="{self.number(node.rho)}"/>'
        )
        self.elements.append(
            f'<text x="{self.number(node.x + NODE_RADIUS + 1)}" y="{self.number(node.y)}" '
            f'font-size="9">{node.value}</text>'
        )

    def render(self):
        header = (
            f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
            f'width="{self.width}" height="{self.height}" viewBox="0 0 {self.width} {self.height}">'
        )
        return "\n".join([header, *self.elements, "</svg>"]) + "\n"


def _deleted(base, digit, overlay):
    return overlay and digit not in base.span_digits


def fractal_svg(base, depth, layout=Layout(), precision=12, overlay=False, cap=DEFAULT_FRONTIER_CAP):
    """
    SVG drawing of the tree of T_z words up to depth.

    With overlay, edges whose digit is not in D_z (deleted in S_z) are dashed.
    """
    nodes = fractal_nodes(base, depth, layout, cap)
    by_word = {node.word: node for node in nodes}
    canvas = SvgCanvas(*_canvas_size(base, depth, layout), precision)
    for node in nodes:
        if node.word:
            parent = by_word[node.word[:-1]]
            extra = ' stroke-dasharray="4 3"' if _deleted(base, node.word[-1], overlay) else ""
            canvas.line(parent.x, parent.y, node.x, node.y, extra)
    for node in nodes:
        canvas.node(node)
    LOG.debug("fractal %s depth %d: %d nodes", base, depth, len(nodes))
    return canvas.render()


def fractal_png(base, depth, path, layout=Layout(), overlay=False, cap=DEFAULT_FRONTIER_CAP):
    """Raster version of fractal_svg written to path; deleted edges are grey."""
    nodes = fractal_nodes(base, depth, layout, cap)
    by_word = {node.word: node for node in nodes}
    width, height = _canvas_size(base, depth, layout)
    image = Image.new("RGB", (int(width) + 1, int(height) + 1), "white")
    draw = ImageDraw.Draw(image)
    font = ImageFont.load_default()
    for node in nodes:
        if node.word:
            parent = by_word[node.word[:-1]]
            colour = "#aaaaaa" if _deleted(base, node.word[-1], overlay) else "black"
            draw.line([(float(parent.x), float(parent.y)), (float(node.x), float(node.y))], fill=colour)
    for node in nodes:
        x, y = float(node.x), float(node.y)
        draw.ellipse([x - NODE_RADIUS, y - NODE_RADIUS, x + NODE_RADIUS, y + NODE_RADIUS], fill="black")
        draw.text((x + NODE_RADIUS + 1, y - 5), str(node.value), fill="black", font=font)
    image.save(path, format="PNG")
    return path
