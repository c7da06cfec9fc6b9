"""Text formats: network documents, vectors and matrices, DOT and SVG export."""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence
from xml.sax.saxutils import escape

from .flows import BoundaryMatrix, EdgeVectorField
from .graph_core import (
    BLACK,
    BOUNDARY,
    INTERNAL,
    WHITE,
    Edge,
    GaugeFrame,
    P,
    PlabicError,
    PlabicNetwork,
    Point2,
    ValidationReport,
    Vertex,
    make_network,
    validate_network,
)


class ParseError(PlabicError):
    """Malformed document; carries 1-based line and column."""

    def __init__(self, line: int, column: int, message: str):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class ValidationFailed(PlabicError):
    def __init__(self, report: ValidationReport):
        super().__init__(f"invalid network:\n{report}")
        self.report = report


_RATIONAL = re.compile(r"^[+-]?\d+(/\d+)?$")


def format_rational(q) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def parse_rational(token: str, line: int = 0, column: int = 0) -> Fraction:
    if not _RATIONAL.match(token):
        raise ParseError(line, column, f"malformed rational {token!r}")
    try:
        return Fraction(token)
    except ZeroDivisionError:
        raise ParseError(line, column, f"zero denominator in {token!r}") from None


def format_vector(v: Sequence[Fraction]) -> str:
    return "(" + ", ".join(format_rational(x) for x in v) + ")"


def format_matrix(A: BoundaryMatrix) -> str:
    cells = [[format_rational(x) for x in row] for row in A.rows]
    width = max((len(c) for row in cells for c in row), default=1)
    return "".join(" ".join(c.rjust(width) for c in row) + "\n" for row in cells)


def format_field(field: EdgeVectorField, order: Sequence[str] | None = None) -> str:
    ids = list(order) if order is not None else list(field.vectors)
    return "".join(f"{eid} {format_vector(field[eid])}\n" for eid in ids)


# ---------------------------------------------------------------------------
# network documents


@dataclass(frozen=True)
class NetworkDocument:
    net: PlabicNetwork
    direction: Point2 | None = None


def serialize_network(net: PlabicNetwork, direction: Point2 | None = None) -> str:
    head = [f"network n={net.n} k={net.k} base={','.join(str(i) for i in net.base) or '-'}"]
    if direction is not None:
        head[0] += f" gauge={format_rational(direction.x)},{format_rational(direction.y)}"
    lines = head
    for v in net.vertices:
        pos = f"{format_rational(v.position.x)} {format_rational(v.position.y)}"
        tail = f" {v.boundary_index}" if v.is_boundary else ""
        lines.append(f"vertex {v.id} {v.color} {v.kind} {pos}{tail}")
    for e in net.edges:
        lines.append(f"edge {e.id} {e.tail} {e.head} {format_rational(e.weight)}")
    return "\n".join(lines) + "\n"


_ID = re.compile(r"^[A-Za-z_][A-Za-z0-9_.\-]*$")


def _tokens(line: str) -> list[tuple[str, int]]:
    return [(m.group(0), m.start() + 1) for m in re.finditer(r"\S+", line)]


def parse_network(text: str, validate: bool = True) -> NetworkDocument:
    """Parse a network document; see the README for the grammar."""
    header = None
    verts: list[Vertex] = []
    edges: list[Edge] = []
    vids: dict[str, int] = {}
    eids: dict[str, int] = {}
    edge_lines: list[tuple[int, list[tuple[str, int]]]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        toks = _tokens(line)
        if not toks:
            continue
        kw, col = toks[0]
        if kw == "network":
            if header is not None:
                raise ParseError(lineno, col, "second network header")
            if verts or edges:
                raise ParseError(lineno, col, "the network header must come first")
            header = _parse_header(lineno, toks[1:])
        elif kw == "vertex":
            if header is None:
                raise ParseError(lineno, col, "missing network header")
            v = _parse_vertex(lineno, toks)
            if v.id in vids:
                raise ParseError(lineno, toks[1][1], f"duplicate vertex id {v.id} (first on line {vids[v.id]})")
            vids[v.id] = lineno
            verts.append(v)
        elif kw == "edge":
            if header is None:
                raise ParseError(lineno, col, "missing network header")
            if len(toks) != 5:
                raise ParseError(lineno, col, "expected: edge <id> <tail> <head> <weight>")
            (eid, ecol), (t, tcol), (h, hcol), (w, wcol) = toks[1:]
            if not _ID.match(eid):
                raise ParseError(lineno, ecol, f"bad edge id {eid!r}")
            if eid in eids or eid in vids:
                raise ParseError(lineno, ecol, f"duplicate id {eid}")
            eids[eid] = lineno
            edges.append(Edge(eid, t, h, parse_rational(w, lineno, wcol)))
            edge_lines.append((lineno, toks))
        else:
            raise ParseError(lineno, col, f"unknown record {kw!r}")
    if header is None:
        raise ParseError(1, 1, "empty document: missing network header")
    for (lineno, toks), e in zip(edge_lines, edges):
        for name, (_, c) in ((e.tail, toks[2]), (e.head, toks[3])):
            if name not in vids:
                raise ParseError(lineno, c, f"dangling endpoint {name!r}")
        if e.id in vids:
            raise ParseError(lineno, toks[1][1], f"id {e.id} used for a vertex and an edge")
    net = make_network(verts, edges)
    n, k, base, direction = header
    if n is not None and n != net.n:
        raise ParseError(1, 1, f"header says n={n} but the document has {net.n} boundary vertices")
    if validate:
        rep = validate_network(net)
        if not rep.ok:
            raise ValidationFailed(rep)
    if k is not None and k != net.k:
        raise ParseError(1, 1, f"header says k={k} but the orientation has {net.k} sources")
    if base is not None and tuple(base) != tuple(net.base):
        raise ParseError(1, 1, f"header base {base} differs from the orientation's sources {list(net.base)}")
    return NetworkDocument(net, direction)


def _parse_header(lineno: int, toks):
    n = k = base = direction = None
    for tok, col in toks:
        if "=" not in tok:
            raise ParseError(lineno, col, f"expected key=value, got {tok!r}")
        key, val = tok.split("=", 1)
        vcol = col + len(key) + 1
        if key == "n" or key == "k":
            if not val.isdigit():
                raise ParseError(lineno, vcol, f"{key} must be a non-negative integer")
            if key == "n":
                n = int(val)
            else:
                k = int(val)
        elif key == "base":
            if val == "-":
                base = []
            else:
                parts = val.split(",")
                if not all(p.isdigit() for p in parts):
                    raise ParseError(lineno, vcol, "base must be comma separated labels")
                base = [int(p) for p in parts]
        elif key == "gauge":
            parts = val.split(",")
            if len(parts) != 2:
                raise ParseError(lineno, vcol, "gauge must be 'x,y'")
            x = parse_rational(parts[0], lineno, vcol)
            y = parse_rational(parts[1], lineno, vcol + len(parts[0]) + 1)
            direction = P(x, y)
        else:
            raise ParseError(lineno, col, f"unknown header key {key!r}")
    return n, k, base, direction


def _parse_vertex(lineno: int, toks) -> Vertex:
    if len(toks) not in (6, 7):
        raise ParseError(lineno, toks[0][1], "expected: vertex <id> <color> <kind> <x> <y> [<boundary index>]")
    (vid, icol), (color, ccol), (kind, kcol), (x, xcol), (y, ycol) = toks[1:6]
    if not _ID.match(vid):
        raise ParseError(lineno, icol, f"bad vertex id {vid!r}")
    if color not in (WHITE, BLACK):
        raise ParseError(lineno, ccol, f"color must be white or black, got {color!r}")
    if kind not in (BOUNDARY, INTERNAL):
        raise ParseError(lineno, kcol, f"kind must be boundary or internal, got {kind!r}")
    pos = P(parse_rational(x, lineno, xcol), parse_rational(y, lineno, ycol))
    idx = None
    if kind == BOUNDARY:
        if len(toks) != 7:
            raise ParseError(lineno, toks[-1][1], "boundary vertices need a boundary index")
        tok, col = toks[6]
        if not tok.isdigit() or int(tok) < 1:
            raise ParseError(lineno, col, "boundary index must be a positive integer")
        idx = int(tok)
    elif len(toks) == 7:
        raise ParseError(lineno, toks[6][1], "internal vertices take no boundary index")
    return Vertex(vid, color, kind, pos, idx)


# ---------------------------------------------------------------------------
# DOT and SVG


def master_edge_classes(net: PlabicNetwork) -> dict[str, str]:
    """Blue for horizontal and boundary source edges of a Le-network, red elsewhere."""
    out = {}
    for e in net.edges:
        out[e.id] = "blue" if e.id.startswith(("h", "src")) else "red"
    return out


def _q(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(
    net: PlabicNetwork,
    field: EdgeVectorField | None = None,
    signature: Mapping[str, int] | None = None,
    edge_colors: Mapping[str, str] | None = None,
) -> str:
    """Deterministic DOT text with pinned positions.

    Optional overlays add the edge vector and/or signature bit to each edge
    label, and per-edge colors.
    """
    lines = ["digraph plabic {", "  graph [splines=false];", "  node [shape=circle, width=0.25, label=\"\", style=filled];"]
    for v in net.vertices:
        pos = f"{float(v.position.x):.6g},{float(v.position.y):.6g}!"
        if v.is_boundary:
            attrs = f"shape=box, fillcolor=lightgray, label={_q(f'b{v.boundary_index}')}"
        else:
            fill = "white" if v.color == WHITE else "black"
            attrs = f"fillcolor={fill}"
        lines.append(f"  {_q(v.id)} [pos={_q(pos)}, {attrs}];")
    for e in net.edges:
        label = format_rational(e.weight)
        if field is not None and e.id in field.vectors:
            label += " " + format_vector(field[e.id])
        if signature is not None and e.id in signature:
            label += f" [{signature[e.id] % 2}]"
        attrs = [f"label={_q(label)}", f"id={_q(e.id)}"]
        if edge_colors and e.id in edge_colors:
            attrs.append(f"color={edge_colors[e.id]}")
        lines.append(f"  {_q(e.tail)} -> {_q(e.head)} [{', '.join(attrs)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def export_svg(net: PlabicNetwork, frame: GaugeFrame | None = None, scale: int = 60) -> str:
    """Static drawing; gauge rays from the sources are clipped to the bounding box."""
    xs = [float(v.position.x) for v in net.vertices] or [0.0]
    ys = [float(v.position.y) for v in net.vertices] or [0.0]
    x0, x1 = min(xs) - 1, max(xs) + 1
    y0, y1 = -0.5, max(ys) + 1
    width, height = (x1 - x0) * scale, (y1 - y0) * scale

    def tx(p: Point2) -> tuple[float, float]:
        return ((float(p.x) - x0) * scale, (y1 - float(p.y)) * scale)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.1f}" height="{height:.1f}">',
        '<defs><marker id="arrow" viewBox="0 0 10 10" refX="9" refY="5" markerWidth="6" markerHeight="6" orient="auto">'
        '<path d="M0,0 L10,5 L0,10 z"/></marker></defs>',
    ]
    bx0, bx1, by = 0.0, width, y1 * scale
    out.append(f'<line x1="{bx0:.1f}" y1="{by:.1f}" x2="{bx1:.1f}" y2="{by:.1f}" stroke="gray"/>')
    if frame is not None:
        d = frame.direction
        for i in frame.sources:
            o = net.position(net.boundary_vertex(i))
            t = _clip(o, d, (x0, x1, y0, y1))
            a = tx(o)
            b = ((float(o.x) + float(d.x) * t - x0) * scale, (y1 - float(o.y) - float(d.y) * t) * scale)
            out.append(
                f'<line x1="{a[0]:.1f}" y1="{a[1]:.1f}" x2="{b[0]:.1f}" y2="{b[1]:.1f}" '
                'stroke="orange" stroke-dasharray="4,3"/>'
            )
    for e in net.edges:
        a, b = tx(net.position(e.tail)), tx(net.position(e.head))
        mx, my = (a[0] + b[0]) / 2, (a[1] + b[1]) / 2
        out.append(
            f'<line x1="{a[0]:.1f}" y1="{a[1]:.1f}" x2="{b[0]:.1f}" y2="{b[1]:.1f}" stroke="black" marker-end="url(#arrow)"/>'
        )
        out.append(f'<text x="{mx:.1f}" y="{my - 4:.1f}" font-size="10">{escape(e.id)}={escape(format_rational(e.weight))}</text>')
    for v in net.vertices:
        x, y = tx(v.position)
        if v.is_boundary:
            out.append(f'<rect x="{x - 5:.1f}" y="{y - 5:.1f}" width="10" height="10" fill="lightgray" stroke="black"/>')
            out.append(f'<text x="{x - 6:.1f}" y="{y + 18:.1f}" font-size="11">b{v.boundary_index}</text>')
        else:
            fill = "white" if v.color == WHITE else "black"
            out.append(f'<circle cx="{x:.1f}" cy="{y:.1f}" r="6" fill="{fill}" stroke="black"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _clip(o: Point2, d: Point2, box) -> float:
    x0, x1, y0, y1 = box
    ts = [(y1 - float(o.y)) / float(d.y)]
    if d.x > 0:
        ts.append((x1 - float(o.x)) / float(d.x))
    elif d.x < 0:
        ts.append((x0 - float(o.x)) / float(d.x))
    return max(0.0, min(ts))
