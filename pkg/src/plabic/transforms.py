"""Transformations of oriented networks and the induced change of edge vectors.

Every operation is functional: it returns a new network, frame and field and
never mutates its inputs.  Each one predicts the new field from the old one by
a local sign/factor rule and, when ``check`` is true (the default), compares
the prediction with an exact recomputation of the new vertex system.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field as dc_field, replace
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from . import linalg
from .flows import (
    BoundaryMatrix,
    EdgeVectorField,
    Vector,
    boundary_matrix,
    is_zero,
    linear_system_oracle,
    unit,
    vadd,
    vscale,
    zero,
)
from .graph_core import (
    BLACK,
    BOUNDARY,
    INTERNAL,
    WHITE,
    DegenerateFrameError,
    Edge,
    Face,
    GaugeFrame,
    GeneralPositionError,
    P,
    PlabicError,
    PlabicNetwork,
    Point2,
    Q,
    Vertex,
    eps2,
    faces,
    make_frame,
    make_network,
    pair_sign,
    point_on_open_segment,
    validate_network,
    winding,
)

# ---------------------------------------------------------------------------
# results and shared helpers


@dataclass(frozen=True)
class Transformed:
    """Outcome of a transformation: the new network, its frame and field.

    ``factors`` records the predicted per-edge factor relating new and old
    vectors where the rule is multiplicative; ``notes`` carries diagnostics.
    """

    net: PlabicNetwork
    frame: GaugeFrame
    field: EdgeVectorField
    factors: Mapping[str, Fraction] = dc_field(default_factory=dict)
    notes: Mapping[str, object] = dc_field(default_factory=dict)


def _oracle(net: PlabicNetwork, frame: GaugeFrame) -> EdgeVectorField:
    return linear_system_oracle(net, frame)[0]


def _field_or_oracle(net: PlabicNetwork, frame: GaugeFrame, field: EdgeVectorField | None) -> EdgeVectorField:
    if field is None:
        return _oracle(net, frame)
    return field


def _sign(parity: int) -> int:
    return -1 if parity % 2 else 1


def _verify(net: PlabicNetwork, frame: GaugeFrame, vectors: Mapping[str, Vector], what: str) -> None:
    truth = _oracle(net, frame)
    bad = sorted(e for e in truth.vectors if tuple(truth[e]) != tuple(vectors[e]))
    if bad:
        raise PlabicError(f"internal error: {what} prediction differs from recomputation on {bad}")


def _finish(net, frame, vectors, check, what, factors=None, notes=None) -> Transformed:
    ordered = {e.id: tuple(vectors[e.id]) for e in net.edges}
    if check:
        _verify(net, frame, ordered, what)
    fld = EdgeVectorField(ordered, net.base, frame.direction)
    return Transformed(net, frame, fld, dict(factors or {}), dict(notes or {}))


def _require(net: PlabicNetwork, what: str, **kw) -> None:
    rep = validate_network(net, **kw)
    if not rep.ok:
        codes = rep.codes()
        cls = GeneralPositionError if codes <= {"general_position", "planarity"} else PlabicError
        raise cls(f"{what}: resulting network is invalid:\n{rep}")


def _fresh(taken: set[str], stem: str) -> str:
    if stem not in taken:
        return stem
    for i in itertools.count(1):
        cand = f"{stem}_{i}"
        if cand not in taken:
            return cand
    raise AssertionError


def _ids(net: PlabicNetwork) -> set[str]:
    return {v.id for v in net.vertices} | {e.id for e in net.edges}


def _wind(net: PlabicNetwork, a: str, b: str, l: Point2) -> int:
    return winding(net.direction(a), net.direction(b), l)


def local_relation(net: PlabicNetwork, frame: GaugeFrame, eid: str, vectors: Mapping[str, Vector]) -> Vector:
    """Right-hand side of the vertex relation that determines ``E_eid``.

    Sink edges give the signed, weighted basis vector; other edges the signed
    sum over the edges leaving their head.
    """
    e = net.edge(eid)
    w = e.weight
    s = frame.int(eid)
    j = net.sink_of_edge(eid)
    if j is not None:
        return vscale(_sign(s) * w, unit(net.n, j))
    out = zero(net.n)
    for f in net.out_edges(e.head):
        out = vadd(out, vscale(_sign(s + _wind(net, eid, f, frame.direction)) * w, vectors[f]))
    return out


def boundary_matrix_of(net: PlabicNetwork, frame: GaugeFrame | None = None) -> BoundaryMatrix:
    return boundary_matrix(net, frame)


# ---------------------------------------------------------------------------
# gauge ray rotation


def _strictly_between(d: Point2, l0: Point2, l1: Point2) -> bool:
    """d lies in the open cone swept when rotating l0 to l1 inside the upper half plane."""
    c = l0.cross(l1)
    if c == 0:
        return False
    s = 1 if c > 0 else -1
    return s * l0.cross(d) > 0 and s * d.cross(l1) > 0


def rotation_indices(net: PlabicNetwork, old: Point2, new: Point2) -> dict[str, tuple[int, int]]:
    """Per edge: (rays sweeping its initial vertex, 1 if its direction is swept)."""
    out = {}
    srcs = [net.position(net.boundary_vertex(i)) for i in net.base]
    for e in net.edges:
        tail = net.position(e.tail)
        iv = sum(1 for o in srcs if o != tail and _strictly_between(tail - o, old, new))
        par = int(_strictly_between(net.direction(e.id), old, new))
        out[e.id] = (iv, par)
    return out


def rotate_gauge(
    net: PlabicNetwork,
    old_frame: GaugeFrame,
    new_frame: GaugeFrame,
    field: EdgeVectorField | None = None,
    check: bool = True,
) -> Transformed:
    """Change the gauge direction; boundary source vectors stay, others may flip sign."""
    old_frame = make_frame(net, old_frame.direction)
    new_frame = make_frame(net, new_frame.direction)
    l0, l1 = old_frame.direction, new_frame.direction
    for i in net.base:
        o = net.position(net.boundary_vertex(i))
        for b in net.boundary:
            p = net.position(b)
            if p != o and _strictly_between(p - o, l0, l1):
                raise DegenerateFrameError(f"invalid frame pair: rotation sweeps boundary vertex {b}")
    field = _field_or_oracle(net, old_frame, field)
    idx = rotation_indices(net, l0, l1)
    vectors, factors = {}, {}
    for e in net.edges:
        if net.vertex(e.tail).is_boundary and e.tail in {net.boundary_vertex(i) for i in net.base}:
            sgn = 1
        else:
            iv, par = idx[e.id]
            sgn = _sign(iv + par)
        factors[e.id] = Fraction(sgn)
        vectors[e.id] = vscale(sgn, field[e.id])
    return _finish(net, new_frame, vectors, check, "gauge rotation", factors, {"indices": idx})


# ---------------------------------------------------------------------------
# weight gauge and vertex moves


def apply_weight_gauge(
    net: PlabicNetwork,
    frame: GaugeFrame,
    vertex: str,
    t,
    field: EdgeVectorField | None = None,
    check: bool = True,
) -> Transformed:
    """Rescale w_e by t at the tail and 1/t at the head of every edge at ``vertex``.

    Only the vectors on edges leaving ``vertex`` change, by the factor t.
    """
    v = net.vertex(vertex)
    if v.is_boundary:
        raise PlabicError(f"weight gauge at boundary vertex {vertex}: the gauge parameter must be 1 there")
    t = Q(t)
    if t <= 0:
        raise PlabicError("weight gauge parameter must be positive")
    field = _field_or_oracle(net, frame, field)
    weights = {}
    for eid in net.out_edges(vertex):
        weights[eid] = net.weight(eid) * t
    for eid in net.in_edges(vertex):
        weights[eid] = net.weight(eid) / t
    new = net.with_weights(weights)
    frame = make_frame(new, frame.direction)
    factors = {e.id: (t if e.id in net.out_edges(vertex) else Fraction(1)) for e in net.edges}
    vectors = {eid: vscale(f, field[eid]) for eid, f in factors.items()}
    return _finish(new, frame, vectors, check, "weight gauge", factors)


def _propagate_signs(
    old: PlabicNetwork,
    new: PlabicNetwork,
    old_frame: GaugeFrame,
    new_frame: GaugeFrame,
    unknown: set[str],
) -> dict[str, int]:
    """Sign exponents making the old field solve the new vertex relations.

    Edges outside ``unknown`` keep their vector.  Each relation term (a -> f)
    forces s(a) + s(f) = d_int(a) + d_wind(a, f); sink edges force
    s(a) = d_int(a).  Raises when the constraints are inconsistent, which
    means the relative configuration changed.
    """
    l = old_frame.direction
    cons: list[tuple[str, str | None, int]] = []
    for e in new.edges:
        dint = new_frame.int(e.id) - old_frame.int(e.id)
        if new.sink_of_edge(e.id) is not None:
            cons.append((e.id, None, dint % 2))
            continue
        for f in new.out_edges(e.head):
            dw = _wind(new, e.id, f, l) - _wind(old, e.id, f, l)
            cons.append((e.id, f, (dint + dw) % 2))
    s = {e.id: 0 for e in new.edges if e.id not in unknown}
    changed = True
    while changed:
        changed = False
        for a, f, r in cons:
            if f is None:
                if a not in s:
                    s[a] = r
                    changed = True
                continue
            if a in s and f not in s:
                s[f] = (r + s[a]) % 2
                changed = True
            elif f in s and a not in s:
                s[a] = (r + s[f]) % 2
                changed = True
    for eid in unknown - set(s):
        # unconstrained: the edge ends at a vertex with nothing leaving it
        s[eid] = 0
    for a, f, r in cons:
        lhs = s[a] if f is None else (s[a] + s[f]) % 2
        if lhs != r:
            raise PlabicError(f"transformation changes the relative configuration at edge {a}")
    return s


def move_vertex(
    net: PlabicNetwork,
    frame: GaugeFrame,
    vertex: str,
    position: Point2,
    field: EdgeVectorField | None = None,
    check: bool = True,
) -> Transformed:
    """Move one internal vertex; only its incident edge vectors may change sign."""
    v = net.vertex(vertex)
    if v.is_boundary:
        raise PlabicError("boundary vertices cannot be moved")
    if position.y <= 0:
        raise PlabicError("internal vertices must stay strictly above the boundary")
    new = net.with_positions({vertex: position})
    _require(new, "vertex move", allow_leaves=True)
    new_frame = make_frame(new, frame.direction)
    field = _field_or_oracle(net, frame, field)
    inc = set(net.incident(vertex))
    s = _propagate_signs(net, new, frame, new_frame, inc)
    vectors = {e.id: vscale(_sign(s[e.id]), field[e.id]) for e in net.edges}
    notes = {"crossing_sum_conserved": crossing_sums_conserved(net, new, frame, new_frame, vertex)}
    notes["edge_signs"] = vertex_move_signs(net, new, frame, new_frame, vertex)
    factors = {eid: Fraction(_sign(x)) for eid, x in s.items()}
    return _finish(new, new_frame, vectors, check, "vertex move", factors, notes)


def vertex_move_signs(
    old: PlabicNetwork, new: PlabicNetwork, old_frame: GaugeFrame, new_frame: GaugeFrame, vertex: str
) -> dict[str, int | None]:
    """Closed-form sign exponents for the edges at a moved vertex.

    An edge leaving the vertex uses the change of its crossing number plus
    the change of its winding with an edge leaving its head (crossings only
    at a sink).  An edge entering it uses the change of the winding with an
    edge entering its tail.  ``None`` marks an edge whose neighbour is itself
    incident to the moved vertex or a boundary source, where the closed form
    does not apply.
    """
    l = old_frame.direction
    inc = set(old.incident(vertex))
    out: dict[str, int | None] = {}
    for eid in old.incident(vertex):
        e = old.edge(eid)
        if e.tail == vertex:
            dint = new_frame.int(eid) - old_frame.int(eid)
            if old.sink_of_edge(eid) is not None:
                out[eid] = dint % 2
                continue
            fs = [f for f in old.out_edges(e.head) if f not in inc]
            out[eid] = None if not fs else (dint + _wind(new, eid, fs[0], l) - _wind(old, eid, fs[0], l)) % 2
        else:
            gs = [g for g in old.in_edges(e.tail) if g not in inc]
            out[eid] = None if not gs else (_wind(new, gs[0], eid, l) - _wind(old, gs[0], eid, l)) % 2
    return out


def crossing_sums_conserved(
    old: PlabicNetwork, new: PlabicNetwork, old_frame: GaugeFrame, new_frame: GaugeFrame, vertex: str
) -> bool:
    """int(e_in) + int(e_out) is unchanged mod 2 for every in/out pair at the moved vertex."""
    for a in old.in_edges(vertex):
        for b in old.out_edges(vertex):
            before = old_frame.int(a) + old_frame.int(b)
            after = new_frame.int(a) + new_frame.int(b)
            if (before - after) % 2:
                return False
    return True


# ---------------------------------------------------------------------------
# region marking and orientation reversal


@dataclass(frozen=True)
class RegionMarking:
    """Two-colouring of the disk by crossing parity with the reversal locus.

    ``segments`` are the straight pieces of the locus (the reversed path or
    cycle, plus the two rays at its ends for a path, clipped above every
    query point).  A point's mark is the parity of crossings of a slanted
    drop segment to the boundary line, shifted by ``offset``.
    """

    kind: str
    segments: tuple[tuple[Point2, Point2], ...]
    offset: int
    top: Fraction

    def on_locus(self, pt: Point2) -> bool:
        for a, b in self.segments:
            if pt == a or pt == b or point_on_open_segment(pt, a, b):
                return True
        return False

    def parity(self, pt: Point2) -> int:
        if self.on_locus(pt):
            raise PlabicError("query point lies on the reversal locus; shift it off first")
        if pt.y > self.top:
            raise PlabicError("query point above the clipped locus")
        for slope in _SLOPES:
            q = P(pt.x + slope * pt.y, 0)
            hits = _count_crossings(pt, q, self.segments)
            if hits is not None:
                return (self.offset + hits) % 2
        raise PlabicError("internal error: no generic drop segment found")

    def mark(self, pt: Point2) -> str:
        return "+" if self.parity(pt) == 0 else "-"


_SLOPES = tuple(Fraction(p, q) for p, q in ((1, 7), (-2, 9), (3, 11), (-5, 13), (7, 17), (-11, 19), (13, 23), (1, 101)))


def _orient(p: Point2, q: Point2, r: Point2) -> int:
    c = (q - p).cross(r - p)
    return (c > 0) - (c < 0)


def _count_crossings(p: Point2, q: Point2, segments) -> int | None:
    """Proper crossings of pq with the segments, or None when pq is not generic."""
    total = 0
    for a, b in segments:
        o1, o2 = _orient(p, q, a), _orient(p, q, b)
        o3, o4 = _orient(a, b, p), _orient(a, b, q)
        if 0 in (o1, o2, o3, o4):
            if (o1 == 0 and _in_box(a, p, q)) or (o2 == 0 and _in_box(b, p, q)):
                return None
            if (o3 == 0 and _in_box(p, a, b)) or (o4 == 0 and _in_box(q, a, b)):
                return None
            continue
        if o1 != o2 and o3 != o4:
            total += 1
    return total


def _in_box(x: Point2, a: Point2, b: Point2) -> bool:
    return min(a.x, b.x) <= x.x <= max(a.x, b.x) and min(a.y, b.y) <= x.y <= max(a.y, b.y)


def _top(net: PlabicNetwork) -> Fraction:
    return max(v.position.y for v in net.vertices) + 1


def _ray_segment(net: PlabicNetwork, i: int, l: Point2, top: Fraction) -> tuple[Point2, Point2]:
    o = net.position(net.boundary_vertex(i))
    t = (top + 1) / l.y
    return (o, o + l.scale(t))


def _edge_segments(net: PlabicNetwork, eids: Iterable[str]) -> list[tuple[Point2, Point2]]:
    return [(net.position(net.edge(e).tail), net.position(net.edge(e).head)) for e in eids]


def path_endpoints(net: PlabicNetwork, path: Sequence[str]) -> tuple[int, int]:
    """Validate a directed boundary-to-boundary path and return its (source, sink) labels."""
    if not path:
        raise PlabicError("empty path")
    for a, b in zip(path, path[1:]):
        if net.edge(a).head != net.edge(b).tail:
            raise PlabicError(f"path is not directed: {a} does not end where {b} starts")
    verts = [net.edge(path[0]).tail] + [net.edge(e).head for e in path]
    if len(set(verts)) != len(verts):
        raise PlabicError("path is self-intersecting")
    first, last = net.vertex(verts[0]), net.vertex(verts[-1])
    if not (first.is_boundary and last.is_boundary):
        raise PlabicError("path must run from a boundary source to a boundary sink")
    return first.boundary_index, last.boundary_index


def cycle_check(net: PlabicNetwork, cycle: Sequence[str]) -> None:
    if not cycle:
        raise PlabicError("empty cycle")
    for a, b in zip(cycle, list(cycle[1:]) + [cycle[0]]):
        if net.edge(a).head != net.edge(b).tail:
            raise PlabicError(f"cycle is not directed at {a} -> {b}")
    verts = [net.edge(e).tail for e in cycle]
    if len(set(verts)) != len(verts):
        raise PlabicError("cycle is not simple")


def path_marking(net: PlabicNetwork, frame: GaugeFrame, path: Sequence[str]) -> RegionMarking:
    """Marking for a reversal along a source-to-sink path.

    The offset is anchored so that the first edge of the path gets index 1.
    """
    i0, j0 = path_endpoints(net, path)
    top = _top(net)
    l = frame.direction
    segs = _edge_segments(net, path) + [_ray_segment(net, i0, l, top), _ray_segment(net, j0, l, top)]
    raw = RegionMarking("path", tuple(segs), 0, top)
    e0 = path[0]
    val = (on_locus_index(raw, net, frame, e0) ) % 2
    return RegionMarking("path", tuple(segs), (1 - val) % 2, top)


def cycle_marking(net: PlabicNetwork, cycle: Sequence[str]) -> RegionMarking:
    """Marking for a reversal along a simple cycle: exterior +, interior -."""
    cycle_check(net, cycle)
    return RegionMarking("cycle", tuple(_edge_segments(net, cycle)), 0, _top(net))


_DELTAS = tuple(Fraction(1, 10 ** (3 * m)) for m in range(1, 8))


def _stable_parity(marking: RegionMarking, point_at) -> int:
    """Parity at point_at(delta) for shrinking delta, once two steps agree."""
    prev = None
    for d in _DELTAS:
        pt = point_at(d)
        if marking.on_locus(pt):
            continue
        val = marking.parity(pt)
        if val == prev:
            return val
        prev = val
    if prev is None:
        raise PlabicError("could not shift the query point off the locus")
    return prev


def off_locus_index(marking: RegionMarking, net: PlabicNetwork, eid: str) -> int:
    """1 when the edge starts in a - region (shifted along the edge if it starts on the locus)."""
    e = net.edge(eid)
    return _off_index(marking, net.position(e.tail), net.position(e.head))


def _off_index(marking: RegionMarking, t: Point2, h: Point2) -> int:
    if not marking.on_locus(t):
        return marking.parity(t)
    d = h - t
    return _stable_parity(marking, lambda s: t + d.scale(s))


def left_region_index(marking: RegionMarking, net: PlabicNetwork, eid: str) -> int:
    """Index of the region to the left of the edge, near its end."""
    e = net.edge(eid)
    h = net.position(e.head)
    d = h - net.position(e.tail)
    left = P(-d.y, d.x)
    return _stable_parity(marking, lambda s: h - d.scale(s) + left.scale(s * s))


def on_locus_index(marking: RegionMarking, net: PlabicNetwork, frame: GaugeFrame, eid: str) -> int:
    e1 = left_region_index(marking, net, eid)
    e2 = eps2(net.direction(eid), frame.direction)
    return (e1 + e2 + frame.int(eid)) % 2


def region_index(marking: RegionMarking, net: PlabicNetwork, frame: GaugeFrame, eid: str, on_locus: bool) -> int:
    if on_locus:
        return on_locus_index(marking, net, frame, eid)
    return off_locus_index(marking, net, eid)


def _indices(marking: RegionMarking, net: PlabicNetwork, frame: GaugeFrame, locus: Sequence[str]) -> dict[str, int]:
    on = set(locus)
    return {e.id: region_index(marking, net, frame, e.id, e.id in on) for e in net.edges}


@dataclass(frozen=True)
class Reoriented(Transformed):
    eps: Mapping[str, int] = dc_field(default_factory=dict)
    tilde: EdgeVectorField | None = None
    marking: RegionMarking | None = None
    locus: tuple[str, ...] = ()


def boundary_ready(net: PlabicNetwork, frames: Sequence[GaugeFrame]) -> list[str]:
    """Boundary edges that are not unit weight or are crossed by a ray in some frame."""
    bad = []
    for b in net.boundary:
        for eid in net.incident(b):
            if net.weight(eid) != 1 or any(f.int(eid) for f in frames):
                bad.append(eid)
    return sorted(set(bad))


def reorient_along_path(
    net: PlabicNetwork,
    frame: GaugeFrame,
    path: Sequence[str],
    field: EdgeVectorField | None = None,
    check: bool = True,
    normalize: bool = True,
) -> Reoriented:
    """Reverse a source-to-sink path and carry the edge vectors across.

    The old field is first re-solved with a modified condition at the sink
    (giving E-tilde); the new field is then E-tilde times (-1)^eps, divided
    by the weight on the path.  Boundary edges must be unit weight and ray
    free in both orientations; otherwise, with ``normalize``, short unit
    edges are split off at the boundary first and merged back afterwards.
    """
    frame = make_frame(net, frame.direction)
    i0, j0 = path_endpoints(net, path)
    new_net = net.reverse_edges(path)
    try:
        new_frame = make_frame(new_net, frame.direction)
    except DegenerateFrameError as exc:
        raise DegenerateFrameError(f"gauge direction is degenerate after the reversal: {exc}") from exc
    bad = boundary_ready(net, [frame]) + boundary_ready(new_net, [new_frame])
    if bad:
        if not normalize:
            raise PlabicError(f"boundary edges {sorted(set(bad))} must be unit weight and ray free")
        return _reorient_normalized(net, frame, path, field, check)
    field = _field_or_oracle(net, frame, field)
    A = boundary_matrix(net, frame, field)
    r0 = net.base.index(i0)
    pivot = A.rows[r0][j0 - 1]
    if pivot == 0:
        raise PlabicError("path target has zero matrix entry")
    sinks = {j: unit(net.n, j) for j in net.sinks}
    sinks[j0] = vadd(unit(net.n, j0), vscale(-1 / pivot, A.rows[r0]))
    tilde, _ = linear_system_oracle(net, frame, sinks)
    marking = path_marking(net, frame, path)
    eps = _indices(marking, net, frame, path)
    on = set(path)
    vectors, factors = {}, {}
    for e in net.edges:
        f = Fraction(_sign(eps[e.id]))
        if e.id in on:
            f /= e.weight
        factors[e.id] = f
        vectors[e.id] = vscale(f, tilde[e.id])
    res = _finish(new_net, new_frame, vectors, check, "path reversal", factors)
    return Reoriented(res.net, res.frame, res.field, res.factors, {"source": i0, "sink": j0}, eps, tilde, marking, tuple(path))


def reorient_along_cycle(
    net: PlabicNetwork,
    frame: GaugeFrame,
    cycle: Sequence[str],
    field: EdgeVectorField | None = None,
    check: bool = True,
) -> Reoriented:
    """Reverse a simple directed cycle; vectors change by (-1)^eps, and 1/w on the cycle."""
    frame = make_frame(net, frame.direction)
    marking = cycle_marking(net, cycle)
    field = _field_or_oracle(net, frame, field)
    new_net = net.reverse_edges(cycle)
    new_frame = make_frame(new_net, frame.direction)
    eps = _indices(marking, net, frame, cycle)
    on = set(cycle)
    vectors, factors = {}, {}
    for e in net.edges:
        f = Fraction(_sign(eps[e.id]))
        if e.id in on:
            f /= e.weight
        factors[e.id] = f
        vectors[e.id] = vscale(f, field[e.id])
    res = _finish(new_net, new_frame, vectors, check, "cycle reversal", factors)
    return Reoriented(res.net, res.frame, res.field, res.factors, {}, eps, None, marking, tuple(cycle))


def _reorient_normalized(net, frame, path, field, check) -> Reoriented:
    work, wframe, wfield = net, frame, _field_or_oracle(net, frame, field)
    inserted: list[tuple[str, str]] = []
    wpath = list(path)
    for _ in range(4 * len(net.edges) + 4):
        rev = work.reverse_edges(wpath)
        rframe = make_frame(rev, frame.direction)
        bad = sorted(set(boundary_ready(work, [wframe]) + boundary_ready(rev, [rframe])))
        if not bad:
            break
        eid = bad[0]
        e = work.edge(eid)
        near_tail = work.vertex(e.tail).is_boundary
        res, mid, second = _split_near_end(work, wframe, eid, near_tail, wfield, check)
        work, wframe, wfield = res.net, res.frame, res.field
        inserted.append((mid, eid))
        if eid in wpath:
            k = wpath.index(eid)
            wpath[k + 1:k + 1] = [second]
    else:
        raise PlabicError("could not normalise the boundary edges")
    inner = reorient_along_path(work, wframe, wpath, wfield, check, normalize=False)
    cur, cframe, cfield = inner.net, inner.frame, inner.field
    for mid, eid in reversed(inserted):
        res = remove_middle_vertex(cur, cframe, mid, edge_id=eid, field=cfield, check=check)
        cur, cframe, cfield = res.net, res.frame, res.field
    target = net.reverse_edges(path)
    if dict((e.id, (e.tail, e.head, e.weight)) for e in cur.edges) != dict((e.id, (e.tail, e.head, e.weight)) for e in target.edges):
        raise PlabicError("internal error: normalisation did not round-trip")
    cur = target
    cframe = make_frame(cur, frame.direction)
    out = _finish(cur, cframe, cfield.vectors, check, "path reversal")
    notes = {"normalized": True, "inner": inner}
    i0, j0 = path_endpoints(net, path)
    notes.update({"source": i0, "sink": j0})
    return Reoriented(out.net, out.frame, out.field, {}, notes, {}, None, None, tuple(path))


def _split_near_end(net, frame, eid, near_tail, field, check):
    """Split off a short unit edge next to the boundary end of ``eid``."""
    e = net.edge(eid)
    a, b = net.position(e.tail), net.position(e.head)
    d = b - a
    perp = P(-d.y, d.x)
    taken = _ids(net)
    mid = _fresh(taken, f"m_{eid}")
    second = _fresh(taken | {mid}, f"{eid}_2")
    for k in range(1, 12):
        tau = Fraction(1, 10 ** k)
        pt = (a + d.scale(tau) if near_tail else b - d.scale(tau)) + perp.scale(tau * tau)
        first_w = Fraction(1) if near_tail else e.weight
        try:
            res = insert_middle_vertex(
                net, frame, eid, pt, vertex_id=mid, edge_id=second, first_weight=first_w, field=field, check=check
            )
        except PlabicError:
            continue
        stub = eid if near_tail else second
        if res.frame.int(stub) == 0:
            return res, mid, second
    raise PlabicError(f"could not split a short boundary edge off {eid}")


# ---------------------------------------------------------------------------
# moves


class MoveKind(enum.Enum):
    M1 = "square"
    M2 = "flip"
    M3 = "middle"


class ReductionKind(enum.Enum):
    R1 = "parallel"
    R2 = "dipole"
    R3 = "leaf"


def _kind(enum_cls, kind):
    """Accept an enum member, its value ("square") or its name ("M1")."""
    if isinstance(kind, enum_cls):
        return kind
    if kind in enum_cls.__members__:
        return enum_cls[kind]
    try:
        return enum_cls(kind)
    except ValueError:
        raise PlabicError(f"unknown {enum_cls.__name__}: {kind!r}") from None


def insert_middle_vertex(
    net: PlabicNetwork,
    frame: GaugeFrame,
    eid: str,
    point: Point2 | None = None,
    *,
    vertex_id: str | None = None,
    edge_id: str | None = None,
    first_weight=None,
    color: str = WHITE,
    field: EdgeVectorField | None = None,
    check: bool = True,
) -> Transformed:
    """Split edge ``eid`` at a new bivalent vertex.

    The first half keeps the id ``eid`` and weight ``first_weight`` (default
    the whole weight); the second half gets the remaining factor.
    """
    e = net.edge(eid)
    a, b = net.position(e.tail), net.position(e.head)
    if point is None:
        d = b - a
        point = a + d.scale(Fraction(1, 2)) + P(-d.y, d.x).scale(Fraction(1, 64))
    taken = _ids(net)
    vid = vertex_id or _fresh(taken, f"m_{eid}")
    nid = edge_id or _fresh(taken | {vid}, f"{eid}_2")
    if vid in taken or nid in taken | {vid}:
        raise PlabicError("ids for the inserted vertex and edge must be new")
    w1 = e.weight if first_weight is None else Q(first_weight)
    w2 = e.weight / w1
    verts = list(net.vertices) + [Vertex(vid, color, INTERNAL, point)]
    edges = []
    for f in net.edges:
        if f.id == eid:
            edges.append(Edge(eid, e.tail, vid, w1))
            edges.append(Edge(nid, vid, e.head, w2))
        else:
            edges.append(f)
    new = make_network(verts, edges)
    tri = [v.id for v in net.vertices if v.id not in (e.tail, e.head) and _in_triangle(v.position, a, point, b)]
    if tri:
        raise PlabicError(f"middle vertex insertion: triangle contains {tri}")
    _require(new, "middle vertex insertion", allow_leaves=True)
    new_frame = make_frame(new, frame.direction)
    field = _field_or_oracle(net, frame, field)
    vectors = {f.id: field[f.id] for f in net.edges if f.id != eid}
    vectors[nid] = local_relation(new, new_frame, nid, vectors)
    vectors[eid] = local_relation(new, new_frame, eid, vectors)
    notes = {}
    preds = net.in_edges(e.tail)
    if preds:
        g = preds[0]
        l = frame.direction
        s = _wind(new, g, eid, l) - _wind(net, g, eid, l)
        notes["simple_form"] = tuple(vectors[eid]) == tuple(vscale(_sign(s), field[eid]))
    return _finish(new, new_frame, vectors, check, "middle vertex insertion", notes=notes)


def _in_triangle(p: Point2, a: Point2, b: Point2, c: Point2) -> bool:
    o1, o2, o3 = _orient(a, b, p), _orient(b, c, p), _orient(c, a, p)
    return (o1 >= 0 and o2 >= 0 and o3 >= 0) or (o1 <= 0 and o2 <= 0 and o3 <= 0)


def remove_middle_vertex(
    net: PlabicNetwork,
    frame: GaugeFrame,
    vertex: str,
    *,
    edge_id: str | None = None,
    field: EdgeVectorField | None = None,
    check: bool = True,
) -> Transformed:
    """Merge the two edges at a bivalent vertex into one straight edge."""
    v = net.vertex(vertex)
    if v.is_boundary or net.degree(vertex) != 2 or len(net.in_edges(vertex)) != 1:
        raise PlabicError(f"middle vertex removal: {vertex} is not an internal bivalent vertex")
    ea = net.in_edges(vertex)[0]
    eb = net.out_edges(vertex)[0]
    u, w = net.edge(ea).tail, net.edge(eb).head
    if u == w:
        raise PlabicError("middle vertex removal would create a loop")
    pu, pw = net.position(u), net.position(w)
    tri = [x.id for x in net.vertices if x.id not in (u, w, vertex) and _in_triangle(x.position, pu, v.position, pw)]
    if tri:
        raise PlabicError(f"middle vertex removal: triangle contains {tri}")
    nid = edge_id or ea
    weight = net.weight(ea) * net.weight(eb)
    edges = []
    for f in net.edges:
        if f.id == ea:
            edges.append(Edge(nid, u, w, weight))
        elif f.id != eb:
            edges.append(f)
    verts = [x for x in net.vertices if x.id != vertex]
    new = make_network(verts, edges)
    _require(new, "middle vertex removal", allow_leaves=True)
    new_frame = make_frame(new, frame.direction)
    field = _field_or_oracle(net, frame, field)
    vectors = {f.id: field[f.id] for f in net.edges if f.id not in (ea, eb)}
    vectors[nid] = local_relation(new, new_frame, nid, vectors)
    notes = {}
    preds = net.in_edges(u)
    if preds:
        g = preds[0]
        l = frame.direction
        s = _wind(new, g, nid, l) - _wind(net, g, ea, l)
        notes["simple_form"] = tuple(vectors[nid]) == tuple(vscale(_sign(s), field[ea]))
    return _finish(new, new_frame, vectors, check, "middle vertex removal", notes=notes)


@dataclass(frozen=True)
class SquareRoles:
    """Vertices and edges of an oriented square.

    w -> z (h1), w -> x (h2), z -> y (h3), y -> x (h4); external edges
    e1 into w, e2 into z, e3 out of x, e4 out of y.
    """

    w: str
    z: str
    y: str
    x: str
    h1: str
    h2: str
    h3: str
    h4: str
    e1: str
    e2: str
    e3: str
    e4: str


def square_roles(net: PlabicNetwork, square: Sequence[str]) -> SquareRoles:
    sq = set(square)
    if len(sq) != 4:
        raise PlabicError("square move needs four distinct vertices")
    for v in sq:
        if net.vertex(v).is_boundary or net.degree(v) != 3:
            raise PlabicError(f"square move: {v} is not an internal trivalent vertex")

    def inner(eids):
        return [e for e in eids if net.other_end(e, net.edge(e).tail) in sq and net.edge(e).tail in sq and net.edge(e).head in sq]

    whites = [v for v in sq if net.vertex(v).color == WHITE]
    blacks = [v for v in sq if net.vertex(v).color == BLACK]
    if len(whites) != 2 or len(blacks) != 2:
        raise PlabicError("square move: colors must alternate around the square")
    for w in whites:
        outs = inner(net.out_edges(w))
        if len(outs) != 2:
            continue
        heads = [net.edge(e).head for e in outs]
        if set(heads) != set(blacks):
            continue
        y = [v for v in whites if v != w][0]
        zs = [b for b in blacks if any(net.edge(e).head == y for e in inner(net.out_edges(b)))]
        if len(zs) != 1:
            continue
        z = zs[0]
        x = [b for b in blacks if b != z][0]
        h1 = [e for e in outs if net.edge(e).head == z][0]
        h2 = [e for e in outs if net.edge(e).head == x][0]
        h3 = [e for e in net.out_edges(z) if net.edge(e).head == y]
        h4 = [e for e in net.out_edges(y) if net.edge(e).head == x]
        if len(h3) != 1 or len(h4) != 1:
            continue
        ext = {}
        for v in (w, z, y, x):
            others = [e for e in net.incident(v) if not (net.edge(e).tail in sq and net.edge(e).head in sq)]
            if len(others) != 1:
                raise PlabicError("square move: each corner needs exactly one external edge")
            ext[v] = others[0]
        if not (net.edge(ext[w]).head == w and net.edge(ext[z]).head == z and net.edge(ext[x]).tail == x and net.edge(ext[y]).tail == y):
            continue
        return SquareRoles(w, z, y, x, h1, h2, h3[0], h4[0], ext[w], ext[z], ext[x], ext[y])
    raise PlabicError("square move: site does not match the oriented square pattern (reorient first)")


def square_weights(alpha: Sequence[Fraction]) -> tuple[Fraction, Fraction, Fraction, Fraction]:
    a1, a2, a3, a4 = alpha
    t2 = a2 + a1 * a3 * a4
    return a3 * a4 / t2, t2, a2 * a3 / t2, a1 * a3 / t2


def square_relations_hold(net: PlabicNetwork, frame: GaugeFrame, field: EdgeVectorField, r: SquareRoles) -> bool:
    """The four relations tying F_1..F_4 to E_3, E_4 before the move."""
    l = frame.direction
    i = frame.int
    wd = lambda a, b: _wind(net, a, b, l)  # noqa: E731
    a1, a2, a3, a4 = (net.weight(h) for h in (r.h1, r.h2, r.h3, r.h4))
    E3, E4 = field[r.e3], field[r.e4]
    F1, F2, F3, F4 = (field[h] for h in (r.h1, r.h2, r.h3, r.h4))
    ok = F1 == vscale(_sign(i(r.h1) + wd(r.h1, r.h3)) * a1, F3)
    ok &= F2 == vscale(_sign(i(r.h2) + wd(r.h2, r.e3)) * a2, E3)
    ok &= F4 == vscale(_sign(i(r.h4) + wd(r.h4, r.e3)) * a4, E3)
    inner = vadd(vscale(_sign(i(r.h4) + wd(r.h3, r.h4) + wd(r.h4, r.e3)) * a4, E3), vscale(_sign(wd(r.h3, r.e4)), E4))
    ok &= F3 == vscale(_sign(i(r.h3)) * a3, inner)
    return bool(ok)


def square_move(
    net: PlabicNetwork,
    frame: GaugeFrame,
    square: Sequence[str],
    field: EdgeVectorField | None = None,
    check: bool = True,
) -> Transformed:
    """Switch the colors of an oriented square and transform its four weights."""
    r = square_roles(net, square)
    field = _field_or_oracle(net, frame, field)
    alpha = tuple(net.weight(h) for h in (r.h1, r.h2, r.h3, r.h4))
    t1, t2, t3, t4 = square_weights(alpha)
    swap = {r.w: BLACK, r.z: WHITE, r.y: BLACK, r.x: WHITE}
    verts = [replace(v, color=swap.get(v.id, v.color)) for v in net.vertices]
    edges = []
    for e in net.edges:
        if e.id == r.h1:
            edges.append(Edge(e.id, r.z, r.w, t1))
        elif e.id == r.h2:
            edges.append(Edge(e.id, r.w, r.x, t2))
        elif e.id == r.h3:
            edges.append(Edge(e.id, r.z, r.y, t3))
        elif e.id == r.h4:
            edges.append(Edge(e.id, r.x, r.y, t4))
        else:
            edges.append(e)
    new = make_network(verts, edges)
    new_frame = make_frame(new, frame.direction)
    l = frame.direction
    i = frame.int
    wd = lambda a, b: _wind(new, a, b, l)  # noqa: E731
    E3, E4 = field[r.e3], field[r.e4]
    vectors = {e.id: field[e.id] for e in net.edges}
    F3 = vscale(_sign(i(r.h3) + wd(r.h3, r.e4)) * t3, E4)
    F4 = vscale(_sign(i(r.h4) + wd(r.h4, r.e4)) * t4, E4)
    F2 = vscale(_sign(i(r.h2)) * t2, vadd(vscale(_sign(wd(r.h2, r.e3)), E3), vscale(_sign(i(r.h4) + wd(r.h2, r.h4) + wd(r.h4, r.e4)) * t4, E4)))
    F1 = vscale(_sign(i(r.h1) + wd(r.h1, r.h2)) * t1, F2)
    vectors.update({r.h1: F1, r.h2: F2, r.h3: F3, r.h4: F4})
    notes = {"roles": r, "before_relations": square_relations_hold(net, frame, field, r)}
    return _finish(new, new_frame, vectors, check, "square move", notes=notes)


def _rotation_after(net: PlabicNetwork, vid: str, first: str) -> list[str]:
    """Incident edges of ``vid`` in counterclockwise order, starting after ``first``."""
    from .graph_core import _angle_key

    p = net.position(vid)
    inc = sorted(net.incident(vid), key=lambda e: _angle_key(net.position(net.other_end(e, vid)) - p))
    k = inc.index(first)
    return inc[k + 1:] + inc[:k]


def flip_move(
    net: PlabicNetwork,
    frame: GaugeFrame,
    pair: Sequence[str],
    field: EdgeVectorField | None = None,
    check: bool = True,
) -> Transformed:
    """Flip a pair of same-colored trivalent vertices joined by a short unit edge.

    The four outer edges keep their far ends and vectors; the pair is
    re-split the other way around and only the joining edge's vector is
    recomputed from its head relation.  May create or remove null vectors.
    """
    u, v = pair
    col = net.vertex(u).color
    for x in (u, v):
        vx = net.vertex(x)
        if vx.is_boundary or net.degree(x) != 3 or vx.color != col:
            raise PlabicError("flip move: needs two internal trivalent vertices of the same color")
    joins = [e for e in net.incident(u) if net.other_end(e, u) == v]
    if len(joins) != 1:
        raise PlabicError("flip move: vertices must be joined by exactly one edge")
    e0 = joins[0]
    if net.weight(e0) != 1:
        raise PlabicError("flip move: the joining edge must have unit weight")
    xs = _rotation_after(net, u, e0)
    ys = _rotation_after(net, v, e0)
    ring = xs + ys  # counterclockwise around the contracted vertex
    groups = ((ring[1], ring[2]), (ring[3], ring[0]))
    far = {e: net.other_end(e, u if e in xs else v) for e in ring}
    pu, pv = net.position(u), net.position(v)
    m = (pu + pv).scale(Fraction(1, 2))
    l = frame.direction
    field = _field_or_oracle(net, frame, field)
    if col == WHITE:
        ins = [e for e in ring if net.edge(e).head in (u, v)]
    else:
        ins = [e for e in ring if net.edge(e).tail in (u, v)]
    if len(ins) != 1:
        raise PlabicError("flip move: the pair is not perfectly oriented")
    special = ins[0]
    n0 = _bisector(net, m, [far[e] for e in groups[0]])
    n1 = _bisector(net, m, [far[e] for e in groups[1]])
    main = n0 - n1
    if main.is_zero():
        main = P(-(pv - pu).y, (pv - pu).x)
    # the bisector split first, then tilted variants to dodge the gauge direction
    size = abs(main.x) + abs(main.y)
    dirs = [main] + [main + P(-main.y, main.x).scale(Fraction(t, 8)) for t in (1, -1, 3, -3)]
    dirs = [d.scale(1 / size) for d in dirs]
    best = None
    for k in range(1, 14):
        rho = Fraction(1, 2 ** k)
        for dvec in dirs:
            p0, p1 = m + dvec.scale(rho / 2), m - dvec.scale(rho / 2)
            cand = _build_flip(net, u, v, e0, groups, far, special, col, p0, p1)
            if cand is None:
                continue
            if not validate_network(cand, allow_leaves=True).ok:
                continue
            try:
                cframe = make_frame(cand, l)
            except DegenerateFrameError:
                continue
            if cframe.int(e0) != 0:
                continue
            if any(cframe.int(e) != frame.int(e) for e in ring):
                continue
            if not _far_windings_same(net, cand, ring, far, l):
                continue
            if not _additive(cand, e0, l) or not _additive(net, e0, l):
                continue
            best = (cand, cframe)
            break
        if best:
            break
    if best is None:
        raise PlabicError("flip move: no placement keeps windings and crossings (joining edge too long?)")
    new, new_frame = best
    vectors = {e.id: field[e.id] for e in net.edges if e.id != e0}
    vectors[e0] = local_relation(new, new_frame, e0, vectors)
    nulls_before = sorted(e for e in field.vectors if is_zero(field[e]))
    nulls_after = sorted(e for e, x in vectors.items() if is_zero(x))
    notes = {"null_before": nulls_before, "null_after": nulls_after, "same_e0": tuple(vectors[e0]) == tuple(field[e0])}
    return _finish(new, new_frame, vectors, check, "flip move", notes=notes)


def _bisector(net: PlabicNetwork, m: Point2, targets: Sequence[str]) -> Point2:
    tot = P(0, 0)
    for t in targets:
        d = net.position(t) - m
        norm = abs(d.x) + abs(d.y)
        tot = tot + d.scale(1 / norm)
    return tot


def _build_flip(net, u, v, e0, groups, far, special, col, p0, p1):
    # vertex u takes groups[0], v takes groups[1]
    side = {e: (u if e in groups[0] else v) for e in groups[0] + groups[1]}
    holder = side[special]
    other = v if holder == u else u
    edges = []
    for e in net.edges:
        if e.id == e0:
            if col == WHITE:
                edges.append(Edge(e0, holder, other, Fraction(1)))
            else:
                edges.append(Edge(e0, other, holder, Fraction(1)))
        elif e.id in side:
            x = side[e.id]
            if e.tail in (u, v):
                edges.append(Edge(e.id, x, e.head, e.weight))
            else:
                edges.append(Edge(e.id, e.tail, x, e.weight))
        else:
            edges.append(e)
    verts = [replace(x, position=p0) if x.id == u else replace(x, position=p1) if x.id == v else x for x in net.vertices]
    return make_network(verts, edges)


def _far_windings_same(old, new, ring, far, l) -> bool:
    for e in ring:
        x = far[e]
        if old.vertex(x).is_boundary:
            continue
        for f in old.incident(x):
            if f == e:
                continue
            if old.edge(e).head == x and old.edge(f).tail == x:
                if _wind(old, e, f, l) != _wind(new, e, f, l):
                    return False
            if old.edge(f).head == x and old.edge(e).tail == x:
                if _wind(old, f, e, l) != _wind(new, f, e, l):
                    return False
    return True


def _additive(net: PlabicNetwork, e0: str, l: Point2) -> bool:
    """wind(a, e0) + wind(e0, b) = wind(a, b) for edges a into and b out of the pair."""
    t, h = net.edge(e0).tail, net.edge(e0).head
    ins = [a for a in net.in_edges(t)] + [a for a in net.in_edges(h) if a != e0]
    outs = [b for b in net.out_edges(t) if b != e0] + [b for b in net.out_edges(h)]
    d0 = net.direction(e0)
    for a in ins:
        for b in outs:
            da, db = net.direction(a), net.direction(b)
            via = (winding(da, d0, l) if a in net.in_edges(t) else 0) + (winding(d0, db, l) if b in net.out_edges(h) else 0)
            if a in net.in_edges(t) and b in net.out_edges(h):
                try:
                    direct = winding(da, db, l)
                except GeneralPositionError:
                    return False
                if via != direct:
                    return False
    return True


def apply_move(
    net: PlabicNetwork,
    frame: GaugeFrame,
    kind: MoveKind | str,
    site,
    field: EdgeVectorField | None = None,
    check: bool = True,
) -> Transformed:
    """Dispatch a move by kind.

    M1 site: four vertex ids; M2 site: a pair of vertex ids; M3 site:
    ("insert", edge id[, point]) or ("remove", vertex id).
    """
    kind = _kind(MoveKind, kind)
    if kind is MoveKind.M1:
        return square_move(net, frame, site, field, check)
    if kind is MoveKind.M2:
        return flip_move(net, frame, site, field, check)
    op, target, *rest = site
    if op == "insert":
        return insert_middle_vertex(net, frame, target, rest[0] if rest else None, field=field, check=check)
    if op == "remove":
        return remove_middle_vertex(net, frame, target, field=field, check=check)
    raise PlabicError(f"unknown middle-vertex operation {op!r}")


# ---------------------------------------------------------------------------
# reductions


@dataclass(frozen=True)
class ParallelSite:
    u: str
    v: str
    e1: str
    e4: str
    kept: tuple[str, ...]
    dropped: tuple[str, ...]


def _chains(net: PlabicNetwork, u: str, v: str) -> list[tuple[str, ...]]:
    out = []
    for first in net.out_edges(u):
        chain = [first]
        cur = net.edge(first).head
        while cur != v:
            vx = net.vertex(cur)
            if vx.is_boundary or net.degree(cur) != 2 or not net.out_edges(cur):
                chain = None
                break
            nxt = net.out_edges(cur)[0]
            chain.append(nxt)
            cur = net.edge(nxt).head
            if len(chain) > len(net.edges):
                chain = None
                break
        if chain:
            out.append(tuple(chain))
    return out


def parallel_site(net: PlabicNetwork, u: str, v: str) -> ParallelSite:
    """Recognise two directed chains of bivalent vertices from white u to black v."""
    for x, c in ((u, WHITE), (v, BLACK)):
        vx = net.vertex(x)
        if vx.is_boundary or net.degree(x) != 3 or vx.color != c:
            raise PlabicError("parallel reduction: needs a white and a black trivalent vertex")
    chains = _chains(net, u, v)
    if len(chains) != 2:
        raise PlabicError("parallel reduction: no pair of parallel chains from the white to the black vertex")
    e1 = net.in_edges(u)[0]
    e4 = net.out_edges(v)[0]
    chains.sort(key=lambda ch: (len(ch), ch))
    return ParallelSite(u, v, e1, e4, chains[0], chains[1])


def _chain_weight(net: PlabicNetwork, chain: Sequence[str]) -> Fraction:
    w = Fraction(1)
    for e in chain:
        w *= net.weight(e)
    return w


def parallel_relations(net: PlabicNetwork, frame: GaugeFrame, field: EdgeVectorField, site: ParallelSite) -> bool:
    """Both chains carry (sign) chain weight times E_4, and E_1 = w_1 (w_A + w_B) E_4 up to one sign.

    The sign of a chain counts crossings along it and windings from e_1 up
    to e_4; the two chains must agree.
    """
    l = frame.direction

    def chain_sign(chain):
        seq = list(chain) + [site.e4]
        s = sum(frame.int(e) for e in seq[:-1])
        s += sum(_wind(net, a, b, l) for a, b in zip(seq, seq[1:]))
        return s % 2

    sa, sb = chain_sign(site.kept), chain_sign(site.dropped)
    ta = (sa + _wind(net, site.e1, site.kept[0], l)) % 2
    tb = (sb + _wind(net, site.e1, site.dropped[0], l)) % 2
    wa, wb = _chain_weight(net, site.kept), _chain_weight(net, site.dropped)
    E4 = field[site.e4]
    ok = ta == tb
    ok &= tuple(field[site.kept[0]]) == tuple(vscale(_sign(sa) * wa, E4))
    ok &= tuple(field[site.dropped[0]]) == tuple(vscale(_sign(sb) * wb, E4))
    s1 = frame.int(site.e1) + ta
    ok &= tuple(field[site.e1]) == tuple(vscale(_sign(s1) * net.weight(site.e1) * (wa + wb), E4))
    return bool(ok)


def parallel_reduction(
    net: PlabicNetwork,
    frame: GaugeFrame,
    u: str,
    v: str,
    field: EdgeVectorField | None = None,
    check: bool = True,
    collapse: bool = True,
) -> Transformed:
    """Remove one of two parallel chains; w_1 becomes w_1 (w_2 + w_3) w_4.

    The kept chain, u and v become unit-weight bivalent pieces; with
    ``collapse`` they are then merged away by middle vertex removals wherever
    the straight-line embedding allows.  E_1 is unchanged.
    """
    site = parallel_site(net, u, v)
    field = _field_or_oracle(net, frame, field)
    relations = parallel_relations(net, frame, field, site)
    w1 = net.weight(site.e1) * (_chain_weight(net, site.kept) + _chain_weight(net, site.dropped)) * net.weight(site.e4)
    drop_e = set(site.dropped)
    drop_v = {net.edge(e).head for e in site.dropped[:-1]}
    weights = {site.e1: w1, site.e4: Fraction(1)}
    weights.update({e: Fraction(1) for e in site.kept})
    edges = [replace(e, weight=weights.get(e.id, e.weight)) for e in net.edges if e.id not in drop_e]
    verts = [x for x in net.vertices if x.id not in drop_v]
    new = make_network(verts, edges)
    _require(new, "parallel reduction", allow_leaves=True)
    new_frame = make_frame(new, frame.direction)
    vectors = {e.id: field[e.id] for e in new.edges}
    for eid in [site.e4] + list(reversed(site.kept)):
        vectors[eid] = local_relation(new, new_frame, eid, vectors)
    res = _finish(new, new_frame, vectors, check, "parallel reduction", notes={"site": site, "relations": relations})
    if tuple(res.field[site.e1]) != tuple(field[site.e1]):
        raise PlabicError("internal error: parallel reduction changed E_1")
    if collapse:
        for mid in [net.edge(e).head for e in site.kept[:-1]] + [u, v]:
            if not res.net.has_vertex(mid) or res.net.degree(mid) != 2:
                continue
            try:
                nxt = remove_middle_vertex(res.net, res.frame, mid, field=res.field, check=check)
            except PlabicError:
                continue
            res = Transformed(nxt.net, nxt.frame, nxt.field, {}, res.notes)
    return res


def dipole_reduction(
    net: PlabicNetwork,
    frame: GaugeFrame,
    u: str,
    v: str,
    field: EdgeVectorField | None = None,
    check: bool = True,
) -> Transformed:
    """Delete an isolated pair of vertices joined by one edge (its vector is zero)."""
    for x in (u, v):
        if net.vertex(x).is_boundary or net.degree(x) != 1:
            raise PlabicError("dipole reduction: both vertices must be internal leaves")
    (e,) = net.incident(u)
    if net.other_end(e, u) != v:
        raise PlabicError("dipole reduction: the vertices are not joined")
    field = _field_or_oracle(net, frame, field)
    if not is_zero(field[e]):
        raise PlabicError("internal error: dipole edge carries a nonzero vector")
    new = make_network([x for x in net.vertices if x.id not in (u, v)], [f for f in net.edges if f.id != e])
    new_frame = make_frame(new, frame.direction)
    vectors = {f.id: field[f.id] for f in new.edges}
    return _finish(new, new_frame, vectors, check, "dipole reduction")


def leaf_reduction(
    net: PlabicNetwork,
    frame: GaugeFrame,
    leaf: str,
    field: EdgeVectorField | None = None,
    check: bool = True,
) -> Transformed:
    """Remove a leaf and its trivalent neighbour, detaching the other two edges.

    Each detached edge gets a new endpoint of the leaf's color close to the
    old neighbour and its weight is multiplied by w_1, so E_12 = w_1 E_2 and
    E_13 = w_1 E_3.
    """
    lv = net.vertex(leaf)
    if lv.is_boundary or net.degree(leaf) != 1:
        raise PlabicError("leaf reduction: not an internal leaf")
    (e1,) = net.incident(leaf)
    v1 = net.other_end(e1, leaf)
    vv = net.vertex(v1)
    if vv.is_boundary or net.degree(v1) != 3:
        raise PlabicError("leaf reduction: the leaf must hang on an internal trivalent vertex")
    source_leaf = net.edge(e1).tail == leaf
    if source_leaf and not (lv.color == BLACK and vv.color == WHITE):
        raise PlabicError("leaf reduction: an outgoing leaf must be black on a white vertex")
    if not source_leaf and not (lv.color == WHITE and vv.color == BLACK):
        raise PlabicError("leaf reduction: an incoming leaf must be white on a black vertex")
    field = _field_or_oracle(net, frame, field)
    w1 = net.weight(e1)
    others = [e for e in net.incident(v1) if e != e1]
    pv = net.position(v1)
    taken = _ids(net)
    new_ids = {}
    for e in others:
        new_ids[e] = _fresh(taken, f"{leaf}_{e}")
        taken.add(new_ids[e])
    for k in range(2, 14):
        tau = Fraction(1, 2 ** k)
        pos = {e: pv + (net.position(net.other_end(e, v1)) - pv).scale(tau) for e in others}
        verts = [x for x in net.vertices if x.id not in (leaf, v1)]
        verts += [Vertex(new_ids[e], lv.color, INTERNAL, pos[e]) for e in others]
        edges = []
        for f in net.edges:
            if f.id == e1:
                continue
            if f.id in new_ids:
                if f.tail == v1:
                    edges.append(Edge(f.id, new_ids[f.id], f.head, f.weight * w1))
                else:
                    edges.append(Edge(f.id, f.tail, new_ids[f.id], f.weight * w1))
            else:
                edges.append(f)
        new = make_network(verts, edges)
        if not validate_network(new, allow_leaves=True).ok:
            continue
        try:
            new_frame = make_frame(new, frame.direction)
        except DegenerateFrameError:
            continue
        if any(new_frame.int(e) != frame.int(e) for e in others):
            continue
        break
    else:
        raise PlabicError("leaf reduction: could not place the detached endpoints")
    vectors = {f.id: field[f.id] for f in new.edges}
    for e in others:
        vectors[e] = vscale(w1, field[e])
    l = frame.direction
    if source_leaf:
        total = zero(net.n)
        for e in others:
            total = vadd(total, vscale(_sign(_wind(net, e1, e, l)), vectors[e]))
        split_ok = tuple(field[e1]) == tuple(vscale(_sign(frame.int(e1)), total))
    else:
        split_ok = is_zero(field[e1])
    return _finish(new, new_frame, vectors, check, "leaf reduction", notes={"split_relation": split_ok, "new_vertices": new_ids})


def apply_reduction(
    net: PlabicNetwork,
    frame: GaugeFrame,
    kind: ReductionKind | str,
    site,
    field: EdgeVectorField | None = None,
    check: bool = True,
) -> Transformed:
    """Dispatch a reduction: R1 site (white, black), R2 site (u, v), R3 site leaf id."""
    kind = _kind(ReductionKind, kind)
    if kind is ReductionKind.R1:
        return parallel_reduction(net, frame, site[0], site[1], field, check)
    if kind is ReductionKind.R2:
        return dipole_reduction(net, frame, site[0], site[1], field, check)
    leaf = site if isinstance(site, str) else site[0]
    return leaf_reduction(net, frame, leaf, field, check)


# ---------------------------------------------------------------------------
# site listing


def square_sites(net: PlabicNetwork) -> list[tuple[str, ...]]:
    out = []
    tri = [v for v in net.internal if net.degree(v) == 3]
    for w in tri:
        if net.vertex(w).color != WHITE:
            continue
        heads = [net.edge(e).head for e in net.out_edges(w)]
        if len(heads) != 2:
            continue
        for z, x in itertools.permutations(heads):
            for h3 in net.out_edges(z):
                y = net.edge(h3).head
                if y in (w, x) or net.vertex(y).is_boundary:
                    continue
                try:
                    r = square_roles(net, (w, z, y, x))
                except PlabicError:
                    continue
                site = (r.w, r.z, r.y, r.x)
                if site not in out:
                    out.append(site)
    return out


def flip_sites(net: PlabicNetwork) -> list[tuple[str, str]]:
    out = []
    for e in net.edges:
        a, b = e.tail, e.head
        va, vb = net.vertex(a), net.vertex(b)
        if va.is_boundary or vb.is_boundary or va.color != vb.color:
            continue
        if net.degree(a) == 3 and net.degree(b) == 3 and e.weight == 1:
            out.append((a, b))
    return out


def middle_vertices(net: PlabicNetwork) -> list[str]:
    return [v for v in net.internal if net.degree(v) == 2 and len(net.in_edges(v)) == 1]


def parallel_sites(net: PlabicNetwork) -> list[tuple[str, str]]:
    out = []
    for u in net.internal:
        if net.vertex(u).color != WHITE or net.degree(u) != 3:
            continue
        for v in net.internal:
            if v == u or net.vertex(v).color != BLACK or net.degree(v) != 3:
                continue
            if len(_chains(net, u, v)) == 2:
                out.append((u, v))
    return out


def dipole_sites(net: PlabicNetwork) -> list[tuple[str, str]]:
    out = []
    for e in net.edges:
        a, b = e.tail, e.head
        if all(not net.vertex(x).is_boundary and net.degree(x) == 1 for x in (a, b)):
            out.append((a, b))
    return out


def leaf_sites(net: PlabicNetwork) -> list[str]:
    out = []
    for v in net.internal:
        if net.degree(v) != 1:
            continue
        nb = net.other_end(net.incident(v)[0], v)
        if not net.vertex(nb).is_boundary and net.degree(nb) == 3:
            out.append(v)
    return out


# ---------------------------------------------------------------------------
# face weights


def face_weights(net: PlabicNetwork) -> list[tuple[Face, Fraction]]:
    """Weight of each face: product of w over edges traversed against, over along.

    Faces are traced with the face on the left; an edge directed along the
    traversal contributes 1/w, against it w.
    """
    out = []
    for f in faces(net):
        w = Fraction(1)
        for a, b, eid in f.darts:
            if eid is None:
                continue
            e = net.edge(eid)
            w = w / e.weight if (e.tail, e.head) == (a, b) else w * e.weight
        out.append((f, w))
    return out


# ---------------------------------------------------------------------------
# disjoint sums and projections


def disjoint_sum(left: PlabicNetwork, right: PlabicNetwork, gap: Fraction = Fraction(1)) -> PlabicNetwork:
    """Place ``right`` to the right of ``left``; boundary labels are concatenated."""
    if not left.vertices:
        return right
    if not right.vertices:
        return left
    nl = left.n
    dx = max(v.position.x for v in left.vertices) + gap - min(v.position.x for v in right.vertices)
    taken = _ids(left)
    ren: dict[str, str] = {}
    for v in right.vertices:
        stem = v.id
        if v.is_boundary and v.id == f"b{v.boundary_index}":
            stem = f"b{v.boundary_index + nl}"
        ren[v.id] = _fresh(taken, stem)
        taken.add(ren[v.id])
    eren: dict[str, str] = {}
    for e in right.edges:
        eren[e.id] = _fresh(taken, e.id)
        taken.add(eren[e.id])
    verts = list(left.vertices)
    for v in right.vertices:
        bi = v.boundary_index + nl if v.is_boundary else v.boundary_index
        verts.append(Vertex(ren[v.id], v.color, v.kind, P(v.position.x + dx, v.position.y), bi))
    edges = list(left.edges) + [Edge(eren[e.id], ren[e.tail], ren[e.head], e.weight) for e in right.edges]
    return make_network(verts, edges)


def project_pair(net: PlabicNetwork, j1: int, j2: int) -> PlabicNetwork:
    """Glue the edges at two adjacent boundary vertices, one source and one sink.

    The glued edge runs from the sink edge's inner end to the source edge's
    inner end through a new bivalent white vertex near the boundary (or,
    for the cyclic pair (n, 1), above the whole network).  The remaining
    boundary vertices are relabelled 1..n-2 in order.
    """
    n = net.n
    cyclic = {j1, j2} == {1, n} and n > 2
    if not (j2 == j1 + 1 or cyclic):
        raise PlabicError("boundary vertices are not adjacent: TNN not guaranteed")
    ea, eb = net.boundary_edge(j1), net.boundary_edge(j2)
    if ea is None or eb is None:
        raise PlabicError("both boundary vertices need an edge")
    if net.weight(ea) != 1 or net.weight(eb) != 1:
        raise PlabicError("non-unit boundary weights (apply a weight gauge first)")
    srcs = [j for j in (j1, j2) if j in net.base]
    if len(srcs) != 1:
        raise PlabicError("projection needs one source and one sink")
    s = srcs[0]
    t = j2 if s == j1 else j1
    es, et = net.boundary_edge(s), net.boundary_edge(t)
    if es == et:
        raise PlabicError("pair joined by a single edge: gluing creates a closed loop")
    bs, bt = net.boundary_vertex(s), net.boundary_vertex(t)
    x = net.edge(es).head
    y = net.edge(et).tail
    taken = _ids(net)
    mid = _fresh(taken, f"g{s}_{t}")
    ps, pt = net.position(bs), net.position(bt)
    xs = [v.position.x for v in net.vertices]
    top = max(v.position.y for v in net.vertices)
    high = [P((min(xs) + max(xs)) / 2, top + (max(xs) - min(xs) + 1) * Fraction(m)) for m in (1, 2, 4, 8)]
    if cyclic:
        cands = high
    else:
        mx = (ps.x + pt.x) / 2
        cands = [P(mx, (abs(pt.x - ps.x)) * Fraction(1, 2 ** m)) for m in range(1, 16)] + high
    keep = [v for v in net.vertices if v.id not in (bs, bt)]
    order = sorted((v for v in keep if v.is_boundary), key=lambda v: v.boundary_index)
    relabel = {v.id: i for i, v in enumerate(order, start=1)}
    first = None
    for c in cands:
        verts = [replace(v, boundary_index=relabel[v.id]) if v.is_boundary else v for v in keep]
        verts.append(Vertex(mid, WHITE, INTERNAL, c))
        edges = []
        for e in net.edges:
            if e.id == et:
                edges.append(Edge(et, y, mid, Fraction(1)))
            elif e.id == es:
                edges.append(Edge(es, mid, x, Fraction(1)))
            else:
                edges.append(e)
        cand = make_network(verts, edges)
        if first is None:
            first = cand
        if validate_network(cand, allow_leaves=True).ok:
            return _rename_boundary(cand)
    return _rename_boundary(first)


def _rename_boundary(net: PlabicNetwork) -> PlabicNetwork:
    """Use ids b1..bn for boundary vertices when that causes no clash."""
    want = {v.id: f"b{v.boundary_index}" for v in net.vertices if v.is_boundary}
    others = {v.id for v in net.vertices if not v.is_boundary} | {e.id for e in net.edges}
    if len(set(want.values())) != len(want) or set(want.values()) & others:
        return net
    verts = [replace(v, id=want.get(v.id, v.id)) for v in net.vertices]
    edges = [replace(e, tail=want.get(e.tail, e.tail), head=want.get(e.head, e.head)) for e in net.edges]
    return make_network(verts, edges)


def projection_identity(A: BoundaryMatrix, A2: BoundaryMatrix, j1: int, j2: int) -> bool:
    """Check Delta_J(A2) = c (Delta_{1,J} + Delta_{2,J}) of A after cyclic relabelling.

    Labels are rotated so that the projected pair comes first.  A column
    that wraps from the front to the back is multiplied by (-1)^(rank-1),
    the relabelling that keeps nonnegative minors nonnegative.  A single
    positive constant c must serve every J.
    """
    n = A.n
    order = [(j1 - 1 + m) % n + 1 for m in range(n)]
    if order[1] != j2:
        order = [(j2 - 1 + m) % n + 1 for m in range(n)]
        if order[1] != j1:
            raise PlabicError("labels are not cyclically adjacent")
    start = order[0]
    rest = order[2:]
    survivors = sorted(rest)
    new_label = {old: i for i, old in enumerate(survivors, start=1)}
    k, k2 = A.k, A2.k
    tw = (-1) ** (k - 1)
    tw2 = (-1) ** (k2 - 1)
    rot = [[row[c - 1] * (tw if c < start else 1) for c in order] for row in A.rows]
    rot2 = [[row[new_label[c] - 1] * (tw2 if c < start else 1) for c in rest] for row in A2.rows]
    ratio = None
    for J in itertools.combinations(range(n - 2), k2):
        lhs = linalg.det([[r[c] for c in J] for r in rot2]) if k2 else Fraction(1)
        cols1 = [0] + [c + 2 for c in J]
        cols2 = [1] + [c + 2 for c in J]
        rhs = linalg.det([[r[c] for c in cols1] for r in rot]) + linalg.det([[r[c] for c in cols2] for r in rot])
        if rhs == 0:
            if lhs != 0:
                return False
            continue
        q = lhs / rhs
        if ratio is None:
            ratio = q
        elif q != ratio:
            return False
    return ratio is not None and ratio > 0


# ---------------------------------------------------------------------------
# identities between local indices


def wind_formula(a: Point2, b: Point2, l: Point2) -> Fraction:
    """(e2(b) - e2(a) + s(a, b) (e2(b) - e2(a))^2) / 2 with e2 the half-plane index."""
    d = eps2(b, l) - eps2(a, l)
    return Fraction(d + pair_sign(a, b) * d * d, 2)


def _s(a: Point2, l: Point2) -> int:
    c = a.cross(l)
    return (c > 0) - (c < 0)


def wind12_sides(d1: Point2, d2: Point2, l: Point2) -> tuple[Fraction, Fraction, Fraction]:
    """Both sides of wind(e1, e2) + wind(-e2, -e1) = e2(e2) - e2(e1) = (s(e1, l) - s(e2, l)) / 2."""
    lhs = winding(d1, d2, l) + winding(-d2, -d1, l)
    mid = eps2(d2, l) - eps2(d1, l)
    rhs = Fraction(_s(d1, l) - _s(d2, l), 2)
    return Fraction(lhs), Fraction(mid), rhs


def W_b(d1: Point2, d2: Point2, df: Point2, l: Point2) -> int:
    """Black-vertex combination; d1, df point into the vertex and d2 out of it."""
    return winding(df, d2, l) - winding(df, -d1, l) - winding(d1, d2, l) - eps2(d1, l)


def W_w(d1: Point2, d2: Point2, df: Point2, l: Point2) -> int:
    """White-vertex combination for the same geometry with f reversed."""
    return winding(d1, -df, l) + winding(-d2, -d1, l) - winding(-d2, -df, l) + eps2(d1, l) + 1


def W_closed_form(d1: Point2, d2: Point2, df: Point2, l: Point2) -> Fraction:
    e1, e2, ef = eps2(d1, l), eps2(d2, l), eps2(df, l)
    num = pair_sign(df, d2) * (e2 - ef) ** 2 + pair_sign(df, d1) * (1 - e1 - ef) ** 2 + pair_sign(d2, d1) * (e2 - e1) ** 2 - 1
    return Fraction(num, 2)


def trivalent_piece(color: str, sources: Sequence[int], center: Fraction = Fraction(0)) -> PlabicNetwork:
    """A single trivalent vertex joined to three boundary vertices at x = c-1, c, c+1.

    A white piece has one source among the three labels, a black piece two.
    """
    c = Q(center)
    want = 1 if color == WHITE else 2
    if len(sources) != want or not set(sources) <= {1, 2, 3}:
        raise PlabicError(f"a {color} piece needs {want} source label(s) among 1, 2, 3")
    verts = [Vertex(f"b{i}", BLACK, BOUNDARY, P(c + i - 2, 0), i) for i in (1, 2, 3)]
    verts.append(Vertex("V", color, INTERNAL, P(c, 1)))
    edges = [Edge(f"l{i}", f"b{i}", "V") if i in sources else Edge(f"l{i}", "V", f"b{i}") for i in (1, 2, 3)]
    return make_network(verts, edges)


@dataclass(frozen=True)
class AmalgamationStep:
    pair: tuple[int, int]
    before: PlabicNetwork
    after: PlabicNetwork
    identity_holds: bool


def amalgamate_gr24(weights: Mapping[str, Fraction] | None = None) -> tuple[PlabicNetwork, list[AmalgamationStep]]:
    """Build the top cell of Gr(2, 4) from four trivalent pieces.

    White (source in the middle), black (sources left), white (source left)
    and black (sources at both ends) are summed left to right and the pairs
    (3, 4), (4, 5), (5, 6) and finally the wrap-around pair (6, 1) are
    projected.  The result has boundary b1 .. b4 with sources b1, b2.
    ``weights`` may set w13 (leg at b1), w23 (leg at b2), w14 and w24 (the
    glued edges into the last black vertex); all default to 1.
    """
    pieces = [
        trivalent_piece(WHITE, [2], Fraction(0)),
        trivalent_piece(BLACK, [1, 2], Fraction(3)),
        trivalent_piece(WHITE, [1], Fraction(6)),
        trivalent_piece(BLACK, [1, 3], Fraction(9)),
    ]
    net = pieces[0]
    for p in pieces[1:]:
        net = disjoint_sum(net, p, Fraction(1))
    steps = []
    for pair in ((3, 4), (4, 5), (5, 6), (6, 1)):
        before = net
        net = project_pair(net, *pair)
        ok = projection_identity(boundary_matrix(before), boundary_matrix(net), *pair)
        steps.append(AmalgamationStep(pair, before, net, ok))
    # edge ids after the gluing steps: legs keep their piece ids
    legs = {"w13": _leg(net, 1), "w23": _leg(net, 2), "w14": _glued_into(net, 4, from_label=1), "w24": _glued_into(net, 4, from_label=3)}
    w = {name: Q((weights or {}).get(name, 1)) for name in legs}
    return net.with_weights({legs[name]: w[name] for name in legs}), steps


def _leg(net: PlabicNetwork, i: int) -> str:
    eid = net.boundary_edge(i)
    if eid is None:
        raise PlabicError(f"boundary vertex b{i} has no edge")
    return eid


def _glued_into(net: PlabicNetwork, sink_label: int, from_label: int) -> str:
    """The edge entering the vertex next to sink b_{sink_label} on the route from b_{from_label}."""
    target = net.edge(_leg(net, sink_label)).tail
    start = net.edge(_leg(net, from_label))
    origin = start.head if start.tail == net.boundary_vertex(from_label) else start.tail
    # walk bivalent vertices backwards from the target until a trivalent vertex
    for eid in net.in_edges(target):
        cur = net.edge(eid).tail
        last = eid
        while net.degree(cur) == 2 and not net.vertex(cur).is_boundary:
            last = net.in_edges(cur)[0]
            cur = net.edge(last).tail
        if cur == origin:
            return last
    raise PlabicError("no glued edge between the requested vertices")


@dataclass(frozen=True)
class VertexIdentities:
    """Both sides of the local identities at one trivalent vertex of a reversal locus."""

    vertex: str
    color: str
    e1: str
    e2: str
    f: str
    wind12: tuple[Fraction, Fraction, Fraction]
    eps12: tuple[int, int]
    region_bw: tuple[int, int]
    equiv: tuple[int, int]

    @property
    def holds(self) -> bool:
        a, b, c = self.wind12
        return (
            a == b == c
            and (self.eps12[0] - self.eps12[1]) % 2 == 0
            and (self.region_bw[0] - self.region_bw[1]) % 2 == 0
            and (self.equiv[0] - self.equiv[1]) % 2 == 0
        )


def locus_identities(net: PlabicNetwork, frame: GaugeFrame, locus: Sequence[str], cycle: bool = False) -> list[VertexIdentities]:
    """Evaluate the local index identities at each internal trivalent vertex of a path or cycle.

    e1 is the locus edge entering the vertex, e2 the one leaving it and f
    the third edge.  Hatted crossing numbers come from the reversed network
    in the same gauge direction.
    """
    frame = make_frame(net, frame.direction)
    marking = cycle_marking(net, locus) if cycle else path_marking(net, frame, locus)
    new = net.reverse_edges(locus)
    new_frame = make_frame(new, frame.direction)
    l = frame.direction
    seq = list(locus) + ([locus[0]] if cycle else [])
    out = []
    for e1, e2 in zip(seq, seq[1:]):
        v = net.edge(e1).head
        vx = net.vertex(v)
        if vx.is_boundary or net.degree(v) != 3:
            continue
        (f,) = [x for x in net.incident(v) if x not in (e1, e2)]
        d1, d2 = net.direction(e1), net.direction(e2)
        fe = net.edge(f)
        eps1_e1 = left_region_index(marking, net, e1)
        eps1_e2 = left_region_index(marking, net, e2)
        dint_e2 = new_frame.int(e2) - frame.int(e2)
        dint_f = new_frame.int(f) - frame.int(f)
        pf, qf = net.position(fe.tail), net.position(fe.head)
        eps_f = _off_index(marking, pf, qf)
        eps_mf = _off_index(marking, qf, pf)
        if vx.color == BLACK:
            df = net.direction(f)
            lhs = W_b(d1, d2, df, l)
            rhs = dint_f - eps_f + eps1_e1
        else:
            df = -net.direction(f)
            lhs = W_w(d1, d2, df, l)
            rhs = eps_f - eps1_e1
        out.append(
            VertexIdentities(
                v, vx.color, e1, e2, f,
                wind12_sides(d1, d2, l),
                (eps1_e2 - eps1_e1, dint_e2),
                (dint_f, eps_f - eps_mf),
                (lhs, rhs),
            )
        )
    return out
