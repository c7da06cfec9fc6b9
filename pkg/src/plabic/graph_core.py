"""Embedded plabic networks: geometry, validation, orientations, gauge frames.

All coordinates and weights are exact ``Fraction`` values.  Boundary vertices
sit on the line ``y = 0`` ordered left to right by their label, interior
vertices lie strictly above it.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import cached_property
from math import gcd
from typing import Iterable, Iterator, Mapping, Sequence

BLACK = "black"
WHITE = "white"
BOUNDARY = "boundary"
INTERNAL = "internal"


class PlabicError(Exception):
    """Domain error raised by library operations."""


class UnknownIdError(PlabicError, KeyError):
    """A vertex or edge id that is not in the network."""

    def __str__(self) -> str:
        return str(self.args[0]) if self.args else "unknown id"


class GeneralPositionError(PlabicError):
    pass


class DegenerateFrameError(PlabicError):
    pass


def Q(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError("floating point values are not accepted")
    return Fraction(value)


@dataclass(frozen=True)
class Point2:
    x: Fraction
    y: Fraction

    def __post_init__(self):
        object.__setattr__(self, "x", Q(self.x))
        object.__setattr__(self, "y", Q(self.y))

    def __add__(self, other: "Point2") -> "Point2":
        return Point2(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "Point2") -> "Point2":
        return Point2(self.x - other.x, self.y - other.y)

    def __neg__(self) -> "Point2":
        return Point2(-self.x, -self.y)

    def scale(self, t) -> "Point2":
        return Point2(self.x * t, self.y * t)

    def cross(self, other: "Point2") -> Fraction:
        return self.x * other.y - self.y * other.x

    def dot(self, other: "Point2") -> Fraction:
        return self.x * other.x + self.y * other.y

    def is_zero(self) -> bool:
        return self.x == 0 and self.y == 0


def P(x, y) -> Point2:
    return Point2(Q(x), Q(y))


@dataclass(frozen=True)
class Vertex:
    id: str
    color: str
    kind: str
    position: Point2
    boundary_index: int | None = None

    @property
    def is_boundary(self) -> bool:
        return self.kind == BOUNDARY


@dataclass(frozen=True)
class Edge:
    id: str
    tail: str
    head: str
    weight: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "weight", Q(self.weight))

    def reversed(self) -> "Edge":
        return Edge(self.id, self.head, self.tail, 1 / self.weight)


@dataclass(frozen=True)
class PlabicNetwork:
    """An oriented, weighted, embedded network.

    The network always carries a concrete orientation: the stored edge
    directions.  Reorienting produces a new network with reversed edges and
    reciprocal weights.
    """

    vertices: tuple[Vertex, ...]
    edges: tuple[Edge, ...]

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple(self.edges))

    # -- lookups -----------------------------------------------------------
    @cached_property
    def _vmap(self) -> dict[str, Vertex]:
        return {v.id: v for v in self.vertices}

    @cached_property
    def _emap(self) -> dict[str, Edge]:
        return {e.id: e for e in self.edges}

    @cached_property
    def _incidence(self) -> dict[str, tuple[list[str], list[str]]]:
        inc: dict[str, tuple[list[str], list[str]]] = {v.id: ([], []) for v in self.vertices}
        for e in self.edges:
            if e.tail in inc:
                inc[e.tail][1].append(e.id)
            if e.head in inc:
                inc[e.head][0].append(e.id)
        return inc

    def vertex(self, vid: str) -> Vertex:
        try:
            return self._vmap[vid]
        except KeyError:
            raise UnknownIdError(f"unknown vertex {vid!r}") from None

    def edge(self, eid: str) -> Edge:
        try:
            return self._emap[eid]
        except KeyError:
            raise UnknownIdError(f"unknown edge {eid!r}") from None

    def has_edge(self, eid: str) -> bool:
        return eid in self._emap

    def has_vertex(self, vid: str) -> bool:
        return vid in self._vmap

    def in_edges(self, vid: str) -> list[str]:
        return list(self._incidence[vid][0])

    def out_edges(self, vid: str) -> list[str]:
        return list(self._incidence[vid][1])

    def incident(self, vid: str) -> list[str]:
        i, o = self._incidence[vid]
        return list(i) + list(o)

    def degree(self, vid: str) -> int:
        i, o = self._incidence[vid]
        return len(i) + len(o)

    def other_end(self, eid: str, vid: str) -> str:
        e = self._emap[eid]
        return e.head if e.tail == vid else e.tail

    def position(self, vid: str) -> Point2:
        return self._vmap[vid].position

    def direction(self, eid: str) -> Point2:
        e = self._emap[eid]
        return self.position(e.head) - self.position(e.tail)

    def weight(self, eid: str) -> Fraction:
        return self._emap[eid].weight

    # -- boundary ----------------------------------------------------------
    @cached_property
    def boundary(self) -> tuple[str, ...]:
        bs = [v for v in self.vertices if v.is_boundary]
        bs.sort(key=lambda v: v.boundary_index)
        return tuple(v.id for v in bs)

    @property
    def n(self) -> int:
        return len(self.boundary)

    @cached_property
    def internal(self) -> tuple[str, ...]:
        return tuple(v.id for v in self.vertices if not v.is_boundary)

    def boundary_vertex(self, i: int) -> str:
        return self.boundary[i - 1]

    def boundary_edge(self, i: int) -> str | None:
        inc = self.incident(self.boundary_vertex(i))
        return inc[0] if inc else None

    def is_boundary_edge(self, eid: str) -> bool:
        e = self._emap[eid]
        return self._vmap[e.tail].is_boundary or self._vmap[e.head].is_boundary

    @cached_property
    def base(self) -> tuple[int, ...]:
        """Labels of boundary sources in the stored orientation."""
        return tuple(self._vmap[b].boundary_index for b in self.boundary if self._incidence[b][1])

    @property
    def k(self) -> int:
        return len(self.base)

    @cached_property
    def sinks(self) -> tuple[int, ...]:
        return tuple(i for i in range(1, self.n + 1) if i not in self.base)

    def sink_of_edge(self, eid: str) -> int | None:
        v = self._vmap[self._emap[eid].head]
        return v.boundary_index if v.is_boundary else None

    def source_of_edge(self, eid: str) -> int | None:
        v = self._vmap[self._emap[eid].tail]
        return v.boundary_index if v.is_boundary else None

    # -- functional updates ------------------------------------------------
    def with_weights(self, weights: Mapping[str, Fraction]) -> "PlabicNetwork":
        edges = tuple(replace(e, weight=Q(weights[e.id])) if e.id in weights else e for e in self.edges)
        return PlabicNetwork(self.vertices, edges)

    def with_positions(self, positions: Mapping[str, Point2]) -> "PlabicNetwork":
        verts = tuple(replace(v, position=positions[v.id]) if v.id in positions else v for v in self.vertices)
        return PlabicNetwork(verts, self.edges)

    def reverse_edges(self, eids: Iterable[str]) -> "PlabicNetwork":
        flip = set(eids)
        edges = tuple(e.reversed() if e.id in flip else e for e in self.edges)
        return PlabicNetwork(self.vertices, edges)

    def weights(self) -> dict[str, Fraction]:
        return {e.id: e.weight for e in self.edges}

    def signature_key(self) -> tuple:
        """Hashable description of the orientation (edge id -> tail)."""
        return tuple(sorted((e.id, e.tail) for e in self.edges))


def make_network(vertices: Iterable[Vertex], edges: Iterable[Edge]) -> PlabicNetwork:
    return PlabicNetwork(tuple(vertices), tuple(edges))


# ---------------------------------------------------------------------------
# planar sign primitives


def pair_sign(a: Point2, b: Point2) -> int:
    """Orientation sign of the ordered pair of directions ``(a, b)``.

    Parallel directions give 0; antiparallel directions are rejected.
    """
    c = a.cross(b)
    if c > 0:
        return 1
    if c < 0:
        return -1
    if a.dot(b) > 0:
        return 0
    raise GeneralPositionError("general position violated: antiparallel pair")


def _sign_vs_direction(a: Point2, l: Point2) -> int:
    c = a.cross(l)
    return (c > 0) - (c < 0)


def winding(a: Point2, b: Point2, l: Point2) -> int:
    """Local winding of consecutive directions ``a`` then ``b`` w.r.t. ``l``."""
    s_ab = pair_sign(a, b)
    s_al = _sign_vs_direction(a, l)
    s_lb = _sign_vs_direction(l, b)
    if s_ab == s_al == s_lb == 1:
        return 1
    if s_ab == s_al == s_lb == -1:
        return -1
    return 0


def eps2(a: Point2, l: Point2) -> int:
    """(1 - s(a, l)) / 2 for a direction not parallel to l."""
    return (1 - _sign_vs_direction(a, l)) // 2


def _orient(p: Point2, q: Point2, r: Point2) -> int:
    c = (q - p).cross(r - p)
    return (c > 0) - (c < 0)


def _on_segment(p: Point2, a: Point2, b: Point2) -> bool:
    """p lies on the closed segment ab (collinearity assumed checked by caller)."""
    return min(a.x, b.x) <= p.x <= max(a.x, b.x) and min(a.y, b.y) <= p.y <= max(a.y, b.y)


def segments_intersect(a: Point2, b: Point2, c: Point2, d: Point2) -> bool:
    """Closed segments ab and cd share at least one point."""
    o1, o2, o3, o4 = _orient(a, b, c), _orient(a, b, d), _orient(c, d, a), _orient(c, d, b)
    if o1 != o2 and o3 != o4 and 0 not in (o1, o2, o3, o4):
        return True
    if o1 == 0 and _on_segment(c, a, b):
        return True
    if o2 == 0 and _on_segment(d, a, b):
        return True
    if o3 == 0 and _on_segment(a, c, d):
        return True
    if o4 == 0 and _on_segment(b, c, d):
        return True
    return False


def point_on_open_segment(p: Point2, a: Point2, b: Point2) -> bool:
    return _orient(a, b, p) == 0 and _on_segment(p, a, b) and p != a and p != b


def ray_segment_crossing(origin: Point2, d: Point2, a: Point2, b: Point2) -> int:
    """Number (0 or 1) of transversal crossings of the open ray with segment ab.

    Raises ``DegenerateFrameError`` when the ray touches an endpoint of the
    segment or runs along it.  A segment starting at the ray origin is not
    crossed.
    """
    seg = b - a
    denom = d.cross(seg)
    if denom == 0:
        # parallel: degenerate only when collinear and overlapping beyond the origin
        if (a - origin).cross(d) == 0:
            ta = (a - origin).dot(d)
            tb = (b - origin).dot(d)
            if ta > 0 or tb > 0:
                raise DegenerateFrameError("degenerate gauge frame: ray runs along an edge")
        return 0
    w = a - origin
    t = w.cross(seg) / denom
    s = w.cross(d) / denom
    if t < 0 or s < 0 or s > 1:
        return 0
    if t == 0:
        if s in (0, 1):
            return 0  # edge incident to the ray origin
        raise DegenerateFrameError("degenerate gauge frame: ray origin on an edge")
    if s == 0 or s == 1:
        raise DegenerateFrameError("degenerate gauge frame: ray through a vertex")
    return 1


# ---------------------------------------------------------------------------
# validation


@dataclass
class ValidationReport:
    violations: list[tuple[str, str]] = field(default_factory=list)
    info: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, code: str, message: str) -> None:
        self.violations.append((code, message))

    def codes(self) -> set[str]:
        return {c for c, _ in self.violations}

    def __str__(self) -> str:
        if self.ok:
            return "pass"
        return "\n".join(f"{c}: {m}" for c, m in self.violations)


def validate_network(
    net: PlabicNetwork,
    *,
    ignore_directions: bool = False,
    strict_boundary: bool = False,
    allow_leaves: bool = False,
) -> ValidationReport:
    """Check structural, combinatorial and geometric invariants.

    ``strict_boundary`` additionally requires each boundary vertex to be
    joined to a bivalent white vertex.  ``ignore_directions`` skips the
    perfectness and color checks (used before orientations are chosen).
    ``allow_leaves`` accepts internal leaves away from the boundary and
    isolated dipoles (the sites of leaf and dipole reductions).
    """
    rep = ValidationReport()
    vmap: dict[str, Vertex] = {}
    for v in net.vertices:
        if v.id in vmap:
            rep.add("duplicate", f"duplicate vertex id {v.id}")
        vmap[v.id] = v
        if v.color not in (BLACK, WHITE):
            rep.add("color", f"vertex {v.id} has unknown color {v.color!r}")
        if v.kind not in (BOUNDARY, INTERNAL):
            rep.add("kind", f"vertex {v.id} has unknown kind {v.kind!r}")
    eids = set()
    for e in net.edges:
        if e.id in eids:
            rep.add("duplicate", f"duplicate edge id {e.id}")
        eids.add(e.id)
        if e.tail not in vmap or e.head not in vmap:
            rep.add("endpoint", f"edge {e.id} has a dangling endpoint")
        if e.tail == e.head:
            rep.add("endpoint", f"edge {e.id} is a loop")
        if e.weight <= 0:
            rep.add("weight", f"edge {e.id}: weight must be positive")
    if rep.violations:
        return rep

    # boundary layout
    bverts = [v for v in net.vertices if v.is_boundary]
    labels = sorted(v.boundary_index or 0 for v in bverts)
    if labels != list(range(1, len(bverts) + 1)):
        rep.add("boundary", "boundary labels must be 1..n")
    for v in bverts:
        if v.position.y != 0:
            rep.add("boundary", f"boundary vertex {v.id} is not on y=0")
    ordered = sorted(bverts, key=lambda v: v.boundary_index or 0)
    for a, b in zip(ordered, ordered[1:]):
        if not a.position.x < b.position.x:
            rep.add("boundary", "boundary vertices must be ordered left to right")
    for v in net.vertices:
        if not v.is_boundary and v.position.y <= 0:
            rep.add("interior", f"internal vertex {v.id} is not strictly above the boundary")

    # degrees
    for v in net.vertices:
        d = net.degree(v.id)
        if v.is_boundary:
            if d != 1:
                rep.add("univalence", f"boundary vertex {v.id} has degree {d}")
        elif d == 1:
            nb = net.other_end(net.incident(v.id)[0], v.id)
            if not vmap[nb].is_boundary and not allow_leaves:
                rep.add("degree", f"internal leaf {v.id} not attached to the boundary")
        elif d not in (2, 3):
            rep.add("degree", f"internal vertex {v.id} has degree {d}")
    for e in net.edges:
        if vmap[e.tail].is_boundary and vmap[e.head].is_boundary:
            continue
    if strict_boundary:
        for b in net.boundary:
            inc = net.incident(b)
            if not inc:
                continue
            nb = vmap[net.other_end(inc[0], b)]
            if nb.is_boundary or nb.color != WHITE or net.degree(nb.id) != 2:
                rep.add("boundary_convention", f"{b} is not joined to a bivalent white vertex")

    if not ignore_directions:
        for v in net.vertices:
            if v.is_boundary:
                continue
            nin, nout = len(net.in_edges(v.id)), len(net.out_edges(v.id))
            d = nin + nout
            if d >= 2 and (nin == 0 or nout == 0):
                rep.add("perfectness", f"internal vertex {v.id} is a source or sink")
                continue
            if v.color == WHITE and nin != 1:
                rep.add("color_rule", f"white vertex {v.id} must have exactly one incoming edge")
            if v.color == BLACK and nout != 1:
                rep.add("color_rule", f"black vertex {v.id} must have exactly one outgoing edge")

    # connectivity to the boundary
    adj: dict[str, set[str]] = {v.id: set() for v in net.vertices}
    for e in net.edges:
        adj[e.tail].add(e.head)
        adj[e.head].add(e.tail)
    seen = set(net.boundary)
    stack = list(seen)
    while stack:
        u = stack.pop()
        for w in adj[u]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    lost = [v.id for v in net.vertices if v.id not in seen]
    if allow_leaves:
        # an isolated dipole is a pair of leaves joined to each other
        lost = [v for v in lost if not (len(adj[v]) == 1 and len(adj[next(iter(adj[v]))]) == 1)]
    if lost:
        rep.add("connectivity", f"components isolated from the boundary: {sorted(lost)}")

    # general position at shared vertices
    for v in net.vertices:
        dirs = []
        for eid in net.incident(v.id):
            dirs.append((eid, net.position(net.other_end(eid, v.id)) - v.position))
        for (e1, d1), (e2, d2) in itertools.combinations(dirs, 2):
            if d1.cross(d2) == 0:
                rep.add("general_position", f"edges {e1} and {e2} are collinear at {v.id}")

    # planarity
    edges = net.edges
    for i, e in enumerate(edges):
        a, b = net.position(e.tail), net.position(e.head)
        for f in edges[i + 1:]:
            shared = {e.tail, e.head} & {f.tail, f.head}
            if shared:
                continue
            c, d = net.position(f.tail), net.position(f.head)
            if segments_intersect(a, b, c, d):
                rep.add("planarity", f"edges {e.id} and {f.id} cross")
        for v in net.vertices:
            if v.id in (e.tail, e.head):
                continue
            if point_on_open_segment(v.position, a, b):
                rep.add("planarity", f"vertex {v.id} lies on edge {e.id}")
    return rep


def require_valid(net: PlabicNetwork, **kw) -> None:
    rep = validate_network(net, **kw)
    if not rep.ok:
        raise PlabicError(f"invalid network:\n{rep}")


# ---------------------------------------------------------------------------
# perfect orientations


@dataclass(frozen=True)
class Orientation:
    """Edge ids reversed relative to a reference network, with the induced base."""

    reversed_edges: frozenset[str]
    base: tuple[int, ...]

    def apply(self, net: PlabicNetwork) -> PlabicNetwork:
        return net.reverse_edges(self.reversed_edges)


def enumerate_perfect_orientations(net: PlabicNetwork) -> list[Orientation]:
    """All color-compatible perfect orientations, by backtracking over edges."""
    edges = list(net.edges)
    internal = {v.id: v.color for v in net.vertices if not v.is_boundary}
    need_in = {vid: 0 for vid in internal}
    need_out = {vid: 0 for vid in internal}
    remaining = {vid: net.degree(vid) for vid in internal}
    out: list[Orientation] = []
    flips: list[str] = []

    def ok(vid: str) -> bool:
        if vid not in internal:
            return True
        if internal[vid] == WHITE:
            return need_in[vid] <= 1 and need_in[vid] + remaining[vid] >= 1
        return need_out[vid] <= 1 and need_out[vid] + remaining[vid] >= 1

    def rec(idx: int) -> None:
        if idx == len(edges):
            oriented = net.reverse_edges(flips)
            out.append(Orientation(frozenset(flips), oriented.base))
            return
        e = edges[idx]
        for flip in (False, True):
            t, h = (e.head, e.tail) if flip else (e.tail, e.head)
            for vid in (t, h):
                if vid in remaining:
                    remaining[vid] -= 1
            if t in need_out:
                need_out[t] += 1
            if h in need_in:
                need_in[h] += 1
            if flip:
                flips.append(e.id)
            if ok(t) and ok(h):
                rec(idx + 1)
            if flip:
                flips.pop()
            if t in need_out:
                need_out[t] -= 1
            if h in need_in:
                need_in[h] -= 1
            for vid in (t, h):
                if vid in remaining:
                    remaining[vid] += 1

    rec(0)
    return out


@dataclass(frozen=True)
class Matroid:
    k: int
    n: int
    bases: frozenset[tuple[int, ...]]

    def __contains__(self, subset) -> bool:
        return tuple(sorted(subset)) in self.bases

    def satisfies_exchange(self) -> bool:
        for a in self.bases:
            for b in self.bases:
                for x in set(a) - set(b):
                    if not any(tuple(sorted((set(a) - {x}) | {y})) in self.bases for y in set(b) - set(a)):
                        return False
        return True


def graph_matroid(net: PlabicNetwork) -> Matroid:
    orients = enumerate_perfect_orientations(net)
    if not orients:
        raise PlabicError("network has no perfect orientation")
    bases = frozenset(o.base for o in orients)
    return Matroid(len(next(iter(bases))), net.n, bases)


@dataclass(frozen=True)
class ReorientStep:
    kind: str  # "path" or "cycle"
    edges: tuple[str, ...]


def _decompose_reversal(net: PlabicNetwork, flipped: set[str]) -> list[ReorientStep]:
    """Split a set of reversed edges into directed paths and cycles of ``net``."""
    succ: dict[str, str] = {}
    for eid in flipped:
        h = net.edge(eid).head
        nxt = [f for f in net.out_edges(h) if f in flipped]
        if len(nxt) > 1:
            raise PlabicError("reversal set is not a union of disjoint paths and cycles")
        if nxt:
            succ[eid] = nxt[0]
    has_pred = set(succ.values())
    steps: list[ReorientStep] = []
    used: set[str] = set()
    for eid in sorted(flipped):
        if eid in has_pred or eid in used:
            continue
        walk = [eid]
        while walk[-1] in succ:
            walk.append(succ[walk[-1]])
        used.update(walk)
        steps.append(ReorientStep("path", tuple(walk)))
    for eid in sorted(flipped):
        if eid in used:
            continue
        walk = [eid]
        while succ[walk[-1]] != eid:
            walk.append(succ[walk[-1]])
        used.update(walk)
        steps.append(ReorientStep("cycle", tuple(walk)))
    return steps


def reorient_to_base(net: PlabicNetwork, target: Iterable[int]) -> tuple[PlabicNetwork, list[ReorientStep]]:
    """Reorient to a perfect orientation with the given source set.

    Among the orientations with that base, the one reversing the fewest edges
    is chosen.  The reversal is returned as elementary path/cycle steps, each
    expressed in the orientation current at the time of the step.
    """
    target = tuple(sorted(target))
    if target == net.base:
        return net, []
    cands = [o for o in enumerate_perfect_orientations(net) if o.base == target]
    if not cands:
        raise PlabicError("no perfect orientation with this base")
    best = min(cands, key=lambda o: (len(o.reversed_edges), sorted(o.reversed_edges)))
    steps = _decompose_reversal(net, set(best.reversed_edges))
    steps.sort(key=lambda s: (s.kind != "path", s.edges))
    cur = net
    for s in steps:
        cur = cur.reverse_edges(s.edges)
    return cur, steps


# ---------------------------------------------------------------------------
# gauge frames


@dataclass(frozen=True)
class GaugeFrame:
    direction: Point2
    sources: tuple[int, ...]
    crossings: Mapping[str, int]

    def int(self, eid: str) -> int:
        return self.crossings[eid]


def frame_violations(net: PlabicNetwork, direction: Point2) -> list[str]:
    d = direction
    out = []
    if d.y <= 0:
        out.append("rays must point into the disk")
        return out
    for e in net.edges:
        if net.direction(e.id).cross(d) == 0:
            out.append(f"edge {e.id} is parallel to the gauge direction")
    for i in net.base:
        o = net.position(net.boundary_vertex(i))
        for v in net.vertices:
            if v.position == o:
                continue
            w = v.position - o
            if w.cross(d) == 0 and w.dot(d) > 0:
                out.append(f"ray from b{i} contains vertex {v.id}")
    return out


def make_frame(net: PlabicNetwork, direction: Point2) -> GaugeFrame:
    bad = frame_violations(net, direction)
    if bad:
        raise DegenerateFrameError("degenerate gauge frame: " + "; ".join(bad))
    crossings = {e.id: edge_ray_crossings(net, e.id, direction) for e in net.edges}
    return GaugeFrame(direction, net.base, crossings)


def edge_ray_crossings(net: PlabicNetwork, eid: str, direction: Point2) -> int:
    """Transversal crossings of edge ``eid`` with the rays from all boundary sources."""
    e = net.edge(eid)
    a, b = net.position(e.tail), net.position(e.head)
    total = 0
    for i in net.base:
        total += ray_segment_crossing(net.position(net.boundary_vertex(i)), direction, a, b)
    return total


def reframe(net: PlabicNetwork, frame: GaugeFrame) -> GaugeFrame:
    """The frame with the same direction, recomputed for ``net``'s sources."""
    return make_frame(net, frame.direction)


def candidate_directions(limit: int = 60) -> Iterator[Point2]:
    """Rational directions pointing up, steep ones first."""
    yield P(0, 1)
    for size in range(1, limit + 1):
        cands = []
        for p in range(-size, size + 1):
            for q in range(1, size + 1):
                if max(abs(p), q) != size or gcd(abs(p), q) != 1 or p == 0:
                    continue
                cands.append((Fraction(abs(p), q), -p, q))
        cands.sort()
        for _, mp, q in cands:
            yield P(-mp, q)


def choose_gauge_direction(net: PlabicNetwork, budget: int = 60) -> GaugeFrame:
    for d in candidate_directions(budget):
        if not frame_violations(net, d):
            try:
                return make_frame(net, d)
            except DegenerateFrameError:
                continue
    raise PlabicError("internal error: no valid gauge direction found (degenerate embedding)")


def almost_horizontal_frame(net: PlabicNetwork, side: int = 1) -> GaugeFrame:
    """A valid frame whose direction is nearly horizontal, pointing right (side=1) or left."""
    for exp in range(2, 12):
        for extra in range(0, 5):
            d = P(side * (10**exp + extra), 1)
            if not frame_violations(net, d):
                try:
                    return make_frame(net, d)
                except DegenerateFrameError:
                    continue
    raise PlabicError("no valid almost-horizontal direction")


def winding_pair(net: PlabicNetwork, ek: str, ek1: str, frame: GaugeFrame | Point2) -> int:
    """Winding of consecutive edges ``ek`` then ``ek1`` (head of ek = tail of ek1)."""
    l = frame.direction if isinstance(frame, GaugeFrame) else frame
    if net.edge(ek).head != net.edge(ek1).tail:
        raise PlabicError(f"edges {ek} and {ek1} are not consecutive")
    return winding(net.direction(ek), net.direction(ek1), l)


def path_winding(net: PlabicNetwork, path: Sequence[str], frame: GaugeFrame) -> int:
    return sum(winding_pair(net, a, b, frame) for a, b in zip(path, path[1:]))


def path_crossings(path: Sequence[str], frame: GaugeFrame) -> int:
    return sum(frame.crossings[e] for e in path)


# ---------------------------------------------------------------------------
# faces of the embedding


@dataclass(frozen=True)
class Face:
    """A face of the embedded graph closed by the boundary of the disk.

    ``darts`` is the cyclic list of (from_vertex, to_vertex, edge id or None
    for a stretch of the disk boundary), traversed with the face on the left.
    """

    darts: tuple[tuple[str, str, str | None], ...]

    @property
    def is_internal(self) -> bool:
        return all(eid is not None for _, _, eid in self.darts)

    def corners(self) -> list[tuple[str, str, str]]:
        """(vertex, incoming-dart edge, outgoing-dart edge) at each corner."""
        out = []
        m = len(self.darts)
        for i in range(m):
            a = self.darts[i]
            b = self.darts[(i + 1) % m]
            out.append((a[1], a[2], b[2]))
        return out

    @property
    def edges(self) -> set[str]:
        return {eid for _, _, eid in self.darts if eid is not None}


def _angle_key(d: Point2):
    # counterclockwise order starting from direction (1, 0)
    upper = d.y > 0 or (d.y == 0 and d.x > 0)
    return (0 if upper else 1, _AngleCmp(d))


class _AngleCmp:
    __slots__ = ("d",)

    def __init__(self, d: Point2):
        self.d = d

    def __lt__(self, other: "_AngleCmp") -> bool:
        return self.d.cross(other.d) > 0

    def __eq__(self, other) -> bool:
        return self.d.cross(other.d) == 0 and self.d.dot(other.d) > 0


def faces(net: PlabicNetwork) -> list[Face]:
    """Faces inside the disk, found by tracing the rotation system.

    The disk boundary is modelled by straight stretches b_i -> b_{i+1} along
    y = 0 and one closing arc from b_n back to b_1 above everything.
    """
    # darts out of each vertex: (direction, to, edge id or None, tag)
    rot: dict[str, list[tuple[Point2, str, str | None]]] = {v.id: [] for v in net.vertices}
    for e in net.edges:
        pt, ph = net.position(e.tail), net.position(e.head)
        rot[e.tail].append((ph - pt, e.head, e.id))
        rot[e.head].append((pt - ph, e.tail, e.id))
    bnd = net.boundary
    n = len(bnd)
    for i in range(n - 1):
        a, b = bnd[i], bnd[i + 1]
        rot[a].append((P(1, 0), b, None))
        rot[b].append((P(-1, 0), a, None))
    if n >= 2:
        rot[bnd[-1]].append((P(1, 0), bnd[0], "__arc__"))
        rot[bnd[0]].append((P(-1, 0), bnd[-1], "__arc__"))
    order: dict[str, list[tuple[Point2, str, str | None]]] = {}
    for vid, lst in rot.items():
        order[vid] = sorted(lst, key=lambda t: _angle_key(t[0]))

    def key(u, v, tag):
        return (u, v, tag)

    pos_in_order: dict[tuple, int] = {}
    for vid, lst in order.items():
        for idx, (_, to, tag) in enumerate(lst):
            pos_in_order[key(vid, to, tag)] = idx

    darts = [key(u, to, tag) for u, lst in order.items() for (_, to, tag) in lst]
    seen: set[tuple] = set()
    result: list[Face] = []
    for start in darts:
        if start in seen:
            continue
        cyc = []
        d = start
        while d not in seen:
            seen.add(d)
            cyc.append(d)
            u, v, tag = d
            lst = order[v]
            idx = pos_in_order[key(v, u, tag)]
            nxt = lst[(idx - 1) % len(lst)]  # next clockwise from the reverse dart
            d = key(v, nxt[1], nxt[2])
        result.append(cyc)
    faces_out = []
    for cyc in result:
        # the face outside the disk runs right-to-left along y = 0
        if any(tag is None and net.vertex(u).boundary_index > net.vertex(v).boundary_index for u, v, tag in cyc):
            continue
        if n >= 2 and any(tag == "__arc__" and u == bnd[0] for u, v, tag in cyc):
            continue
        faces_out.append(Face(tuple((u, v, None if tag == "__arc__" else tag) for u, v, tag in cyc)))
    return faces_out


def vertex_counts(net: PlabicNetwork) -> dict[str, int]:
    """Counts of trivalent/bivalent internal vertices and internal edges."""
    c = {"t_W": 0, "t_B": 0, "d_W": 0, "d_B": 0, "leaves": 0}
    for vid in net.internal:
        d = net.degree(vid)
        col = net.vertex(vid).color
        if d == 3:
            c["t_W" if col == WHITE else "t_B"] += 1
        elif d == 2:
            c["d_W" if col == WHITE else "d_B"] += 1
        else:
            c["leaves"] += 1
    c["n_I"] = sum(1 for e in net.edges if not net.is_boundary_edge(e.id))
    return c


def face_count(net: PlabicNetwork) -> int:
    return len(faces(net))


def euler_counts_hold(net: PlabicNetwork) -> bool:
    """t_W = g - k and t_B = g - n + k where g + 1 is the number of faces."""
    g = face_count(net) - 1
    c = vertex_counts(net)
    return c["t_W"] == g - net.k and c["t_B"] == g - net.n + net.k


# ---------------------------------------------------------------------------
# helpers


def relabel_internal(net: PlabicNetwork, mapping: Mapping[str, str]) -> PlabicNetwork:
    verts = tuple(replace(v, id=mapping.get(v.id, v.id)) for v in net.vertices)
    edges = tuple(replace(e, tail=mapping.get(e.tail, e.tail), head=mapping.get(e.head, e.head)) for e in net.edges)
    return PlabicNetwork(verts, edges)


def perturb_positions(net: PlabicNetwork, seed: int = 0, scale: Fraction = Fraction(1, 1000), tries: int = 200) -> PlabicNetwork:
    """Jitter internal vertex positions until the embedding is in general position."""
    rng = random.Random(seed)
    if validate_network(net, ignore_directions=True).ok:
        return net
    for _ in range(tries):
        pos = {}
        for vid in net.internal:
            p = net.position(vid)
            dx = Fraction(rng.randint(-1000, 1000), 1000) * scale
            dy = Fraction(rng.randint(-1000, 1000), 1000) * scale
            pos[vid] = P(p.x + dx, max(p.y + dy, p.y / 2))
        cand = net.with_positions(pos)
        if validate_network(cand, ignore_directions=True).ok:
            return cand
    raise PlabicError("could not perturb into general position")
