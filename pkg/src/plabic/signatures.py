"""Edge signatures and the half-edge relation system.

A half-edge vector ``z[V, e]`` lives at each end of each edge.  Given an
edge signature ``eps`` the relations are

* ``z[b_j, e] = E_j`` at a boundary sink,
* ``z[U, e] = (-1)**eps[e] * w_e * z[V, e]`` along ``e = (U, V)``,
* all half-edge vectors at a black vertex coincide,
* the half-edge vectors at a white vertex sum to zero.

Row ``r`` of the boundary matrix is ``z[b_{i_r}] + E_{i_r}``.  The geometric
signature is the one for which this reproduces the edge vectors of a gauge
frame.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from . import linalg
from .flows import (
    BoundaryMatrix,
    EdgeVectorField,
    Vector,
    _frame,
    simple_cycles,
    unit,
    vadd,
    vscale,
)
from .graph_core import (
    BLACK,
    WHITE,
    Face,
    GaugeFrame,
    PlabicError,
    PlabicNetwork,
    Q,
    faces,
    winding,
)

HalfEdge = tuple[str, str]


# ---------------------------------------------------------------------------
# geometric signature


def _wind(net: PlabicNetwork, a: str, b: str, frame: GaugeFrame) -> int:
    return winding(net.direction(a), net.direction(b), frame.direction)


def half_edge_exponents(net: PlabicNetwork, frame: GaugeFrame) -> dict[HalfEdge, int]:
    """Sign exponent relating each half-edge vector to its edge vector.

    ``z[V, e] = (-1)**s * E_e``, divided by ``w_e`` when ``e`` ends at ``V``.
    """
    out: dict[HalfEdge, int] = {}
    for v in net.vertices:
        vid = v.id
        ins, outs = net.in_edges(vid), net.out_edges(vid)
        if v.is_boundary:
            for e in outs:
                out[(vid, e)] = 0
            for e in ins:
                out[(vid, e)] = frame.int(e)
        elif v.color == WHITE:
            for e in ins:
                out[(vid, e)] = frame.int(e)
            f = ins[0] if ins else None
            for e in outs:
                out[(vid, e)] = (_wind(net, f, e, frame) + 1) % 2 if f else 0
        else:
            g = outs[0] if outs else None
            for e in ins:
                out[(vid, e)] = (frame.int(e) + (_wind(net, e, g, frame) if g else 0)) % 2
            for e in outs:
                out[(vid, e)] = 0
    return {k: s % 2 for k, s in out.items()}


def geometric_signature(
    net: PlabicNetwork, frame: GaugeFrame | None = None, flip: Iterable[str] = ()
) -> dict[str, int]:
    """Edge signature induced by orientation and gauge frame.

    ``flip`` lists internal vertices that use the alternative local
    convention, which changes the signature on every incident edge.
    """
    frame = _frame(net, frame)
    s = half_edge_exponents(net, frame)
    eps = {e.id: (s[(e.tail, e.id)] + s[(e.head, e.id)]) % 2 for e in net.edges}
    return apply_vertex_gauge(net, eps, {v: 1 for v in flip})


def apply_vertex_gauge(net: PlabicNetwork, eps: Mapping[str, int], eta: Mapping[str, int]) -> dict[str, int]:
    for vid in eta:
        if net.vertex(vid).is_boundary:
            raise PlabicError("vertex gauge is not defined at boundary vertices")
    out = {}
    for e in net.edges:
        out[e.id] = (eps[e.id] + eta.get(e.tail, 0) + eta.get(e.head, 0)) % 2
    return out


# ---------------------------------------------------------------------------
# the half-edge system


@dataclass(frozen=True)
class HalfEdgeResult:
    unknowns: tuple[HalfEdge, ...]
    rank: int
    size: int
    det: Fraction
    z: Mapping[HalfEdge, Vector] | None
    matrix: BoundaryMatrix | None
    kernel: tuple[Fraction, ...] | None = None

    @property
    def full_rank(self) -> bool:
        return self.rank == self.size


def half_edge_unknowns(net: PlabicNetwork) -> list[HalfEdge]:
    out = []
    for e in net.edges:
        out.append((e.tail, e.id))
        out.append((e.head, e.id))
    return out


def half_edge_matrix(
    net: PlabicNetwork, eps: Mapping[str, int], weights: Mapping[str, Fraction] | None = None
) -> tuple[list[HalfEdge], list[list[Fraction]], list[int | None]]:
    """Square coefficient matrix; the last list marks rows fixed by a sink index."""
    weights = net.weights() if weights is None else weights
    unknowns = half_edge_unknowns(net)
    idx = {u: i for i, u in enumerate(unknowns)}
    m = len(unknowns)
    rows: list[list[Fraction]] = []
    sink_of_row: list[int | None] = []

    def new_row() -> list[Fraction]:
        return [Fraction(0)] * m

    for e in net.edges:
        r = new_row()
        r[idx[(e.tail, e.id)]] += 1
        r[idx[(e.head, e.id)]] -= (-1) ** (eps[e.id] % 2) * Q(weights[e.id])
        rows.append(r)
        sink_of_row.append(None)
    for v in net.vertices:
        inc = net.incident(v.id)
        if v.is_boundary:
            if net.in_edges(v.id):
                r = new_row()
                r[idx[(v.id, inc[0])]] = Fraction(1)
                rows.append(r)
                sink_of_row.append(v.boundary_index)
            continue
        if v.color == BLACK:
            for a, b in zip(inc, inc[1:]):
                r = new_row()
                r[idx[(v.id, a)]] += 1
                r[idx[(v.id, b)]] -= 1
                rows.append(r)
                sink_of_row.append(None)
        else:
            r = new_row()
            for a in inc:
                r[idx[(v.id, a)]] += 1
            rows.append(r)
            sink_of_row.append(None)
    if len(rows) != m:
        raise PlabicError(f"half-edge system is {len(rows)}x{m}, not square")
    return unknowns, rows, sink_of_row


def half_edge_det(net: PlabicNetwork, eps: Mapping[str, int], weights: Mapping[str, Fraction] | None = None) -> Fraction:
    _, rows, _ = half_edge_matrix(net, eps, weights)
    return linalg.det(rows)


def half_edge_solve(
    net: PlabicNetwork,
    eps: Mapping[str, int],
    weights: Mapping[str, Fraction] | None = None,
    sink_vectors: Mapping[int, Sequence[Fraction]] | None = None,
) -> HalfEdgeResult:
    """Solve the relations exactly; a rank drop is reported with a kernel vector."""
    n = net.n
    unknowns, rows, sink_of_row = half_edge_matrix(net, eps, weights)
    m = len(unknowns)
    if sink_vectors is None:
        sink_vectors = {j: unit(n, j) for j in net.sinks}
    rhs = [list(sink_vectors[j]) if j is not None else [Fraction(0)] * n for j in sink_of_row]
    det, sol = linalg.det_and_solve(rows, rhs)
    if sol is None:
        rank = linalg.rank(rows, m)
        ker = linalg.nullspace(rows, m)
        return HalfEdgeResult(tuple(unknowns), rank, m, Fraction(0), None, None, tuple(ker[0]) if ker else None)
    z = {u: tuple(sol[i]) for i, u in enumerate(unknowns)}
    mat = []
    for i in net.base:
        b = net.boundary_vertex(i)
        e = net.incident(b)[0]
        mat.append(vadd(z[(b, e)], unit(n, i)))
    return HalfEdgeResult(tuple(unknowns), m, m, det, z, BoundaryMatrix(tuple(mat), net.base))


def edge_field_from_half_edges(net: PlabicNetwork, z: Mapping[HalfEdge, Vector], frame: GaugeFrame) -> EdgeVectorField:
    """Invert the geometric correspondence: E_e from the half-edge vector at its tail."""
    s = half_edge_exponents(net, frame)
    vectors = {}
    for e in net.edges:
        sign = -1 if s[(e.tail, e.id)] else 1
        vectors[e.id] = vscale(sign, z[(e.tail, e.id)])
    return EdgeVectorField(vectors, net.base, frame.direction)


# ---------------------------------------------------------------------------
# equivalence


@dataclass(frozen=True)
class Equivalence:
    equivalent: bool
    eta: Mapping[str, int] | None = None
    certificate: tuple[str, tuple[str, ...]] | None = None

    def __bool__(self) -> bool:
        return self.equivalent


def edges_off_boundary_paths(net: PlabicNetwork) -> list[str]:
    """Edges not on any directed path from a boundary source to a boundary sink."""
    fwd = set(net.boundary_vertex(i) for i in net.base)
    stack = list(fwd)
    while stack:
        v = stack.pop()
        for e in net.out_edges(v):
            h = net.edge(e).head
            if h not in fwd:
                fwd.add(h)
                stack.append(h)
    bwd = set(net.boundary_vertex(j) for j in net.sinks)
    stack = list(bwd)
    while stack:
        v = stack.pop()
        for e in net.in_edges(v):
            t = net.edge(e).tail
            if t not in bwd:
                bwd.add(t)
                stack.append(t)
    out = []
    for e in net.edges:
        if e.tail in fwd and e.head in bwd:
            continue
        if _is_lollipop_edge(net, e.id):
            continue
        out.append(e.id)
    return out


def _is_lollipop_edge(net: PlabicNetwork, eid: str) -> bool:
    e = net.edge(eid)
    return any(not net.vertex(v).is_boundary and net.degree(v) == 1 for v in (e.tail, e.head))


def _directed_paths(net: PlabicNetwork, limit: int = 20000) -> Iterable[tuple[str, ...]]:
    """Simple directed source-to-sink paths, bounded in number."""
    count = 0
    for i in net.base:
        start = net.boundary_vertex(i)
        stack = [(start, (), frozenset([start]))]
        while stack:
            v, path, seen = stack.pop()
            if path and net.vertex(v).is_boundary:
                yield path
                count += 1
                if count >= limit:
                    return
                continue
            for e in net.out_edges(v):
                h = net.edge(e).head
                if h in seen:
                    continue
                stack.append((h, path + (e,), seen | {h}))


def signatures_equivalent(net: PlabicNetwork, s1: Mapping[str, int], s2: Mapping[str, int]) -> Equivalence:
    """Find vertex indices eta with s2 = s1 + eta(tail) + eta(head), or a parity certificate."""
    off = edges_off_boundary_paths(net)
    if off:
        raise PlabicError(f"edge off all boundary paths: extra gauge freedom ({', '.join(sorted(off))})")
    delta = {e.id: (s1[e.id] + s2[e.id]) % 2 for e in net.edges}
    eta: dict[str, int] = {b: 0 for b in net.boundary}
    adj: dict[str, list[tuple[str, str]]] = {v.id: [] for v in net.vertices}
    for e in net.edges:
        adj[e.tail].append((e.head, e.id))
        adj[e.head].append((e.tail, e.id))
    order = list(net.boundary) + sorted(net.internal)
    consistent = True
    for root in order:
        if root in eta and not net.vertex(root).is_boundary:
            continue
        if root not in eta:
            eta[root] = 0
        stack = [root]
        while stack and consistent:
            u = stack.pop()
            for w, eid in adj[u]:
                want = (eta[u] + delta[eid]) % 2
                if w not in eta:
                    eta[w] = want
                    stack.append(w)
                elif eta[w] != want:
                    consistent = False
                    break
        if not consistent:
            break
    if consistent:
        return Equivalence(True, {v: eta[v] for v in net.internal})
    return Equivalence(False, None, _certificate(net, delta))


def _certificate(net: PlabicNetwork, delta: Mapping[str, int]) -> tuple[str, tuple[str, ...]]:
    for cyc in simple_cycles(net):
        if sum(delta[e] for e in cyc) % 2:
            return ("cycle", cyc)
    for path in _directed_paths(net):
        if sum(delta[e] for e in path) % 2:
            return ("path", path)
    return ("undirected", tuple(sorted(e for e, d in delta.items() if d)))


def is_geometric(net: PlabicNetwork, eps: Mapping[str, int], frame: GaugeFrame | None = None) -> Equivalence:
    return signatures_equivalent(net, geometric_signature(net, frame), eps)


# ---------------------------------------------------------------------------
# TNN checks and falsification


def sample_weights(net: PlabicNetwork, count: int = 20, seed: int = 0) -> list[dict[str, Fraction]]:
    """Deterministic positive rational weights, spread over several scales."""
    rng = random.Random(seed)
    out = [{e.id: Fraction(1) for e in net.edges}]
    while len(out) < count:
        ws = {}
        for e in net.edges:
            w = Fraction(rng.randint(1, 9), rng.randint(1, 9))
            w *= Fraction(10) ** rng.choice((-3, -2, -1, 0, 0, 1, 2, 3))
            ws[e.id] = w
        out.append(ws)
    return out


@dataclass(frozen=True)
class TNNCheck:
    ok: bool
    weights: Mapping[str, Fraction] | None = None
    reason: str = ""
    minor: tuple[tuple[int, ...], Fraction] | None = None


def check_tnn(net: PlabicNetwork, eps: Mapping[str, int], samples: Sequence[Mapping[str, Fraction]]) -> TNNCheck:
    """Full rank and non-negative maximal minors at every sample."""
    for ws in samples:
        res = half_edge_solve(net, eps, ws)
        if not res.full_rank:
            return TNNCheck(False, ws, "rank drop")
        for cols, val in res.matrix.minors().items():
            if val < 0:
                return TNNCheck(False, ws, "negative minor", (cols, val))
    return TNNCheck(True)


@dataclass(frozen=True)
class Witness:
    kind: str  # "geometric", "negative-minor", "rank-drop", "inconclusive"
    weights: Mapping[str, Fraction] | None = None
    minor: tuple[tuple[int, ...], Fraction] | None = None
    certificate: tuple[str, tuple[str, ...]] | None = None


DELTAS = tuple(Fraction(1, 10**m) for m in range(1, 10))


def _negative_minor(net: PlabicNetwork, eps, ws) -> Witness | None:
    res = half_edge_solve(net, eps, ws)
    if not res.full_rank:
        return Witness("rank-drop", dict(ws))
    for cols, val in res.matrix.minors().items():
        if val < 0:
            return Witness("negative-minor", dict(ws), (cols, val))
    return None


def _affine_root(net: PlabicNetwork, eps, ws: dict[str, Fraction], eid: str) -> Witness | None:
    """det is affine in each single weight: solve det = 0 for a positive weight on ``eid``."""
    a = dict(ws)
    a[eid] = Fraction(1)
    d1 = half_edge_det(net, eps, a)
    a[eid] = Fraction(2)
    d2 = half_edge_det(net, eps, a)
    slope = d2 - d1
    if slope == 0:
        return None
    t = 1 - d1 / slope
    if t <= 0:
        return None
    a[eid] = t
    if half_edge_det(net, eps, a) != 0:
        raise PlabicError("internal error: determinant is not affine in a single weight")
    return Witness("rank-drop", a)


def falsify_signature(
    net: PlabicNetwork, eps: Mapping[str, int], frame: GaugeFrame | None = None, samples: int = 40, seed: int = 0
) -> Witness:
    """Exact weights exposing a non-geometric signature, or ``geometric``."""
    eq = is_geometric(net, eps, frame)
    if eq:
        return Witness("geometric")
    cert = eq.certificate
    kind, edges = cert
    on = set(edges)
    if kind == "path":
        for delta in DELTAS:
            ws = {e.id: (Fraction(1) if e.id in on else delta) for e in net.edges}
            w = _negative_minor(net, eps, ws)
            if w:
                return Witness(w.kind, w.weights, w.minor, cert)
    if kind == "cycle":
        for delta in (Fraction(1),) + DELTAS:
            base = {e.id: (Fraction(1) if e.id in on else delta) for e in net.edges}
            for eid in edges:
                w = _affine_root(net, eps, base, eid)
                if w:
                    return Witness(w.kind, w.weights, None, cert)
    for ws in sample_weights(net, samples, seed):
        w = _negative_minor(net, eps, ws)
        if w:
            return Witness(w.kind, w.weights, w.minor, cert)
        for e in net.edges:
            w = _affine_root(net, eps, dict(ws), e.id)
            if w:
                return Witness(w.kind, w.weights, None, cert)
    return Witness("inconclusive", None, None, cert)


# ---------------------------------------------------------------------------
# vertex pair indices


def _pair_key(f: str, g: str) -> tuple[str, str]:
    return (f, g) if f <= g else (g, f)


@dataclass(frozen=True)
class PairIndices:
    cd: int
    int: int
    wind: int

    def geo(self, color: str) -> int:
        g = self.wind + self.int + (self.cd if color == WHITE else 0)
        return g % 2


@dataclass(frozen=True)
class VertexPairSignature:
    indices: Mapping[tuple[str, tuple[str, str]], PairIndices]
    colors: Mapping[str, str]

    def geo(self, vid: str, f: str, g: str) -> int:
        return self.indices[(vid, _pair_key(f, g))].geo(self.colors[vid])

    @property
    def eps_geo(self) -> dict[tuple[str, tuple[str, str]], int]:
        return {k: v.geo(self.colors[k[0]]) for k, v in self.indices.items()}


def pair_indices(net: PlabicNetwork, frame: GaugeFrame, vid: str, f: str, g: str) -> PairIndices:
    l = frame.direction
    ins = set(net.in_edges(vid))
    f_in, g_in = f in ins, g in ins
    cd = int(f_in == g_in)
    if f_in and not g_in:
        it = frame.int(f)
        wd = winding(net.direction(f), net.direction(g), l)
    elif g_in and not f_in:
        it = frame.int(g)
        wd = -winding(net.direction(g), net.direction(f), l)
    else:
        it = frame.int(f) + frame.int(g) if f_in else 0
        others = [h for h in net.incident(vid) if h not in (f, g)]
        if others:
            h = others[0]
            # directions of the edges as oriented; h has the opposite sense at vid
            wd = winding(net.direction(h), net.direction(g), l) + winding(net.direction(h), net.direction(f), l)
        else:
            wd = 0
    return PairIndices(cd, it, wd)


def vertex_pair_indices(net: PlabicNetwork, frame: GaugeFrame | None = None) -> VertexPairSignature:
    frame = _frame(net, frame)
    idx = {}
    colors = {}
    for vid in net.internal:
        colors[vid] = net.vertex(vid).color
        inc = net.incident(vid)
        for f, g in itertools.combinations(inc, 2):
            idx[(vid, _pair_key(f, g))] = pair_indices(net, frame, vid, f, g)
    return VertexPairSignature(idx, colors)


@dataclass(frozen=True)
class FaceAudit:
    face_sums: tuple[tuple[Face, int], ...]
    vertex_sums: Mapping[str, int]
    g: int
    k: int
    n: int

    @property
    def odd_faces(self) -> int:
        return sum(s for _, s in self.face_sums)

    @property
    def internal_faces(self) -> list[tuple[Face, int]]:
        return [(f, s) for f, s in self.face_sums if f.is_internal]

    @property
    def vertex_parity_ok(self) -> bool:
        return all(s == (1 if c == WHITE else 0) for s, c in self._vertex_colored())

    def _vertex_colored(self):
        return [(s, c) for s, c in self.vertex_sums.values()]

    @property
    def internal_faces_odd(self) -> bool:
        return all(s == 1 for _, s in self.internal_faces)

    @property
    def count_ok(self) -> bool:
        return self.odd_faces == self.g - self.k

    @property
    def ok(self) -> bool:
        return self.vertex_parity_ok and self.internal_faces_odd and self.count_ok


def face_parity_audit(net: PlabicNetwork, vps: VertexPairSignature) -> FaceAudit:
    """Pair-index sums around each face and at each trivalent vertex."""
    fs = faces(net)
    sums = []
    for face in fs:
        tot = 0
        for vid, a, b in face.corners():
            if a is None or b is None or a == b or net.vertex(vid).is_boundary:
                continue
            tot += vps.geo(vid, a, b)
        sums.append((face, tot % 2))
    vsums = {}
    for vid in net.internal:
        inc = net.incident(vid)
        if len(inc) != 3:
            continue
        s = sum(vps.geo(vid, f, g) for f, g in itertools.combinations(inc, 2)) % 2
        vsums[vid] = (s, net.vertex(vid).color)
    return FaceAudit(tuple(sums), vsums, len(fs) - 1, net.k, net.n)


# ---------------------------------------------------------------------------
# x-convention


def half_edge_x_solve(
    net: PlabicNetwork, frame: GaugeFrame | None = None, vps: VertexPairSignature | None = None
) -> dict[HalfEdge, Vector]:
    """Half-edge vectors with edge relation x[U] = w x[V] and signs carried by pair indices."""
    frame = _frame(net, frame)
    vps = vertex_pair_indices(net, frame) if vps is None else vps
    n = net.n
    unknowns = half_edge_unknowns(net)
    idx = {u: i for i, u in enumerate(unknowns)}
    m = len(unknowns)
    rows, rhs = [], []

    def add(coefs: dict[HalfEdge, Fraction], b: Sequence[Fraction] | None = None) -> None:
        r = [Fraction(0)] * m
        for u, c in coefs.items():
            r[idx[u]] += c
        rows.append(r)
        rhs.append(list(b) if b is not None else [Fraction(0)] * n)

    for e in net.edges:
        add({(e.tail, e.id): Fraction(1), (e.head, e.id): -e.weight})
    for v in net.vertices:
        vid = v.id
        inc = net.incident(vid)
        if v.is_boundary:
            if net.in_edges(vid):
                e = inc[0]
                sgn = -1 if frame.int(e) % 2 else 1
                add({(vid, e): Fraction(1)}, vscale(sgn, unit(n, v.boundary_index)))
            continue
        if len(inc) == 1:
            if v.color == WHITE:
                add({(vid, inc[0]): Fraction(1)})
            continue
        if v.color == BLACK or len(inc) == 2:
            for a, b in zip(inc, inc[1:]):
                s = -1 if vps.geo(vid, a, b) else 1
                add({(vid, a): Fraction(1), (vid, b): Fraction(-s)})
        else:
            coefs: dict[HalfEdge, Fraction] = {}
            for a, b, c in ((inc[0], inc[1], inc[2]), (inc[1], inc[2], inc[0]), (inc[2], inc[0], inc[1])):
                coefs[(vid, c)] = Fraction(-1 if vps.geo(vid, a, b) else 1)
            add(coefs)
    if len(rows) != m:
        raise PlabicError("x-system is not square")
    sol = linalg.solve(rows, rhs)
    return {u: tuple(sol[i]) for i, u in enumerate(unknowns)}


def x_to_edge_field(net: PlabicNetwork, x: Mapping[HalfEdge, Vector]) -> dict[str, Vector]:
    return {e.id: x[(e.tail, e.id)] for e in net.edges}


def x_to_z(net: PlabicNetwork, x: Mapping[HalfEdge, Vector], frame: GaugeFrame) -> dict[HalfEdge, Vector]:
    """Convert x-convention half-edge vectors into the signature convention."""
    s = half_edge_exponents(net, frame)
    return {u: vscale(-1 if s[u] else 1, v) for u, v in x.items()}


# ---------------------------------------------------------------------------
# text formats


def format_bits(values: Mapping[str, int]) -> str:
    return "".join(f"{k} {values[k] % 2}\n" for k in sorted(values))


def parse_bits(text: str) -> dict[str, int]:
    out = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2 or parts[1] not in ("0", "1"):
            raise PlabicError(f"line {lineno}: expected '<id> 0|1'")
        if parts[0] in out:
            raise PlabicError(f"line {lineno}: duplicate id {parts[0]}")
        out[parts[0]] = int(parts[1])
    return out
