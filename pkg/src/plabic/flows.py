"""Edge vectors on oriented networks.

Three independent routes compute the same system of edge vectors:

* the rational flow formula (edge flows over conservative flows),
* the vertex linear system solved exactly,
* for acyclic orientations, direct enumeration of directed paths.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from . import linalg
from .graph_core import (
    GaugeFrame,
    PlabicError,
    PlabicNetwork,
    choose_gauge_direction,
    make_frame,
    winding_pair,
)

Vector = tuple[Fraction, ...]


def unit(n: int, j: int) -> Vector:
    return tuple(Fraction(int(i == j)) for i in range(1, n + 1))


def zero(n: int) -> Vector:
    return tuple(Fraction(0) for _ in range(n))


def vadd(a: Sequence[Fraction], b: Sequence[Fraction]) -> Vector:
    return tuple(x + y for x, y in zip(a, b))


def vscale(t, a: Sequence[Fraction]) -> Vector:
    return tuple(t * x for x in a)


def is_zero(a: Sequence[Fraction]) -> bool:
    return all(x == 0 for x in a)


@dataclass(frozen=True)
class ConservativeFlow:
    edges: frozenset[str]
    cycles: tuple[tuple[str, ...], ...]
    weight: Fraction


@dataclass(frozen=True)
class EdgeFlow:
    walk: tuple[str, ...]
    cycles: ConservativeFlow
    weight: Fraction
    wind: int
    int: int

    @property
    def edges(self) -> frozenset[str]:
        return frozenset(self.walk) | self.cycles.edges

    @property
    def sign(self) -> int:
        return -1 if (self.wind + self.int) % 2 else 1


@dataclass(frozen=True)
class EdgeVectorField:
    vectors: Mapping[str, Vector]
    base: tuple[int, ...]
    direction: object = None

    def __getitem__(self, eid: str) -> Vector:
        return self.vectors[eid]

    def same_values(self, other: "EdgeVectorField") -> bool:
        return dict(self.vectors) == dict(other.vectors)


@dataclass(frozen=True)
class BoundaryMatrix:
    rows: tuple[Vector, ...]
    base: tuple[int, ...]

    @property
    def k(self) -> int:
        return len(self.rows)

    @property
    def n(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    def minors(self) -> dict[tuple[int, ...], Fraction]:
        return linalg.maximal_minors([list(r) for r in self.rows], self.n)


def _frame(net: PlabicNetwork, frame: GaugeFrame | None) -> GaugeFrame:
    if frame is None:
        return choose_gauge_direction(net)
    if frame.sources != net.base:
        return make_frame(net, frame.direction)
    return frame


# ---------------------------------------------------------------------------
# cycles and conservative flows


def simple_cycles(net: PlabicNetwork) -> list[tuple[str, ...]]:
    """Every simple directed cycle, as an edge tuple starting at its least vertex."""
    order = {vid: i for i, vid in enumerate(sorted(net.internal))}
    cycles: list[tuple[str, ...]] = []
    for start in sorted(net.internal):
        s_idx = order[start]
        path: list[str] = []
        on_path = {start}

        def dfs(v: str) -> None:
            for eid in net.out_edges(v):
                w = net.edge(eid).head
                if w == start:
                    cycles.append(tuple(path + [eid]))
                    continue
                if w not in order or order[w] <= s_idx or w in on_path:
                    continue
                on_path.add(w)
                path.append(eid)
                dfs(w)
                path.pop()
                on_path.discard(w)

        dfs(start)
    return cycles


def cycle_vertices(net: PlabicNetwork, cycle: Sequence[str]) -> frozenset[str]:
    return frozenset(net.edge(e).tail for e in cycle)


def _product(net: PlabicNetwork, eids: Iterable[str]) -> Fraction:
    w = Fraction(1)
    for e in eids:
        w *= net.weight(e)
    return w


def conservative_flows(net: PlabicNetwork, cycles: list[tuple[str, ...]] | None = None) -> list[ConservativeFlow]:
    """All unions of pairwise vertex-disjoint simple cycles, the empty one included."""
    cycles = simple_cycles(net) if cycles is None else cycles
    verts = [cycle_vertices(net, c) for c in cycles]
    out: list[ConservativeFlow] = []

    def rec(i: int, chosen: list[int], used: frozenset[str]) -> None:
        if i == len(cycles):
            cs = tuple(cycles[c] for c in chosen)
            edges = frozenset(e for c in cs for e in c)
            out.append(ConservativeFlow(edges, cs, _product(net, edges)))
            return
        rec(i + 1, chosen, used)
        if not (verts[i] & used):
            rec(i + 1, chosen + [i], used | verts[i])

    rec(0, [], frozenset())
    return out


def partition_function(net: PlabicNetwork) -> Fraction:
    """Sum of the weights of all conservative flows."""
    return sum((c.weight for c in conservative_flows(net)), Fraction(0))


# ---------------------------------------------------------------------------
# walks and edge flows


def loop_erase(walk: Sequence[str]) -> list[str]:
    """Recursively remove the first edge loop of a walk."""
    walk = list(walk)
    while True:
        first_seen: dict[str, int] = {}
        cut = None
        for s, e in enumerate(walk):
            if e in first_seen:
                cut = (first_seen[e], s)
                break
            first_seen[e] = s
        if cut is None:
            return walk
        l, s = cut
        walk = walk[:l] + walk[s:]


def loop_erased_walks(net: PlabicNetwork, eid: str, j: int) -> list[tuple[str, ...]]:
    """Edge-simple directed walks starting with ``eid`` and ending at sink b_j."""
    target = net.boundary_vertex(j)
    out: list[tuple[str, ...]] = []
    path = [eid]
    used = {eid}

    def dfs(v: str) -> None:
        if v == target:
            out.append(tuple(path))
            return
        if net.vertex(v).is_boundary:
            return
        for f in net.out_edges(v):
            if f in used:
                continue
            used.add(f)
            path.append(f)
            dfs(net.edge(f).head)
            path.pop()
            used.discard(f)

    dfs(net.edge(eid).head)
    return out


@dataclass
class FlowStats:
    duplicates: int = 0


STATS = FlowStats()


def edge_flows(
    net: PlabicNetwork,
    frame: GaugeFrame,
    eid: str,
    j: int,
    cons: list[ConservativeFlow] | None = None,
) -> list[EdgeFlow]:
    """Edge flows from ``eid`` to b_j, deduplicated by edge set."""
    if j in net.base:
        raise PlabicError(f"b{j} is not a sink")
    cons = conservative_flows(net) if cons is None else cons
    seen: dict[frozenset[str], EdgeFlow] = {}
    for walk in loop_erased_walks(net, eid, j):
        wset = frozenset(walk)
        wind = sum(winding_pair(net, a, b, frame) for a, b in zip(walk, walk[1:]))
        cross = sum(frame.crossings[e] for e in walk)
        wweight = _product(net, walk)
        for c in cons:
            if c.edges & wset:
                continue
            f = EdgeFlow(walk, c, wweight * c.weight, wind, cross)
            key = f.edges
            if key in seen:
                STATS.duplicates += 1
                continue
            seen[key] = f
    return list(seen.values())


def edge_vector_field(net: PlabicNetwork, frame: GaugeFrame | None = None) -> EdgeVectorField:
    """Edge vectors from the rational flow formula (canonical sink vectors)."""
    frame = _frame(net, frame)
    cons = conservative_flows(net)
    denom = sum((c.weight for c in cons), Fraction(0))
    n = net.n
    vectors: dict[str, Vector] = {}
    for e in net.edges:
        comps = []
        for j in range(1, n + 1):
            if j in net.base:
                comps.append(Fraction(0))
                continue
            num = sum((f.sign * f.weight for f in edge_flows(net, frame, e.id, j, cons)), Fraction(0))
            comps.append(num / denom)
        vectors[e.id] = tuple(comps)
    return EdgeVectorField(vectors, net.base, frame.direction)


# ---------------------------------------------------------------------------
# the vertex linear system


@dataclass(frozen=True)
class LinearSystem:
    unknowns: tuple[str, ...]
    matrix: tuple[tuple[Fraction, ...], ...]
    rhs: tuple[Vector, ...]


def build_linear_system(
    net: PlabicNetwork,
    frame: GaugeFrame,
    sink_vectors: Mapping[int, Sequence[Fraction]] | None = None,
) -> LinearSystem:
    n = net.n
    if sink_vectors is None:
        sink_vectors = {j: unit(n, j) for j in net.sinks}
    known: dict[str, Vector] = {}
    unknowns: list[str] = []
    for e in net.edges:
        j = net.sink_of_edge(e.id)
        if j is not None:
            sgn = -1 if frame.crossings[e.id] % 2 else 1
            known[e.id] = vscale(sgn * e.weight, sink_vectors[j])
        else:
            unknowns.append(e.id)
    idx = {e: i for i, e in enumerate(unknowns)}
    m = len(unknowns)
    rows = []
    rhs = []
    for e in unknowns:
        row = [Fraction(0)] * m
        row[idx[e]] += 1
        b = zero(n)
        head = net.edge(e).head
        w = net.weight(e)
        for f in net.out_edges(head):
            sgn = -1 if (frame.crossings[e] + winding_pair(net, e, f, frame)) % 2 else 1
            coef = sgn * w
            if f in idx:
                row[idx[f]] -= coef
            else:
                b = vadd(b, vscale(coef, known[f]))
        rows.append(tuple(row))
        rhs.append(b)
    return LinearSystem(tuple(unknowns), tuple(rows), tuple(rhs))


def linear_system_oracle(
    net: PlabicNetwork,
    frame: GaugeFrame | None = None,
    sink_vectors: Mapping[int, Sequence[Fraction]] | None = None,
) -> tuple[EdgeVectorField, Fraction]:
    """Solve the vertex relations exactly; returns the field and det M."""
    frame = _frame(net, frame)
    n = net.n
    if sink_vectors is None:
        sink_vectors = {j: unit(n, j) for j in net.sinks}
    sysm = build_linear_system(net, frame, sink_vectors)
    mat = [list(r) for r in sysm.matrix]
    cols = [[sysm.rhs[r][c] for c in range(n)] for r in range(len(sysm.unknowns))]
    d, sol = linalg.det_and_solve(mat, cols)
    if d == 0:
        raise PlabicError("internal error: singular vertex system")
    vectors: dict[str, Vector] = {}
    for i, e in enumerate(sysm.unknowns):
        vectors[e] = tuple(sol[i])
    for e in net.edges:
        if e.id not in vectors:
            j = net.sink_of_edge(e.id)
            sgn = -1 if frame.crossings[e.id] % 2 else 1
            vectors[e.id] = vscale(sgn * e.weight, sink_vectors[j])
    ordered = {e.id: vectors[e.id] for e in net.edges}
    return EdgeVectorField(ordered, net.base, frame.direction), d


def is_acyclic(net: PlabicNetwork) -> bool:
    indeg = {v.id: len(net.in_edges(v.id)) for v in net.vertices}
    stack = [v for v, d in indeg.items() if d == 0]
    count = 0
    while stack:
        v = stack.pop()
        count += 1
        for e in net.out_edges(v):
            h = net.edge(e).head
            indeg[h] -= 1
            if indeg[h] == 0:
                stack.append(h)
    return count == len(indeg)


def acyclic_oracle(net: PlabicNetwork, frame: GaugeFrame | None = None) -> EdgeVectorField:
    """Edge vectors by summing over every directed path (acyclic orientations only)."""
    if not is_acyclic(net):
        raise PlabicError("oracle requires acyclic orientation")
    frame = _frame(net, frame)
    n = net.n
    vectors: dict[str, Vector] = {}
    for e in net.edges:
        comps = [Fraction(0)] * n

        def walk(path: list[str], sign: int, weight: Fraction) -> None:
            last = path[-1]
            head = net.edge(last).head
            if net.vertex(head).is_boundary:
                j = net.vertex(head).boundary_index
                comps[j - 1] += sign * weight
                return
            for f in net.out_edges(head):
                s = sign
                if (winding_pair(net, last, f, frame) + frame.crossings[f]) % 2:
                    s = -s
                walk(path + [f], s, weight * net.weight(f))

        s0 = -1 if frame.crossings[e.id] % 2 else 1
        walk([e.id], s0, net.weight(e.id))
        vectors[e.id] = tuple(comps)
    return EdgeVectorField(vectors, net.base, frame.direction)


# ---------------------------------------------------------------------------
# boundary measurements


def source_edge(net: PlabicNetwork, i: int) -> str | None:
    return net.boundary_edge(i)


def boundary_matrix(
    net: PlabicNetwork,
    frame: GaugeFrame | None = None,
    field: EdgeVectorField | None = None,
    method: str = "linear",
) -> BoundaryMatrix:
    """Row r is E at the edge of source i_r plus the i_r-th basis vector."""
    frame = _frame(net, frame)
    if field is None:
        if method == "linear":
            field, _ = linear_system_oracle(net, frame)
        elif method == "flows":
            field = edge_vector_field(net, frame)
        else:
            raise ValueError(f"unknown method {method!r}")
    rows = []
    for i in net.base:
        e = source_edge(net, i)
        rows.append(vadd(field[e], unit(net.n, i)))
    return BoundaryMatrix(tuple(rows), net.base)


def sources_between(base: Sequence[int], i: int, j: int) -> int:
    lo, hi = min(i, j), max(i, j)
    return sum(1 for s in base if lo < s < hi)


def boundary_matrix_from_flows(net: PlabicNetwork) -> BoundaryMatrix:
    """Unsigned flow sums with the sign fixed by the number of sources in between."""
    cons = conservative_flows(net)
    denom = sum((c.weight for c in cons), Fraction(0))
    frame = choose_gauge_direction(net)
    rows = []
    for i in net.base:
        e = source_edge(net, i)
        row = []
        for j in range(1, net.n + 1):
            if j in net.base:
                row.append(Fraction(int(i == j)))
                continue
            tot = sum((f.weight for f in edge_flows(net, frame, e, j, cons)), Fraction(0))
            sgn = -1 if sources_between(net.base, i, j) % 2 else 1
            row.append(sgn * tot / denom)
        rows.append(tuple(row))
    return BoundaryMatrix(tuple(rows), net.base)


@dataclass(frozen=True)
class NullReport:
    edges: frozenset[str]
    components: tuple[frozenset[str], ...] = field(default=())


def null_edges(field_: EdgeVectorField, net: PlabicNetwork | None = None) -> NullReport:
    """Edges with identically zero vector, grouped into connected pieces when ``net`` is given."""
    nulls = frozenset(e for e, v in field_.vectors.items() if is_zero(v))
    if net is None:
        return NullReport(nulls, ())
    remaining = set(nulls)
    comps = []
    while remaining:
        seed = min(remaining)
        comp = {seed}
        stack = [seed]
        remaining.discard(seed)
        while stack:
            e = stack.pop()
            ends = {net.edge(e).tail, net.edge(e).head}
            for f in list(remaining):
                if ends & {net.edge(f).tail, net.edge(f).head}:
                    remaining.discard(f)
                    comp.add(f)
                    stack.append(f)
        comps.append(frozenset(comp))
    return NullReport(nulls, tuple(sorted(comps, key=sorted)))
