"""Le-diagrams, Le-tableaux and their canonical trivalent bipartite networks.

Boxes use ship-battle indexing: ``B[i, j]`` pairs a pivot ``i`` with a larger
non-pivot ``j``.  In the drawn Young diagram columns run with ``j``
decreasing from left to right, and that is also the order of characters in
the text format.

The network is laid out mirrored: box ``B[i, j]`` sits above boundary vertex
``b_j`` so that labels increase left to right along ``y = 0``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

from .graph_core import (
    BLACK,
    BOUNDARY,
    INTERNAL,
    WHITE,
    Edge,
    P,
    PlabicError,
    PlabicNetwork,
    Q,
    Vertex,
    make_network,
)

DELTA = Fraction(1, 8)


def pivots_of_shape(shape: Sequence[int], k: int, n: int) -> tuple[int, ...]:
    """Pivot labels read off the south-east boundary path, NE corner to SW corner."""
    shape = list(shape) + [0] * (k - len(shape))
    if len(shape) != k or any(a < b for a, b in zip(shape, shape[1:])) or (shape and shape[0] > n - k):
        raise PlabicError(f"shape {shape} does not fit a {k}x{n - k} box")
    label = 0
    x = n - k
    piv = []
    for r in range(k):
        label += x - shape[r]
        x = shape[r]
        label += 1
        piv.append(label)
    return tuple(piv)


def shape_of_pivots(pivots: Sequence[int], n: int) -> tuple[int, ...]:
    piv = sorted(pivots)
    return tuple(sum(1 for j in range(i + 1, n + 1) if j not in piv) for i in piv)


@dataclass(frozen=True)
class LeDiagram:
    k: int
    n: int
    shape: tuple[int, ...]
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "shape", tuple(self.shape) + (0,) * (self.k - len(self.shape)))
        object.__setattr__(self, "rows", tuple(tuple(int(x) for x in r) for r in self.rows))
        if len(self.rows) != self.k:
            raise PlabicError("one filling row per pivot is required")
        for r, lam in zip(self.rows, self.shape):
            if len(r) != lam:
                raise PlabicError("row lengths must match the shape")
            if any(x not in (0, 1) for x in r):
                raise PlabicError("fillings are 0 or 1")
        pivots_of_shape(self.shape, self.k, self.n)

    @property
    def pivots(self) -> tuple[int, ...]:
        return pivots_of_shape(self.shape, self.k, self.n)

    @property
    def nonpivots(self) -> tuple[int, ...]:
        piv = set(self.pivots)
        return tuple(j for j in range(1, self.n + 1) if j not in piv)

    def columns(self, r: int) -> tuple[int, ...]:
        """Non-pivot labels of row ``r`` (0-based) in diagram order, largest first."""
        i = self.pivots[r]
        return tuple(sorted((j for j in self.nonpivots if j > i), reverse=True))

    def boxes(self) -> dict[tuple[int, int], int]:
        out = {}
        for r, i in enumerate(self.pivots):
            for j, x in zip(self.columns(r), self.rows[r]):
                out[(i, j)] = x
        return out

    def filled(self) -> list[tuple[int, int]]:
        return sorted(b for b, x in self.boxes().items() if x)

    @property
    def dim(self) -> int:
        return sum(sum(r) for r in self.rows)

    def violations(self) -> list[tuple[tuple[int, int], tuple[int, int], tuple[int, int]]]:
        """Triples (above, corner, left) breaking the Le-property."""
        box = self.boxes()
        out = []
        for (l, c), x in box.items():
            if x:
                continue
            above = [i for (i, cc), y in box.items() if cc == c and i < l and y]
            left = [j for (ll, j), y in box.items() if ll == l and j > c and y]
            if above and left:
                out.append(((above[0], c), (l, c), (l, left[0])))
        return out

    @property
    def is_le(self) -> bool:
        return not self.violations()

    def is_irreducible(self) -> bool:
        box = self.boxes()
        rows_ok = all(any(box[(i, j)] for j in self.nonpivots if (i, j) in box) for i in self.pivots)
        cols_ok = all(any(box[(i, j)] for i in self.pivots if (i, j) in box) for j in self.nonpivots)
        return rows_ok and cols_ok


@dataclass(frozen=True)
class LeTableau:
    diagram: LeDiagram
    weights: Mapping[tuple[int, int], Fraction]

    def __post_init__(self):
        w = {tuple(b): Q(v) for b, v in dict(self.weights).items()}
        object.__setattr__(self, "weights", w)
        if not self.diagram.is_le:
            raise PlabicError("filling violates the Le-property")
        if set(w) != set(self.diagram.filled()):
            raise PlabicError("one weight per filled box is required")
        if any(v <= 0 for v in w.values()):
            raise PlabicError("tableau weights must be positive")


def unit_tableau(d: LeDiagram) -> LeTableau:
    return LeTableau(d, {b: Fraction(1) for b in d.filled()})


def partitions_in_box(k: int, m: int) -> Iterator[tuple[int, ...]]:
    def rec(r: int, cap: int) -> Iterator[tuple[int, ...]]:
        if r == k:
            yield ()
            return
        for a in range(cap, -1, -1):
            for rest in rec(r + 1, a):
                yield (a,) + rest

    yield from rec(0, m)


def enumerate_le_diagrams(
    k: int, n: int, max_dim: int | None = None, shape: Sequence[int] | None = None
) -> list[LeDiagram]:
    """Every Le-diagram in the k x (n-k) box, optionally of one shape and bounded dimension."""
    if not 0 <= k <= n:
        raise PlabicError("need 0 <= k <= n")
    shapes = [tuple(shape) + (0,) * (k - len(shape))] if shape is not None else list(partitions_in_box(k, n - k))
    out = []
    for sh in shapes:
        cells = sum(sh)
        for bits in itertools.product((0, 1), repeat=cells):
            if max_dim is not None and sum(bits) > max_dim:
                continue
            rows, pos = [], 0
            for lam in sh:
                rows.append(bits[pos:pos + lam])
                pos += lam
            d = LeDiagram(k, n, sh, tuple(rows))
            if d.is_le:
                out.append(d)
    return out


# ---------------------------------------------------------------------------
# the canonical network


def _height(d: LeDiagram, r: int) -> Fraction:
    return Fraction(d.k - r)


def build_le_network(t: LeTableau | LeDiagram) -> PlabicNetwork:
    """Acyclically oriented trivalent bipartite network of a Le-tableau."""
    if isinstance(t, LeDiagram):
        t = unit_tableau(t)
    d = t.diagram
    box = d.boxes()
    piv = d.pivots
    verts: list[Vertex] = [Vertex(f"b{j}", BLACK, BOUNDARY, P(j, 0), j) for j in range(1, d.n + 1)]
    edges: list[Edge] = []
    for r, i in enumerate(piv):
        h = _height(d, r)
        verts.append(Vertex(f"V{i}", WHITE, INTERNAL, P(i, h)))
        edges.append(Edge(f"src{i}", f"b{i}", f"V{i}"))
        prev = f"V{i}"
        for j in sorted(j for j in d.nonpivots if j > i):
            if not box[(i, j)]:
                continue
            verts.append(Vertex(f"K{i}_{j}", BLACK, INTERNAL, P(Fraction(j) - Fraction(1, 4), h - DELTA)))
            verts.append(Vertex(f"W{i}_{j}", WHITE, INTERNAL, P(Fraction(j) + Fraction(1, 4), h + DELTA)))
            edges.append(Edge(f"h{i}_{j}", prev, f"K{i}_{j}", t.weights[(i, j)]))
            edges.append(Edge(f"m{i}_{j}", f"K{i}_{j}", f"W{i}_{j}"))
            below = [l for l in piv if l > i and box.get((l, j))]
            target = f"K{below[0]}_{j}" if below else f"b{j}"
            edges.append(Edge(f"v{i}_{j}", f"W{i}_{j}", target))
            prev = f"W{i}_{j}"
    for j in d.nonpivots:
        if not any(box.get((i, j)) for i in piv):
            verts.append(Vertex(f"L{j}", BLACK, INTERNAL, P(j, Fraction(1, 2))))
            edges.append(Edge(f"lol{j}", f"L{j}", f"b{j}"))
    return make_network(verts, edges)


def le_network_of(k: int, n: int, rows: Sequence[str] | None = None, weights=None) -> PlabicNetwork:
    """Convenience builder; ``rows=None`` gives the top cell of Gr(k, n)."""
    if rows is None:
        m = n - k
        d = LeDiagram(k, n, (m,) * k, tuple((1,) * m for _ in range(k)))
    else:
        d = LeDiagram(k, n, tuple(len(r) for r in rows), tuple(tuple(int(c) for c in r) for r in rows))
    if weights is None:
        return build_le_network(d)
    return build_le_network(LeTableau(d, weights))


def _parse_box_id(eid: str) -> tuple[int, int]:
    a, b = eid[1:].split("_")
    return int(a), int(b)


def master_signature(net: PlabicNetwork, diagram: LeDiagram, rule: str = "column") -> dict[str, int]:
    """The combinatorial signature read off the Le-diagram, keyed by edge id.

    Rows are numbered from the top starting at 1.  A vertical edge between
    boxes of rows ``i`` and ``l`` gets ``l - i``.  A vertical edge from box
    B[i, j] down to ``b_j`` gets the number of diagram boxes below B[i, j] in
    its column (``rule="column"``); ``rule="literal"`` uses ``k - i``, which
    agrees whenever column ``j`` has full height.
    """
    piv = diagram.pivots
    row = {i: r + 1 for r, i in enumerate(piv)}
    expected = build_le_network(diagram)
    if {e.id for e in expected.edges} != {e.id for e in net.edges}:
        raise PlabicError("not the Le-network of this diagram")
    if rule not in ("column", "literal"):
        raise PlabicError(f"unknown rule {rule!r}")
    out: dict[str, int] = {}
    for e in net.edges:
        eid = e.id
        if eid.startswith("src"):
            out[eid] = 1
        elif eid.startswith("h"):
            out[eid] = 0
        elif eid.startswith("m"):
            out[eid] = 1
        elif eid.startswith("lol"):
            out[eid] = 0
        elif eid.startswith("v"):
            i, j = _parse_box_id(eid)
            head = expected.edge(eid).head
            if head.startswith("K"):
                l, _ = _parse_box_id(head)
                out[eid] = (row[l] - row[i]) % 2
            elif rule == "literal":
                out[eid] = (diagram.k - row[i]) % 2
            else:
                out[eid] = sum(1 for l in piv if i < l < j) % 2
        else:
            raise PlabicError(f"unexpected edge {eid} in a Le-network")
    return out


# ---------------------------------------------------------------------------
# text format


def format_diagram(d: LeDiagram, weights: Mapping[tuple[int, int], Fraction] | None = None) -> str:
    """Header 'k n', one filling row per pivot ('-' when empty), then optional weight rows."""
    lines = [f"{d.k} {d.n}"]
    lines += ["".join(str(x) for x in r) or "-" for r in d.rows]
    if weights is not None:
        for r, i in enumerate(d.pivots):
            ws = [str(Q(weights[(i, j)])) for j, x in zip(d.columns(r), d.rows[r]) if x]
            lines.append(" ".join(ws) or "-")
    return "\n".join(lines) + "\n"


def parse_diagram(text: str) -> LeDiagram | LeTableau:
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise PlabicError("empty Le-diagram document")
    try:
        k, n = (int(x) for x in lines[0].split())
    except ValueError as exc:
        raise PlabicError("first line must be 'k n'") from exc
    rest = ["" if ln == "-" else ln for ln in lines[1:]]
    if len(rest) < k:
        raise PlabicError(f"expected {k} filling rows")
    rows = rest[:k]
    for ln in rows:
        if any(c not in "01" for c in ln):
            raise PlabicError(f"filling rows use 0 and 1 only: {ln!r}")
    d = LeDiagram(k, n, tuple(len(r) for r in rows), tuple(tuple(int(c) for c in r) for r in rows))
    wl = rest[k:]
    if not wl:
        return d
    if len(wl) != k:
        raise PlabicError(f"expected {k} weight rows")
    weights = {}
    for r, i in enumerate(d.pivots):
        cols = [j for j, x in zip(d.columns(r), d.rows[r]) if x]
        vals = wl[r].split()
        if len(vals) != len(cols):
            raise PlabicError(f"row {r + 1}: expected {len(cols)} weights")
        for j, v in zip(cols, vals):
            try:
                weights[(i, j)] = Q(Fraction(v))
            except (ValueError, ZeroDivisionError) as exc:
                raise PlabicError(f"row {r + 1}: malformed weight {v!r}") from exc
    return LeTableau(d, weights)
