"""Small named networks and deterministic random network generators."""
from __future__ import annotations

import random
from fractions import Fraction
from typing import Iterator

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
    Q,
    Vertex,
    candidate_directions,
    enumerate_perfect_orientations,
    frame_violations,
    make_frame,
    make_network,
    validate_network,
)
from .le_networks import LeTableau, build_le_network, enumerate_le_diagrams

GLICK_DIRECTION = P(1, 1)
EXAMPLE31_DIRECTION = P(1, 2)
EXAMPLE31_PATH = ("u2", "d", "u", "w", "up", "y1", "u1")


def _bverts(xs) -> list[Vertex]:
    return [Vertex(f"b{i}", BLACK, BOUNDARY, P(x, 0), i) for i, x in enumerate(xs, start=1)]


def glick(a=2, b=3, c=5) -> PlabicNetwork:
    """Two internal vertices, four boundary vertices; sources b3, b4."""
    verts = _bverts([0, 1, 2, 3]) + [
        Vertex("U", WHITE, INTERNAL, P(Fraction(1, 2), Fraction(3, 2))),
        Vertex("V", BLACK, INTERNAL, P(Fraction(3, 2), 1)),
    ]
    edges = [
        Edge("e1", "U", "b1", Q(b)),
        Edge("e2", "U", "b2", Q(c)),
        Edge("e3", "b3", "V"),
        Edge("e4", "b4", "V", Q(a)),
        Edge("e5", "V", "U"),
    ]
    return make_network(verts, edges)


def glick_frame(net: PlabicNetwork) -> GaugeFrame:
    return make_frame(net, GLICK_DIRECTION)


def _example31_graph(weights: dict[str, Fraction]) -> PlabicNetwork:
    pos = {
        "D": P(8, 2),
        "E": P(7, 5),
        "B": P(3, Fraction(7, 2)),
        "C": P(Fraction(9, 2), Fraction(5, 2)),
        "Y": P(Fraction(7, 2), 1),
        "Z": P(Fraction(-3, 2), 2),
    }
    color = {"D": BLACK, "E": WHITE, "B": BLACK, "C": WHITE, "Y": WHITE, "Z": BLACK}
    verts = _bverts([0, 4]) + [Vertex(v, color[v], INTERNAL, pos[v]) for v in pos]
    spec = [
        ("u2", "b2", "D"), ("d", "D", "E"), ("u", "E", "B"), ("x", "E", "Z"), ("w", "B", "C"),
        ("up", "C", "Y"), ("c2", "C", "D"), ("v", "Y", "B"), ("y1", "Y", "Z"), ("u1", "Z", "b1"),
    ]
    edges = [Edge(eid, t, h, weights.get(eid, Fraction(1))) for eid, t, h in spec]
    return make_network(verts, edges)


def example31(p=2, q=3) -> PlabicNetwork:
    """Network with two cycles (weights p and q); null vectors on u, v, w when p = q."""
    return _example31_graph({"up": Q(p), "c2": Q(q)})


def example31_frame(net: PlabicNetwork) -> GaugeFrame:
    return make_frame(net, EXAMPLE31_DIRECTION)


def zero_vector_right(p=2, q=3, s=1) -> PlabicNetwork:
    """Same graph as ``example31`` with weights that remove every null vector.

    The weights of x, y1 and u2 are fixed by requiring the boundary matrix
    to stay ((1+2p)/(1+p+q), 1) while the edge x carries the free weight s.
    """
    p, q, s = Q(p), Q(q), Q(s)
    return _example31_graph({
        "up": p,
        "c2": q,
        "x": s,
        "y1": (1 + p + q * s) / p,
        "u2": (1 + 2 * p) / (1 + p + s * (1 + p + q)),
    })


def le_top_cell(k: int, n: int, weights=None) -> PlabicNetwork:
    from .le_networks import le_network_of

    return le_network_of(k, n, None, weights)


# ---------------------------------------------------------------------------
# random generators


def random_weight(rng: random.Random, mixed: bool = True) -> Fraction:
    """A positive rational with small numerator and denominator, optionally spread over scales."""
    w = Fraction(rng.randint(1, 9), rng.randint(1, 9))
    if mixed:
        w *= Fraction(10) ** rng.choice((-2, -1, 0, 0, 0, 1, 2))
    return w


def random_weights(net: PlabicNetwork, rng: random.Random, mixed: bool = True) -> PlabicNetwork:
    return net.with_weights({e.id: random_weight(rng, mixed) for e in net.edges})


def random_frame(net: PlabicNetwork, rng: random.Random, limit: int = 8) -> GaugeFrame:
    cands = [d for d in candidate_directions(limit) if not frame_violations(net, d)]
    rng.shuffle(cands)
    for d in cands:
        try:
            return make_frame(net, d)
        except PlabicError:
            continue
    raise PlabicError("no valid frame among candidates")


def jitter(net: PlabicNetwork, rng: random.Random, scale: Fraction = Fraction(1, 20), tries: int = 30) -> PlabicNetwork:
    """Move internal vertices slightly, keeping the embedding valid."""
    for _ in range(tries):
        pos = {}
        for vid in net.internal:
            p = net.position(vid)
            pos[vid] = P(p.x + scale * Fraction(rng.randint(-10, 10), 10), p.y + scale * Fraction(rng.randint(-10, 10), 10))
        cand = net.with_positions(pos)
        if validate_network(cand).ok:
            return cand
    return net


def le_pool(max_k: int = 3, max_n: int = 6, max_internal: int = 12) -> list:
    out = []
    for n in range(2, max_n + 1):
        for k in range(1, min(max_k, n - 1) + 1):
            for d in enumerate_le_diagrams(k, n):
                if d.dim == 0:
                    continue
                net = build_le_network(d)
                if len(net.internal) <= max_internal:
                    out.append(d)
    return out


def random_networks(count: int, seed: int = 0, max_internal: int = 12, max_cycles: int = 4) -> Iterator[tuple[PlabicNetwork, GaugeFrame]]:
    """Valid oriented networks with random weights, orientation, positions and frame.

    Instances come from Le-networks reoriented to a random base (which may
    create directed cycles), plus the two worked examples.
    """
    from .flows import simple_cycles

    rng = random.Random(seed)
    pool = le_pool(max_internal=max_internal)
    made = 0
    while made < count:
        pick = rng.random()
        if pick < 0.1:
            net = example31(random_weight(rng), random_weight(rng))
        elif pick < 0.15:
            net = glick(random_weight(rng), random_weight(rng), random_weight(rng))
        else:
            d = pool[rng.randrange(len(pool))]
            net = build_le_network(LeTableau(d, {b: random_weight(rng) for b in d.filled()}))
            orients = enumerate_perfect_orientations(net)
            net = orients[rng.randrange(len(orients))].apply(net)
        net = random_weights(net, rng)
        if rng.random() < 0.5:
            net = jitter(net, rng)
        if len(net.internal) > max_internal or len(simple_cycles(net)) > max_cycles:
            continue
        yield net, random_frame(net, rng)
        made += 1


# ---------------------------------------------------------------------------
# small sites for moves and reductions


def _net(bxs, internal, spec, weights=None) -> PlabicNetwork:
    weights = weights or {}
    verts = _bverts(bxs) + [Vertex(v, c, INTERNAL, p) for v, (c, p) in internal.items()]
    edges = [Edge(eid, t, h, Q(weights.get(eid, 1))) for eid, t, h in spec]
    return make_network(verts, edges)


def square_network(weights=None) -> PlabicNetwork:
    """An oriented square W, Z, Y, X with one leg at each corner; sources b1, b4."""
    F = Fraction
    internal = {
        "W": (WHITE, P(1, F(11, 5))),
        "Z": (BLACK, P(2, F(21, 10))),
        "Y": (WHITE, P(F(21, 10), 1)),
        "X": (BLACK, P(F(9, 10), F(11, 10))),
    }
    spec = [
        ("e1", "b1", "W"), ("e2", "b4", "Z"), ("e3", "X", "b2"), ("e4", "Y", "b3"),
        ("h1", "W", "Z"), ("h2", "W", "X"), ("h3", "Z", "Y"), ("h4", "Y", "X"),
    ]
    return _net([0, 1, 2, 3], internal, spec, weights)


def flip_pair_network(color: str = WHITE, weights=None) -> PlabicNetwork:
    """Two same-colored trivalent vertices joined by a short unit edge, four legs."""
    F = Fraction
    internal = {"u": (color, P(F(5, 2), F(3, 2))), "v": (color, P(F(7, 2), F(8, 5)))}
    if color == WHITE:
        spec = [("a", "b1", "u"), ("b", "u", "b2"), ("e0", "u", "v"), ("c", "v", "b3"), ("d", "v", "b4")]
    else:
        spec = [("a", "u", "b1"), ("b", "b2", "u"), ("e0", "v", "u"), ("c", "b3", "v"), ("d", "b4", "v")]
    return _net([0, 2, 4, 6], internal, spec, weights)


def parallel_network(weights=None) -> PlabicNetwork:
    """White u and black v joined by a direct edge and by a chain through m."""
    F = Fraction
    internal = {
        "u": (WHITE, P(1, 1)),
        "m": (WHITE, P(2, F(21, 10))),
        "v": (BLACK, P(3, F(11, 10))),
    }
    spec = [("e1", "b1", "u"), ("p", "u", "v"), ("q1", "u", "m"), ("q2", "m", "v"), ("e4", "v", "b2")]
    return _net([0, 4], internal, spec, weights)


def leaf_network(kind: str = "source", weights=None) -> PlabicNetwork:
    """A leaf hanging on a trivalent vertex.

    ``source``: black leaf L feeding white V1; ``sink``: white leaf L fed by
    black V1.
    """
    F = Fraction
    if kind == "source":
        internal = {
            "L": (BLACK, P(1, F(7, 2))),
            "V1": (WHITE, P(F(11, 10), 2)),
            "Y": (BLACK, P(F(5, 2), 1)),
        }
        spec = [("e1", "L", "V1"), ("e2", "V1", "b1"), ("e3", "V1", "Y"), ("s", "b3", "Y"), ("t", "Y", "b2")]
        return _net([0, 2, 4], internal, spec, weights)
    internal = {
        "X": (WHITE, P(1, 1)),
        "V1": (BLACK, P(3, 2)),
        "L": (WHITE, P(F(31, 10), F(7, 2))),
    }
    spec = [("s", "b1", "X"), ("t", "X", "b2"), ("e2", "X", "V1"), ("e3", "b3", "V1"), ("e1", "V1", "L")]
    return _net([0, 2, 4], internal, spec, weights)


def dipole_network(weights=None) -> PlabicNetwork:
    """The two-vertex example network plus an isolated black-white dipole."""
    base = glick()
    F = Fraction
    verts = list(base.vertices) + [
        Vertex("du", BLACK, INTERNAL, P(F(5, 2), F(5, 2))),
        Vertex("dv", WHITE, INTERNAL, P(F(7, 2), F(13, 5))),
    ]
    edges = list(base.edges) + [Edge("e0", "du", "dv")]
    net = make_network(verts, edges)
    return net.with_weights({k: Q(v) for k, v in (weights or {}).items()})
