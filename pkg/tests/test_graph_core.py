from fractions import Fraction as F

import pytest

from plabic import catalog
from plabic.graph_core import (
    BLACK,
    WHITE,
    DegenerateFrameError,
    Edge,
    P,
    PlabicError,
    Q,
    UnknownIdError,
    Vertex,
    almost_horizontal_frame,
    choose_gauge_direction,
    enumerate_perfect_orientations,
    euler_counts_hold,
    face_count,
    faces,
    graph_matroid,
    make_frame,
    make_network,
    reorient_to_base,
    validate_network,
    winding,
)
from plabic.le_networks import le_network_of


def test_rational_coercion_rejects_floats():
    assert Q(3) == F(3)
    assert Q("2/7") == F(2, 7)
    with pytest.raises(TypeError):
        Q(0.5)


def test_glick_is_valid_with_expected_invariants():
    net = catalog.glick()
    rep = validate_network(net)
    assert rep.ok, str(rep)
    assert net.n == 4 and net.k == 2 and net.base == (3, 4)
    assert set(net.sinks) == {1, 2}


def test_unknown_ids_raise_domain_error():
    net = catalog.glick()
    with pytest.raises(UnknownIdError):
        net.vertex("nope")
    with pytest.raises(PlabicError):
        net.edge("nope")


def _two_vertex_net(**overrides):
    verts = [
        Vertex("b1", BLACK, "boundary", P(0, 0), 1),
        Vertex("b2", BLACK, "boundary", P(2, 0), 2),
        Vertex("U", WHITE, "internal", P(1, 1)),
    ]
    edges = [Edge("e1", "b1", "U"), Edge("e2", "U", "b2")]
    return make_network(overrides.get("verts", verts), overrides.get("edges", edges))


def test_bivalent_chain_is_valid():
    assert validate_network(_two_vertex_net()).ok


def test_nonpositive_weight_is_reported():
    net = _two_vertex_net(edges=[Edge("e1", "b1", "U", F(-1)), Edge("e2", "U", "b2")])
    assert "weight" in validate_network(net).codes()


def test_white_vertex_with_two_incoming_edges_is_not_perfect():
    verts = [
        Vertex("b1", BLACK, "boundary", P(0, 0), 1),
        Vertex("b2", BLACK, "boundary", P(1, 0), 2),
        Vertex("b3", BLACK, "boundary", P(2, 0), 3),
        Vertex("U", WHITE, "internal", P(1, 1)),
    ]
    edges = [Edge("e1", "b1", "U"), Edge("e2", "b2", "U"), Edge("e3", "U", "b3")]
    rep = validate_network(make_network(verts, edges))
    assert not rep.ok
    assert rep.codes() & {"perfectness", "color_rule"}


def test_crossing_edges_break_planarity():
    verts = [
        Vertex("b1", BLACK, "boundary", P(0, 0), 1),
        Vertex("b2", BLACK, "boundary", P(1, 0), 2),
        Vertex("b3", BLACK, "boundary", P(2, 0), 3),
        Vertex("b4", BLACK, "boundary", P(3, 0), 4),
        Vertex("U", WHITE, "internal", P(1, 2)),
        Vertex("V", WHITE, "internal", P(2, 2)),
    ]
    edges = [Edge("a", "b1", "U"), Edge("b", "U", "b3"), Edge("c", "b2", "V"), Edge("d", "V", "b4")]
    rep = validate_network(make_network(verts, edges))
    assert "planarity" in rep.codes()


def test_glick_orientations_and_matroid():
    net = catalog.glick()
    orients = enumerate_perfect_orientations(net)
    bases = {o.base for o in orients}
    m = graph_matroid(net)
    assert bases == set(m.bases)
    assert set(m.bases) == {(1, 3), (1, 4), (2, 3), (2, 4), (3, 4)}
    assert m.satisfies_exchange()


def test_reorient_to_base_reaches_every_basis():
    net = catalog.glick()
    for b in graph_matroid(net).bases:
        new, steps = reorient_to_base(net, b)
        assert new.base == b
        assert validate_network(new).ok
        assert all(s.kind in ("path", "cycle") for s in steps)


def test_top_cell_euler_counts():
    for k, n in [(1, 3), (2, 4), (2, 5)]:
        net = le_network_of(k, n)
        assert validate_network(net).ok
        assert euler_counts_hold(net)
        assert face_count(net) == len(faces(net))


def test_winding_of_turns():
    l = P(1, 0)
    # counterclockwise turn sweeping through l
    assert winding(P(1, -1), P(1, 1), l) == 1
    # the same turn clockwise
    assert winding(P(1, 1), P(1, -1), l) == -1
    # a turn that does not sweep through l
    assert winding(P(1, 1), P(1, 2), l) == 0


def test_winding_is_antisymmetric_under_reflection():
    l = P(0, 1)
    for a, b in [(P(1, 2), P(-1, 1)), (P(-2, -1), P(3, 1)), (P(1, -3), P(-1, -1))]:
        ref = lambda p: P(-p.x, p.y)
        assert winding(ref(a), ref(b), ref(l)) == -winding(a, b, l)


def test_frame_rejects_rays_through_vertices():
    net = catalog.glick()
    # a horizontal ray runs along the boundary line
    with pytest.raises(DegenerateFrameError):
        make_frame(net, P(1, 0))


def test_gauge_choice_helpers_return_valid_frames():
    net = catalog.glick()
    for fr in (choose_gauge_direction(net), almost_horizontal_frame(net), almost_horizontal_frame(net, -1)):
        assert set(fr.crossings) == {e.id for e in net.edges}
        assert fr.direction.y > 0
