import itertools
from fractions import Fraction as F

import pytest

from plabic import catalog
from plabic.flows import boundary_matrix, linear_system_oracle
from plabic.graph_core import PlabicError
from plabic.signatures import (
    apply_vertex_gauge,
    check_tnn,
    edge_field_from_half_edges,
    falsify_signature,
    format_bits,
    geometric_signature,
    half_edge_det,
    half_edge_solve,
    half_edge_x_solve,
    is_geometric,
    parse_bits,
    sample_weights,
    signatures_equivalent,
    x_to_edge_field,
    x_to_z,
)

# (+,+,+,-,-) on e1..e5, with bit 1 for a minus sign
GLICK_PRINTED = {"e1": 0, "e2": 0, "e3": 0, "e4": 1, "e5": 1}


def test_glick_printed_signature_is_geometric():
    net = catalog.glick()
    eq = signatures_equivalent(net, geometric_signature(net, catalog.glick_frame(net)), GLICK_PRINTED)
    assert eq and set(eq.eta) == set(net.internal)


def test_glick_half_edge_chain():
    a, b, c = F(2), F(3), F(5)
    net = catalog.glick(a, b, c)
    z = half_edge_solve(net, GLICK_PRINTED).z
    assert z[("b1", "e1")] == (1, 0, 0, 0)
    assert z[("b2", "e2")] == (0, 1, 0, 0)
    assert z[("U", "e1")] == (b, 0, 0, 0)
    assert z[("U", "e2")] == (0, c, 0, 0)
    assert z[("U", "e5")] == (-b, -c, 0, 0)
    for h in [("b3", "e3"), ("V", "e3"), ("V", "e4"), ("V", "e5")]:
        assert z[h] == (b, c, 0, 0)
    assert z[("b4", "e4")] == (-a * b, -a * c, 0, 0)


def test_geometric_half_edges_reproduce_edge_vectors():
    for net, fr in catalog.random_networks(20, seed=4):
        g = geometric_signature(net, fr)
        res = half_edge_solve(net, g)
        assert res.full_rank
        assert res.matrix.rows == boundary_matrix(net, fr).rows
        fld, _ = linear_system_oracle(net, fr)
        assert edge_field_from_half_edges(net, res.z, fr).same_values(fld)
        x = half_edge_x_solve(net, fr)
        assert x_to_edge_field(net, x) == dict(fld.vectors)
        assert x_to_z(net, x, fr) == dict(res.z)


def test_vertex_gauge_preserves_equivalence_and_matrix():
    net = catalog.glick()
    g = geometric_signature(net, catalog.glick_frame(net))
    h = apply_vertex_gauge(net, g, {"U": 1})
    assert h != g
    assert signatures_equivalent(net, g, h)
    assert half_edge_solve(net, g).matrix.rows == half_edge_solve(net, h).matrix.rows
    with pytest.raises(PlabicError):
        apply_vertex_gauge(net, g, {"b1": 1})


def test_glick_exhaustive_classification():
    net = catalog.glick()
    fr = catalog.glick_frame(net)
    samples = sample_weights(net, 20)
    geo = 0
    for bits in itertools.product((0, 1), repeat=5):
        eps = dict(zip(("e1", "e2", "e3", "e4", "e5"), bits))
        g = bool(is_geometric(net, eps, fr))
        geo += g
        assert check_tnn(net, eps, samples).ok == g
    # five edges, two internal vertices: 2^5 / 2^2 gauge classes, one geometric
    assert geo == 4


def test_falsify_produces_checkable_witness():
    net = catalog.glick()
    eps = dict(GLICK_PRINTED, e3=1)
    w = falsify_signature(net, eps, catalog.glick_frame(net))
    assert w.kind in ("negative-minor", "rank-drop")
    assert all(v > 0 for v in w.weights.values())
    res = half_edge_solve(net, eps, w.weights)
    if w.kind == "rank-drop":
        assert half_edge_det(net, eps, w.weights) == 0
    else:
        cols, val = w.minor
        assert val < 0 and res.matrix.minors()[cols] == val


def test_falsify_reports_geometric():
    net = catalog.glick()
    assert falsify_signature(net, GLICK_PRINTED).kind == "geometric"


def test_bits_round_trip_and_errors():
    bits = {"e1": 1, "e2": 0, "x": 1}
    assert parse_bits(format_bits(bits)) == bits
    assert parse_bits("a 1  # comment\n\nb 0\n") == {"a": 1, "b": 0}
    for bad in ("a 2\n", "a\n", "a 1\na 0\n"):
        with pytest.raises(PlabicError):
            parse_bits(bad)


def test_sample_weights_deterministic_and_positive():
    net = catalog.glick()
    assert sample_weights(net, 5, seed=3) == sample_weights(net, 5, seed=3)
    assert all(v > 0 for ws in sample_weights(net, 5) for v in ws.values())
