"""Property-based checks of invariants that hold for every admissible input."""
from fractions import Fraction as F

from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st

from plabic import catalog
from plabic import transforms as T
from plabic.flows import boundary_matrix, edge_vector_field, linear_system_oracle, null_edges, partition_function
from plabic.graph_core import P, almost_horizontal_frame, graph_matroid, winding
from plabic.io import format_rational, parse_network, parse_rational, serialize_network
from plabic.le_networks import LeTableau, build_le_network, enumerate_le_diagrams, format_diagram, parse_diagram
from plabic.signatures import apply_vertex_gauge, geometric_signature, is_geometric

pos = st.fractions(min_value=F(1, 50), max_value=50, max_denominator=60).filter(lambda x: x > 0)
relaxed = settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])

LE_25 = enumerate_le_diagrams(2, 5)
NETWORKS = list(catalog.random_networks(30, seed=77))


@relaxed
@given(pos, pos, pos)
def test_glick_matrix_for_all_weights(a, b, c):
    net = catalog.glick(a, b, c)
    assert boundary_matrix(net, catalog.glick_frame(net)).rows == ((b, c, 1, 0), (-a * b, -a * c, 0, 1))


@relaxed
@given(pos, pos)
def test_example31_vectors_for_all_weights(p, q):
    net = catalog.example31(p, q)
    fld, det = linear_system_oracle(net, catalog.example31_frame(net))
    s = 1 + p + q
    assert det == s
    assert fld["u"] == fld["v"] == ((q - p) / s, 0)
    assert fld["w"] == ((p - q) / s, 0)
    assert fld["u2"] == ((1 + 2 * p) / s, 0)
    assert fld["up"] == ((p + 2 * p * q) / s, 0)
    assert fld["u1"] == (1, 0)
    assert (null_edges(fld).edges == {"u", "v", "w"}) == (p == q)


@relaxed
@given(pos, pos, pos)
def test_zero_vector_network_for_all_weights(p, q, s):
    net = catalog.zero_vector_right(p, q, s)
    fld, _ = linear_system_oracle(net, catalog.example31_frame(net))
    want = ((1 + p) / (1 + p + q), 0)
    assert fld["w"] == want
    assert fld["u"] == fld["v"] == (-want[0], 0)
    assert not null_edges(fld).edges
    assert boundary_matrix(net, catalog.example31_frame(net)).rows == (((1 + 2 * p) / (1 + p + q), 1),)


@relaxed
@given(st.integers(0, len(NETWORKS) - 1), st.data(), pos)
def test_weight_gauge_keeps_matrix(i, data, t):
    net, fr = NETWORKS[i]
    v = data.draw(st.sampled_from(net.internal))
    res = T.apply_weight_gauge(net, fr, v, t)
    assert boundary_matrix(res.net, res.frame).rows == boundary_matrix(net, fr).rows


@relaxed
@given(st.integers(0, len(NETWORKS) - 1))
def test_two_routes_and_partition_function(i):
    net, fr = NETWORKS[i]
    lin, det = linear_system_oracle(net, fr)
    assert edge_vector_field(net, fr).same_values(lin)
    assert det == partition_function(net)


@relaxed
@given(st.integers(0, len(NETWORKS) - 1), st.data())
def test_vertex_gauge_keeps_geometric(i, data):
    net, fr = NETWORKS[i]
    eta = {v: data.draw(st.integers(0, 1)) for v in net.internal}
    g = apply_vertex_gauge(net, geometric_signature(net, fr), eta)
    assert is_geometric(net, g, fr)


@relaxed
@given(st.integers(0, len(LE_25) - 1), st.data())
def test_le_networks_are_totally_nonnegative(i, data):
    d = LE_25[i]
    w = {b: data.draw(pos) for b in d.filled()}
    net = build_le_network(LeTableau(d, w))
    bases = set(graph_matroid(net).bases)
    for cols, val in boundary_matrix(net, almost_horizontal_frame(net)).minors().items():
        assert (val > 0) == (cols in bases)
        assert val >= 0


@relaxed
@given(st.integers(0, len(LE_25) - 1), st.data())
def test_diagram_text_round_trip(i, data):
    d = LE_25[i]
    w = {b: data.draw(pos) for b in d.filled()}
    t = parse_diagram(format_diagram(d, w))
    assert (t.diagram, dict(t.weights)) == (d, w) if isinstance(t, LeTableau) else t == d


@relaxed
@given(st.integers(0, len(NETWORKS) - 1))
def test_network_text_round_trip(i):
    net, fr = NETWORKS[i]
    doc = parse_network(serialize_network(net, fr.direction))
    assert doc.net == net and doc.direction == fr.direction


@given(st.fractions(max_denominator=10**6))
def test_rational_text_round_trip(x):
    assert parse_rational(format_rational(x)) == x


small = st.integers(-9, 9)


@given(small, small, small, small, small, st.integers(1, 9))
def test_winding_properties(ax, ay, bx, by, lx, ly):
    a, b, l = P(ax, ay), P(bx, by), P(lx, ly)
    assume(not a.is_zero() and not b.is_zero())
    assume(a.cross(b) != 0 and a.cross(l) != 0 and b.cross(l) != 0)
    w = winding(a, b, l)
    assert w in (-1, 0, 1)
    assert winding(b, a, l) == -w
    assert T.wind_formula(a, b, l) == w
    x, y, z = T.wind12_sides(a, b, l)
    assert x == y == z
