import itertools
from fractions import Fraction as F

import pytest

from plabic.flows import boundary_matrix, linear_system_oracle
from plabic.graph_core import PlabicError, almost_horizontal_frame, graph_matroid, validate_network
from plabic.le_networks import (
    LeDiagram,
    LeTableau,
    build_le_network,
    enumerate_le_diagrams,
    format_diagram,
    master_signature,
    parse_diagram,
    partitions_in_box,
    pivots_of_shape,
)
from plabic.signatures import geometric_signature, signatures_equivalent


def _le_ok(rows):
    """Brute-force Le-property: a 0 may not have a 1 both above it and to its left."""
    for r, row in enumerate(rows):
        for c, x in enumerate(row):
            if x:
                continue
            left = any(row[:c])
            up = any(rows[rr][c] for rr in range(r) if c < len(rows[rr]))
            if left and up:
                return False
    return True


def _brute_count(k, n):
    total = 0
    for shape in partitions_in_box(k, n - k):
        cells = sum(shape)
        for bits in itertools.product((0, 1), repeat=cells):
            rows, pos = [], 0
            for lam in shape:
                rows.append(bits[pos:pos + lam])
                pos += lam
            total += _le_ok(rows)
    return total


@pytest.mark.parametrize("k,n", [(1, 3), (2, 4), (2, 5), (3, 6)])
def test_enumeration_matches_brute_force(k, n):
    assert len(enumerate_le_diagrams(k, n)) == _brute_count(k, n)


def test_dimension_and_shape_filters():
    ds = enumerate_le_diagrams(1, 3, 2)
    assert ds and all(d.dim <= 2 for d in ds)
    # shapes (), (1) and (2) contribute 1 + 2 + 4 fillings
    assert len(ds) == 7
    assert sorted(d.rows[0] for d in enumerate_le_diagrams(1, 3, 2, shape=(2,))) == [(0, 0), (0, 1), (1, 0), (1, 1)]
    assert all(d.dim == 0 for d in enumerate_le_diagrams(2, 4, 0))
    assert all(d.shape == (2,) for d in enumerate_le_diagrams(1, 3, shape=(2,)))


def test_pivots_of_shape():
    assert pivots_of_shape((2, 1), 2, 4) == (1, 3)
    assert pivots_of_shape((0, 0), 2, 4) == (3, 4)
    assert pivots_of_shape((2, 2), 2, 4) == (1, 2)


def test_invalid_fillings_rejected():
    with pytest.raises(PlabicError):
        LeDiagram(2, 4, (2, 2), ((1, 1), (1,)))
    d = LeDiagram(2, 4, (2, 2), ((1, 1), (1, 0)))
    assert not d.is_le
    with pytest.raises(PlabicError):
        LeTableau(d, {b: F(1) for b in d.filled()})


def test_diagram_text_round_trip():
    for d in enumerate_le_diagrams(2, 4):
        assert parse_diagram(format_diagram(d)) == d
    d = next(d for d in enumerate_le_diagrams(2, 4) if d.dim == 4)
    w = {b: F(i + 2, 3) for i, b in enumerate(d.filled())}
    t = parse_diagram(format_diagram(d, w))
    assert isinstance(t, LeTableau) and dict(t.weights) == w


def test_le_networks_are_valid_and_realise_distinct_positroids():
    seen = set()
    for d in enumerate_le_diagrams(2, 5):
        net = build_le_network(d)
        assert validate_network(net).ok
        assert net.base == d.pivots
        seen.add(frozenset(graph_matroid(net).bases))
    assert len(seen) == len(enumerate_le_diagrams(2, 5))


def test_canonical_orientation_is_acyclic():
    for d in enumerate_le_diagrams(2, 4):
        net = build_le_network(d)
        _, det = linear_system_oracle(net, almost_horizontal_frame(net))
        assert det == 1


def test_master_signature_matches_geometric_up_to_gauge():
    for d in enumerate_le_diagrams(2, 4):
        net = build_le_network(d)
        g = geometric_signature(net, almost_horizontal_frame(net))
        eq = signatures_equivalent(net, master_signature(net, d), g)
        assert eq and eq.eta is not None


def test_master_signature_literal_rule_is_available():
    d = next(d for d in enumerate_le_diagrams(2, 4) if d.dim == 4)
    net = build_le_network(d)
    lit = master_signature(net, d, "literal")
    assert set(lit) == {e.id for e in net.edges}
    with pytest.raises(PlabicError):
        master_signature(net, d, "other")


def test_top_cell_boundary_matrix_positive():
    d = next(d for d in enumerate_le_diagrams(2, 4) if d.dim == 4)
    net = build_le_network(d)
    A = boundary_matrix(net, almost_horizontal_frame(net))
    assert all(v > 0 for v in A.minors().values())
