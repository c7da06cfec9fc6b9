from fractions import Fraction as F

import pytest

from plabic import catalog
from plabic.flows import (
    acyclic_oracle,
    boundary_matrix,
    boundary_matrix_from_flows,
    conservative_flows,
    edge_vector_field,
    is_acyclic,
    linear_system_oracle,
    loop_erase,
    null_edges,
    partition_function,
    simple_cycles,
)


def test_loop_erase_removes_first_repeated_edge_loop():
    assert loop_erase(["a", "b", "c", "b", "d"]) == ["a", "b", "d"]
    assert loop_erase(["a", "b", "a", "c"]) == ["a", "c"]
    assert loop_erase(["a", "b"]) == ["a", "b"]


def test_glick_boundary_matrix_all_routes():
    a, b, c = F(2), F(3), F(5)
    net = catalog.glick(a, b, c)
    fr = catalog.glick_frame(net)
    want = ((b, c, 1, 0), (-a * b, -a * c, 0, 1))
    assert boundary_matrix(net, fr).rows == want
    assert boundary_matrix(net, fr, method="flows").rows == want
    assert boundary_matrix_from_flows(net).rows == want


def test_glick_source_edges_match_rows_minus_unit_vectors():
    net = catalog.glick(2, 3, 5)
    fld = edge_vector_field(net, catalog.glick_frame(net))
    assert fld["e3"] == (3, 5, 0, 0)
    assert fld["e4"] == (-6, -10, 0, 0)


def test_example31_cycles_and_partition_function():
    p, q = F(2), F(3)
    net = catalog.example31(p, q)
    cyc = simple_cycles(net)
    assert len(cyc) == 2
    assert not is_acyclic(net)
    # the two cycles share the edge w, so they never appear together
    assert sorted(c.weight for c in conservative_flows(net)) == [1, p, q]
    assert partition_function(net) == 1 + p + q
    _, det = linear_system_oracle(net, catalog.example31_frame(net))
    assert det == partition_function(net)


def test_example31_null_edges_at_equal_cycle_weights():
    net = catalog.example31(4, 4)
    fld, _ = linear_system_oracle(net, catalog.example31_frame(net))
    rep = null_edges(fld, net)
    assert rep.edges == frozenset({"u", "v", "w"})
    assert len(rep.components) == 1


def test_example31_has_no_null_edges_when_weights_differ():
    net = catalog.example31(2, 3)
    fld, _ = linear_system_oracle(net, catalog.example31_frame(net))
    assert null_edges(fld).edges == frozenset()


def test_routes_agree_on_random_networks():
    for net, fr in catalog.random_networks(25, seed=99):
        lin, det = linear_system_oracle(net, fr)
        assert edge_vector_field(net, fr).same_values(lin)
        assert det == partition_function(net)
        if is_acyclic(net):
            assert acyclic_oracle(net, fr).same_values(lin)


def test_unknown_boundary_matrix_method():
    with pytest.raises(ValueError):
        boundary_matrix(catalog.glick(), method="nope")
