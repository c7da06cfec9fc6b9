"""Shared helpers for the test suite."""
from plabic import linalg
from plabic.flows import BoundaryMatrix, linear_system_oracle
from plabic.graph_core import PlabicNetwork


def source_paths(net: PlabicNetwork) -> list[tuple[str, ...]]:
    """Every directed path from a boundary source to a boundary sink without repeated vertices."""
    out = []
    for i in net.base:
        e0 = net.boundary_edge(i)

        def rec(path, seen):
            h = net.edge(path[-1]).head
            if net.vertex(h).is_boundary:
                out.append(tuple(path))
                return
            for f in net.out_edges(h):
                hh = net.edge(f).head
                if hh not in seen:
                    rec(path + [f], seen | {hh})

        rec([e0], {net.edge(e0).tail, net.edge(e0).head})
    return out


def same_point(a: BoundaryMatrix, b: BoundaryMatrix) -> bool:
    """Equal row spaces, i.e. the same point of the Grassmannian."""
    if a.k != b.k or a.n != b.n:
        return False
    r = linalg.rank(list(a.rows) + list(b.rows), a.n)
    return r == a.k == linalg.rank(a.rows, a.n) == linalg.rank(b.rows, b.n)


def oracle_agrees(res) -> bool:
    """A transformation's predicted field equals a fresh solve on the new network."""
    fld, _ = linear_system_oracle(res.net, res.frame)
    return res.field.same_values(fld)
