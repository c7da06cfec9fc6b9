"""The twelve numbered acceptance criteria, one test each.

A per-criterion PASS/FAIL summary is printed at the end of the run.
"""
import collections
import itertools
import random
import time
from fractions import Fraction as F

import pytest
from _support import oracle_agrees, same_point, source_paths

from plabic import catalog, linalg
from plabic import transforms as T
from plabic.flows import (
    acyclic_oracle,
    boundary_matrix,
    edge_vector_field,
    is_acyclic,
    linear_system_oracle,
    null_edges,
    partition_function,
    simple_cycles,
)
from plabic.graph_core import (
    BLACK,
    WHITE,
    DegenerateFrameError,
    GeneralPositionError,
    P,
    PlabicError,
    almost_horizontal_frame,
    choose_gauge_direction,
    eps2,
    enumerate_perfect_orientations,
    faces,
    graph_matroid,
    make_frame,
    pair_sign,
    validate_network,
    winding,
)
from plabic.le_networks import LeTableau, build_le_network, enumerate_le_diagrams, master_signature
from plabic.signatures import (
    check_tnn,
    edges_off_boundary_paths,
    face_parity_audit,
    falsify_signature,
    geometric_signature,
    half_edge_det,
    half_edge_solve,
    is_geometric,
    sample_weights,
    signatures_equivalent,
    vertex_pair_indices,
)

acceptance = pytest.mark.acceptance


def _diagrams(max_k, max_n):
    for n in range(1, max_n + 1):
        for k in range(1, min(max_k, n) + 1):
            yield from enumerate_le_diagrams(k, n)


# ---------------------------------------------------------------------------


@acceptance(1, "glick network: matrix, signature class, half-edge chain")
def test_criterion_01_glick():
    t0 = time.perf_counter()
    samples = [(F(2), F(3), F(5)), (F(1), F(1), F(1)), (F(1, 2), F(7, 3), F(4)), (F(9), F(1, 9), F(2, 5)), (F(3, 7), F(11), F(5, 8))]
    printed = {"e1": 0, "e2": 0, "e3": 0, "e4": 1, "e5": 1}
    for a, b, c in samples:
        net = catalog.glick(a, b, c)
        fr = catalog.glick_frame(net)
        assert boundary_matrix(net, fr).rows == ((b, c, 1, 0), (-a * b, -a * c, 0, 1))
        assert signatures_equivalent(net, geometric_signature(net, fr), printed)
        z = half_edge_solve(net, printed).z
        assert z[("b1", "e1")] == (1, 0, 0, 0) and z[("b2", "e2")] == (0, 1, 0, 0)
        assert z[("U", "e1")] == (b, 0, 0, 0) and z[("U", "e2")] == (0, c, 0, 0)
        assert z[("U", "e5")] == (-b, -c, 0, 0)
        for h in (("b3", "e3"), ("V", "e3"), ("V", "e4"), ("V", "e5")):
            assert z[h] == (b, c, 0, 0)
        assert z[("b4", "e4")] == (-a * b, -a * c, 0, 0)
    assert time.perf_counter() - t0 < 1.0


@acceptance(2, "null-vector example: closed forms and null edges")
def test_criterion_02_null_example():
    t0 = time.perf_counter()
    for p, q in ((F(2), F(3)), (F(1, 2), F(5)), (F(7), F(7))):
        net = catalog.example31(p, q)
        fr = catalog.example31_frame(net)
        fld, _ = linear_system_oracle(net, fr)
        s = 1 + p + q
        assert fld["u"] == fld["v"] == ((q - p) / s, 0)
        assert fld["w"] == ((p - q) / s, 0)
        assert fld["u2"] == ((1 + 2 * p) / s, 0)
        assert fld["up"] == ((p + 2 * p * q) / s, 0)
        assert fld["u1"] == (1, 0)
        assert boundary_matrix(net, fr).rows == (((1 + 2 * p) / s, 1),)
        nulls = null_edges(fld).edges
        assert nulls == (frozenset({"u", "v", "w"}) if p == q else frozenset())
    assert time.perf_counter() - t0 < 1.0


@acceptance(3, "path reversal example: both routes reproduce the printed vectors")
def test_criterion_03_reorientation_example():
    for p, q in ((F(2), F(3)), (F(1, 2), F(5)), (F(7), F(7))):
        net = catalog.example31(p, q)
        res = T.reorient_along_path(net, catalog.example31_frame(net), catalog.EXAMPLE31_PATH)
        d = 2 * p + 1
        tilde = {"u": (0, (p - q) / d), "v": (0, (p - q) / d), "up": (0, -p * (1 + 2 * q) / d), "u2": (0, F(-1)), "u1": (0, -(1 + p + q) / d)}
        hat = {
            "u2": (0, F(1)),
            "u": (0, p / d * (1 - q / p)),
            "v": (0, p / d * (q / p - 1)),
            "up": (0, p / d * ((2 * q + 1) / p)),
            "u1": (0, p / d * (1 + (q + 1) / p)),
        }
        for e, v in tilde.items():
            assert res.tilde[e] == v, e
        talaska = edge_vector_field(res.net, res.frame)
        assert talaska.same_values(res.field)
        for e, v in hat.items():
            assert res.field[e] == v, e
            assert talaska[e] == v, e


@acceptance(4, "modified zero-vector network: no null edges for any s")
def test_criterion_04_zero_vector():
    for p, q in ((F(2), F(3)), (F(1, 2), F(5)), (F(7), F(7))):
        for s in (F(1, 10), F(1, 2), F(1), F(3, 2), F(7), F(100)):
            net = catalog.zero_vector_right(p, q, s)
            fld, _ = linear_system_oracle(net, catalog.example31_frame(net))
            want = (1 + p) / (1 + p + q)
            assert fld["w"] == (want, 0)
            assert fld["u"] == fld["v"] == (-want, 0)
            assert null_edges(fld).edges == frozenset()


@acceptance(5, "oracle equivalence on 200 random networks")
def test_criterion_05_oracles():
    t0 = time.perf_counter()
    acyclic = cyclic = 0
    for net, fr in catalog.random_networks(200, seed=2024, max_internal=12, max_cycles=4):
        assert len(net.internal) <= 12
        lin, det = linear_system_oracle(net, fr)
        assert edge_vector_field(net, fr).same_values(lin)
        assert det == partition_function(net)
        if is_acyclic(net):
            acyclic += 1
            assert acyclic_oracle(net, fr).same_values(lin)
        else:
            cyclic += 1
    assert acyclic and cyclic
    assert time.perf_counter() - t0 < 120


@acceptance(6, "positroid correctness for k <= 2, n <= 5")
def test_criterion_06_positroids():
    rng = random.Random(6)
    count = 0
    for d in _diagrams(2, 5):
        base_net = build_le_network(d)
        bases = set(graph_matroid(base_net).bases)
        fr = almost_horizontal_frame(base_net)
        _, det = linear_system_oracle(base_net, fr)
        assert det == 1
        for _ in range(10):
            w = {b: catalog.random_weight(rng, False) for b in d.filled()}
            net = build_le_network(LeTableau(d, w))
            for cols, val in boundary_matrix(net, fr).minors().items():
                assert (val > 0) == (cols in bases)
                assert val >= 0
        count += 1
    assert count > 200


@acceptance(7, "master signature equivalent to the almost-horizontal geometric signature")
def test_criterion_07_master_signature():
    for d in _diagrams(2, 5):
        net = build_le_network(d)
        g = geometric_signature(net, almost_horizontal_frame(net))
        eq = signatures_equivalent(net, master_signature(net, d), g)
        assert eq, (d, eq.certificate)
        assert eq.eta is not None


def _qualifying_networks():
    out = [catalog.glick(1, 1, 1)]
    for d in _diagrams(2, 5):
        if d.dim == 0 or d.k == d.n:
            continue
        net = build_le_network(d)
        if len(net.edges) > 8:
            continue
        for o in enumerate_perfect_orientations(net):
            m = o.apply(net)
            if not edges_off_boundary_paths(m):
                out.append(m)
    return out


@acceptance(8, "completeness: sampled TNN iff geometric, with exact witnesses")
def test_criterion_08_completeness():
    t0 = time.perf_counter()
    stats = collections.Counter()
    for net in _qualifying_networks():
        fr = choose_gauge_direction(net)
        samples = sample_weights(net, 20)
        eids = [e.id for e in net.edges]
        for bits in itertools.product((0, 1), repeat=len(eids)):
            eps = dict(zip(eids, bits))
            geo = bool(is_geometric(net, eps, fr))
            assert check_tnn(net, eps, samples).ok == geo
            stats[geo] += 1
            if geo:
                continue
            w = falsify_signature(net, eps, fr)
            assert w.kind in ("negative-minor", "rank-drop"), w.kind
            assert all(v > 0 for v in w.weights.values())
            if w.kind == "rank-drop":
                assert half_edge_det(net, eps, w.weights) == 0
            else:
                cols, val = w.minor
                assert val < 0
                assert half_edge_solve(net, eps, w.weights).matrix.minors()[cols] == val
    assert stats[True] and stats[False]
    assert time.perf_counter() - t0 < 300


def _sweeps_own_source_ray(net, fr, v, target):
    """The move carries v across the gauge ray of a boundary source joined to it."""
    l = fr.direction
    for eid in net.in_edges(v):
        b = net.edge(eid).tail
        if net.vertex(b).is_boundary:
            o = net.position(b)
            if (l.cross(net.position(v) - o) > 0) != (l.cross(target - o) > 0):
                return True
    return False


@acceptance(9, "transformations preserve the boundary matrix and match the predicted vectors")
def test_criterion_09_transformations():
    rng = random.Random(9)
    kinds = collections.Counter()

    def verify(kind, res, before_net, before_frame, same_rows=True):
        assert oracle_agrees(res), kind
        A0 = boundary_matrix(before_net, before_frame)
        A1 = boundary_matrix(res.net, res.frame)
        assert (A0.rows == A1.rows) if same_rows else same_point(A0, A1), kind
        kinds[kind] += 1

    for net, fr in catalog.random_networks(60, seed=909):
        try:
            verify("gauge-ray", T.rotate_gauge(net, fr, catalog.random_frame(net, rng)), net, fr)
        except DegenerateFrameError:
            pass
        v = rng.choice(net.internal)
        verify("weight-gauge", T.apply_weight_gauge(net, fr, v, catalog.random_weight(rng, False)), net, fr)
        p = net.position(v)
        try:
            target = P(p.x + F(rng.randint(-4, 4), 40), p.y + F(rng.randint(-4, 4), 40))
            res = T.move_vertex(net, fr, v, target)
            for eid, s in res.notes["edge_signs"].items():
                if s is not None:
                    assert res.factors[eid] == (-1) ** s, eid
            if not _sweeps_own_source_ray(net, fr, v, target):
                assert res.notes["crossing_sum_conserved"]
            verify("vertex-move", res, net, fr)
        except (GeneralPositionError, DegenerateFrameError):
            pass
        except PlabicError as exc:
            if "relative configuration" not in str(exc) and "invalid" not in str(exc):
                raise
        for cyc in simple_cycles(net)[:1]:
            try:
                verify("cycle", T.reorient_along_cycle(net, fr, cyc), net, fr)
            except DegenerateFrameError:
                pass
        A = boundary_matrix(net, fr)
        old, _ = linear_system_oracle(net, fr)
        for path in source_paths(net)[:1]:
            try:
                res = T.reorient_along_path(net, fr, path)
            except DegenerateFrameError:
                continue
            except PlabicError as exc:
                assert "zero matrix entry" in str(exc)
                continue
            verify("path", res, net, fr, same_rows=False)
            for e in net.edges:
                assert linalg.rank([res.field[e.id], old[e.id]] + list(A.rows), net.n) <= A.k + 1
        e = rng.choice([x.id for x in net.edges])
        ins = T.insert_middle_vertex(net, fr, e)
        verify("M3-insert", ins, net, fr)
        (mid,) = [x for x in ins.net.internal if x not in net.internal]
        verify("M3-remove", T.remove_middle_vertex(ins.net, ins.frame, mid, field=ins.field), ins.net, ins.frame)

    for _ in range(15):
        sq = catalog.random_weights(catalog.square_network(), rng, False)
        fr = catalog.random_frame(sq, rng)
        res = T.square_move(sq, fr, ("W", "Z", "Y", "X"))
        assert res.notes["before_relations"]
        verify("M1", res, sq, fr)
        for color in (WHITE, BLACK):
            fp = catalog.random_weights(catalog.flip_pair_network(color), rng, False).with_weights({"e0": 1})
            fr = catalog.random_frame(fp, rng)
            try:
                verify("M2-" + color, T.flip_move(fp, fr, ("u", "v")), fp, fr)
            except PlabicError:
                assert color == BLACK
        pn = catalog.random_weights(catalog.parallel_network(), rng, False)
        fr = catalog.random_frame(pn, rng)
        res = T.parallel_reduction(pn, fr, "u", "v")
        assert res.notes["relations"]
        verify("R1", res, pn, fr)
        dn = catalog.random_weights(catalog.dipole_network(), rng, False)
        fr = catalog.random_frame(dn, rng)
        verify("R2", T.dipole_reduction(dn, fr, "du", "dv"), dn, fr)
        for kind in ("source", "sink"):
            ln = catalog.random_weights(catalog.leaf_network(kind), rng, False)
            fr = catalog.random_frame(ln, rng)
            res = T.leaf_reduction(ln, fr, "L")
            assert res.notes["split_relation"]
            verify("R3", res, ln, fr)

    wanted = {"gauge-ray", "weight-gauge", "vertex-move", "cycle", "path", "M1", "M2-white", "M2-black", "M3-insert", "M3-remove", "R1", "R2", "R3"}
    assert wanted <= set(kinds), wanted - set(kinds)
    assert sum(kinds.values()) >= 100


def _frames(net, rng, count=3):
    out = []
    for _ in range(40):
        try:
            fr = catalog.random_frame(net, rng)
        except (DegenerateFrameError, PlabicError):
            continue
        if fr.direction not in [f.direction for f in out]:
            out.append(fr)
        if len(out) == count:
            break
    return out


@acceptance(10, "local index identities on every configuration of the random suite")
def test_criterion_10_appendix():
    rng = random.Random(10)
    pairs = vertices = loci = 0
    for net, fr in catalog.random_networks(60, seed=1010):
        frames = _frames(net, rng)
        assert len(frames) >= 3
        dirs = [fr.direction] + [f.direction for f in frames]
        for e in net.edges:
            for f in net.out_edges(e.head) if not net.vertex(e.head).is_boundary else []:
                a, b = net.direction(e.id), net.direction(f)
                if pair_sign(a, b) == 0:
                    continue
                for l in dirs:
                    assert T.wind_formula(a, b, l) == winding(a, b, l)
                    x, y, z = T.wind12_sides(a, b, l)
                    assert x == y == z
                pairs += 1
        for v in net.internal:
            if net.degree(v) != 3:
                continue
            ins, outs = net.in_edges(v), net.out_edges(v)
            if net.vertex(v).color == BLACK:
                (e2,) = outs
                for e1, f in itertools.permutations(ins):
                    d1, d2, df = net.direction(e1), net.direction(e2), net.direction(f)
                    vals = {(T.W_b(d1, d2, df, l), T.W_w(d1, d2, df, l), T.W_closed_form(d1, d2, df, l)) for l in dirs}
                    assert len(vals) == 1
                    ((wb, ww, cf),) = vals
                    assert wb == ww - 2 == cf
            else:
                (e1,) = ins
                for e2, g in itertools.permutations(outs):
                    d1, d2, df = net.direction(e1), net.direction(e2), -net.direction(g)
                    vals = {(T.W_b(d1, d2, df, l), T.W_w(d1, d2, df, l), T.W_closed_form(d1, d2, df, l)) for l in dirs}
                    assert len(vals) == 1
                    ((wb, ww, cf),) = vals
                    assert wb == ww - 2 == cf
            vertices += 1
        for path in source_paths(net)[:3]:
            try:
                recs = T.locus_identities(net, fr, path)
            except DegenerateFrameError:
                continue
            assert all(r.holds for r in recs), [r for r in recs if not r.holds]
            loci += len(recs)
        for cyc in simple_cycles(net)[:2]:
            recs = T.locus_identities(net, fr, cyc, cycle=True)
            assert all(r.holds for r in recs)
            loci += len(recs)
    assert pairs > 500 and vertices > 100 and loci > 100


@acceptance(11, "face parity of vertex pair indices on irreducible networks")
def test_criterion_11_face_parity():
    failures = []
    audited = 0
    for d in _diagrams(2, 5):
        if not d.is_irreducible():
            continue
        net = build_le_network(d)
        for fr in (almost_horizontal_frame(net), almost_horizontal_frame(net, -1), choose_gauge_direction(net)):
            a = face_parity_audit(net, vertex_pair_indices(net, fr))
            audited += 1
            assert a.g == len(faces(net)) - 1
            if not a.ok:
                failures.append((d.k, d.n, d.rows, a.vertex_parity_ok, a.internal_faces_odd, a.odd_faces, a.g - a.k))
    assert audited > 0
    assert not failures, f"{len(failures)} of {audited} audits fail; first: {failures[:3]}"


@acceptance(12, "amalgamation: minor identity on projections and the Gr(2,4) pipeline")
def test_criterion_12_amalgamation():
    steps = 0
    for net, _ in catalog.random_networks(120, seed=1212):
        n = net.n
        for j1 in range(1, n + 1):
            j2 = j1 % n + 1
            if j1 == j2 or (j1 in net.base) == (j2 in net.base):
                continue
            ones = net.with_weights({net.boundary_edge(j): 1 for j in (j1, j2) if net.boundary_edge(j)})
            try:
                new = T.project_pair(ones, j1, j2)
            except PlabicError:
                continue
            if not validate_network(new).ok:
                continue
            assert T.projection_identity(boundary_matrix(ones), boundary_matrix(new), j1, j2), (j1, j2)
            steps += 1
    assert steps >= 50
    rng = random.Random(12)
    for _ in range(5):
        w = {k: catalog.random_weight(rng, False) for k in ("w13", "w23", "w14", "w24")}
        net, st = T.amalgamate_gr24(w)
        assert all(s.identity_holds for s in st)
        assert validate_network(net).ok
        le = catalog.le_top_cell(2, 4, {(1, 3): w["w13"], (1, 4): w["w14"], (2, 3): w["w23"], (2, 4): w["w24"]})
        assert boundary_matrix(net).rows == boundary_matrix(le).rows
