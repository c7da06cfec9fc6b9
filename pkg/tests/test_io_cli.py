from fractions import Fraction as F

import pytest
from click.testing import CliRunner

from plabic import catalog
from plabic.cli import main
from plabic.flows import boundary_matrix
from plabic.graph_core import P, make_frame
from plabic.io import (
    ParseError,
    ValidationFailed,
    export_dot,
    export_svg,
    format_rational,
    parse_network,
    parse_rational,
    serialize_network,
)
from plabic.le_networks import enumerate_le_diagrams, format_diagram


@pytest.fixture
def glick_text():
    net = catalog.glick(2, 3, 5)
    return serialize_network(net, catalog.GLICK_DIRECTION)


def test_rationals():
    assert parse_rational("-7/3") == F(-7, 3)
    assert format_rational(F(4, 2)) == "2"
    for bad in ("1.5", "1/0", "x", "1//2"):
        with pytest.raises(ParseError):
            parse_rational(bad)


def test_round_trip(glick_text):
    doc = parse_network(glick_text)
    assert doc.direction == P(1, 1)
    assert serialize_network(doc.net, doc.direction) == glick_text
    for net, _ in catalog.random_networks(10, seed=5):
        assert parse_network(serialize_network(net)).net == net


@pytest.mark.parametrize(
    "text,line,column",
    [
        ("", 1, 1),
        ("vertex a white internal 0 1\n", 1, 1),
        ("network n=1\nvertex b1 black boundary 0 0 1\nvertex b1 black boundary 1 0 2\n", 3, 8),
        ("network\nvertex b1 black boundary 0 0 1\nedge e b1 zz 1\n", 3, 11),
        ("network\nvertex b1 black boundary 0 x 1\n", 2, 28),
        ("network\nvertex b1 grey boundary 0 0 1\n", 2, 11),
        ("network\nfoo\n", 2, 1),
    ],
)
def test_parse_errors_carry_position(text, line, column):
    with pytest.raises(ParseError) as info:
        parse_network(text)
    assert (info.value.line, info.value.column) == (line, column)


def test_validation_failure_is_reported(glick_text):
    bad = glick_text.replace("edge e5 V U 1", "edge e5 V U 1\nedge e6 V U 1")
    with pytest.raises(ValidationFailed) as info:
        parse_network(bad)
    assert not info.value.report.ok
    assert parse_network(bad, validate=False).net.has_edge("e6")


def test_dot_is_deterministic(glick_text):
    net = parse_network(glick_text).net
    a = export_dot(net)
    assert a == export_dot(net)
    assert a.startswith("digraph") and '"V" -> "U"' in a
    assert 'pos="0.5,1.5!"' in a


def test_svg_draws_rays(glick_text):
    doc = parse_network(glick_text)
    assert 'stroke="orange"' not in export_svg(doc.net)
    svg = export_svg(doc.net, catalog.glick_frame(doc.net))
    assert svg.startswith("<svg") and svg.rstrip().endswith("</svg>")
    assert svg.count('stroke="orange"') == len(doc.net.base)


def _run(args, input=None):
    return CliRunner().invoke(main, args, input=input, catch_exceptions=False)


def test_cli_validate_and_exit_codes(tmp_path, glick_text):
    good = tmp_path / "g.net"
    good.write_text(glick_text)
    assert _run(["validate", str(good)]).exit_code == 0
    bad = tmp_path / "bad.net"
    bad.write_text("network\nvertex b1 black boundary 0 0\n")
    r = _run(["validate", str(bad)])
    assert r.exit_code == 2 and "line 2" in r.output
    invalid = tmp_path / "inv.net"
    invalid.write_text(glick_text.replace("edge e5 V U 1", "edge e5 V U -1"))
    assert _run(["validate", str(invalid)]).exit_code == 1


def test_cli_matrix_and_vectors(glick_text):
    r = _run(["boundary-matrix", "-"], glick_text)
    assert r.exit_code == 0
    assert [ln.split() for ln in r.output.splitlines()] == [["3", "5", "1", "0"], ["-6", "-10", "0", "1"]]
    r = _run(["edge-vectors", "--cross-check", "-"], glick_text)
    assert r.exit_code == 0 and "e4 (-6, -10, 0, 0)" in r.output and "agrees" in r.output
    r = _run(["minors", "-"], glick_text)
    assert "1,3 6" in r.output


def test_cli_orientations_and_matroid(glick_text):
    assert "# 5 orientations" in _run(["orientations", "-"], glick_text).output
    assert "exchange axiom holds" in _run(["matroid", "-"], glick_text).output


def test_cli_signatures(tmp_path, glick_text):
    net = tmp_path / "g.net"
    net.write_text(glick_text)
    geo = _run(["signature", "geometric", str(net)]).output
    sig = tmp_path / "s.txt"
    sig.write_text(geo)
    assert _run(["signature", "check", str(net), str(sig)]).exit_code == 0
    flipped = geo.replace("e3 0", "e3 1") if "e3 0" in geo else geo.replace("e3 1", "e3 0")
    sig.write_text(flipped)
    r = _run(["signature", "check", str(net), str(sig)])
    assert r.exit_code == 1 and "geometric: no" in r.output
    r = _run(["signature", "falsify", str(net), str(sig)])
    assert r.exit_code == 0 and ("negative-minor" in r.output or "rank-drop" in r.output)


def test_cli_transforms_preserve_matrix(tmp_path, glick_text):
    src = tmp_path / "g.net"
    src.write_text(glick_text)
    want = boundary_matrix(parse_network(glick_text).net).rows
    for args in (
        ["transform", "gauge-ray", str(src), "--to", "1,2"],
        ["transform", "weight-gauge", str(src), "--vertex", "U", "--t", "3/2"],
        ["transform", "move", str(src), "--kind", "M3-insert", "--site", "e5"],
        ["transform", "move", str(src), "--kind", "vertex", "--site", "V", "--to", "8/5,1"],
    ):
        r = _run(args)
        assert r.exit_code == 0, r.output
        doc = parse_network(r.output)
        assert boundary_matrix(doc.net, make_frame(doc.net, doc.direction)).rows == want


def test_cli_reduce_and_errors(tmp_path):
    pn = tmp_path / "p.net"
    pn.write_text(serialize_network(catalog.parallel_network()))
    r = _run(["transform", "reduce", str(pn), "--kind", "R1", "--site", "u,v"])
    assert r.exit_code == 0
    r = _run(["transform", "weight-gauge", str(pn), "--vertex", "nope", "--t", "2"])
    assert r.exit_code == 1 and "unknown vertex" in r.output


def test_cli_le_and_amalgamation(tmp_path):
    d = next(d for d in enumerate_le_diagrams(2, 4) if d.dim == 4)
    dia = tmp_path / "d.le"
    dia.write_text(format_diagram(d))
    r = _run(["le", "build", str(dia)])
    assert r.exit_code == 0
    net = tmp_path / "le.net"
    net.write_text(r.output)
    assert _run(["validate", str(net)]).exit_code == 0
    assert _run(["signature", "master", str(dia)]).exit_code == 0
    dot = _run(["export", "dot", str(net), "--master", str(dia)]).output
    assert "color=" in dot
    assert _run(["export", "svg", str(net)]).output.startswith("<svg")
    g = tmp_path / "g.net"
    g.write_text(serialize_network(catalog.glick()))
    s = _run(["amalgamate", "sum", str(g), str(g)])
    assert s.exit_code == 0 and "n=8" in s.output
