"""Command line interface.

Exit status: 0 on success, 1 on a domain error (invalid network, failed
precondition, non-geometric signature in ``check``), 2 on a usage or parse
error.
"""
from __future__ import annotations

import functools
import sys

import click

from . import flows, signatures, transforms
from .graph_core import (
    GaugeFrame,
    P,
    PlabicError,
    choose_gauge_direction,
    enumerate_perfect_orientations,
    graph_matroid,
    make_frame,
    validate_network,
)
from .io import (
    ParseError,
    export_dot,
    export_svg,
    format_field,
    format_matrix,
    format_rational,
    format_vector,
    master_edge_classes,
    parse_network,
    parse_rational,
    serialize_network,
)
from .le_networks import LeTableau, build_le_network, master_signature, parse_diagram


class DomainFailure(click.ClickException):
    exit_code = 1


def _guard(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except ParseError as exc:
            raise click.UsageError(str(exc)) from exc
        except PlabicError as exc:
            raise DomainFailure(str(exc)) from exc

    return wrapper


def _point(text: str):
    parts = text.split(",")
    if len(parts) != 2:
        raise click.BadParameter("expected 'x,y'")
    try:
        return P(parse_rational(parts[0].strip()), parse_rational(parts[1].strip()))
    except ParseError as exc:
        raise click.BadParameter(str(exc)) from exc


def _load(fh, validate: bool = True):
    return parse_network(fh.read(), validate=validate)


def _frame(doc, gauge: str | None) -> GaugeFrame:
    if gauge:
        return make_frame(doc.net, _point(gauge))
    if doc.direction is not None:
        return make_frame(doc.net, doc.direction)
    return choose_gauge_direction(doc.net)


def _emit(text: str, out) -> None:
    if out is None:
        click.echo(text, nl=False)
    else:
        out.write(text)


gauge_opt = click.option("--gauge", help="gauge ray direction 'x,y' (default: document header, else automatic)")
out_opt = click.option("-o", "--output", type=click.File("w"), default=None, help="write the result here instead of stdout")


@click.group()
@click.option("--seed", type=int, default=0, show_default=True, help="seed for the deterministic weight sampler")
@click.pass_context
def main(ctx, seed):
    """Edge vectors, boundary matrices and signatures of plabic networks."""
    ctx.obj = {"seed": seed}


@main.command()
@click.argument("network", type=click.File("r"))
@click.option("--strict", is_flag=True, help="also require bivalent white vertices next to the boundary")
@_guard
def validate(network, strict):
    """Check a network document."""
    doc = _load(network, validate=False)
    rep = validate_network(doc.net, strict_boundary=strict)
    click.echo(str(rep))
    if not rep.ok:
        sys.exit(1)


@main.command()
@click.argument("network", type=click.File("r"))
@_guard
def orientations(network):
    """List the perfect orientations as base and reversed edges."""
    net = _load(network, validate=False).net
    orients = enumerate_perfect_orientations(net)
    for o in sorted(orients, key=lambda o: (o.base, sorted(o.reversed_edges))):
        flips = ",".join(sorted(o.reversed_edges)) or "-"
        click.echo(f"base={','.join(map(str, o.base))} reverse={flips}")
    click.echo(f"# {len(orients)} orientations")


@main.command()
@click.argument("network", type=click.File("r"))
@_guard
def matroid(network):
    """List the bases of the network's matroid."""
    m = graph_matroid(_load(network, validate=False).net)
    for b in sorted(m.bases):
        click.echo(",".join(map(str, b)))
    click.echo(f"# {len(m.bases)} bases, exchange axiom {'holds' if m.satisfies_exchange() else 'FAILS'}")


@main.command("edge-vectors")
@click.argument("network", type=click.File("r"))
@gauge_opt
@click.option("--method", type=click.Choice(["linear", "flows", "acyclic"]), default="linear", show_default=True)
@click.option("--cross-check", is_flag=True, help="also solve by the other methods and compare")
@_guard
def edge_vectors(network, gauge, method, cross_check):
    """Edge vectors of the network."""
    doc = _load(network)
    frame = _frame(doc, gauge)
    field = _field_by(doc.net, frame, method)
    click.echo(format_field(field), nl=False)
    if cross_check:
        methods = ["linear", "flows"] + (["acyclic"] if flows.is_acyclic(doc.net) else [])
        for m in methods:
            if m == method:
                continue
            other = _field_by(doc.net, frame, m)
            if not other.same_values(field):
                raise DomainFailure(f"cross-check failed: {method} and {m} disagree")
            click.echo(f"# {m}: agrees")


def _field_by(net, frame, method):
    if method == "linear":
        return flows.linear_system_oracle(net, frame)[0]
    if method == "flows":
        return flows.edge_vector_field(net, frame)
    return flows.acyclic_oracle(net, frame)


@main.command("boundary-matrix")
@click.argument("network", type=click.File("r"))
@gauge_opt
@_guard
def boundary_matrix_cmd(network, gauge):
    """Boundary measurement matrix, one row per source."""
    doc = _load(network)
    click.echo(format_matrix(flows.boundary_matrix(doc.net, _frame(doc, gauge))), nl=False)


@main.command()
@click.argument("network", type=click.File("r"))
@gauge_opt
@_guard
def minors(network, gauge):
    """All maximal minors of the boundary matrix."""
    doc = _load(network)
    A = flows.boundary_matrix(doc.net, _frame(doc, gauge))
    for cols, val in sorted(A.minors().items()):
        click.echo(f"{','.join(map(str, cols))} {format_rational(val)}")


# ---------------------------------------------------------------------------
# signatures


@main.group()
def signature():
    """Geometric, master and user-supplied edge signatures."""


@signature.command("geometric")
@click.argument("network", type=click.File("r"))
@gauge_opt
@_guard
def sig_geometric(network, gauge):
    doc = _load(network)
    click.echo(signatures.format_bits(signatures.geometric_signature(doc.net, _frame(doc, gauge))), nl=False)


@signature.command("master")
@click.argument("diagram", type=click.File("r"))
@click.option("--rule", type=click.Choice(["column", "literal"]), default="column", show_default=True)
@_guard
def sig_master(diagram, rule):
    d = parse_diagram(diagram.read())
    d = d.diagram if isinstance(d, LeTableau) else d
    click.echo(signatures.format_bits(master_signature(build_le_network(d), d, rule)), nl=False)


@signature.command("check")
@click.argument("network", type=click.File("r"))
@click.argument("sig", type=click.File("r"))
@gauge_opt
@click.option("--samples", type=int, default=20, show_default=True)
@click.pass_context
@_guard
def sig_check(ctx, network, sig, gauge, samples):
    """Decide whether a signature is geometric; exit 1 when it is not."""
    doc = _load(network)
    eps = signatures.parse_bits(sig.read())
    eq = signatures.is_geometric(doc.net, eps, _frame(doc, gauge))
    tnn = signatures.check_tnn(doc.net, eps, signatures.sample_weights(doc.net, samples, ctx.obj["seed"]))
    click.echo(f"geometric: {'yes' if eq else 'no'}")
    if not eq and eq.certificate:
        kind, edges = eq.certificate
        click.echo(f"certificate: {kind} {','.join(edges)}")
    click.echo(f"sampled TNN: {'yes' if tnn.ok else 'no'}{'' if tnn.ok else ' (' + tnn.reason + ')'}")
    if not eq:
        sys.exit(1)


@signature.command("falsify")
@click.argument("network", type=click.File("r"))
@click.argument("sig", type=click.File("r"))
@gauge_opt
@click.pass_context
@_guard
def sig_falsify(ctx, network, sig, gauge):
    """Exact weights exposing a non-geometric signature."""
    doc = _load(network)
    eps = signatures.parse_bits(sig.read())
    w = signatures.falsify_signature(doc.net, eps, _frame(doc, gauge), seed=ctx.obj["seed"])
    click.echo(f"witness: {w.kind}")
    if w.certificate:
        click.echo(f"certificate: {w.certificate[0]} {','.join(w.certificate[1])}")
    if w.weights:
        for eid in sorted(w.weights):
            click.echo(f"weight {eid} {format_rational(w.weights[eid])}")
        res = signatures.half_edge_solve(doc.net, eps, w.weights)
        click.echo(f"det M = {format_rational(res.det)}")
    if w.minor:
        cols, val = w.minor
        click.echo(f"minor {','.join(map(str, cols))} = {format_rational(val)}")


# ---------------------------------------------------------------------------
# transformations


@main.group()
def transform():
    """Transform a network and report the new edge vectors."""


def _report(res, out, show_field: bool) -> None:
    text = serialize_network(res.net, res.frame.direction)
    if show_field:
        text += "".join(f"# E {eid} {format_vector(res.field[eid])}\n" for eid in res.field.vectors)
    _emit(text, out)


field_opt = click.option("--show-field", is_flag=True, help="append the new edge vectors as comments")


def _ids(text: str) -> list[str]:
    return [t for t in text.replace(" ", "").split(",") if t]


@transform.command("gauge-ray")
@click.argument("network", type=click.File("r"))
@gauge_opt
@click.option("--to", "target", required=True, help="new gauge direction 'x,y'")
@out_opt
@field_opt
@_guard
def tr_gauge_ray(network, gauge, target, output, show_field):
    doc = _load(network)
    old = _frame(doc, gauge)
    new = make_frame(doc.net, _point(target))
    _report(transforms.rotate_gauge(doc.net, old, new), output, show_field)


@transform.command("reorient-path")
@click.argument("network", type=click.File("r"))
@click.option("--path", "path", required=True, help="comma separated edge ids from a source to a sink")
@gauge_opt
@out_opt
@field_opt
@_guard
def tr_path(network, path, gauge, output, show_field):
    doc = _load(network)
    _report(transforms.reorient_along_path(doc.net, _frame(doc, gauge), _ids(path)), output, show_field)


@transform.command("reorient-cycle")
@click.argument("network", type=click.File("r"))
@click.option("--cycle", required=True, help="comma separated edge ids of a directed cycle")
@gauge_opt
@out_opt
@field_opt
@_guard
def tr_cycle(network, cycle, gauge, output, show_field):
    doc = _load(network)
    _report(transforms.reorient_along_cycle(doc.net, _frame(doc, gauge), _ids(cycle)), output, show_field)


@transform.command("weight-gauge")
@click.argument("network", type=click.File("r"))
@click.option("--vertex", required=True)
@click.option("--t", "t", required=True, help="positive rational gauge parameter")
@gauge_opt
@out_opt
@field_opt
@_guard
def tr_weight(network, vertex, t, gauge, output, show_field):
    doc = _load(network)
    _report(transforms.apply_weight_gauge(doc.net, _frame(doc, gauge), vertex, parse_rational(t)), output, show_field)


@transform.command("move")
@click.argument("network", type=click.File("r"))
@click.option("--kind", type=click.Choice(["M1", "M2", "M3-insert", "M3-remove", "vertex"]), required=True)
@click.option("--site", required=True, help="M1: four vertices; M2: two vertices; M3: an edge or a vertex; vertex: id")
@click.option("--to", "target", help="new position 'x,y' (vertex move, optional M3 insertion point)")
@gauge_opt
@out_opt
@field_opt
@_guard
def tr_move(network, kind, site, target, gauge, output, show_field):
    doc = _load(network, validate=False)
    frame = _frame(doc, gauge)
    ids = _ids(site)
    net = doc.net
    if kind == "M1":
        res = transforms.square_move(net, frame, ids)
    elif kind == "M2":
        res = transforms.flip_move(net, frame, ids)
    elif kind == "M3-insert":
        res = transforms.insert_middle_vertex(net, frame, ids[0], _point(target) if target else None)
    elif kind == "M3-remove":
        res = transforms.remove_middle_vertex(net, frame, ids[0])
    else:
        if not target:
            raise click.UsageError("a vertex move needs --to")
        res = transforms.move_vertex(net, frame, ids[0], _point(target))
    _report(res, output, show_field)


@transform.command("reduce")
@click.argument("network", type=click.File("r"))
@click.option("--kind", type=click.Choice(["R1", "R2", "R3"]), required=True)
@click.option("--site", required=True, help="R1: white,black; R2: the two dipole vertices; R3: the leaf")
@gauge_opt
@out_opt
@field_opt
@_guard
def tr_reduce(network, kind, site, gauge, output, show_field):
    doc = _load(network, validate=False)
    frame = _frame(doc, gauge)
    ids = _ids(site)
    _report(transforms.apply_reduction(doc.net, frame, kind, ids if kind != "R3" else ids[0]), output, show_field)


# ---------------------------------------------------------------------------
# amalgamation, Le-networks, export


@main.group()
def amalgamate():
    """Disjoint sums and projections of boundary pairs."""


@amalgamate.command("sum")
@click.argument("left", type=click.File("r"))
@click.argument("right", type=click.File("r"))
@out_opt
@_guard
def am_sum(left, right, output):
    net = transforms.disjoint_sum(_load(left).net, _load(right).net)
    _emit(serialize_network(net), output)


@amalgamate.command("project")
@click.argument("network", type=click.File("r"))
@click.argument("j1", type=int)
@click.argument("j2", type=int)
@out_opt
@_guard
def am_project(network, j1, j2, output):
    net = transforms.project_pair(_load(network).net, j1, j2)
    rep = validate_network(net)
    _emit(serialize_network(net), output)
    if not rep.ok:
        click.echo(f"# warning: the projected network is not valid:\n{rep}", err=True)
        sys.exit(1)


@main.group()
def le():
    """Le-diagrams and their networks."""


@le.command("build")
@click.argument("diagram", type=click.File("r"))
@out_opt
@_guard
def le_build(diagram, output):
    t = parse_diagram(diagram.read())
    _emit(serialize_network(build_le_network(t)), output)


@main.group()
def export():
    """DOT and SVG renderings."""


@export.command("dot")
@click.argument("network", type=click.File("r"))
@click.option("--vectors", is_flag=True, help="label edges with their vectors")
@click.option("--signature", "sig", type=click.File("r"), help="label edges with a signature")
@click.option("--master", "master", type=click.File("r"), help="Le-diagram: color edges by master signature class")
@gauge_opt
@out_opt
@_guard
def ex_dot(network, vectors, sig, master, gauge, output):
    doc = _load(network)
    field = flows.linear_system_oracle(doc.net, _frame(doc, gauge))[0] if vectors else None
    bits = signatures.parse_bits(sig.read()) if sig else None
    colors = None
    if master:
        d = parse_diagram(master.read())
        d = d.diagram if isinstance(d, LeTableau) else d
        bits = master_signature(doc.net, d)
        colors = master_edge_classes(doc.net)
    _emit(export_dot(doc.net, field, bits, colors), output)


@export.command("svg")
@click.argument("network", type=click.File("r"))
@gauge_opt
@out_opt
@_guard
def ex_svg(network, gauge, output):
    doc = _load(network)
    _emit(export_svg(doc.net, _frame(doc, gauge)), output)


if __name__ == "__main__":  # pragma: no cover
    main()
