"""Command-line front end for hyperstruct.

Every command prints human-readable lines followed by one JSON object on
the last line of stdout. Domain errors exit with 1, malformed input with 2.
"""

import functools
import json
import os

import click

import config
from entangle import entanglement_order, schmidt_coefficients
from errors import HyperError, MalformedInput
from gft import assign, globalize, tunnel
from hypercore import export_dot, fuse, validate
from loaders import (dump_hyperstructure, dump_value, dumps,
                     load_action, load_assignment_file, load_family,
                     load_hyperstructure, load_module, load_ring, load_state,
                     load_topology, load_tree, parse_edit_value, read_json)
from multimod import verify_module_axioms
from nest import build_nest


def report(lines, payload):
    for line in lines:
        click.echo(line)
    click.echo(json.dumps(payload, sort_keys=True, default=str))


def reports_errors(command):
    """Report a HyperError as a JSON line and exit with its code."""

    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except HyperError as exc:
            report([f"error: {exc}"],
                   {**exc.details, "error": exc.name, "message": str(exc)})
            raise SystemExit(exc.exit_code)

    return wrapper


def _file_or_name(text):
    """Decoded JSON when `text` is a file, else the text as a built-in name."""

    return read_json(text) if os.path.exists(text) else text


def _write_or_print(H, out):
    text = dumps(dump_hyperstructure(H))
    if out:
        with open(out, "w", encoding="utf-8") as f:
            f.write(text + "\n")
        return [f"wrote {out}"]
    return text.splitlines()


def _summary(H):
    return {"depth": H.depth,
            "elements": [len(level) for level in H.levels],
            "bonds": len(H.bonds)}


##############################################################################
# Commands


@click.group()
@click.option("--verbose", is_flag=True, help="Log progress to stderr.")
def cli(verbose):
    """Build, check and globalize hyperstructures."""

    if verbose:
        config.configure_logging("DEBUG")


@cli.command("validate")
@click.argument("hyper", type=click.Path(exists=True, dir_okay=False))
@reports_errors
def validate_cmd(hyper):
    """Check the laws of a hyperstructure file."""

    H = load_hyperstructure(read_json(hyper))
    found = validate(H)
    lines = [f"{v.kind} at {v.element}: {v.detail}" for v in found]
    lines.append(f"{H!r}: {len(found)} violation(s)")
    report(lines, {"violations": len(found), "kinds": dict(found.kinds())})
    if not found.ok:
        raise SystemExit(1)


@cli.command("build-nest")
@click.argument("topology", type=click.Path(exists=True, dir_okay=False))
@click.argument("family", type=click.Path(exists=True, dir_okay=False))
@click.option("--out", type=click.Path(dir_okay=False),
              help="Write the hyperstructure here instead of stdout.")
@reports_errors
def build_nest_cmd(topology, family, out):
    """Build the hyperstructure of a nest family of open sets."""

    T = load_topology(read_json(topology))
    H = build_nest(T, load_family(read_json(family)))
    report(_write_or_print(H, out), _summary(H))


@cli.command("verify-module")
@click.argument("action", type=click.Path(exists=True, dir_okay=False))
@click.option("--ring", "rings", multiple=True, required=True,
              help="Ring file or built-in name (Z<n>, M2Z<p>); repeat per ring.")
@click.option("--module", "module", required=True,
              help="Module file or built-in ring name.")
@click.option("--commuting", is_flag=True,
              help="Also require actions of different rings to commute.")
@reports_errors
def verify_module_cmd(action, rings, module, commuting):
    """Check every module axiom of an action system."""

    system = load_action(read_json(action),
                         [load_ring(_file_or_name(r)) for r in rings],
                         load_module(_file_or_name(module)), commuting)
    found = verify_module_axioms(system)
    lines = [f"{v.kind}: " + ", ".join(f"{k}={w}" for k, w in sorted(v.witness.items()))
             for v in found]
    lines.append(f"{system!r}: checked {found.checked} case(s)")
    report(lines, found.as_dict())
    if not found.ok:
        raise SystemExit(1)


@cli.command("classify-state")
@click.argument("state", type=click.Path(exists=True, dir_okay=False))
@click.option("--tree", required=True, type=click.Path(exists=True, dir_okay=False),
              help="Partition tree of the factors as nested JSON arrays.")
@reports_errors
def classify_state_cmd(state, tree):
    """Entanglement order of a state against a partition tree."""

    s = load_state(read_json(state))
    t = load_tree(read_json(tree))
    result = entanglement_order(s, t)

    lines = [f"{s!r} under {t.to_nested()}: order {result.order}"]
    if result.witness_node:
        lines.append(f"does not factorize across the children of {list(result.witness_node)}")
    if len(t.children) > 1:
        width = len(t.children[0].leaves)
        coefficients = schmidt_coefficients(s, range(1, width + 1),
                                            range(width + 1, len(s.dims) + 1))
        lines.append("first cut coefficients: "
                     + " ".join(f"{c:.6g}" for c in coefficients))

    witness = list(result.witness_node) if result.witness_node else None
    report(lines, {"order": result.order, "witness": witness})


def _assignment(assignment, hyper):
    recipient, leaves = load_assignment_file(read_json(assignment))
    H = load_hyperstructure(read_json(hyper))
    return assign(H, recipient, leaves)


@cli.command("globalize")
@click.argument("assignment", type=click.Path(exists=True, dir_okay=False))
@click.option("--hyper", required=True, type=click.Path(exists=True, dir_okay=False),
              help="Source hyperstructure file.")
@reports_errors
def globalize_cmd(assignment, hyper):
    """Push leaf values up to a global value."""

    A = _assignment(assignment, hyper)
    result = globalize(A)
    R = A.recipient

    lines = []
    for values in result.level_values:
        for element, value in sorted(values.items()):
            lines.append(f"{element} = {json.dumps(dump_value(R, value))}")
    lines.extend(f"glue: {issue.element}: {issue.detail}" for issue in result.glue_report)

    value = None if result.global_value is None else dump_value(R, result.global_value)
    report(lines, {"global": value, "glue_issues": len(result.glue_report)})
    if not result.ok:
        raise SystemExit(1)


def _edits(recipient, pairs):
    edits = {}
    for pair in pairs:
        key, sep, text = pair.partition("=")
        if not sep or not key:
            raise MalformedInput(f"edit {pair!r} is not key=value")
        edits[key] = parse_edit_value(recipient, text)
    return edits


@cli.command("tunnel")
@click.argument("assignment", type=click.Path(exists=True, dir_okay=False))
@click.option("--hyper", required=True, type=click.Path(exists=True, dir_okay=False),
              help="Source hyperstructure file.")
@click.option("--edit", "edits", multiple=True, metavar="KEY=VALUE",
              help="New value for a leaf; repeat for several leaves.")
@reports_errors
def tunnel_cmd(assignment, hyper, edits):
    """Global value before and after editing leaves."""

    A = _assignment(assignment, hyper)
    R = A.recipient
    old, new = tunnel(A, _edits(R, edits))

    old, new = dump_value(R, old), None if new is None else dump_value(R, new)
    report([f"global {json.dumps(old)} -> {json.dumps(new)}"],
           {"old": old, "new": new})


@cli.command("fuse")
@click.argument("left", type=click.Path(exists=True, dir_okay=False))
@click.argument("right", type=click.Path(exists=True, dir_okay=False))
@click.option("--add-top", is_flag=True, help="Bind the fused top level by one bond.")
@click.option("--out", type=click.Path(dir_okay=False),
              help="Write the hyperstructure here instead of stdout.")
@reports_errors
def fuse_cmd(left, right, add_top, out):
    """Merge two hyperstructures level by level."""

    H = fuse(load_hyperstructure(read_json(left)),
             load_hyperstructure(read_json(right)), add_top=add_top)
    report(_write_or_print(H, out), _summary(H))


@cli.command("export-dot")
@click.argument("hyper", type=click.Path(exists=True, dir_okay=False))
@reports_errors
def export_dot_cmd(hyper):
    """Print a hyperstructure as a Graphviz digraph."""

    click.echo(export_dot(load_hyperstructure(read_json(hyper))), nl=False)


def run(argv=None):
    """Run the command line on `argv` and return its exit code."""

    try:
        cli.main(args=argv, prog_name="hyperstruct")
    except SystemExit as exc:
        return exc.code or 0
    return 0


if __name__ == "__main__":
    raise SystemExit(run())
