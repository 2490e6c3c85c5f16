"""Command-line interface: ``grt <command> [options]``.

Exit codes: 0 success, 2 precondition failure, 3 unreadable or malformed input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from grt import constructions
from grt.dtrans import cosine_obstruction, cosine_profile, cosine_sequence_recurrence, intersection_array
from grt.errors import CapExceededError, GraphFormatError, PreconditionError
from grt.export import to_obj, to_svg
from grt.graph import CATALOG, catalog, parse_graph
from grt.linalg import DEFAULT_GROUP_TOL, DEFAULT_SUBSPACE_TOL, Relation, Subspace, graph_spectrum, subspace_relation
from grt.metrics import (
    circumradius_at_unit_edge,
    dihedral_angle_from_dual,
    metric_report,
    relative_length,
    theta_from_metrics,
)
from grt.realization import (
    Realization,
    irreducibility_test,
    is_balanced,
    is_spectral,
    is_symmetric,
    max_symmetry_residual,
    scale_orbits,
    skeleton,
    spectral_realization,
    sphericity,
)
from grt.rigidity import multiplicity_criteria, rigidity_report
from grt.symmetry import PermGroup, automorphism_group, orbital_eigenspaces, orbitals, transitivity_class

EXIT_OK = 0
EXIT_PRECONDITION = 2
EXIT_PARSE = 3

EXTENSION_FORMATS = {".g6": "graph6", ".graph6": "graph6", ".txt": "edge_list",
                     ".edges": "edge_list", ".edgelist": "edge_list", ".json": "json"}

CONSTRUCTIONS = {
    "square_c4": constructions.square_c4,
    "rectangle_c4": constructions.rectangle_c4,
    "rhombus_c4": constructions.rhombus_c4,
    "hexagonal_prism": constructions.hexagonal_prism_balanced,
    "c6xc6_sign": constructions.c6xc6_sign,
    "truncated_tetrahedron_mix": constructions.truncated_tetrahedron_mix,
    "truncated_tetrahedron_family": constructions.truncated_tetrahedron_family,
}


class ParseFailure(Exception):
    pass


class CliError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """Reports bad argv as a parse failure (exit 3) instead of exiting itself."""

    def error(self, message):
        raise ParseFailure(f"{self.prog}: {message}")


# -- argument handling ----------------------------------------------------------


def _int_list(text):
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _float_list(text):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _positive(text):
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"tolerance must be positive, got {text}")
    return value


def _add_graph_source(p):
    g = p.add_argument_group("graph source")
    g.add_argument("--catalog", metavar="NAME", help="catalog graph name")
    g.add_argument("--params", type=_int_list, default=[], metavar="P,Q", help="catalog parameters")
    g.add_argument("--input", metavar="PATH", help="graph file")
    g.add_argument("--input-format", choices=["graph6", "edgelist", "edge_list", "json"],
                   help="format of --input (default: from the file extension)")


def _add_realization_source(p):
    _add_graph_source(p)
    r = p.add_argument_group("realization source (default: spectral realization of the graph)")
    r.add_argument("--index", type=int, default=None, metavar="K", help="eigenvalue index, 1 = largest")
    r.add_argument("--realization", metavar="PATH", help="realization JSON file")
    r.add_argument("--skeleton", metavar="NAME", help="stored polytope coordinates")
    r.add_argument("--construction", choices=sorted(CONSTRUCTIONS), help="worked-example realization")
    r.add_argument("--scales", type=_float_list, metavar="A,B", help="rescale the vertex orbits of Aut(G)")
    p.add_argument("--group", metavar="PATH", help="permutation group JSON (default: Aut(G))")


def _add_common(p, formats):
    p.add_argument("--format", choices=formats, default=formats[0], help="output format")
    p.add_argument("--out", metavar="PATH", help="write output here instead of stdout")
    p.add_argument("--tol", type=_positive, default=DEFAULT_GROUP_TOL, help="eigenvalue grouping tolerance")
    p.add_argument("--residual-tol", type=_positive, default=1e-8, help="balance residual tolerance")
    p.add_argument("--subspace-tol", type=_positive, default=DEFAULT_SUBSPACE_TOL, help="subspace tolerance")
    p.add_argument("--seed", type=int, default=None, help="random seed (default: $GRT_SEED or 0)")


def build_parser():
    parser = _Parser(prog="grt", description="Spectral and symmetric graph realizations.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="grouped adjacency spectrum")
    _add_graph_source(p)
    _add_common(p, ["json", "csv", "text"])

    p = sub.add_parser("realize", help="spectral realization for an eigenvalue index")
    _add_graph_source(p)
    p.add_argument("--index", type=int, required=True, metavar="K")
    _add_common(p, ["json", "csv", "text", "obj", "svg"])

    p = sub.add_parser("check", help="balanced / spectral / symmetric / sphericity / irreducibility")
    _add_realization_source(p)
    _add_common(p, ["json", "text"])

    p = sub.add_parser("aut", help="automorphism group generators and order")
    _add_graph_source(p)
    _add_common(p, ["json", "text"])

    p = sub.add_parser("transitivity", help="vertex / edge / arc / distance transitivity")
    _add_graph_source(p)
    _add_common(p, ["json", "text"])

    p = sub.add_parser("orbitals", help="orbitals and the seeded orbital-matrix decomposition")
    _add_graph_source(p)
    _add_common(p, ["json", "text"])

    p = sub.add_parser("cosine", help="cosine vector, sequence and obstruction")
    _add_realization_source(p)
    p.add_argument("--base", type=int, default=0)
    p.add_argument("--fixed", type=_int_list, default=None, metavar="I,J",
                   help="fixed positions (default: base and its neighbours)")
    p.add_argument("--no-sum-zero", action="store_true", help="drop the sum-zero constraint")
    _add_common(p, ["json", "csv", "text"])

    p = sub.add_parser("intersection-array", help="intersection array and cosine recurrences")
    _add_graph_source(p)
    p.add_argument("--theta", type=float, action="append", help="also print the recurrence sequence")
    _add_common(p, ["json", "text"])

    p = sub.add_parser("metrics", help="metric report or closed-form metric quantities")
    _add_realization_source(p)
    p.add_argument("--theta", type=float, help="closed forms for this eigenvalue on the given graph")
    p.add_argument("--deg", type=float, help="with --rel-length: invert for theta")
    p.add_argument("--rel-length", type=float)
    _add_common(p, ["json", "text"])

    p = sub.add_parser("rigidity", help="rigidity report or multiplicity criteria")
    _add_realization_source(p)
    p.add_argument("--criteria-d", type=int, metavar="D", help="only evaluate the multiplicity criteria")
    _add_common(p, ["json", "text"])

    p = sub.add_parser("catalog", help="catalog listing")
    p.add_argument("action", choices=["list"])
    _add_common(p, ["json", "text"])

    p = sub.add_parser("export", help="write a realization as json, obj or svg")
    _add_realization_source(p)
    _add_common(p, ["json", "obj", "svg", "csv"])
    return parser


# -- sources --------------------------------------------------------------------


def _seed(args):
    if args.seed is not None:
        return args.seed
    env = os.environ.get("GRT_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise CliError(f"GRT_SEED must be an integer, got {env!r}") from None


def _read_bytes(path):
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise ParseFailure(f"cannot read {path}: {exc.strerror}") from None


def load_graph(args):
    if args.catalog and args.input:
        raise CliError("give either --catalog or --input, not both")
    if args.catalog:
        return catalog(args.catalog, args.params)
    if args.input:
        fmt = args.input_format or EXTENSION_FORMATS.get(Path(args.input).suffix.lower())
        if fmt is None:
            raise CliError("cannot infer the input format; pass --input-format")
        try:
            return parse_graph(_read_bytes(args.input), fmt)
        except GraphFormatError as exc:
            raise ParseFailure(str(exc)) from None
    raise CliError("no graph given; use --catalog NAME or --input PATH")


def load_group(args, graph):
    if getattr(args, "group", None):
        try:
            group = PermGroup.from_json(_read_bytes(args.group).decode("utf-8"))
        except (ValueError, KeyError, TypeError) as exc:
            raise ParseFailure(f"bad group file: {exc}") from None
        if group.n != graph.n:
            raise CliError(f"group acts on {group.n} points, graph has {graph.n} vertices")
        return group
    return automorphism_group(graph)


def load_realization(args):
    sources = [s for s in (args.realization, args.skeleton, args.construction) if s]
    if len(sources) > 1:
        raise CliError("give at most one of --realization, --skeleton, --construction")
    if args.realization:
        try:
            r = Realization.from_json(_read_bytes(args.realization).decode("utf-8"))
        except (ValueError, KeyError, TypeError) as exc:
            if isinstance(exc, PreconditionError):
                raise
            raise ParseFailure(f"bad realization file: {exc}") from None
    elif args.skeleton:
        r = skeleton(args.skeleton)
    elif args.construction:
        r = CONSTRUCTIONS[args.construction]()
    else:
        if args.index is None:
            raise CliError("no realization given; use --index K with a graph, or a realization source")
        r = spectral_realization(load_graph(args), args.index, args.tol)
    if args.scales is not None:
        r = scale_orbits(r, load_group(args, r.graph), args.scales)
    return r


# -- output ---------------------------------------------------------------------


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return 0.0 if x == 0 else x
    return obj


def _text(obj, indent=0):
    pad = "  " * indent
    lines = []
    for key, value in obj.items():
        if isinstance(value, dict):
            lines.append(f"{pad}{key}:")
            lines.append(_text(value, indent + 1).rstrip("\n"))
        else:
            if isinstance(value, float):
                value = f"{value:.12g}"
            lines.append(f"{pad}{key}: {value}")
    return "\n".join(lines) + "\n"


def render(obj, fmt):
    obj = _plain(obj)
    if fmt == "json":
        return json.dumps(obj, indent=2) + "\n"
    if fmt == "text":
        return _text(obj)
    raise CliError(f"format {fmt!r} is not available for this command")


def _matrix_csv(m):
    return "\n".join(",".join(f"{float(x):.12g}" for x in row) for row in np.atleast_2d(m)) + "\n"


# -- commands -------------------------------------------------------------------


def cmd_spectrum(args):
    spec = graph_spectrum(load_graph(args), args.tol)
    if args.format == "csv":
        return spec.to_csv()
    if args.format == "text":
        return render({f"{e.value:.12g}": e.multiplicity for e in spec.eigs}, "text")
    return json.dumps(_plain(spec.to_dict()), indent=2) + "\n"


def _realization_output(r, fmt, extra=None, stderr=None):
    if fmt == "obj":
        if r.d > 3:
            print(f"note: d={r.d} > 3, exporting the projection onto the first 3 coordinates",
                  file=stderr or sys.stderr)
        return to_obj(r)
    if fmt == "svg":
        return to_svg(r)
    if fmt == "csv":
        return _matrix_csv(r.matrix)
    out = dict(extra or {})
    out.update(r.to_dict())
    return render(out, fmt)


def cmd_realize(args):
    g = load_graph(args)
    r = spectral_realization(g, args.index, args.tol)
    return _realization_output(r, args.format, {"theta": r.theta}, args.stderr)


def cmd_export(args):
    return _realization_output(load_realization(args), args.format, stderr=args.stderr)


def cmd_check(args):
    r = load_realization(args)
    group = load_group(args, r.graph)
    symmetric = is_symmetric(r, group)
    sph = sphericity(r)
    out = {
        "graph": r.graph.name,
        "n": r.n,
        "d": r.d,
        "balanced": is_balanced(r, args.residual_tol),
        "spectral": is_spectral(r, args.residual_tol, args.tol),
        "symmetric": symmetric,
        "symmetry_residual": max_symmetry_residual(r, group),
        "sphericity": {"kind": sph.kind.value, "alpha": sph.alpha},
        "group_order": group.order,
    }
    out["irreducible"] = (
        irreducibility_test(r, group, samples=3, seed=_seed(args)).irreducible if symmetric else None
    )
    return render(out, args.format)


def cmd_aut(args):
    g = load_graph(args)
    group = automorphism_group(g)
    return render({"n": group.n, "order": group.order, "generators": [list(p) for p in group.generators]},
                  args.format)


def cmd_transitivity(args):
    g = load_graph(args)
    return render(transitivity_class(g, automorphism_group(g)).to_dict(), args.format)


def cmd_orbitals(args):
    g = load_graph(args)
    group = automorphism_group(g)
    part = orbitals(group)
    candidate = orbital_eigenspaces(group, seed=_seed(args))
    adjacency = graph_spectrum(g, args.tol)
    matches = []
    for block in candidate.eigs:
        u = Subspace(block.basis)
        equal = [e.value for e in adjacency.eigs
                 if subspace_relation(u, Subspace(e.basis), 1e-6) == Relation.EQUAL]
        matches.append({"dim": block.multiplicity, "equals_eigenspace": equal[0] if equal else None})
    out = {
        "num_classes": part.num_classes,
        "classes": {f"{i},{j}": int(part.index[i, j]) for i in range(g.n) for j in range(i, g.n)},
        "seed": _seed(args),
        "candidate_decomposition": matches,
        "matches_adjacency_eigenspaces": (len(candidate.eigs) == len(adjacency.eigs)
                                          and all(m["equals_eigenspace"] is not None for m in matches)),
    }
    return render(out, args.format)


def cmd_cosine(args):
    r = load_realization(args)
    profile = cosine_profile(r, args.base)
    if args.format == "csv":
        return _matrix_csv(profile.vector[:, None])
    obstruction = cosine_obstruction(profile, args.fixed, sum_zero=not args.no_sum_zero)
    out = profile.to_dict()
    out["obstruction"] = obstruction.to_dict()
    return render(out, args.format)


def cmd_intersection_array(args):
    arr = intersection_array(load_graph(args))
    out = arr.to_dict()
    out["symbol"] = arr.symbol()
    if args.theta:
        out["recurrence"] = {f"{t:.12g}": cosine_sequence_recurrence(arr, t) for t in args.theta}
    return render(out, args.format)


def cmd_metrics(args):
    if args.deg is not None or args.rel_length is not None:
        if args.deg is None or args.rel_length is None:
            raise CliError("--deg and --rel-length go together")
        return render({"theta": theta_from_metrics(args.deg, args.rel_length)}, args.format)
    if args.theta is not None:
        g = load_graph(args)
        out = {
            "degree": g.degree,
            "theta": args.theta,
            "lambda": g.degree - args.theta,
            "cosine": args.theta / g.degree,
            "relative_length": relative_length(g.degree, args.theta),
            "circumradius_at_unit_edge": circumradius_at_unit_edge(g, args.theta),
            "dihedral_angle_deg": dihedral_angle_from_dual(g, args.theta, degrees=True),
        }
        return render(out, args.format)
    r = load_realization(args)
    group = load_group(args, r.graph)
    return render(metric_report(r, group=group, tol=args.residual_tol).to_dict(), args.format)


def cmd_rigidity(args):
    if args.criteria_d is not None:
        spec = graph_spectrum(load_graph(args), args.tol)
        crit = multiplicity_criteria(spec, args.criteria_d)
        return render({"d": args.criteria_d, "multiplicities": spec.multiplicities,
                       "balanced_forced": crit.balanced_forced, "rigid_forced": crit.rigid_forced},
                      args.format)
    r = load_realization(args)
    group = load_group(args, r.graph)
    return render(rigidity_report(r, group=group, seed=_seed(args)).to_dict(), args.format)


def cmd_catalog(args):
    return render({name: {"params": arity if arity is not None else "list"}
                   for name, arity in sorted(CATALOG.items())}, args.format)


COMMANDS = {
    "spectrum": cmd_spectrum,
    "realize": cmd_realize,
    "check": cmd_check,
    "aut": cmd_aut,
    "transitivity": cmd_transitivity,
    "orbitals": cmd_orbitals,
    "cosine": cmd_cosine,
    "intersection-array": cmd_intersection_array,
    "metrics": cmd_metrics,
    "rigidity": cmd_rigidity,
    "catalog": cmd_catalog,
    "export": cmd_export,
}


def run(argv=None, stdout=None, stderr=None):
    """Run one command; returns the exit code."""
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    try:
        args = build_parser().parse_args(argv)
        args.stderr = stderr
        _seed(args)
        text = COMMANDS[args.command](args)
    except ParseFailure as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_PARSE
    except (PreconditionError, CapExceededError, CliError) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_PRECONDITION
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        stdout.write(text)
    return EXIT_OK


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
