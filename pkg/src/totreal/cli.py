"""Command-line front end.

Every subcommand writes one JSON document to standard output.  Exit status is
0 on success, 2 for invalid input and 3 when a computation cannot proceed.
"""
from __future__ import annotations

import argparse
import json
import sys
import warnings

import numpy as np

from . import accretivity, cauchy, lagrangian, subspaces, surfaces
from ._kernels import BACKEND
from .config import DEFAULT_TOLERANCES, ToleranceConfig
from .errors import NumericalError, ToolkitError, ValidationError

EXIT_OK, EXIT_VALIDATION, EXIT_NUMERICAL = 0, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_VALIDATION, f"{self.prog}: error: {message}\n")


def _complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}")


def _floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}")


def _read_text(args) -> str:
    if getattr(args, "stdin", False):
        return sys.stdin.read()
    if not getattr(args, "input", None):
        raise ValidationError("give --input FILE or --stdin")
    try:
        with open(args.input, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise ValidationError(f"cannot read {args.input}: {exc}") from exc


def _read_json(args):
    try:
        return json.loads(_read_text(args))
    except json.JSONDecodeError as exc:
        raise ValidationError(f"invalid JSON: {exc}") from exc


def _tolerances(args) -> ToleranceConfig:
    return DEFAULT_TOLERANCES.replace(
        coefficient_tol=args.tol_coefficient,
        lagrangian_tol=args.tol_lagrangian,
        unitary_tol=args.tol_unitary,
        rank_tol=args.tol_rank,
        phase_tol=args.tol_phase,
    )


def _cx(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


# plane

def cmd_plane_analyze(args):
    tol = _tolerances(args)
    L = subspaces.RealSubspace.from_json(_read_json(args))
    report = subspaces.classify(L, tol).to_json()
    report["transverse"] = subspaces.is_transverse(L, tol.rank_tol)
    return {"kind": "plane_report", **report}


def cmd_plane_random(args):
    if args.special and not args.lagrangian:
        raise ValidationError("--special requires --lagrangian")
    if args.lagrangian:
        L = subspaces.random_lagrangian(args.m, args.seed, special=args.special)
    else:
        L = subspaces.random_subspace(args.m, args.seed)
    return L.to_json()


# surface

def _load_surface(args) -> surfaces.TriangulatedSurface:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return surfaces.read_trmesh(_read_text(args))


def cmd_surface_analyze(args):
    tol = _tolerances(args)
    M = _load_surface(args)
    coeff = surfaces.coefficient_field(M, tol.rank_tol)
    integral = surfaces.integrate_restricted_form(M)
    out = {
        "kind": "surface_report",
        "ambient_m": M.ambient_m,
        "num_vertices": int(M.vertices.shape[0]),
        "num_simplices": len(M),
        "orientation": M.orientation_report(),
        "coefficient_min": float(coeff.min()) if coeff.size else None,
        "coefficient_max": float(coeff.max()) if coeff.size else None,
        "coefficient_mean": float(coeff.mean()) if coeff.size else None,
        "totally_real": bool(coeff.size and coeff.min() > tol.coefficient_tol),
        "total_mass": M.total_mass(),
        "restricted_form_integral": _cx(integral),
        "abs_form_integral": float(np.sum(np.abs(M.form_values))),
        "canonical": surfaces.to_trmesh(M),
        "tolerances": tol.as_dict(),
    }
    if args.centers is not None:
        if args.seed is None:
            raise ValidationError("--seed is required when sampling centers")
        if args.radii is None or len(args.radii) != 3:
            raise ValidationError("--radii needs r_min,r_max,count")
        centers = surfaces.sample_centers(M, args.centers, args.seed)
        radii = surfaces.radius_sequence(args.radii[0], args.radii[1], int(args.radii[2]))
        out["ahlfors"] = surfaces.ahlfors_report(M, centers, radii).to_json()
        out["doubling"] = surfaces.doubling_report(M, centers, radii / 2).to_json()
    return out


def cmd_surface_gradient_graph(args):
    try:
        pot = lagrangian.PolynomialPotential.from_json(_read_json(args))
    except ValueError as exc:
        raise ValidationError(str(exc)) from exc
    lo = args.lo if args.lo is not None else [0.0]
    hi = args.hi if args.hi is not None else [1.0]
    phi = pot.potential(lo if len(lo) > 1 else lo[0], hi if len(hi) > 1 else hi[0])
    M = lagrangian.gradient_graph(phi, args.grid if len(args.grid) > 1 else args.grid[0])
    coeff = surfaces.coefficient_field(M)
    defect = surfaces.lagrangian_defect_field(M)
    text = surfaces.to_trmesh(M)
    out = {
        "kind": "gradient_graph_report",
        "ambient_m": M.ambient_m,
        "num_vertices": int(M.vertices.shape[0]),
        "num_simplices": len(M),
        "coefficient_min": float(coeff.min()),
        "lagrangian_defect_max": float(defect.max()),
    }
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
        out["output"] = args.output
    else:
        out["mesh"] = text
    return out


# cauchy

def _curve(args) -> cauchy.ClosedCurve:
    if args.curve_file:
        with open(args.curve_file, encoding="utf-8") as fh:
            try:
                G = cauchy.ClosedCurve.from_json(json.load(fh))
            except json.JSONDecodeError as exc:
                raise ValidationError(f"invalid curve JSON: {exc}") from exc
    else:
        G = cauchy.named_curve(args.curve, args.N)
    return G.reversed() if args.reverse else G


def _boundary(args):
    try:
        return cauchy.BOUNDARY_FUNCTIONS[args.f]
    except KeyError:
        raise ValidationError(f"unknown boundary function {args.f!r}; choose from {sorted(cauchy.BOUNDARY_FUNCTIONS)}")


def cmd_cauchy_eval(args):
    G = _curve(args)
    f = _boundary(args)
    points = args.z or [0j]
    values = cauchy.cauchy_transform(G, f, np.array(points))
    return {
        "kind": "cauchy_eval",
        "N": G.N,
        "orientation": G.orientation,
        "f": args.f,
        "exclusion_radius": G.exclusion_radius,
        "results": [{"z": _cx(z), "value": _cx(v)} for z, v in zip(points, values)],
    }


def cmd_cauchy_jump(args):
    G = _curve(args)
    f = _boundary(args)
    nodes = args.node or [0]
    rows = []
    for k in nodes:
        jump = cauchy.plemelj_jump(G, f, k, args.offsets)
        target = complex(G.samples(f)[k]) if 0 <= k < G.N else 0j
        rows.append({"node": k, "jump": _cx(jump), "f": _cx(target), "error": abs(jump - target)})
    return {"kind": "cauchy_jump", "N": G.N, "orientation": G.orientation, "f": args.f, "results": rows}


def cmd_cauchy_holomorphy(args):
    G = _curve(args)
    f = _boundary(args)
    probes = args.probe or [0j]
    residuals = [cauchy.holomorphy_check(G, f, [p], args.loop_radius) for p in probes]
    return {
        "kind": "cauchy_holomorphy",
        "N": G.N,
        "f": args.f,
        "loop_radius": args.loop_radius,
        "results": [{"probe": _cx(p), "residual": r} for p, r in zip(probes, residuals)],
        "max_residual": max(residuals),
    }


# accretivity

def cmd_accretivity_report(args):
    if args.curve:
        M = cauchy.named_curve(args.curve, args.N).to_surface()
    else:
        M = _load_surface(args)
    P = accretivity.build_dyadic_cells(M, args.depth)
    report = accretivity.pseudo_accretivity_report(M, P, args.delta, args.min_level)
    return {"kind": "accretivity_report", "depth": args.depth, **report.to_json()}


def build_parser() -> argparse.ArgumentParser:
    tol = argparse.ArgumentParser(add_help=False)
    for name in ("coefficient", "lagrangian", "unitary", "rank", "phase"):
        tol.add_argument(f"--tol-{name}", type=float, default=None, metavar="X",
                         help=f"override {name}_tol (default {getattr(DEFAULT_TOLERANCES, name + '_tol'):g})")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--pretty", action="store_true", help="indent JSON and print a summary to stderr")
    source = argparse.ArgumentParser(add_help=False)
    source.add_argument("--input", help="input file")
    source.add_argument("--stdin", action="store_true", help="read input from standard input")
    curve = argparse.ArgumentParser(add_help=False)
    curve.add_argument("--curve", default="circle", help="circle, circle(r) or ellipse(a,b)")
    curve.add_argument("--curve-file", help="curve JSON file (overrides --curve)")
    curve.add_argument("--N", type=int, default=256, help="number of nodes")
    curve.add_argument("--reverse", action="store_true", help="reverse the orientation")
    curve.add_argument("--f", default="one", help=f"boundary function: {', '.join(cauchy.BOUNDARY_FUNCTIONS)}")

    parser = _Parser(prog="totreal", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s 0.1.0 ({BACKEND} kernels)")
    groups = parser.add_subparsers(dest="group", required=True, parser_class=_Parser)

    plane = groups.add_parser("plane", help="real m-planes in C^m").add_subparsers(dest="action", required=True)
    p = plane.add_parser("analyze", parents=[common, source, tol], help="classify a plane JSON")
    p.set_defaults(func=cmd_plane_analyze)
    p = plane.add_parser("random", parents=[common], help="emit a seeded random plane JSON")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--lagrangian", action="store_true")
    p.add_argument("--special", action="store_true")
    p.set_defaults(func=cmd_plane_random)

    surface = groups.add_parser("surface", help="triangulated surfaces").add_subparsers(dest="action", required=True)
    p = surface.add_parser("analyze", parents=[common, source, tol], help="validate and analyze a trmesh file")
    p.add_argument("--centers", type=int, default=None, help="number of sampled ball centers")
    p.add_argument("--radii", type=_floats, default=None, help="r_min,r_max,count")
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_surface_analyze)
    p = surface.add_parser("gen-gradient-graph", parents=[common, source], help="gradient graph of a polynomial potential")
    p.add_argument("--potential", dest="input", help="potential JSON file")
    p.add_argument("--grid", type=lambda s: [int(x) for x in _floats(s)], default=[8], help="cells per axis")
    p.add_argument("--lo", type=_floats, default=None)
    p.add_argument("--hi", type=_floats, default=None)
    p.add_argument("--output", help="write the trmesh here instead of embedding it")
    p.set_defaults(func=cmd_surface_gradient_graph)

    cz = groups.add_parser("cauchy", help="Cauchy integrals on closed curves").add_subparsers(dest="action", required=True)
    p = cz.add_parser("eval", parents=[common, curve], help="evaluate the transform off the curve")
    p.add_argument("--z", type=_complex, action="append")
    p.set_defaults(func=cmd_cauchy_eval)
    p = cz.add_parser("jump", parents=[common, curve], help="interior minus exterior limit at nodes")
    p.add_argument("--node", type=int, action="append")
    p.add_argument("--offsets", type=_floats, default=None)
    p.set_defaults(func=cmd_cauchy_jump)
    p = cz.add_parser("holomorphy", parents=[common, curve], help="loop-integral residuals at probes")
    p.add_argument("--probe", type=_complex, action="append")
    p.add_argument("--loop-radius", type=float, default=0.1)
    p.set_defaults(func=cmd_cauchy_holomorphy)

    acc = groups.add_parser("accretivity", help="cell-average ratios").add_subparsers(dest="action", required=True)
    p = acc.add_parser("report", parents=[common, source], help="per-level accretivity ratios")
    p.add_argument("--curve", default=None, help="use a named closed curve instead of --input")
    p.add_argument("--N", type=int, default=256)
    p.add_argument("--depth", type=int, default=3)
    p.add_argument("--delta", type=float, default=0.5)
    p.add_argument("--min-level", type=int, default=None)
    p.set_defaults(func=cmd_accretivity_report)
    return parser


def _summary(doc) -> str:
    if not isinstance(doc, dict):
        return ""
    keys = [k for k, v in doc.items() if isinstance(v, (int, float, str, bool)) and k != "canonical" and k != "mesh"]
    return "\n".join(f"{k:>28}: {doc[k]}" for k in keys)


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        doc = args.func(args)
        code = EXIT_OK
    except ToolkitError as exc:
        code = EXIT_NUMERICAL if isinstance(exc, NumericalError) else EXIT_VALIDATION
        doc = {"kind": "error", "error": type(exc).__name__, "message": str(exc)}
        print(f"totreal: {type(exc).__name__}: {exc}", file=sys.stderr)
    if getattr(args, "pretty", False):
        stdout.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")
        print(_summary(doc), file=sys.stderr)
    else:
        stdout.write(json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n")
    return code


def main(argv=None) -> int:
    try:
        return run(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
