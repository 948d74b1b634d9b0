"""Command-line front end.

Exit status is 0 when the requested certificate holds, 1 when it does not,
and 2 on errors (the error class and message go to stderr as JSON).
"""
from __future__ import annotations

import argparse
import io
import json
import sys

import numpy as np

from . import hybrid, quad
from .cycles import euler_cycle, great_circle_cycle
from .errors import DesignError
from .orthogroup import get_group, molien_dims
from .polytope import build_polytope, catalog, expected_t, lookup

GREAT_CIRCLE_SOURCES = ("octahedron", "cube", "icosahedron")


def dump(obj):
    return json.dumps(obj, sort_keys=True, indent=2)


def _emit(text, out):
    if out:
        with open(out, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        print(text)


def _split_pair(s):
    if ":" not in s:
        return s, None
    p, d = s.split(":", 1)
    return p, d


# --- subcommands ---------------------------------------------------------------


def cmd_catalog(args):
    rows = []
    for spec in catalog(args.filter):
        row = spec.to_json()
        if not spec.buildable:
            row["status"] = spec.note
        rows.append(row)
    if args.format == "json":
        _emit(dump(rows), args.out)
        return 0
    buf = io.StringIO()
    head = f"{'polytope':28s} {'group':6s} {'t':>3s} {'verts':>6s} {'edges':>6s} {'length':>14s}  note"
    print(head, file=buf)
    for r in rows:
        length = "" if r["length_formula"] is None else f"{r['length_formula']:.10f}"
        print(
            f"{r['name']:28s} {r['group']:6s} {r['t']:3d} {r['vertices']:6d} {r['edges']:6d} "
            f"{length:>14s}  {r.get('status', '')}",
            file=buf,
        )
    _emit(buf.getvalue().rstrip("\n"), args.out)
    return 0


def _certify_report(args):
    if args.cycle:
        spec = lookup(args.cycle)
        t = expected_t(spec) if args.t is None else args.t
        cyc = euler_cycle(build_polytope(spec))
        rep = quad.certify_design(cycle=cyc, t=t, tol=args.tol)
        return {"kind": "cycle", "name": spec.name, "total_length": cyc.total_length,
                "n_arcs": len(cyc), "certified": rep.certified, "cert_report": rep.to_json()}
    if args.great_circle:
        spec = lookup(args.great_circle)
        t = expected_t(spec) if args.t is None else args.t
        cyc = great_circle_cycle(build_polytope(spec).vertices)
        rep = quad.certify_design(cycle=cyc, t=t, tol=args.tol)
        return {"kind": "great-circle", "name": spec.name, "total_length": cyc.total_length,
                "n_arcs": len(cyc), "certified": rep.certified, "cert_report": rep.to_json()}
    if args.hybrid:
        p, d = _split_pair(args.hybrid)
        pair = hybrid.get_pair(p, d)
        full = True if args.full_sweep else None
        if args.t is not None and args.t != pair.s:
            full = True
        design = hybrid.build_hybrid(p, d, full_sweep=full, tol=args.tol)
        if args.t is not None and args.t != pair.s:
            design.cert = quad.certify_design(design.cycle, design.points, design.beta, args.t, tol=args.tol)
        rep = design.cert.to_json() if design.cert is not None else None
        certified = design.cert.certified if design.cert is not None else design.certified
        return {"kind": "hybrid", "name": f"{pair.primal}:{pair.dual}", "beta": design.beta,
                "beta_closed": pair.beta_closed, "claimed_t": pair.s if args.t is None else args.t,
                "full_sweep": design.cert is not None, "invariant_check": design.invariant_check,
                "certified": certified, "cert_report": rep}
    if args.elementary:
        k = {"1": 0, "i": 0, "2": 1, "ii": 1, "3": 2, "iii": 2}[args.elementary]
        design = hybrid.elementary_hybrids(tol=args.tol)[k]
        rep = design.cert
        if args.t is not None and args.t != design.claimed_t:
            rep = quad.certify_design(design.cycle, design.points, design.beta, args.t, tol=args.tol)
        return {"kind": "elementary", "name": design.provenance, "beta": design.beta,
                "certified": rep.certified, "cert_report": rep.to_json()}
    if args.cubature:
        x120 = build_polytope("120-cell").vertices
        x600 = build_polytope("600-cell").vertices
        t = 19 if args.t is None else args.t
        rep = quad.weighted_point_cubature([(x120, 16 / 21), (x600, 5 / 21)], t, tol=args.tol)
        return {"kind": "cubature", "name": "120-cell 16/21 + 600-cell 5/21",
                "certified": rep.certified, "cert_report": rep.to_json()}
    raise DesignError("certify needs one of --cycle, --hybrid, --great-circle, --elementary, --cubature")


def cmd_certify(args):
    report = _certify_report(args)
    _emit(dump(report), args.out)
    return 0 if report["certified"] else 1


def cmd_beta(args):
    p, d = _split_pair(args.pair)
    pair = hybrid.get_pair(p, d)
    beta, _, _ = hybrid.pair_balance(pair)
    _emit(dump({"pair": f"{pair.primal}:{pair.dual}", "beta": beta, "beta_closed": pair.beta_closed,
                "abs_diff": abs(beta - pair.beta_closed), "s": pair.s, "provenance": pair.provenance}),
          args.out)
    return 0


def cmd_molien(args):
    table = molien_dims(get_group(args.group), args.lmax)
    _emit(dump({"group": args.group, "dims": list(table.dims)}), args.out)
    return 0


def _design_parts(args):
    if args.hybrid:
        p, d = _split_pair(args.hybrid)
        pair = hybrid.get_pair(p, d)
        beta, _, _ = hybrid.pair_balance(pair)
        return (f"{pair.primal}:{pair.dual}", euler_cycle(build_polytope(pair.primal)),
                build_polytope(pair.dual).vertices)
    if args.cycle:
        spec = lookup(args.cycle)
        return spec.name, euler_cycle(build_polytope(spec)), None
    raise DesignError("need --cycle or --hybrid")


def cmd_covering(args):
    name, cyc, pts = _design_parts(args)
    support = hybrid.support_samples(cyc, pts, per_arc=args.samples)
    delta = hybrid.covering_radius(support, n_test=args.n_test, seed=args.seed)
    _emit(dump({"name": name, "covering_radius": delta, "n_test": args.n_test, "seed": args.seed,
                "samples_per_arc": max(args.samples, 64), "estimate": True}), args.out)
    return 0


def _polyline_obj(cyc, pts, samples):
    lines, k = [], 0
    for arc in cyc.polyline(samples):
        for q in arc:
            lines.append("v " + " ".join(f"{c:.17g}" for c in q))
        lines.append("l " + " ".join(str(k + i + 1) for i in range(len(arc))))
        k += len(arc)
    if pts is not None:
        for q in pts:
            lines.append("v " + " ".join(f"{c:.17g}" for c in q))
            k += 1
            lines.append(f"p {k}")
    return "\n".join(lines)


def _polyline_csv(cyc, pts, samples):
    dim = cyc.dim
    rows = ["kind,index,sample," + ",".join(f"x{i}" for i in range(dim))]
    for a, arc in enumerate(cyc.polyline(samples)):
        rows += [f"arc,{a},{j}," + ",".join(f"{c:.17g}" for c in q) for j, q in enumerate(arc)]
    if pts is not None:
        rows += [f"point,{i},0," + ",".join(f"{c:.17g}" for c in q) for i, q in enumerate(pts)]
    return "\n".join(rows)


def cmd_export(args):
    if args.polytope:
        poly = build_polytope(args.polytope)
        text = poly.to_obj() if args.format == "obj" else dump(poly.to_json())
        _emit(text.rstrip("\n"), args.out)
        return 0
    name, cyc, pts = _design_parts(args)
    if args.format == "obj":
        text = _polyline_obj(cyc, pts, args.samples)
    elif args.format in ("csv", "csv-polyline"):
        text = _polyline_csv(cyc, pts, args.samples)
    else:
        text = dump({"name": name, "cycle": cyc.to_json(),
                     "polyline": cyc.polyline(args.samples).tolist(),
                     "points": None if pts is None else np.asarray(pts).tolist()})
    _emit(text, args.out)
    return 0


# --- parser ----------------------------------------------------------------------


def build_parser():
    ap = argparse.ArgumentParser(prog="sphdesigns", description="Spherical design curves and hybrid designs.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, t=True):
        p.add_argument("--out", help="write output to this file instead of stdout")
        if t:
            p.add_argument("--t", type=int, default=None, help="claimed strength")
            p.add_argument("--tol", type=float, default=1e-10, help="residual tolerance")

    p = sub.add_parser("catalog", help="list registered polytopes")
    p.add_argument("--filter", default=None)
    p.add_argument("--format", choices=("text", "json"), default="text")
    common(p, t=False)
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("certify", help="build a design and certify its strength")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--cycle", help="polytope whose Euler cycle is certified")
    g.add_argument("--hybrid", help="PRIMAL:DUAL pair")
    g.add_argument("--great-circle", help="polytope whose antipodal vertices define the circles")
    g.add_argument("--elementary", choices=("1", "2", "3", "i", "ii", "iii"))
    g.add_argument("--cubature", choices=("h4-weighted",))
    p.add_argument("--full-sweep", action="store_true", help="force the full monomial sweep")
    common(p)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("beta", help="balancing factor of a registered pair")
    p.add_argument("pair", help="PRIMAL:DUAL")
    common(p, t=False)
    p.set_defaults(func=cmd_beta)

    p = sub.add_parser("molien", help="dimensions of invariant harmonic spaces")
    p.add_argument("group")
    p.add_argument("--lmax", type=int, default=20)
    common(p, t=False)
    p.set_defaults(func=cmd_molien)

    p = sub.add_parser("covering", help="estimate the covering radius of a design's support")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--cycle")
    g.add_argument("--hybrid")
    p.add_argument("--n-test", type=int, default=20000)
    p.add_argument("--samples", type=int, default=64, help="samples per arc (at least 64)")
    p.add_argument("--seed", type=int, default=0)
    common(p, t=False)
    p.set_defaults(func=cmd_covering)

    p = sub.add_parser("export", help="write plot data")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--cycle")
    g.add_argument("--hybrid")
    g.add_argument("--polytope")
    p.add_argument("--format", choices=("json", "obj", "csv", "csv-polyline"), default="json")
    p.add_argument("--samples", type=int, default=32, help="samples per arc")
    common(p, t=False)
    p.set_defaults(func=cmd_export)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    if getattr(args, "tol", 1.0) <= 0:
        print(json.dumps({"error": "ValueError", "message": "--tol must be positive"}), file=sys.stderr)
        return 2
    if getattr(args, "t", None) is not None and args.t < 0:
        print(json.dumps({"error": "ValueError", "message": "--t must be non-negative"}), file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except (DesignError, ValueError, OSError) as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}, sort_keys=True), file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
