"""Command-line driver.

Reports go to stdout as JSON (or YAML for emitted scenes); diagnostics go to
stderr.

Exit codes:
    0  success / agreement / verification passed
    2  invalid input (bad scene, bad vectors, unknown names)
    3  disjointness methods disagree (``disjoint --method all``)
    4  verification failed
    5  calibration input is not disjoint
    6  calibration displacement lies along the flow axis
"""

from __future__ import annotations

import argparse
import itertools
import json
import logging
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .errors import AxisCase, CrookedError, CrossingPair, NotDisjoint
from .export import obj_text
from .flows import HyperbolicFlow, calibrate, region_classify
from .minkowski import Point, causal_class, linear_class, vec
from .oracle import mesh_crooked_plane, oracle_disjoint
from .planes import CrookedPlane, _parallel, cone_disjoint, dg_disjoint, pair_class
from .repro import REPRO
from .scene import Scene, SpecEntry, dump_scene, read_scene
from .verify import DEFAULT_INTERVAL, DEFAULT_SAMPLES, verify

EXIT_OK, EXIT_INPUT, EXIT_DISAGREE, EXIT_VERIFY, EXIT_NOT_DISJOINT, EXIT_AXIS = 0, 2, 3, 4, 5, 6
DEFAULT_EXTENT = 10.0
DEFAULT_RESOLUTION = 64

log = logging.getLogger("crooked")


class InputError(CrookedError):
    pass


def _plain(o):
    if isinstance(o, np.generic):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"cannot serialize {type(o).__name__}")


def _emit(obj):
    sys.stdout.write(json.dumps(obj, indent=2, default=_plain) + "\n")


def _triple(text: str) -> np.ndarray:
    try:
        return vec([float(x) for x in text.split(",")])
    except ValueError:
        raise InputError(f"expected three comma-separated numbers, got {text!r}") from None


def _load(path):
    return read_scene(path) if path else Scene()


def _plane(token: str, scene: Scene) -> CrookedPlane:
    """A scene name, or ``x,y,z/u1,u2,u3``."""
    if token in scene.crooked_planes:
        return scene.crooked_planes[token]
    if "/" in token:
        p, u = token.split("/", 1)
        return CrookedPlane(Point(_triple(p)), _triple(u))
    raise InputError(f"unknown crooked plane {token!r}")


def _point_or_vec(token: str, names: dict):
    if token in names:
        return names[token]
    return _triple(token)


# -- classify --------------------------------------------------------------


def cmd_classify(args) -> int:
    scene = _load(args.scene)
    vectors = dict(scene.vectors)
    for i, v in enumerate(args.vector or []):
        vectors[f"arg{i}"] = _triple(v)
    points = dict(scene.points)
    for i, p in enumerate(args.point or []):
        points[f"arg{i}"] = Point(_triple(p))
    out = {"vectors": {k: str(causal_class(v)) for k, v in vectors.items()}}
    pairs = {}
    for (a, u), (b, w) in itertools.combinations(vectors.items(), 2):
        try:
            pairs[f"{a},{b}"] = pair_class(u, w)
        except CrookedError as exc:
            pairs[f"{a},{b}"] = f"n/a ({type(exc).__name__})"
    out["pairs"] = pairs
    flows = dict(scene.flows)
    if args.hyperbolic:
        l, alpha = (float(x) for x in args.hyperbolic.split(","))
        flows["arg"] = HyperbolicFlow(l, alpha)
    out["flows"] = {k: linear_class(f.isometry(1.0).linear) for k, f in flows.items()}
    out["regions"] = {
        f: {p: str(region_classify(flow, q)) for p, q in points.items()}
        for f, flow in flows.items()
        if isinstance(flow, HyperbolicFlow)
    }
    _emit(out)
    return EXIT_OK


# -- disjoint --------------------------------------------------------------


def _verdict(fn, cp1, cp2):
    try:
        return "disjoint" if fn(cp1, cp2) else "not_disjoint"
    except CrossingPair:
        return "not_disjoint"  # crossing directors: the planes always meet
    except CrookedError as exc:
        return f"n/a ({type(exc).__name__})"


def _dg_verdict(cp1, cp2):
    if _parallel(cp1.director, cp2.director):
        return "not_disjoint"
    return _verdict(dg_disjoint, cp1, cp2)


def cmd_disjoint(args) -> int:
    scene = _load(args.scene)
    cp1, cp2 = _plane(args.first, scene), _plane(args.second, scene)
    methods = ("dg", "cone", "oracle") if args.method == "all" else (args.method,)
    out = {}
    if "dg" in methods:
        out["dg"] = _dg_verdict(cp1, cp2)
    if "cone" in methods:
        out["cone"] = _verdict(cone_disjoint, cp1, cp2)
    if "oracle" in methods:
        res = oracle_disjoint(cp1, cp2, args.extent, args.resolution)
        out["oracle"] = res.verdict
        if res.witness is not None:
            out["witness"] = [float(x) for x in res.witness.coords]
            out["witness_pieces"] = list(res.pieces)
        out["extent"] = args.extent
    if args.method != "all":
        _emit(out)
        return EXIT_OK
    as_bool = {"disjoint": True, "no_intersection_found": True, "not_disjoint": False, "intersecting": False}
    votes = {as_bool[v] for k, v in out.items() if k in methods and v in as_bool}
    out["agree"] = len(votes) <= 1
    _emit(out)
    if not out["agree"]:
        print("disjointness methods disagree", file=sys.stderr)
        return EXIT_DISAGREE
    return EXIT_OK


# -- verify / foliate ------------------------------------------------------


def _spec(scene: Scene, name: str):
    if name not in scene.foliation_specs:
        raise InputError(f"unknown foliation spec {name!r}")
    return scene.foliation(name), scene.foliation_specs[name]


def _interval(args, entry):
    return tuple(args.interval) if args.interval else entry.interval


def cmd_verify(args) -> int:
    scene = read_scene(args.scene)
    spec, entry = _spec(scene, args.spec)
    samples = args.samples or entry.samples
    report = verify(spec, tol=args.tol, interval=_interval(args, entry), samples=samples, levels=args.levels)
    out = {"spec": args.spec, **report.to_dict()}
    _emit(out)
    if not report.passed:
        print(f"verification failed: {len(report.witnesses)} witnesses", file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


def cmd_foliate(args) -> int:
    scene = read_scene(args.scene)
    spec, entry = _spec(scene, args.spec)
    interval = _interval(args, entry)
    report = verify(spec, interval=interval, samples=entry.samples)
    if not report.passed and not args.force:
        print("verification failed; use --force to write meshes anyway", file=sys.stderr)
        return EXIT_VERIFY
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    leaves = []
    for i, t in enumerate(np.linspace(interval[0], interval[1], args.count)):
        cp = CrookedPlane(spec.vertex(t), spec.director(t))
        mesh = mesh_crooked_plane(cp, args.extent, args.resolution)
        name = f"leaf_{i:03d}"
        (out / f"{name}.obj").write_text(obj_text(mesh, name), encoding="utf-8")
        leaves.append(
            {
                "file": f"{name}.obj",
                "t": float(t),
                "vertex": [float(x) for x in cp.vertex.coords],
                "director": [float(x) for x in cp.director],
                "u_minus": [float(x) for x in cp.u_minus],
                "u_plus": [float(x) for x in cp.u_plus],
                "vertices": int(len(mesh.vertices)),
                "triangles": int(len(mesh.triangles)),
            }
        )
    manifest = {
        "spec": args.spec,
        "scene": dump_scene(_sub_scene(scene, args.spec)),
        "verified": report.passed,
        "forced": bool(args.force and not report.passed),
        "extent": args.extent,
        "resolution": args.resolution,
        "leaves": leaves,
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    _emit({"out": str(out), "leaves": len(leaves), "verified": report.passed})
    return EXIT_OK


def _sub_scene(scene: Scene, spec_name: str) -> Scene:
    e = scene.foliation_specs[spec_name]
    return Scene(flows={e.flow: scene.flows[e.flow]}, foliation_specs={spec_name: e})


# -- calibrate -------------------------------------------------------------


def _calibration_scene(flow, params, family="ultraparallel") -> Scene:
    return Scene(
        flows={"calibrated": flow},
        foliation_specs={
            "calibrated": SpecEntry("calibrated", params, family, (0.0, 1.0), DEFAULT_SAMPLES)
        },
    )


def cmd_calibrate(args) -> int:
    scene = _load(args.scene)
    p0 = Point(_point_or_vec(args.p0, {k: v.coords for k, v in scene.points.items()}))
    p1 = Point(_point_or_vec(args.p1, {k: v.coords for k, v in scene.points.items()}))
    u0 = _point_or_vec(args.u0, scene.vectors)
    u1 = _point_or_vec(args.u1, scene.vectors)
    try:
        cal = calibrate(p0, u0, p1, u1)
    except NotDisjoint as exc:
        print(f"not disjoint: {exc}", file=sys.stderr)
        return EXIT_NOT_DISJOINT
    except AxisCase as exc:
        flow, params = exc.spec
        print("displacement lies along the flow axis; emitting the axis foliation", file=sys.stderr)
        _emit({"axis_case": True, "l": flow.l, "alpha": flow.alpha,
               "scene": dump_scene(_calibration_scene(flow, params))})
        return EXIT_AXIS
    out = {
        "l": cal.flow.l,
        "alpha": cal.flow.alpha,
        "region": cal.region,
        "t0": cal.t0,
        "ln_ratio": cal.ln_ratio,
        "calibrated": cal.calibrated,
    }
    if cal.calibrated:
        out["scene"] = dump_scene(_calibration_scene(cal.flow, cal.params))
    _emit(out)
    return EXIT_OK


# -- repro -----------------------------------------------------------------


def cmd_repro(args) -> int:
    _emit(REPRO[args.name]())
    return EXIT_OK


# -- entry point -----------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="crooked", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--version", action="version", version=__version__)
    ap.add_argument("-v", "--verbose", action="store_true", help="log diagnostics to stderr")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="causal, pair, linear and region classes")
    p.add_argument("scene", nargs="?")
    p.add_argument("--vector", action="append", help="extra vector x,y,z (repeatable)")
    p.add_argument("--point", action="append", help="extra point x,y,z (repeatable)")
    p.add_argument("--hyperbolic", metavar="L,ALPHA", help="extra hyperbolic flow")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("disjoint", help="decide disjointness of two crooked planes")
    p.add_argument("first", help="plane name in --scene, or x,y,z/u1,u2,u3")
    p.add_argument("second")
    p.add_argument("--scene")
    p.add_argument("--method", choices=("dg", "cone", "oracle", "all"), default="all")
    p.add_argument("--extent", type=float, default=DEFAULT_EXTENT)
    p.add_argument("--resolution", type=int, default=DEFAULT_RESOLUTION)
    p.set_defaults(func=cmd_disjoint)

    for name, fn, hlp in (("verify", cmd_verify, "verify a foliation spec"), ("foliate", cmd_foliate, "export leaves as OBJ meshes")):
        p = sub.add_parser(name, help=hlp)
        p.add_argument("scene")
        p.add_argument("spec")
        p.add_argument("--interval", type=float, nargs=2, metavar=("A", "B"), default=None,
                       help=f"parameter interval (default from the spec file, else {DEFAULT_INTERVAL})")
        p.set_defaults(func=fn)
        if name == "verify":
            p.add_argument("--samples", type=int, default=None, help=f"grid size (default {DEFAULT_SAMPLES})")
            p.add_argument("--tol", type=float, default=None)
            p.add_argument("--levels", type=int, default=0, help="dyadic grid refinements")
        else:
            p.add_argument("--count", type=int, default=7)
            p.add_argument("--extent", type=float, default=DEFAULT_EXTENT)
            p.add_argument("--resolution", type=int, default=DEFAULT_RESOLUTION)
            p.add_argument("--out", required=True)
            p.add_argument("--force", action="store_true", help="write meshes even if verification fails")

    p = sub.add_parser("calibrate", help="fit a hyperbolic flow through two disjoint crooked planes")
    p.add_argument("p0")
    p.add_argument("u0")
    p.add_argument("p1")
    p.add_argument("u1")
    p.add_argument("--scene")
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser("repro", help="recompute a closed-form result")
    p.add_argument("name", choices=sorted(REPRO))
    p.set_defaults(func=cmd_repro)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, stream=sys.stderr)
    if os.environ.get("CROOKED_WORKERS"):
        log.debug("workers: %s", os.environ["CROOKED_WORKERS"])
    try:
        return args.func(args)
    except (CrookedError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
