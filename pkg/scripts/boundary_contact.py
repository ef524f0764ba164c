"""Boundary behaviour of the cone criterion.

Moves the vertex displacement of a disjoint pair onto exactly one facet of
the four-sided cone (the other three inequalities stay strict) and asks the
mesh oracle whether the two crooked planes meet.  Also sweeps the
displacement across the facet to see on which side intersections appear.

    python3 scripts/boundary_contact.py --pairs 50 --out boundary.json
"""

import argparse
import json
import logging
from dataclasses import asdict, dataclass

import numpy as np

from crooked.minkowski import J, Point
from crooked.oracle import oracle_disjoint
from crooked.planes import CrookedPlane, cone_disjoint, cone_inequalities, pair_class

log = logging.getLogger("boundary_contact")


@dataclass
class Config:
    pairs: int = 50
    seed: int = 7
    extent: float = 20.0
    resolution: int = 64
    offsets: tuple = (-1e-2, -1e-4, 0.0, 1e-4, 1e-2)


def _directors(rng):
    while True:
        th = rng.uniform(0, 2 * np.pi, 2)
        z = rng.uniform(-0.9, 0.9, 2)
        u1 = np.array([np.cos(th[0]), np.sin(th[0]), z[0]])
        u2 = np.array([np.cos(th[1]), np.sin(th[1]), z[1]])
        if pair_class(u1, u2) == "ultraparallel":
            return u1, u2


def _facet_normals(c1, c2):
    """Euclidean normals ``J (a x b)`` of the four facet planes, in the
    order of :func:`cone_inequalities`."""
    from crooked.minkowski import lorentz_cross, null_frame
    from crooked.planes import normalize_consistent

    v1, v2 = normalize_consistent(c1.director, c2.director)
    f1, f2 = null_frame(-v1), null_frame(v2)
    pairs = [(f1.u_minus, f2.u_plus), (f1.u_plus, f2.u_minus), (f1.u_minus, f2.u_minus), (f1.u_plus, f2.u_plus)]
    return [J @ lorentz_cross(a, b) for a, b in pairs]


def run(cfg: Config):
    rng = np.random.default_rng(cfg.seed)
    rows = []
    while len(rows) < cfg.pairs:
        u1, u2 = _directors(rng)
        c1 = CrookedPlane(Point(0, 0, 0), u1)
        d = rng.normal(size=3) * 3
        c2 = CrookedPlane(Point(d), u2)
        if not cone_disjoint(c1, c2):
            continue
        i = int(rng.integers(4))
        n = _facet_normals(c1, c2)[i]
        n = n / np.linalg.norm(n)
        on_facet = d - (d @ n) * n
        vals = cone_inequalities(c1, CrookedPlane(Point(on_facet), u2))
        others = [v for j, v in enumerate(vals) if j != i and v is not None]
        if not others or min(others) <= 1e-3:
            continue
        row = {"facet": i, "displacement": on_facet.tolist(), "sweep": []}
        for off in cfg.offsets:
            q = on_facet + off * np.linalg.norm(on_facet) * n
            c2q = CrookedPlane(Point(q), u2)
            res = oracle_disjoint(c1, c2q, cfg.extent, cfg.resolution)
            row["sweep"].append(
                {"offset": off, "cone": bool(cone_disjoint(c1, c2q)), "oracle": res.verdict,
                 "witness_norm": None if res.witness is None else float(np.linalg.norm(res.witness.coords))}
            )
        rows.append(row)
        log.info("pair %d facet %d: %s", len(rows), i, [s["oracle"] for s in row["sweep"]])
    at_zero = [next(s for s in r["sweep"] if s["offset"] == 0.0) for r in rows]
    summary = {
        "pairs": len(rows),
        "facet_contact_intersecting": sum(s["oracle"] == "intersecting" for s in at_zero),
        "inside_clear": sum(
            s["oracle"] == "no_intersection_found" for r in rows for s in r["sweep"] if s["offset"] > 0
        ),
        "outside_intersecting": sum(
            s["oracle"] == "intersecting" for r in rows for s in r["sweep"] if s["offset"] < 0
        ),
        "sweep_points_per_side": 2 * len(rows),
    }
    return {"config": asdict(cfg), "summary": summary, "rows": rows}


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--pairs", type=int, default=Config.pairs)
    ap.add_argument("--seed", type=int, default=Config.seed)
    ap.add_argument("--extent", type=float, default=Config.extent)
    ap.add_argument("--resolution", type=int, default=Config.resolution)
    ap.add_argument("--out")
    ap.add_argument("-v", "--verbose", action="store_true")
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    result = run(Config(args.pairs, args.seed, args.extent, args.resolution))
    print(json.dumps(result["summary"], indent=2))
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(result, fh, indent=2)


if __name__ == "__main__":
    main()
