"""The parabolic admissibility boundary 3a + 4c = 0.

For ``a`` on a grid around ``-4c/3`` (``b = -c``), runs the verifier at
increasing refinement and the mesh oracle on a few pairs of leaves, and
reports the minimal scale-free ``pdot . u+`` margin.  At the boundary the
tangent lies on the ``-u+`` edge of the stem quadrant.

    python3 scripts/parabolic_boundary.py
"""

import argparse
import json
from dataclasses import asdict, dataclass

import numpy as np

from crooked.flows import ParabolicFlow
from crooked.oracle import oracle_disjoint
from crooked.planes import CrookedPlane
from crooked.verify import FoliationSpec, verify


@dataclass
class Config:
    c: float = 1.0
    deltas: tuple = (-0.1, -1e-3, 0.0, 1e-3, 0.1)
    levels: int = 1
    oracle_pairs: tuple = ((-1.0, 1.0), (0.0, 0.5), (0.25, 0.375), (-2.0, -1.5))
    extent: float = 10.0
    resolution: int = 64


def run(cfg: Config):
    rows = []
    for delta in cfg.deltas:
        a = -4 * cfg.c / 3 + delta
        spec = FoliationSpec.parabolic(ParabolicFlow(a, -cfg.c, cfg.c))
        rep = verify(spec, levels=cfg.levels)
        plus = [r.dot_plus / np.linalg.norm(spec.velocity(r.t)) for r in rep.infinitesimal]
        oracle = []
        for t, s in cfg.oracle_pairs:
            ct = CrookedPlane(spec.vertex(t), spec.director(t))
            cs = CrookedPlane(spec.vertex(s), spec.director(s))
            oracle.append(oracle_disjoint(ct, cs, cfg.extent, cfg.resolution).verdict)
        rows.append({
            "a": a,
            "delta": delta,
            "verify": rep.passed,
            "infinitesimal_failures": len(rep.infinitesimal_failures()),
            "pairwise_failures": len(rep.pairwise_failures()),
            "max_scaled_pdot_u_plus": max(plus),
            "oracle": oracle,
        })
    return {"config": asdict(cfg), "rows": rows}


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--c", type=float, default=Config.c)
    ap.add_argument("--levels", type=int, default=Config.levels)
    ap.add_argument("--out")
    args = ap.parse_args()
    result = run(Config(c=args.c, levels=args.levels))
    for r in result["rows"]:
        print(json.dumps(r))
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(result, fh, indent=2)


if __name__ == "__main__":
    main()
