"""Differential test: mesh oracle against the analytic disjointness criteria
on random ultraparallel pairs.

Soundness: an oracle intersection must never meet an analytic "disjoint"
(outside a small band around the decision boundary).  Completeness: for
clearly non-disjoint pairs a miss is logged and retried at a finer mesh
with extent doubling.

    python3 scripts/oracle_differential.py --pairs 2000 --out diff.json
"""

import argparse
import json
import logging
import time
from dataclasses import asdict, dataclass

import numpy as np

from crooked.minkowski import Point
from crooked.oracle import oracle_disjoint, oracle_disjoint_adaptive
from crooked.planes import CrookedPlane, cone_disjoint, dg_disjoint, dg_margin, pair_class

log = logging.getLogger("oracle_differential")


@dataclass
class Config:
    pairs: int = 1000
    seed: int = 1
    box: float = 5.0
    extent: float = 20.0
    resolution: int = 64
    retry_resolution: int = 128
    max_extent: float = 80.0
    band: float = 1e-6
    margin: float = 1e-3


def random_pair(rng, box):
    while True:
        th = rng.uniform(0, 2 * np.pi, 2)
        z = rng.uniform(-0.95, 0.95, 2)
        s = rng.uniform(0.2, 5.0, 2)
        u1, u2 = (np.array([np.cos(a), np.sin(a), c]) * r for a, c, r in zip(th, z, s))
        if pair_class(u1, u2) == "ultraparallel":
            break
    p1, p2 = rng.uniform(-box, box, (2, 3))
    return CrookedPlane(Point(p1), u1), CrookedPlane(Point(p2), u2)


def run(cfg: Config):
    rng = np.random.default_rng(cfg.seed)
    counts = dict(pairs=0, analytic_disjoint=0, oracle_intersecting=0, unsound=0, band=0,
                  misses=0, resolved=0, unresolved=0, dg_cone_disagree=0)
    misses = []
    start = time.perf_counter()
    for _ in range(cfg.pairs):
        c1, c2 = random_pair(rng, cfg.box)
        m = dg_margin(c1, c2)
        d = dg_disjoint(c1, c2)
        counts["pairs"] += 1
        counts["analytic_disjoint"] += d
        counts["dg_cone_disagree"] += abs(m) > 1e-7 and d != cone_disjoint(c1, c2)
        res = oracle_disjoint(c1, c2, cfg.extent, cfg.resolution)
        counts["oracle_intersecting"] += res.intersecting
        if abs(m) <= cfg.band:
            counts["band"] += 1
            continue
        if res.intersecting and d:
            counts["unsound"] += 1
            log.error("oracle witness %s for an analytically disjoint pair", res.witness)
        if not res.intersecting and m < -cfg.margin:
            counts["misses"] += 1
            again = oracle_disjoint_adaptive(c1, c2, cfg.extent, cfg.retry_resolution, 1e-9, cfg.max_extent)
            entry = {"margin": m, "vertices": [c1.vertex.coords.tolist(), c2.vertex.coords.tolist()],
                     "directors": [c1.director.tolist(), c2.director.tolist()], "resolved": again.intersecting,
                     "extent": again.extent}
            misses.append(entry)
            counts["resolved" if again.intersecting else "unresolved"] += 1
            log.warning("completeness miss (margin %.3g): resolved=%s at extent %g", m, again.intersecting, again.extent)
    counts["seconds"] = round(time.perf_counter() - start, 1)
    return {"config": asdict(cfg), "counts": counts, "misses": misses}


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    for name, default in asdict(Config()).items():
        ap.add_argument("--" + name.replace("_", "-"), type=type(default), default=default)
    ap.add_argument("--out")
    ap.add_argument("-v", "--verbose", action="store_true")
    args = vars(ap.parse_args())
    out, verbose = args.pop("out"), args.pop("verbose")
    logging.basicConfig(level=logging.INFO if verbose else logging.WARNING)
    result = run(Config(**args))
    print(json.dumps(result["counts"], indent=2))
    if out:
        with open(out, "w") as fh:
            json.dump(result, fh, indent=2)


if __name__ == "__main__":
    main()
