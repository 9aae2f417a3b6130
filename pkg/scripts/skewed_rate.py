"""Observed rate when the conditional third moment does not vanish.

No claim is made about the exponent; the slope is printed as measured.
"""
import argparse
from functools import partial

from belab.dist import enumerate_model_distance, kolmogorov_distance
from belab.model import MdsModel, simulate_batch
from belab.montecarlo import map_chunks, merge
from belab.rates import fit_loglog

ap = argparse.ArgumentParser(description=__doc__)
ap.add_argument("--skew", type=float, default=1.0)
ap.add_argument("--paths", type=int, default=1_000_000)
ap.add_argument("--seed", type=int, default=0)
ap.add_argument("--workers", type=int, default=1)
args = ap.parse_args()

pts = []
for n in (4, 8, 16, 64, 256, 1024):
    m = MdsModel("skewed-violation", n, skew=args.skew)
    if n <= 16:
        r = enumerate_model_distance(m)
        band = 0.0
    else:
        chunk = max(256, (1 << 22) // n)
        x = merge(map_chunks(partial(simulate_batch, m, args.seed), args.paths, args.workers, chunk)).x_n
        r = kolmogorov_distance(x)
        band = r.dkw_band
    pts.append((n, r.d))
    print(f"n={n:>5}  {r.method:<18} D={r.d:.5f} +- {band:.5f}  sqrt(n) D={n**0.5 * r.d:.4f}")
print(f"measured slope {fit_loglog(pts).slope:+.4f}")
