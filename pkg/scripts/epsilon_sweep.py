"""How the pad scale eps changes the enlarged law for the tilted model.

Smaller eps means more padding steps; the Kolmogorov distance of the
enlarged terminal value is reported next to the un-enlarged one.
"""
import argparse
from functools import partial

from belab.dist import kolmogorov_distance
from belab.enlarge import simulate_enlarged_batch
from belab.model import MdsModel, condition_report, simulate_batch
from belab.montecarlo import map_chunks, merge

ap = argparse.ArgumentParser(description=__doc__)
ap.add_argument("--n", type=int, default=256)
ap.add_argument("--delta", type=float, default=0.4)
ap.add_argument("--paths", type=int, default=200_000)
ap.add_argument("--seed", type=int, default=0)
ap.add_argument("--workers", type=int, default=1)
args = ap.parse_args()

model = MdsModel("tilted", args.n, delta=args.delta)
eps_n = condition_report(model).epsilon_n
base = merge(map_chunks(partial(simulate_batch, model, args.seed), args.paths, args.workers, 1 << 14))
r = kolmogorov_distance(base.x_n)
print(f"original      D={r.d:.5f} +- {r.dkw_band:.5f}")
for frac in (1.0, 0.5, 0.25, 0.125):
    eps = frac * eps_n
    fn = partial(simulate_enlarged_batch, model, args.seed, epsilon=eps)
    x = merge(map_chunks(fn, args.paths, args.workers, 1 << 12))
    r = kolmogorov_distance(x)
    print(f"eps={eps:.5f}  D={r.d:.5f} +- {r.dkw_band:.5f}")
