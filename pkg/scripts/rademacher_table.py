"""Exact distance of the scaled Rademacher walk and the scaled error sqrt(n) D."""
import argparse

from belab.dist import exact_rademacher_distance
from belab.rates import fit_loglog

ap = argparse.ArgumentParser(description=__doc__)
ap.add_argument("--kmax", type=int, default=20, help="largest horizon is 2^kmax")
args = ap.parse_args()

pts = []
print(f"{'n':>9} {'D':>22} {'sqrt(n) D':>12} {'argsup':>9}")
for k in range(1, args.kmax + 1):
    r = exact_rademacher_distance(2**k)
    pts.append((r.n, r.d))
    print(f"{r.n:>9} {r.d:>22.17g} {r.n**0.5 * r.d:>12.8f} {r.argsup:>9.4f}")
# sqrt(n) D tends to 1/sqrt(2 pi) = 0.39894 (lattice span 2/sqrt(n), half a jump)
f = fit_loglog(pts[len(pts) // 2:])
print(f"slope over the upper half of the grid: {f.slope:.5f}  (r2 {f.r2:.6f})")
