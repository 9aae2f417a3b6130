"""Growth orders of B_n^2, sup_i |b_{n,i}| and eps_n for FARIMA(0, d, 0) weights."""
import argparse

from belab.linproc import farima_coefficients, weights_for
from belab.rates import fit_loglog

ap = argparse.ArgumentParser(description=__doc__)
ap.add_argument("--d", type=float, nargs="+", default=[0.1, 0.25, 0.4])
ap.add_argument("--kmin", type=int, default=10)
ap.add_argument("--kmax", type=int, default=16)
ap.add_argument("--past-factor", type=int, default=16)
args = ap.parse_args()

for d in args.d:
    c = farima_coefficients(d, 1)
    ws = [weights_for(c, 2**k, max_factor=args.past_factor) for k in range(args.kmin, args.kmax + 1)]
    alpha = 1 - d
    print(f"d={d}  (alpha={alpha})")
    print(f"  {'n':>7} {'m':>8} {'Bn2':>14} {'sup b':>10} {'eps_n':>10} {'tail/Bn2':>9}")
    for w in ws:
        print(f"  {w.n:>7} {w.m:>8} {w.Bn2:>14.6g} {w.b_sup:>10.5g} {w.eps_n:>10.5g} "
              f"{w.tail_mass_bound / w.Bn2:>9.2e}")
    for key, target in (("Bn2", 3 - 2 * alpha), ("b_sup", 1 - alpha), ("eps_n", -0.5)):
        s = fit_loglog([(w.n, getattr(w, key)) for w in ws]).slope
        print(f"  slope {key:<6} {s:+.5f}   target {target:+.5f}")
