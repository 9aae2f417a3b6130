"""Rate extraction from distance-versus-n series and constant-free bound shapes."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .model import PathBatch


@dataclass
class RateFit:
    points: list
    slope: float
    intercept: float
    r2: float
    scaled: list

    def to_json(self, c_hat=None):
        return {"slope": self.slope, "intercept": self.intercept, "r2": self.r2, "c_hat": c_hat}


def fit_loglog(points) -> RateFit:
    """Ordinary least squares of log d on log n."""
    pts = [(float(n), float(d)) for n, d in points]
    if len(pts) < 3:
        raise ValueError("need at least 3 points")
    ns = np.array([p[0] for p in pts])
    ds = np.array([p[1] for p in pts])
    if len(set(ns.tolist())) != len(ns):
        raise ValueError("horizons must be distinct")
    if np.any(ns <= 0) or np.any(ds <= 0):
        raise ValueError("log fit needs n > 0 and d > 0; drop zero distances first")
    x, y = np.log(ns), np.log(ds)
    xc = x - x.mean()
    yc = y - y.mean()
    sxx = float(np.dot(xc, xc))
    slope = float(np.dot(xc, yc)) / sxx
    intercept = float(y.mean() - slope * x.mean())
    resid = yc - slope * xc
    syy = float(np.dot(yc, yc))
    r2 = 1.0 if syy == 0.0 else max(0.0, min(1.0, 1.0 - float(np.dot(resid, resid)) / syy))
    return RateFit(points=pts, slope=slope, intercept=intercept, r2=r2,
                   scaled=[(n, math.sqrt(n) * d) for n, d in pts])


def fit_positive(points) -> RateFit:
    """fit_loglog after discarding zero distances, with a warning per drop."""
    keep = []
    for n, d in points:
        if d > 0:
            keep.append((n, d))
        else:
            warnings.warn(f"dropping zero distance at n={n} from the log fit", stacklevel=2)
    return fit_loglog(keep)


@dataclass
class Functionals:
    moment_bracket: float
    moment_max: float
    combined: float

    def __iter__(self):
        return iter((self.moment_bracket, self.moment_max, self.combined))


def theorem2_functionals(paths, p: float) -> Functionals:
    """E|<X>_n - 1|^p, E max_i |xi_i|^(2p), and (sum)^(1/(2p+1)) from simulated paths."""
    if not p >= 1:
        raise ValueError(f"p must be >= 1, got {p}")
    if not isinstance(paths, PathBatch):
        paths = PathBatch.from_paths(paths)
    mb = float(np.mean(np.abs(paths.bracket_n - 1.0) ** p))
    mm = float(np.mean(paths.max_abs_xi ** (2.0 * p)))
    return Functionals(mb, mm, (mb + mm) ** (1.0 / (2.0 * p + 1.0)))


def bound_curve(eps, delta, c):
    """Pointwise c * (eps_n + delta_n)."""
    if not c > 0:
        raise ValueError("c must be positive")
    e = np.asarray(eps, dtype=np.float64)
    d = np.asarray(delta, dtype=np.float64)
    if e.shape != d.shape:
        raise ValueError("eps and delta must have equal length")
    return c * (e + d)


def tightness_constant(d, eps, delta):
    """Smallest c with d_n <= c * (eps_n + delta_n) on every point."""
    d = np.asarray(d, dtype=np.float64)
    shape = np.asarray(eps, dtype=np.float64) + np.asarray(delta, dtype=np.float64)
    return float(np.max(d / shape))
