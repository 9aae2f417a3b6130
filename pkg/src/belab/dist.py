"""Kolmogorov distance to the standard normal, exact and empirical."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr

from .model import MdsModel, increments

METHODS = ("exact-binomial", "exact-enumeration", "monte-carlo")
MAX_BINOMIAL_N = 2**22
MAX_ENUMERATION_N = 20


@dataclass
class KolmogorovResult:
    d: float
    method: str
    argsup: float
    sample_size: int | None = None
    dkw_band: float | None = None
    n: int | None = None

    def to_json(self):
        return {"method": self.method, "n": self.n, "N": self.sample_size,
                "d": self.d, "band": self.dkw_band, "argsup": self.argsup}


def std_normal_cdf(x):
    """Phi(x); absolute error below 1e-14, saturates outside [-40, 40]."""
    x = np.asarray(x, dtype=np.float64)
    out = np.where(x > 40.0, 1.0, np.where(x < -40.0, 0.0, ndtr(np.clip(x, -40.0, 40.0))))
    return float(out) if out.ndim == 0 else out


def dkw_band(N, confidence=0.95):
    """Half-width of the DKW confidence band for an N-point empirical CDF."""
    if N < 1:
        raise ValueError("N must be >= 1")
    if not 0.0 < confidence < 1.0:
        raise ValueError("confidence must lie in (0, 1)")
    return math.sqrt(math.log(2.0 / (1.0 - confidence)) / (2.0 * N))


def _sup_over_atoms(x, cdf_right, cdf_left):
    """Largest |F - Phi| over atoms, checking both one-sided limits."""
    phi = std_normal_cdf(x)
    dev = np.maximum(np.abs(cdf_right - phi), np.abs(cdf_left - phi))
    k = int(np.argmax(dev))
    return float(dev[k]), float(x[k])


def kolmogorov_distance(samples, confidence=0.95) -> KolmogorovResult:
    """sup_x |F_N(x) - Phi(x)| of the empirical CDF of ``samples``.

    The sup is attained at a sample point from one side because Phi is
    continuous; ties are processed as one block.
    """
    s = np.asarray(samples, dtype=np.float64).ravel()
    N = s.size
    if N < 1:
        raise ValueError("need at least one sample")
    if not np.all(np.isfinite(s)):
        raise ValueError("samples must be finite")
    u, counts = np.unique(s, return_counts=True)
    cum = np.cumsum(counts)
    right = cum / N
    left = (cum - counts) / N
    d, arg = _sup_over_atoms(u, right, left)
    return KolmogorovResult(d=d, method="monte-carlo", argsup=arg, sample_size=N,
                            dkw_band=dkw_band(N, confidence))


def deviation_at(samples, x):
    """max(|F_N(x) - Phi(x)|, |F_N(x-) - Phi(x)|) for the empirical CDF."""
    s = np.sort(np.asarray(samples, dtype=np.float64).ravel())
    N = s.size
    right = np.searchsorted(s, x, side="right") / N
    left = np.searchsorted(s, x, side="left") / N
    phi = std_normal_cdf(x)
    return max(abs(right - phi), abs(left - phi))


# Stirling-series error log(k!) - log(sqrt(2 pi k) (k/e)^k), exact for small k
_STIRLERR_SMALL = np.array([
    math.lgamma(k + 1.0) - (k + 0.5) * math.log(k) + k - 0.5 * math.log(2 * math.pi)
    if k > 0 else 0.0 for k in range(16)])


def _stirlerr(k):
    k = np.asarray(k, dtype=np.float64)
    out = np.empty_like(k)
    small = k < 16
    out[small] = _STIRLERR_SMALL[k[small].astype(np.int64)]
    kk = k[~small]
    k2 = 1.0 / (kk * kk)
    out[~small] = (1.0 / 12 - (1.0 / 360 - (1.0 / 1260 - (1.0 / 1680 - 1.0 / 1188 * k2) * k2) * k2) * k2) / kk
    return out


def _bd0(x, m):
    """x log(x/m) + m - x without cancellation."""
    x = np.asarray(x, dtype=np.float64)
    out = x * np.log(x / m) + m - x
    near = np.abs(x - m) < 0.1 * (x + m)
    if np.any(near):
        xn = x[near]
        v = (xn - m) / (xn + m)
        s = (xn - m) * v
        ej = 2 * xn * v
        v2 = v * v
        for j in range(1, 200):
            ej = ej * v2
            s1 = s + ej / (2 * j + 1)
            if np.all(s1 == s):
                break
            s = s1
        out[near] = s
    return out


def binomial_half_pmf(n):
    """P(K = k), K ~ binomial(n, 1/2), for k = 0..n.

    Exact integer arithmetic up to n = 1000, saddle-point log-domain
    evaluation (Loader's method) above.
    """
    if n <= 1000:
        denom = 1 << n
        c = 1
        out = np.empty(n + 1)
        for k in range(n + 1):
            out[k] = c / denom
            c = c * (n - k) // (k + 1)
        return out
    k = np.arange(1, n, dtype=np.float64)
    half = 0.5 * n
    lc = (_stirlerr(np.array([n]))[0] - _stirlerr(k) - _stirlerr(n - k)
          - _bd0(k, half) - _bd0(n - k, half))
    with np.errstate(under="ignore"):
        inner = np.exp(lc) * np.sqrt(n / (2 * math.pi * k * (n - k)))
    edge = math.exp(n * math.log(0.5))
    return np.concatenate([[edge], inner, [edge]])


def _tail_directed_cdf(pmf):
    """CDF summed from whichever tail is nearer, F[k] = P(K <= k)."""
    n = pmf.size - 1
    mid = n // 2
    cdf = np.empty_like(pmf)
    cdf[: mid + 1] = np.cumsum(pmf[: mid + 1])
    upper = np.cumsum(pmf[::-1])[::-1]  # upper[k] = P(K >= k)
    cdf[mid + 1:] = 1.0 - np.append(upper[mid + 2:], 0.0)
    return cdf


def exact_rademacher_distance(n: int) -> KolmogorovResult:
    """Exact D for X_n = (2K - n)/sqrt(n) with K ~ binomial(n, 1/2)."""
    if int(n) != n or n < 1:
        raise ValueError("n must be a positive integer")
    if n > MAX_BINOMIAL_N:
        raise ValueError(f"n = {n} exceeds the guard {MAX_BINOMIAL_N}")
    pmf = binomial_half_pmf(n)
    cdf = _tail_directed_cdf(pmf)
    left = np.concatenate([[0.0], cdf[:-1]])
    x = (2.0 * np.arange(n + 1) - n) / math.sqrt(n)
    d, arg = _sup_over_atoms(x, cdf, left)
    return KolmogorovResult(d=d, method="exact-binomial", argsup=arg, n=n)


def _law_from_atoms(values, probs, rel_tol=1e-12):
    """Sort atoms and merge values equal up to rounding."""
    order = np.argsort(values, kind="stable")
    v = values[order]
    p = probs[order]
    scale = np.maximum(1.0, np.abs(v))
    new = np.concatenate([[True], np.diff(v) > rel_tol * scale[1:]])
    group = np.cumsum(new) - 1
    pv = np.zeros(group[-1] + 1)
    np.add.at(pv, group, p)
    return v[new], pv


def enumerate_model_distance(model: MdsModel) -> KolmogorovResult:
    """Exact D by enumerating all 2^n draw sequences of a small model."""
    n = model.n
    if n > MAX_ENUMERATION_N:
        raise ValueError(f"enumeration supports n <= {MAX_ENUMERATION_N}, got {n}")
    total = 1 << n
    codes = np.arange(total, dtype=np.uint32)
    bitsm = ((codes[:, None] >> np.arange(n, dtype=np.uint32)) & 1).astype(np.int8)
    zeta = 2 * bitsm - 1
    xs, ps = [], []
    chunk = 1 << 16
    for lo in range(0, total, chunk):
        z = zeta[lo:lo + chunk]
        xi, _ = increments(model, z)
        xs.append(np.sum(xi, axis=1))
        ups = np.count_nonzero(z > 0, axis=1)
        if model.kind == "skewed-violation":
            q = model.skew_prob
            ps.append(q**ups * (1.0 - q) ** (n - ups))
        else:
            ps.append(np.full(len(z), 0.5**n))
    values, probs = _law_from_atoms(np.concatenate(xs), np.concatenate(ps))
    cdf = np.cumsum(probs)
    left = np.concatenate([[0.0], cdf[:-1]])
    d, arg = _sup_over_atoms(values, cdf, left)
    return KolmogorovResult(d=d, method="exact-enumeration", argsup=arg, n=n)
