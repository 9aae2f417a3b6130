"""Partial sums of causal linear processes Y_k = sum_{j<=k} a_{k-j} eps_j.

S_n = Y_1 + ... + Y_n = sum_{i<=n} b_{n,i} eps_i with

    b_{n,i} = a_0 + ... + a_{n-i}                 for 0 < i <= n
    b_{n,i} = a_{1-i} + ... + a_{n-i}             for i <= 0

The infinite past is truncated at i = -m; every weight is a difference of
one prefix-sum array, so building all n+m+1 weights costs O(n+m).
"""
from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import rng
from .model import MdsModel, draw_zeta, increments

MEMORY_CLASSES = ("long", "short", "short-degenerate")


@dataclass(frozen=True)
class CoefficientSeq:
    kind: str
    values: np.ndarray = field(repr=False)
    tail_exponent: float
    tail_const: float
    params: dict = field(default_factory=dict)

    @property
    def m(self):
        return self.values.size - 1

    @property
    def tail_mass_bound(self):
        return self.tail_mass_after(self.m)

    def tail_mass_after(self, k):
        """Upper bound on sum_{i>k} a_i^2."""
        if self.kind == "finite":
            v = self.values[k + 1:]
            return float(np.dot(v, v))
        alpha = self.tail_exponent
        return self.tail_const**2 * k ** (1.0 - 2.0 * alpha) / (2.0 * alpha - 1.0)

    def upto(self, last):
        """a_0..a_last; finite sequences are zero-padded."""
        if last <= self.m:
            return self.values[: last + 1]
        if self.kind != "finite":
            raise ValueError(f"coefficients cover indices up to {self.m}, need {last}")
        return np.concatenate([self.values, np.zeros(last - self.m)])


def farima_coefficients(d: float, m: int) -> CoefficientSeq:
    """a_i = Gamma(i+d) / (Gamma(d) Gamma(i+1)) for i = 0..m via the ratio recursion."""
    if not 0.0 < d < 0.5:
        raise ValueError(f"d must lie in (0, 1/2), got {d}")
    if m < 1:
        raise ValueError("m must be >= 1")
    i = np.arange(1, m + 1, dtype=np.float64)
    a = np.concatenate([[1.0], np.cumprod((i - 1.0 + d) / i)])
    # a_i * i^(1-d) increases to 1/Gamma(d), so a_i <= i^(d-1)/Gamma(d)
    return CoefficientSeq("farima", a, 1.0 - d, 1.0 / math.gamma(d), {"d": d})


def power_law_coefficients(alpha: float, scale: float, m: int) -> CoefficientSeq:
    """a_0 = 1, a_i = scale * i^(-alpha); the slowly varying part is constant."""
    if not 0.5 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (1/2, 1), got {alpha}")
    if not scale > 0:
        raise ValueError("scale must be positive")
    if m < 1:
        raise ValueError("m must be >= 1")
    i = np.arange(1, m + 1, dtype=np.float64)
    a = np.concatenate([[1.0], scale * i**-alpha])
    return CoefficientSeq("power-law", a, alpha, scale, {"alpha": alpha, "scale": scale})


def finite_coefficients(values) -> CoefficientSeq:
    v = np.asarray(values, dtype=np.float64).ravel()
    if v.size == 0 or not np.all(np.isfinite(v)):
        raise ValueError("finite coefficients must be a non-empty list of finite reals")
    return CoefficientSeq("finite", v, math.inf, 0.0, {})


def coefficients_from_json(obj, m):
    kind = obj.get("kind")
    if kind == "farima":
        return farima_coefficients(obj["d"], m)
    if kind == "power-law":
        return power_law_coefficients(obj["alpha"], obj.get("scale", 1.0), m)
    if kind == "finite":
        return finite_coefficients(obj["values"])
    raise ValueError(f"unknown coefficient kind {kind!r}")


def classify_memory(coeffs: CoefficientSeq) -> str:
    if coeffs.kind in ("farima", "power-law"):
        return "long"
    return "short" if math.fsum(coeffs.values) != 0.0 else "short-degenerate"


@dataclass(frozen=True)
class PartialSumWeights:
    n: int
    m: int
    b: np.ndarray = field(repr=False)  # b[k] = b_{n, k-m}
    Bn2: float
    b_sup: float
    eps_n: float
    tail_mass_bound: float
    d_rho: float = 1.0

    @property
    def index(self):
        return np.arange(-self.m, self.n + 1)

    def weight(self, i):
        return float(self.b[i + self.m])

    def summary(self):
        return {"n": self.n, "m": self.m, "Bn2": self.Bn2, "b_sup": self.b_sup,
                "eps_n": self.eps_n, "tail_mass_bound": self.tail_mass_bound}


def partial_sum_weights(coeffs: CoefficientSeq, n: int, m: int, d_rho: float = 1.0) -> PartialSumWeights:
    if n < 1:
        raise ValueError("n must be >= 1")
    if m < n:
        raise ValueError(f"past truncation m = {m} must be at least n = {n}")
    if not d_rho > 0:
        raise ValueError("d_rho must be positive")
    a = coeffs.upto(n + m)
    prefix = np.concatenate([[0.0], np.cumsum(a)])  # prefix[k] = a_0 + ... + a_{k-1}
    i = np.arange(-m, n + 1)
    b = prefix[n - i + 1] - prefix[np.maximum(1 - i, 0)]
    Bn2 = float(np.dot(b, b))
    if not Bn2 > 0:
        raise ValueError("weights vanish identically")
    b_sup = float(np.max(np.abs(b)))
    return PartialSumWeights(n=n, m=m, b=b, Bn2=Bn2, b_sup=b_sup,
                             eps_n=d_rho * b_sup / math.sqrt(Bn2),
                             tail_mass_bound=_past_tail(coeffs, n, m), d_rho=d_rho)


def _past_tail(coeffs, n, m):
    """Bound on sum_{i<-m} b_{n,i}^2, the mass dropped by truncation."""
    if coeffs.kind == "finite":
        last = coeffs.m
        if m + 2 > last:
            return 0.0
        deep_m = max(n, last + 1)
        dropped = partial_sum_weights(coeffs, n, deep_m).b[: deep_m - m]
        return float(np.dot(dropped, dropped))
    # decreasing positive a_j: |b_{n,i}| <= n * a_{1-i}, and 1-i >= m+2
    return n * n * coeffs.tail_mass_after(m + 1)


def choose_past_depth(coeffs, n, rel_tol=1e-4, max_factor=16):
    """Smallest m >= n with dropped-mass bound <= rel_tol * Bn2, capped at max_factor*n.

    For long memory the dropped fraction decays only like (m/n)^(1-2 alpha),
    so the cap is usually what binds.
    """
    if coeffs.kind == "finite":
        return max(n, coeffs.m)
    alpha = coeffs.tail_exponent
    lower = partial_sum_weights(_extend(coeffs, 2 * n), n, n).Bn2
    target = rel_tol * lower / (n * n * coeffs.tail_const**2 / (2 * alpha - 1))
    m = math.ceil(target ** (1.0 / (1.0 - 2.0 * alpha))) - 1
    return int(min(max(n, m), max_factor * n))


def _extend(coeffs, last):
    if coeffs.kind == "farima":
        return farima_coefficients(coeffs.params["d"], max(last, coeffs.m))
    if coeffs.kind == "power-law":
        return power_law_coefficients(coeffs.params["alpha"], coeffs.params["scale"], max(last, coeffs.m))
    return coeffs


def weights_for(coeffs, n, m=None, d_rho=1.0, max_factor=16):
    """Weights with the coefficient table extended as far as the truncation needs."""
    if m is None:
        m = choose_past_depth(coeffs, n, max_factor=max_factor)
    return partial_sum_weights(_extend(coeffs, n + m), n, m, d_rho)


def _innovation_block(weights, innovations, seed, paths):
    L = weights.n + weights.m + 1
    if isinstance(innovations, MdsModel):
        if innovations.n != L:
            raise ValueError(
                f"innovation model horizon {innovations.n} must equal n+m+1 = {L} so the "
                "rescaled steps have unit variance")
        xi, _ = increments(innovations, draw_zeta(innovations, seed, paths))
        return xi * math.sqrt(L)
    if innovations == "rademacher":
        return rng.signs(seed, paths, L, rng.INNOVATIONS).astype(np.float64)
    if innovations == "zero":
        return np.zeros((len(rng.as_paths(paths)), L))
    raise ValueError(f"unsupported innovations {innovations!r}")


def simulate_normalized_sums(weights, innovations, seed, start, count, chunk_elems=1 << 22):
    """S_n/B_n for paths start..start+count-1."""
    L = weights.n + weights.m + 1
    step = max(1, chunk_elems // L)
    inv = 1.0 / math.sqrt(weights.Bn2)
    out = np.empty(count)
    for lo in range(0, count, step):
        hi = min(count, lo + step)
        eps = _innovation_block(weights, innovations, seed, range(start + lo, start + hi))
        out[lo:hi] = (eps @ weights.b) * inv
    return out


def simulate_normalized_sum(weights, innovations, seed, path_index):
    """One draw of S_n / B_n, deterministic in (seed, path_index)."""
    if path_index < 0:
        raise ValueError("path_index must be >= 0")
    return float(simulate_normalized_sums(weights, innovations, seed, path_index, 1)[0])


def write_table_csv(path, index, values):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["index", "value"])
        for i, v in zip(index, values):
            w.writerow([int(i), repr(float(v))])


def write_weights_summary(path, weights):
    with open(path, "w") as fh:
        json.dump(weights.summary(), fh, indent=2)
