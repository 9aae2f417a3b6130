"""Martingale-difference families with closed-form conditional laws.

Every step of every model has a two-point conditional law given the past,
so conditional moments are exact and the conditions of the Berry-Esseen
theorem can be certified by a finite maximization.

Kinds
-----
scaled-rademacher
    xi_i = zeta_i / sqrt(n).
pair-compensated
    Steps come in pairs (2j-1, 2j) with conditional variances
    (1 + eta*zeta_{2j-2}) / n and (1 - eta*zeta_{2j-2}) / n, zeta_0 = +1.
    The bracket is exactly 1 but increments depend on the history.
tilted
    xi_1 = zeta_1 / sqrt(n), xi_i = s*zeta_i / sqrt(n) for i >= 2 with
    s^2 = 1 + delta^2*zeta_1.  Then <X>_n = 1 + delta^2*zeta_1*(n-1)/n.
skewed-violation
    i.i.d. steps equal to a/sqrt(n) w.p. q and -b/sqrt(n) w.p. 1-q with unit
    variance and standardized third moment ``skew``; breaks the vanishing
    conditional third moment.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from . import rng

KINDS = ("scaled-rademacher", "pair-compensated", "tilted", "skewed-violation")


@dataclass(frozen=True)
class MdsModel:
    kind: str = "scaled-rademacher"
    n: int = 64
    rho: float = 1.0
    eta: float = 0.0
    delta: float = 0.0
    skew: float = 1.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown model kind {self.kind!r}; expected one of {KINDS}")
        if int(self.n) != self.n or self.n < 1:
            raise ValueError(f"horizon n must be a positive integer, got {self.n}")
        if not self.rho > 0:
            raise ValueError(f"rho must be positive, got {self.rho}")
        if not 0.0 <= self.eta <= 0.5:
            raise ValueError(f"eta must lie in [0, 1/2], got {self.eta}")
        if not 0.0 <= self.delta <= 0.5:
            raise ValueError(f"delta must lie in [0, 1/2], got {self.delta}")
        if self.kind == "pair-compensated" and (self.n < 2 or self.n % 2):
            raise ValueError(f"pair-compensated needs an even horizon n >= 2, got {self.n}")
        if self.kind == "skewed-violation" and (self.skew == 0 or not math.isfinite(self.skew)):
            raise ValueError("skewed-violation needs a finite non-zero skew")

    def to_json(self):
        return asdict(self)

    @classmethod
    def from_json(cls, obj):
        known = {k: obj[k] for k in ("kind", "n", "rho", "eta", "delta", "skew") if k in obj}
        extra = set(obj) - set(known)
        if extra:
            raise ValueError(f"unknown model fields: {sorted(extra)}")
        return cls(**known)

    def with_n(self, n):
        d = self.to_json()
        d["n"] = n
        return MdsModel(**d)

    @property
    def skew_prob(self):
        """P(step is the positive atom) for the skewed model."""
        u = self.skew / math.sqrt(4.0 + self.skew**2)
        return 0.5 * (1.0 - u)

    @property
    def skew_atoms(self):
        q = self.skew_prob
        return math.sqrt((1.0 - q) / q), math.sqrt(q / (1.0 - q))

    def conditional_laws(self):
        """Every distinct conditional law of a step as (values, probs).

        Values are on the xi scale (already divided by sqrt(n)).
        """
        rn = math.sqrt(self.n)
        if self.kind == "skewed-violation":
            a, b = self.skew_atoms
            q = self.skew_prob
            return [((a / rn, -b / rn), (q, 1.0 - q))]
        if self.kind == "scaled-rademacher":
            scales = [1.0]
        elif self.kind == "pair-compensated":
            scales = [math.sqrt(1.0 + self.eta), math.sqrt(1.0 - self.eta)]
        else:
            scales = [1.0]
            if self.n >= 2:
                scales += [math.sqrt(1.0 + self.delta**2), math.sqrt(1.0 - self.delta**2)]
        out = []
        for s in dict.fromkeys(scales):
            v = s / rn
            out.append(((v, -v), (0.5, 0.5)))
        return out

    def max_bracket_deviation(self):
        """max over histories of |<X>_n - 1|."""
        if self.kind == "tilted":
            return self.delta**2 * (self.n - 1) / self.n
        return 0.0


@dataclass
class MartingalePath:
    xi: np.ndarray
    bracket: np.ndarray
    x_n: float


@dataclass
class ConditionReport:
    epsilon_n: float
    delta_n: float
    third_moment_max: float
    lemma2_ok: bool
    satisfied: bool


def increments(model, zeta):
    """Map a (paths, n) matrix of +-1 draws to steps and conditional variances.

    For the sign kinds zeta is the Rademacher sign; for the skewed kind +1
    selects the positive atom.  Returns (xi, scale2) where the conditional
    variance of step i is scale2[:, i] / n.
    """
    zeta = np.asarray(zeta)
    m, n = zeta.shape
    if n != model.n:
        raise ValueError(f"expected {model.n} steps, got {n}")
    z = zeta.astype(np.float64)
    rn = math.sqrt(n)
    if model.kind == "scaled-rademacher":
        scale2 = np.ones((m, n))
    elif model.kind == "pair-compensated":
        h = np.ones((m, n // 2))
        h[:, 1:] = z[:, 1:-1:2]
        scale2 = np.empty((m, n))
        scale2[:, 0::2] = 1.0 + model.eta * h
        scale2[:, 1::2] = 1.0 - model.eta * h
    elif model.kind == "tilted":
        scale2 = np.empty((m, n))
        scale2[:, 0] = 1.0
        scale2[:, 1:] = (1.0 + model.delta**2 * z[:, :1])
    else:
        a, b = model.skew_atoms
        xi = np.where(zeta > 0, a, -b) / rn
        return xi, np.ones((m, n))
    return np.sqrt(scale2) * z / rn, scale2


def brackets(model, scale2):
    """Cumulative conditional variance <X>_1..<X>_n from per-step scales."""
    n = model.n
    b = np.cumsum(scale2, axis=1) / n
    if model.kind == "pair-compensated":
        # completed pairs contribute exactly 2/n
        b[:, 1::2] = np.arange(2, n + 1, 2, dtype=np.float64) / n
    return b


def draw_zeta(model, seed, paths):
    """+-1 draws (int8) driving the model for the given path indices."""
    if model.kind == "skewed-violation":
        u = rng.uniforms(seed, paths, model.n, rng.STEPS)
        return np.where(u < model.skew_prob, 1, -1).astype(np.int8)
    return rng.signs(seed, paths, model.n, rng.STEPS)


def sample_path(model: MdsModel, seed: int, path_index: int) -> MartingalePath:
    """One path, a pure function of (model, seed, path_index)."""
    if path_index < 0:
        raise ValueError("path_index must be >= 0")
    zeta = draw_zeta(model, seed, [path_index])
    xi, s2 = increments(model, zeta)
    return MartingalePath(xi=xi[0], bracket=brackets(model, s2)[0], x_n=float(np.sum(xi[0])))


@dataclass
class PathBatch:
    """Per-path summaries for a contiguous block of path indices."""
    x_n: np.ndarray
    bracket_n: np.ndarray
    max_abs_xi: np.ndarray

    @classmethod
    def concat(cls, parts):
        parts = list(parts)
        return cls(*(np.concatenate([getattr(p, f) for p in parts])
                     for f in ("x_n", "bracket_n", "max_abs_xi")))

    @classmethod
    def from_paths(cls, paths):
        paths = list(paths)
        return cls(np.array([p.x_n for p in paths]),
                   np.array([p.bracket[-1] for p in paths]),
                   np.array([np.max(np.abs(p.xi)) for p in paths]))

    def __len__(self):
        return len(self.x_n)


def simulate_batch(model, seed, start, count):
    """Summaries of paths start..start+count-1.

    Sign models with a single history bit (scaled-rademacher, tilted) use a
    popcount shortcut, so the full step matrix is never built.
    """
    paths = np.arange(start, start + count, dtype=np.uint64)
    n = model.n
    rn = math.sqrt(n)
    if model.kind == "scaled-rademacher":
        s = 2 * rng.count_ones(seed, paths, 0, n) - n
        return PathBatch(s / rn, np.ones(count), np.full(count, 1.0 / rn))
    if model.kind == "tilted":
        z1 = 2.0 * rng.count_ones(seed, paths, 0, 1) - 1.0
        rest = 2 * rng.count_ones(seed, paths, 1, n) - (n - 1)
        s2 = 1.0 + model.delta**2 * z1
        x = (z1 + np.sqrt(s2) * rest) / rn
        bracket = (1.0 + (n - 1) * s2) / n
        big = np.sqrt(s2) if n > 1 else np.ones(count)
        return PathBatch(x, bracket, np.maximum(1.0, big) / rn)
    zeta = draw_zeta(model, seed, paths)
    xi, s2 = increments(model, zeta)
    return PathBatch(np.sum(xi, axis=1), brackets(model, s2)[:, -1], np.max(np.abs(xi), axis=1))


def _ratio_power(values, probs, rho):
    """(E|xi|^(3+rho) / E xi^2)^(1/(1+rho)) for a two-point law."""
    if abs(values[0]) == abs(values[1]):
        return abs(values[0])
    ratio = conditional_moment(values, probs, 3.0 + rho) / conditional_moment(values, probs, 2)
    return ratio ** (1.0 / (1.0 + rho))


def conditional_moment(values, probs, t, absolute=True):
    """E[xi^t] (or E|xi|^t) of a finite conditional law."""
    return math.fsum(q * (abs(v) ** t if absolute else v**t) for v, q in zip(values, probs))


def condition_report(model: MdsModel) -> ConditionReport:
    laws = model.conditional_laws()
    eps = max(_ratio_power(v, p, model.rho) for v, p in laws)
    third = max(abs(v[0] ** 3 * p[0] + v[1] ** 3 * p[1]) for v, p in laws)
    var_max = max(v[0] ** 2 * p[0] + v[1] ** 2 * p[1] for v, p in laws)
    delta = math.sqrt(model.max_bracket_deviation())
    return ConditionReport(
        epsilon_n=eps,
        delta_n=delta,
        third_moment_max=third,
        lemma2_ok=var_max <= eps**2 * (1 + 1e-12),
        satisfied=third == 0.0 and delta <= 0.5 and eps <= 0.5,
    )
