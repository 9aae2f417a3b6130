"""Completion of a martingale to conditional variance exactly one.

Stop at tau = max{k <= n : <X>_k <= 1}, then append r = floor((1 - <X>_tau)/eps^2)
steps eps*zeta and one step sqrt(1 - <X>_tau - r*eps^2)*zeta, with
independent Rademacher zeta.  The enlarged sequence has N = n + r + 1
entries; indices after the residual step are zero.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import rng
from .model import MdsModel, brackets, conditional_moment, draw_zeta, increments


@dataclass(frozen=True)
class EnlargedSequence:
    n: int
    tau: int
    r: int
    pad_scale: float
    residual_step: float
    N: int
    bracket_tau: float
    bracket_N: float
    seed: int = 0
    path_index: int = 0

    def summary(self):
        return {"n": self.n, "tau": self.tau, "r": self.r, "epsilon": self.pad_scale,
                "residual_step": self.residual_step, "N": self.N}

    def step_scales(self):
        """Conditional std of enlarged steps tau+1..N (length N - tau)."""
        s = np.zeros(self.N - self.tau)
        s[: self.r] = self.pad_scale
        s[self.r] = self.residual_step
        return s

    def differences(self, xi):
        """Realized enlarged steps; ``xi`` are the original steps 1..n."""
        xi = np.asarray(xi, dtype=np.float64)
        if xi.size != self.n:
            raise ValueError(f"expected {self.n} original steps, got {xi.size}")
        zeta = rng.signs(self.seed, [self.path_index], self.r + 1, rng.PAD)[0]
        out = np.zeros(self.N)
        out[: self.tau] = xi[: self.tau]
        out[self.tau: self.tau + self.r + 1] = self.step_scales()[: self.r + 1] * zeta
        return out


def _stop_and_pad(bracket_tau, epsilon):
    """(r, residual_step) with rounding repaired so 0 <= residual^2 < eps^2."""
    gap = 1.0 - bracket_tau
    e2 = epsilon * epsilon
    if gap <= 0.0:
        return 0, 0.0
    r = math.floor(gap / e2)
    res2 = gap - r * e2
    if res2 < 0.0:
        r -= 1
        res2 = gap - r * e2
    elif res2 >= e2:
        r += 1
        res2 = gap - r * e2
    return r, math.sqrt(max(res2, 0.0))


def enlarge_to_unit_variance(bracket, epsilon, seed=0, path_index=0, eps_max=None) -> EnlargedSequence:
    """Stop a bracket sequence <X>_1..<X>_n at tau and pad it to variance one."""
    b = np.asarray(bracket, dtype=np.float64).ravel()
    if not epsilon > 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    if eps_max is not None and epsilon > eps_max:
        raise ValueError(f"epsilon {epsilon} exceeds eps_n = {eps_max}")
    if b.size and (b[0] < 0 or np.any(np.diff(b) < 0)):
        raise ValueError("bracket must be non-negative and non-decreasing")
    n = b.size
    tau = int(np.count_nonzero(b <= 1.0))
    bt = float(b[tau - 1]) if tau else 0.0
    r, res = _stop_and_pad(bt, epsilon)
    total = math.fsum([bt, r * epsilon * epsilon, res * res])
    return EnlargedSequence(n=n, tau=tau, r=r, pad_scale=float(epsilon), residual_step=res,
                            N=n + r + 1, bracket_tau=bt, bracket_N=total,
                            seed=seed, path_index=path_index)


def pad_conditions_hold(enl: EnlargedSequence, eps_n, rho):
    """Closed-form check that each appended step is a symmetric two-point law
    with zero mean and third moment satisfying the (3+rho)-moment condition."""
    for s in np.unique(enl.step_scales()).tolist():
        law = ((s, -s), (0.5, 0.5))
        mean = conditional_moment(*law, 1, absolute=False)
        third = conditional_moment(*law, 3, absolute=False)
        lhs = conditional_moment(*law, 3.0 + rho)
        rhs = eps_n ** (1.0 + rho) * conditional_moment(*law, 2)
        if mean != 0.0 or third != 0.0 or lhs > rhs * (1 + 1e-12) or s > eps_n:
            return False
    return True


def simulate_enlarged_batch(model: MdsModel, seed, start, count, epsilon):
    """Terminal values X-hat_N of the enlarged paths start..start+count-1."""
    paths = np.arange(start, start + count, dtype=np.uint64)
    xi, s2 = increments(model, draw_zeta(model, seed, paths))
    br = brackets(model, s2)
    tau = np.count_nonzero(br <= 1.0, axis=1)
    csum = np.concatenate([np.zeros((count, 1)), np.cumsum(xi, axis=1)], axis=1)
    x_tau = csum[np.arange(count), tau]
    b_tau = np.where(tau > 0, br[np.arange(count), np.maximum(tau - 1, 0)], 0.0)
    rs = np.empty(count, dtype=np.int64)
    res = np.empty(count)
    for k, bt in enumerate(b_tau):
        rs[k], res[k] = _stop_and_pad(float(bt), epsilon)
    width = int(rs.max()) + 1
    z = rng.signs(seed, paths, width, rng.PAD).astype(np.float64)
    cols = np.arange(width)[None, :]
    pad = epsilon * np.sum(np.where(cols < rs[:, None], z, 0.0), axis=1)
    resid = res * z[np.arange(count), rs]
    return x_tau + pad + resid
