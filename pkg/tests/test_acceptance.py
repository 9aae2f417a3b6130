"""Acceptance criteria, one test each; every test prints a single PASS/FAIL line."""
import math
import time

import numpy as np
import pytest

from belab.dist import enumerate_model_distance, exact_rademacher_distance, kolmogorov_distance
from belab.enlarge import enlarge_to_unit_variance, pad_conditions_hold
from belab.linproc import farima_coefficients, weights_for
from belab.model import MdsModel, condition_report, simulate_batch
from belab.rates import fit_loglog, theorem2_functionals


@pytest.fixture
def report(capsys):
    def emit(tag, ok, detail):
        with capsys.disabled():
            print(f"\n[{tag}] {'PASS' if ok else 'FAIL'}: {detail}")
        assert ok, detail
    return emit


def test_ac1_exact_rate(report):
    t0 = time.perf_counter()
    ns = [2**k for k in (8, 10, 12, 14, 16)]
    ds = [exact_rademacher_distance(n).d for n in ns]
    fit = fit_loglog(list(zip(ns, ds)))
    scaled = [math.sqrt(n) * d for n, d in zip(ns, ds)]
    spread = max(scaled) / min(scaled)
    dt = time.perf_counter() - t0
    ok = -0.52 <= fit.slope <= -0.48 and spread <= 1.5 and dt < 10
    report("AC1", ok, f"slope={fit.slope:.4f} in [-0.52,-0.48], sqrt(n)D spread={spread:.4f} <= 1.5, "
                      f"runtime={dt:.2f}s < 10s")


def test_ac2_monte_carlo_rate_with_tilt(report):
    t0 = time.perf_counter()
    M = 10**6
    pts, bands = [], []
    for n in (64, 256, 1024):
        m = MdsModel("tilted", n, delta=n**-0.5)
        x = np.concatenate([simulate_batch(m, 2, lo, 1 << 17).x_n for lo in range(0, M, 1 << 17)])[:M]
        res = kolmogorov_distance(x)
        pts.append((n, res.d))
        bands.append(res.dkw_band)
    fit = fit_loglog(pts)
    dt = time.perf_counter() - t0
    ok = -0.65 <= fit.slope <= -0.35 and all(b > 0 for b in bands) and dt < 300
    detail = ", ".join(f"n={n}: D={d:.4f}+-{b:.4f}" for (n, d), b in zip(pts, bands))
    report("AC2", ok, f"slope={fit.slope:.4f} in [-0.65,-0.35]; {detail}; runtime={dt:.1f}s")


def test_ac3_linear_process_orders(report):
    t0 = time.perf_counter()
    coeffs = farima_coefficients(0.25, 1)
    ws = [weights_for(coeffs, 2**k) for k in range(10, 17)]
    s_b = fit_loglog([(w.n, w.Bn2) for w in ws]).slope
    s_sup = fit_loglog([(w.n, w.b_sup) for w in ws]).slope
    s_eps = fit_loglog([(w.n, w.eps_n) for w in ws]).slope
    dt = time.perf_counter() - t0
    ok = 1.45 <= s_b <= 1.55 and 0.20 <= s_sup <= 0.30 and -0.55 <= s_eps <= -0.45 and dt < 30
    report("AC3", ok, f"slope Bn2={s_b:.4f} in [1.45,1.55], sup b={s_sup:.4f} in [0.20,0.30], "
                      f"eps={s_eps:.4f} in [-0.55,-0.45], runtime={dt:.2f}s")


def test_ac4_enlargement_exactness(report):
    gen = np.random.default_rng(20240601)
    worst, r_ok, pad_ok = 0.0, True, True
    for _ in range(1000):
        n = int(gen.integers(1, 500))
        steps = gen.exponential(size=n) * (gen.random(n) < 0.9)
        b = np.cumsum(steps) * gen.uniform(0.1, 2.0) / max(steps.sum(), 1e-300)
        eps = 0.5 * (1.0 - gen.random())
        rho = gen.uniform(0.05, 2.0)
        e = enlarge_to_unit_variance(b, eps)
        worst = max(worst, abs(e.bracket_N - 1.0))
        r_ok &= e.r <= math.floor(1.0 / eps**2)
        pad_ok &= pad_conditions_hold(e, eps, rho)
    ok = worst <= 1e-12 and r_ok and pad_ok
    report("AC4", ok, f"1000 brackets: max|<X>_N-1|={worst:.2e} <= 1e-12, r bound={r_ok}, pad moments={pad_ok}")


def test_ac5_oracle_equivalence(report):
    gap = max(abs(enumerate_model_distance(MdsModel("scaled-rademacher", n)).d
                  - exact_rademacher_distance(n).d) for n in range(1, 13))
    exact = exact_rademacher_distance(64).d
    m = MdsModel("scaled-rademacher", 64)
    inside = 0
    for seed in range(100):
        res = kolmogorov_distance(simulate_batch(m, seed, 0, 10**5).x_n)
        inside += abs(res.d - exact) <= res.dkw_band
    ok = gap <= 1e-12 and inside >= 93
    report("AC5", ok, f"enumeration vs binomial n<=12 max gap={gap:.1e} <= 1e-12; "
                      f"MC inside DKW band {inside}/100 >= 93")


def test_ac6_condition_certification(report):
    good = True
    for n in (1, 2, 3, 64, 1000, 2**16):
        r = condition_report(MdsModel("scaled-rademacher", n))
        good &= r.epsilon_n == 1 / math.sqrt(n) and r.delta_n == 0.0 and r.third_moment_max == 0.0
        good &= r.satisfied == (n >= 4)
    flagged = all(not condition_report(MdsModel("skewed-violation", n, skew=s)).satisfied
                  for n in (16, 1024) for s in (0.5, 1.0, -2.0))
    ok = good and flagged
    report("AC6", ok, f"rademacher eps=n^-1/2, delta=0, third=0 exactly: {good}; skewed flagged: {flagged}")


def test_ac7_functional_limit(report):
    worst, mono = 0.0, True
    for n in (16, 256, 4096):
        batch = simulate_batch(MdsModel("scaled-rademacher", n), 0, 0, 1000)
        vals = []
        for p in (1, 2, 8):
            c = theorem2_functionals(batch, p).combined
            worst = max(worst, abs(c - n ** (-p / (2 * p + 1))) / n ** (-p / (2 * p + 1)))
            vals.append(c)
        gaps = [v - n**-0.5 for v in vals]
        mono &= all(g > 0 for g in gaps) and gaps[0] > gaps[1] > gaps[2]
    ok = worst <= 1e-12 and mono
    report("AC7", ok, f"combined vs n^(-p/(2p+1)) max rel err={worst:.1e} <= 1e-12; "
                      f"decreasing toward n^-1/2 in p: {mono}")
