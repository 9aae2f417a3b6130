"""Config-driven experiments over a grid of horizons."""
from __future__ import annotations

import csv
import json
import math
import os
from dataclasses import asdict, dataclass, field, replace
from functools import partial

import numpy as np

from . import rng
from .dist import (MAX_ENUMERATION_N, enumerate_model_distance,
                   exact_rademacher_distance, kolmogorov_distance)
from .enlarge import enlarge_to_unit_variance, pad_conditions_hold, simulate_enlarged_batch
from .linproc import classify_memory, coefficients_from_json, simulate_normalized_sums, weights_for
from .model import MdsModel, condition_report, simulate_batch
from .montecarlo import CHUNK, map_chunks, merge
from .rates import fit_loglog, theorem2_functionals, tightness_constant
from .svg import loglog_svg

EXPERIMENTS = ("martingale-rate", "linproc-rate", "enlargement-check", "functionals")
MODES = ("auto", "exact", "monte-carlo")
MIN_PATHS = 1000
CSV_COLUMNS = ["n", "method", "M", "D", "dkw_band", "sqrt_n_D", "eps_n", "delta_n", "seed"]


class ConfigError(ValueError):
    pass


class ExperimentError(RuntimeError):
    pass


@dataclass
class ExperimentConfig:
    experiment: str
    model: dict = field(default_factory=lambda: {"kind": "scaled-rademacher"})
    n_grid: list = field(default_factory=lambda: [64, 256, 1024])
    paths: int = 100_000
    seed: int = 0
    p: float = 1.0
    d_rho: float = 1.0
    workers: int = 1
    output_dir: str = "out"
    mode: str = "auto"
    confidence: float = 0.95
    # delta_n = model.delta * n**delta_exponent when set (tilted only)
    delta_exponent: float | None = None
    innovations: str = "rademacher"
    past_factor: int = 16
    brackets: int = 1000

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(f"experiment must be one of {EXPERIMENTS}, got {self.experiment!r}")
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}, got {self.mode!r}")
        g = self.n_grid
        if not g or any(int(n) != n or n < 1 for n in g):
            raise ConfigError("n_grid must be a non-empty list of positive integers")
        if any(b <= a for a, b in zip(g, g[1:])):
            raise ConfigError("n_grid must be strictly increasing")
        self.n_grid = [int(n) for n in g]
        if not 0 <= int(self.seed) <= rng.MASK64:
            raise ConfigError("seed must be a 64-bit unsigned integer")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        if self.p < 1:
            raise ConfigError("p must be >= 1")
        if not self.d_rho > 0:
            raise ConfigError("d_rho must be positive")
        if not 0 < self.confidence < 1:
            raise ConfigError("confidence must lie in (0, 1)")
        uses_mc = self.experiment in ("linproc-rate", "functionals") or (
            self.experiment == "martingale-rate" and self.mode != "exact")
        if uses_mc and self.paths < MIN_PATHS:
            raise ConfigError(f"Monte Carlo experiments need paths >= {MIN_PATHS}")
        if self.experiment == "linproc-rate":
            if self.model.get("kind") not in ("farima", "power-law", "finite"):
                raise ConfigError("linproc-rate needs a coefficient model (farima, power-law, finite)")
        else:
            try:
                for n in self.n_grid:
                    self.model_at(n)
            except ValueError as e:
                raise ConfigError(str(e)) from None

    @classmethod
    def from_json(cls, obj):
        names = set(cls.__dataclass_fields__)
        extra = set(obj) - names
        if extra:
            raise ConfigError(f"unknown config fields: {sorted(extra)}")
        if "experiment" not in obj:
            raise ConfigError("config needs an 'experiment' field")
        return cls(**obj)

    @classmethod
    def load(cls, path):
        with open(path) as fh:
            try:
                obj = json.load(fh)
            except json.JSONDecodeError as e:
                raise ConfigError(f"invalid JSON in {path}: {e}") from None
        if not isinstance(obj, dict):
            raise ConfigError("config must be a JSON object")
        return cls.from_json(obj)

    def model_at(self, n):
        spec = dict(self.model)
        spec["n"] = n
        if self.delta_exponent is not None:
            spec["delta"] = spec.get("delta", 1.0) * n**self.delta_exponent
        return MdsModel.from_json(spec)


def _rows_csv(path, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in rows:
            w.writerow(["" if r.get(c) is None else (repr(r[c]) if isinstance(r[c], float) else r[c])
                        for c in CSV_COLUMNS])


def _json(path, obj):
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _row(n, res, eps, delta, seed):
    return {"n": n, "method": res.method, "M": res.sample_size, "D": res.d,
            "dkw_band": res.dkw_band, "sqrt_n_D": math.sqrt(n) * res.d,
            "eps_n": eps, "delta_n": delta, "seed": seed}


def _mc_distance(cfg, fn, width=1):
    # keep (chunk x width) step matrices around 2^22 entries
    chunk = min(CHUNK, max(256, (1 << 22) // width))
    parts = map_chunks(fn, cfg.paths, cfg.workers, chunk)
    out = merge(parts)
    x = out.x_n if hasattr(out, "x_n") else out
    return kolmogorov_distance(x, cfg.confidence), out


def _model_distance(cfg, model):
    exact_ok = model.kind == "scaled-rademacher" or model.n <= MAX_ENUMERATION_N
    if cfg.mode == "exact" and not exact_ok:
        raise ExperimentError(f"no exact method for {model.kind} at n={model.n}")
    if cfg.mode != "monte-carlo" and exact_ok:
        if model.kind == "scaled-rademacher":
            return exact_rademacher_distance(model.n)
        return enumerate_model_distance(model)
    res, _ = _mc_distance(cfg, partial(simulate_batch, model, cfg.seed), model.n)
    res.n = model.n
    return res


def _finish(cfg, out, rows, title, extra=None):
    """rates.csv, fit.json, plot.svg shared by all rate-type experiments."""
    _rows_csv(os.path.join(out, "rates.csv"), rows)
    ds = [r["D"] for r in rows]
    if any(d <= 0 for d in ds):
        raise ExperimentError("zero distance in a log fit; increase paths")
    shape = [r["eps_n"] + r["delta_n"] for r in rows]
    c_hat = tightness_constant(ds, [r["eps_n"] for r in rows], [r["delta_n"] for r in rows])
    fit = {"slope": None, "intercept": None, "r2": None, "c_hat": c_hat}
    if len(rows) >= 3:
        fit = fit_loglog([(r["n"], r["D"]) for r in rows]).to_json(c_hat)
    fit["seed"] = cfg.seed
    fit["experiment"] = cfg.experiment
    if extra:
        fit.update(extra)
    _json(os.path.join(out, "fit.json"), fit)
    ns = [r["n"] for r in rows]
    svg = loglog_svg([
        {"label": "measured D", "xs": ns, "ys": ds, "style": "points"},
        {"label": f"c_hat (eps+delta), c_hat={c_hat:.3g}", "xs": ns,
         "ys": [c_hat * s for s in shape], "style": "line"},
    ], title=f"{title} (seed {cfg.seed})")
    with open(os.path.join(out, "plot.svg"), "w") as fh:
        fh.write(svg)
    return fit


def _martingale_rate(cfg, out):
    rows = []
    for n in cfg.n_grid:
        model = cfg.model_at(n)
        rep = condition_report(model)
        rows.append(_row(n, _model_distance(cfg, model), rep.epsilon_n, rep.delta_n, cfg.seed))
    return _finish(cfg, out, rows, f"{cfg.model.get('kind')} martingale")


def _linproc_rate(cfg, out):
    if cfg.innovations not in ("rademacher", "zero"):
        raise ConfigError("linproc-rate innovations must be 'rademacher'")
    coeffs = coefficients_from_json(cfg.model, 1)
    rows, wrows = [], []
    for n in cfg.n_grid:
        w = weights_for(coeffs, n, d_rho=cfg.d_rho, max_factor=cfg.past_factor)
        res, _ = _mc_distance(cfg, partial(simulate_normalized_sums, w, cfg.innovations, cfg.seed),
                              w.n + w.m + 1)
        res.n = n
        rows.append(_row(n, res, w.eps_n, 0.0, cfg.seed))
        wrows.append(w.summary())
    with open(os.path.join(out, "weights.csv"), "w", newline="") as fh:
        wr = csv.DictWriter(fh, ["n", "m", "Bn2", "b_sup", "eps_n", "tail_mass_bound"], lineterminator="\n")
        wr.writeheader()
        wr.writerows(wrows)
    extra = {"memory": classify_memory(coeffs)}
    if len(wrows) >= 3:
        for key in ("Bn2", "b_sup", "eps_n"):
            extra[f"slope_{key}"] = fit_loglog([(r["n"], r[key]) for r in wrows]).slope
    return _finish(cfg, out, rows, f"{cfg.model.get('kind')} linear process", extra)


def _random_bracket(gen, n):
    steps = gen.exponential(size=n)
    return np.cumsum(steps) * (gen.uniform(0.3, 1.7) / steps.sum())


def _enlargement_check(cfg, out):
    gen = np.random.Generator(np.random.Philox(cfg.seed))
    worst, pad_ok, r_ok = 0.0, True, True
    with open(os.path.join(out, "enlargement.csv"), "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["case", "n", "tau", "r", "epsilon", "residual_step", "N", "abs_bracket_error", "seed"])
        for case in range(cfg.brackets):
            n = cfg.n_grid[case % len(cfg.n_grid)]
            eps = 0.5 * (1.0 - gen.random())  # (0, 1/2]
            enl = enlarge_to_unit_variance(_random_bracket(gen, n), eps, cfg.seed, case)
            err = abs(enl.bracket_N - 1.0)
            worst = max(worst, err)
            r_ok &= enl.r <= math.floor(1.0 / eps**2)
            pad_ok &= pad_conditions_hold(enl, eps, cfg.model.get("rho", 1.0))
            w.writerow([case, n, enl.tau, enl.r, repr(eps), repr(enl.residual_step), enl.N, repr(err), cfg.seed])
    report = {"cases": cfg.brackets, "max_abs_bracket_error": worst, "pad_count_bound_ok": bool(r_ok),
              "pad_conditions_ok": bool(pad_ok), "passed": bool(worst <= 1e-12 and r_ok and pad_ok),
              "seed": cfg.seed}
    _json(os.path.join(out, "report.json"), report)
    if cfg.paths >= MIN_PATHS and len(cfg.n_grid) >= 1:
        rows = []
        for n in cfg.n_grid:
            model = cfg.model_at(n)
            rep = condition_report(model)
            res, _ = _mc_distance(cfg, partial(simulate_enlarged_batch, model, cfg.seed,
                                               epsilon=rep.epsilon_n), n)
            res.n = n
            rows.append(_row(n, res, rep.epsilon_n, rep.delta_n, cfg.seed))
        _finish(cfg, out, rows, "enlarged martingale", {"enlargement": report})
    return report


def _functionals(cfg, out):
    rows, frows = [], []
    for n in cfg.n_grid:
        model = cfg.model_at(n)
        rep = condition_report(model)
        res, batch = _mc_distance(cfg, partial(simulate_batch, model, cfg.seed), n)
        res.n = n
        f = theorem2_functionals(batch, cfg.p)
        rows.append(_row(n, res, rep.epsilon_n, rep.delta_n, cfg.seed))
        frows.append([n, repr(float(cfg.p)), repr(f.moment_bracket), repr(f.moment_max),
                      repr(f.combined), cfg.seed])
    with open(os.path.join(out, "functionals.csv"), "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["n", "p", "moment_bracket", "moment_max", "combined", "seed"])
        w.writerows(frows)
    return _finish(cfg, out, rows, f"{cfg.model.get('kind')} bracket and max-step functionals")


RUNNERS = {
    "martingale-rate": _martingale_rate,
    "linproc-rate": _linproc_rate,
    "enlargement-check": _enlargement_check,
    "functionals": _functionals,
}


def run_experiment(cfg: ExperimentConfig):
    """Run one experiment, writing its files into cfg.output_dir."""
    out = cfg.output_dir
    try:
        os.makedirs(out, exist_ok=True)
        probe = os.path.join(out, ".write-probe")
        with open(probe, "w"):
            pass
        os.remove(probe)
    except OSError as e:
        raise ExperimentError(f"output directory {out!r} is not writable: {e}") from None
    echo = asdict(cfg)
    echo.pop("workers")  # scheduling detail, not part of the result
    _json(os.path.join(out, "config-echo.json"), echo)
    return RUNNERS[cfg.experiment](cfg, out)


def with_overrides(cfg, workers=None, seed=None, output_dir=None):
    changes = {k: v for k, v in (("workers", workers), ("seed", seed), ("output_dir", output_dir))
               if v is not None}
    return replace(cfg, **changes) if changes else cfg
