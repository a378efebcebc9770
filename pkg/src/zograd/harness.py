"""Monte Carlo experiment runner.

Builds a problem instance from a config, fans out seeded trials of either
optimizer (or a lemma validator), and aggregates failure rates, quantiles,
and rate-of-convergence slopes.  Every numeric output is a pure function of
(config, master_seed): trial i always runs on the stream derived from the
master seed and i, so parallel and serial execution agree record for record.

Output is JSON lines, one record per trial plus a closing summary record,
with an optional CSV projection of the summary for plotting tools.
"""

from __future__ import annotations

import dataclasses
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .concentration_lab import (
    LemmaReport,
    validate_beta_projection,
    validate_chi_min,
    validate_laurent_massart,
    validate_linear_martingale,
    validate_quadratic_term,
    validate_uniform_suffix,
)
from .numerics import RngStream, derive_seed
from .objectives import (
    Objective,
    StochasticObjective,
    make_finite_sum,
    make_quadratic,
    suboptimality,
)
from .optimizers import Trajectory, ZoGdConfig, ZoSgdConfig, run_zo_gd, run_zo_sgd
from .theory import (
    gd_alpha,
    gd_iterations,
    sgd_alpha,
    sgd_query_complexity,
    sgd_warmup,
)

SCHEMA_VERSION = 1


class ConfigError(ValueError):
    def __init__(self, fieldname: str, message: str):
        self.fieldname = fieldname
        super().__init__(f"config field '{fieldname}': {message}")


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything needed to reproduce one experiment."""

    kind: str  # "gd", "sgd", or "lemma"
    d: int = 10
    L: float = 1.0
    mu: float = 0.1
    sigma: float = 0.0
    n_components: int = 2
    x0_mode: str = "zero"
    eps: float = 1e-3
    delta: float = 0.05
    trials: int = 100
    master_seed: int = 0
    T: int | None = None
    alpha: float | None = None
    c_alpha: float = 1.0
    c_T: float = 1.0
    lemma: str | None = None
    lemma_params: dict = field(default_factory=dict)
    checkpoints: tuple[int, ...] = ()
    output_path: str | None = None

    def __post_init__(self):
        if self.kind not in ("gd", "sgd", "lemma"):
            raise ConfigError("kind", f"must be gd, sgd, or lemma, got {self.kind!r}")
        if self.trials < 1:
            raise ConfigError("trials", f"must be >= 1, got {self.trials}")
        if not 0 < self.delta < 1:
            raise ConfigError("delta", f"must be in (0, 1), got {self.delta}")
        if not self.eps > 0:
            raise ConfigError("eps", f"must be positive, got {self.eps}")
        if self.d < 1:
            raise ConfigError("d", f"must be >= 1, got {self.d}")
        if not 0 < self.mu <= self.L:
            raise ConfigError("mu", f"need 0 < mu <= L, got mu={self.mu}, L={self.L}")
        if self.sigma < 0:
            raise ConfigError("sigma", f"must be >= 0, got {self.sigma}")
        if self.x0_mode not in ("zero", "random", "near_optimum"):
            raise ConfigError(
                "x0_mode",
                f"must be zero, random, or near_optimum, got {self.x0_mode!r}",
            )
        if self.T is not None and self.T < 0:
            raise ConfigError("T", f"must be >= 0, got {self.T}")
        if self.alpha is not None and not self.alpha > 0:
            raise ConfigError("alpha", f"must be positive, got {self.alpha}")


@dataclass(frozen=True)
class TrialSummary:
    kind: str
    params: dict
    trials: int
    empirical_failure_rate: float
    quantiles: dict
    slope: float | None
    theory: dict
    wall_time_seconds: float

    def to_record(self) -> dict:
        rec = {"schema_version": SCHEMA_VERSION, "record": "summary"}
        rec.update(dataclasses.asdict(self))
        return rec


def build_instance(cfg: ExperimentConfig) -> Objective | StochasticObjective:
    """Problem instance shared by all trials, derived from the master seed."""
    inst_rng = RngStream(cfg.master_seed, spawn_key=(0,))
    if cfg.kind == "sgd":
        return make_finite_sum(cfg.d, cfg.mu, cfg.L, cfg.sigma, cfg.n_components, inst_rng)
    return make_quadratic(cfg.d, cfg.mu, cfg.L, inst_rng)


def _x0(cfg: ExperimentConfig, obj: Objective, rng: RngStream) -> np.ndarray:
    """Starting point for one trial.

    "zero" starts at the origin, "random" on a scale-10 Gaussian cloud, and
    "near_optimum" at unit distance from the minimizer in a trial-specific
    uniform direction.  The last is the right choice for rate studies: it
    measures the stationary noise-driven decay without the far-start
    transient, whose duration depends on how the start aligns with the
    instance's slow eigendirections.
    """
    d = obj.dim
    if cfg.x0_mode == "zero":
        return np.zeros(d)
    if cfg.x0_mode == "near_optimum":
        g = rng.generator.standard_normal(d)
        return obj.optimum_point + g / np.linalg.norm(g)
    return 10.0 * rng.generator.standard_normal(d) / math.sqrt(d)


def resolve_schedule(cfg: ExperimentConfig, Delta0: float) -> tuple[int, float, float]:
    """(T, alpha, T0) with config overrides winning over the prescriptions."""
    if cfg.kind == "gd":
        T = cfg.T if cfg.T is not None else gd_iterations(
            cfg.d, cfg.L, cfg.mu, Delta0, cfg.eps, cfg.delta
        )
        alpha = cfg.alpha if cfg.alpha is not None else gd_alpha(
            cfg.d, cfg.L, cfg.mu, cfg.eps, cfg.delta, max(T, 2), c_alpha=cfg.c_alpha
        )
        return T, alpha, 0.0
    T0 = sgd_warmup(cfg.d, cfg.L, cfg.mu)
    T = cfg.T if cfg.T is not None else sgd_query_complexity(
        cfg.d, cfg.eps, cfg.delta, c_T=cfg.c_T
    )
    alpha = cfg.alpha if cfg.alpha is not None else sgd_alpha(cfg.d, T, T0)
    return T, alpha, T0


def run_trial(cfg: ExperimentConfig, index: int, instance=None) -> tuple[dict, Trajectory]:
    """One seeded optimizer run; returns its JSONL record and trajectory."""
    if instance is None:
        instance = build_instance(cfg)
    obj = instance.base if isinstance(instance, StochasticObjective) else instance
    seed = derive_seed(cfg.master_seed, index + 1)
    x0 = _x0(cfg, obj, RngStream(seed, spawn_key=(1,)))
    delta_0 = suboptimality(obj, x0)
    T, alpha, T0 = resolve_schedule(cfg, delta_0)
    if cfg.kind == "gd":
        traj = run_zo_gd(obj, ZoGdConfig(T=T, alpha=alpha, x0=x0, seed=seed))
    else:
        traj = run_zo_sgd(instance, ZoSgdConfig(T=T, T0=T0, alpha=alpha, x0=x0, seed=seed))
    record = {
        "schema_version": SCHEMA_VERSION,
        "kind": cfg.kind,
        "trial_index": index,
        "seed": seed,
        "d": cfg.d,
        "L": cfg.L,
        "mu": cfg.mu,
        "sigma": cfg.sigma,
        "T": T,
        "T0": T0,
        "alpha": alpha,
        "eps": cfg.eps,
        "delta": cfg.delta,
        "delta_0": delta_0,
        "delta_final": traj.final_suboptimality,
        "total_queries": traj.total_queries,
        "success": bool(traj.final_suboptimality <= cfg.eps),
    }
    if cfg.checkpoints:
        record["checkpoints"] = {
            str(t): float(traj.suboptimality[t]) for t in cfg.checkpoints if t <= T
        }
    return record, traj


def _trial_record(args) -> dict:
    cfg, index = args
    record, _ = run_trial(cfg, index)
    return record


def _quantiles(values: np.ndarray) -> dict:
    qs = np.quantile(values, [0.5, 0.9, 0.95, 0.99])
    return {"p50": float(qs[0]), "p90": float(qs[1]), "p95": float(qs[2]), "p99": float(qs[3])}


def fit_loglog_slope(T_values: Sequence[float], medians: Sequence[float]) -> float:
    """Least-squares slope of log(median suboptimality) against log T."""
    x = np.log(np.asarray(T_values, dtype=np.float64))
    y = np.log(np.asarray(medians, dtype=np.float64))
    return float(np.polyfit(x, y, 1)[0])


def run_experiment(
    cfg: ExperimentConfig,
    parallelism: int = 1,
    trajectory_hook: Callable[[int, Trajectory], None] | None = None,
) -> TrialSummary:
    """Run all trials of one experiment and aggregate.

    ``trajectory_hook`` receives each trajectory right after its trial
    (serial mode only) so callers can reduce full paths without the runner
    retaining them.
    """
    if cfg.kind == "lemma":
        raise ConfigError("kind", "use validate_lemma for lemma configs")
    if trajectory_hook is not None and parallelism > 1:
        raise ConfigError("parallelism", "trajectory_hook requires parallelism=1")
    start = time.monotonic()
    records: list[dict]
    if parallelism > 1:
        with ProcessPoolExecutor(max_workers=parallelism) as pool:
            records = list(pool.map(_trial_record, ((cfg, i) for i in range(cfg.trials))))
    else:
        instance = build_instance(cfg)
        records = []
        for i in range(cfg.trials):
            record, traj = run_trial(cfg, i, instance=instance)
            if trajectory_hook is not None:
                trajectory_hook(i, traj)
            records.append(record)
    finals = np.array([r["delta_final"] for r in records])
    failure_rate = float(np.mean(finals > cfg.eps))
    slope = None
    if cfg.kind == "sgd" and cfg.checkpoints:
        ts = [t for t in cfg.checkpoints if str(t) in records[0].get("checkpoints", {})]
        if len(ts) >= 2:
            medians = [
                float(np.median([r["checkpoints"][str(t)] for r in records])) for t in ts
            ]
            slope = fit_loglog_slope(ts, medians)
    theory = {
        "T": records[0]["T"],
        "T0": records[0]["T0"],
        "alpha": records[0]["alpha"],
    }
    summary = TrialSummary(
        kind=cfg.kind,
        params={
            "d": cfg.d,
            "L": cfg.L,
            "mu": cfg.mu,
            "sigma": cfg.sigma,
            "eps": cfg.eps,
            "delta": cfg.delta,
            "master_seed": cfg.master_seed,
        },
        trials=cfg.trials,
        empirical_failure_rate=failure_rate,
        quantiles=_quantiles(finals),
        slope=slope,
        theory=theory,
        wall_time_seconds=time.monotonic() - start,
    )
    if cfg.output_path:
        write_jsonl(cfg.output_path, records, summary)
    return summary


def write_jsonl(path: str, records: list[dict], summary: TrialSummary | None) -> None:
    with open(path, "w") as fh:
        for record in records:
            fh.write(json.dumps(record) + "\n")
        if summary is not None:
            fh.write(json.dumps(summary.to_record()) + "\n")


def summary_csv_row(summary: TrialSummary) -> tuple[str, str]:
    """(header, row) projection of a summary for plotting tools."""
    cols = {
        "kind": summary.kind,
        **{k: summary.params[k] for k in ("d", "L", "mu", "sigma", "eps", "delta")},
        "trials": summary.trials,
        "failure_rate": summary.empirical_failure_rate,
        **{k: v for k, v in summary.quantiles.items()},
        "slope": "" if summary.slope is None else summary.slope,
        "T": summary.theory["T"],
        "alpha": summary.theory["alpha"],
        "wall_time_seconds": summary.wall_time_seconds,
    }
    return ",".join(cols), ",".join(str(v) for v in cols.values())


SWEEP_AXES = ("T", "d", "eps", "sigma")


def sweep(
    cfg_base: ExperimentConfig,
    axis: str,
    values: Sequence,
    parallelism: int = 1,
    independent: bool = False,
) -> tuple[list[TrialSummary], float | None]:
    """Run one experiment per axis value; shared master-seed derivation.

    For axis="T" on the stochastic method the default mode runs one long
    trajectory per seed at max(values) and reads the intermediate values
    off as checkpoints (half the compute of independent runs); pass
    ``independent=True`` for genuinely separate runs per T.  Returns the
    per-value summaries and, for axis="T", the fitted log-log slope of the
    median final suboptimality.
    """
    if axis not in SWEEP_AXES:
        raise ConfigError("axis", f"unknown sweep axis {axis!r}; options: {SWEEP_AXES}")
    values = list(values)
    if sorted(values) != values:
        raise ConfigError("values", "must be sorted ascending")
    summaries = []
    slope = None
    if axis == "T" and cfg_base.kind == "sgd" and not independent:
        # One long run per seed; intermediate T values read off as
        # checkpoints of the same trajectory.
        cfg = dataclasses.replace(
            cfg_base, T=int(max(values)), checkpoints=tuple(int(v) for v in values)
        )
        start = time.monotonic()
        instance = build_instance(cfg)
        records = []
        vals_by_t: dict[int, list[float]] = {int(v): [] for v in values}
        for i in range(cfg.trials):
            record, traj = run_trial(cfg, i, instance=instance)
            records.append(record)
            for v in vals_by_t:
                vals_by_t[v].append(float(traj.suboptimality[v]))
        wall = time.monotonic() - start
        theory = {"T": records[0]["T"], "T0": records[0]["T0"], "alpha": records[0]["alpha"]}
        params = {
            "d": cfg.d,
            "L": cfg.L,
            "mu": cfg.mu,
            "sigma": cfg.sigma,
            "eps": cfg.eps,
            "delta": cfg.delta,
            "master_seed": cfg.master_seed,
        }
        for v in vals_by_t:
            finals = np.array(vals_by_t[v])
            summaries.append(
                TrialSummary(
                    kind=cfg.kind,
                    params={**params, "T": v},
                    trials=cfg.trials,
                    empirical_failure_rate=float(np.mean(finals > cfg.eps)),
                    quantiles=_quantiles(finals),
                    slope=None,
                    theory=theory,
                    wall_time_seconds=wall,
                )
            )
        slope = fit_loglog_slope(values, [s.quantiles["p50"] for s in summaries])
        if cfg.output_path:
            write_jsonl(cfg.output_path, records, None)
        return summaries, slope
    for v in values:
        if axis == "T":
            cfg = dataclasses.replace(cfg_base, T=int(v))
        elif axis == "d":
            cfg = dataclasses.replace(cfg_base, d=int(v))
        elif axis == "eps":
            cfg = dataclasses.replace(cfg_base, eps=float(v))
        else:
            cfg = dataclasses.replace(cfg_base, sigma=float(v))
        summaries.append(run_experiment(cfg, parallelism=parallelism))
    if axis == "T" and len(values) >= 2:
        slope = fit_loglog_slope(values, [s.quantiles["p50"] for s in summaries])
    return summaries, slope


LEMMA_NAMES = (
    "beta_projection",
    "chi_min",
    "laurent_massart",
    "suffix_uniform",
    "linear_martingale",
    "quadratic_term",
)


def validate_lemma(name: str, params: dict | None = None, master_seed: int = 0) -> LemmaReport:
    """Dispatch a named concentration validator with keyword parameters."""
    params = dict(params or {})
    if name not in LEMMA_NAMES:
        raise ConfigError("lemma", f"unknown lemma {name!r}; options: {LEMMA_NAMES}")
    rng = RngStream(master_seed, spawn_key=(2,))
    if name == "beta_projection":
        params.setdefault("d", 10)
        params.setdefault("n_samples", 100_000)
        return validate_beta_projection(rng=rng, **params)
    if name == "chi_min":
        params.setdefault("N", 100)
        params.setdefault("k_dof", 200)
        params.setdefault("delta", 0.05)
        params.setdefault("trials", 2000)
        return validate_chi_min(rng=rng, **params)
    if name == "laurent_massart":
        params.setdefault("weights", list(1.0 / (1.0 + np.arange(20))))
        params.setdefault("delta", 0.05)
        params.setdefault("trials", 2000)
        return validate_laurent_massart(rng=rng, **params)
    if name == "suffix_uniform":
        params.setdefault("T", 2000)
        params.setdefault("d", 10)
        params.setdefault("delta", 0.1)
        params.setdefault("trials", 300)
        return validate_uniform_suffix(rng=rng, **params)
    if name == "linear_martingale":
        params.setdefault("K", 200)
        params.setdefault("T0", 100.0)
        params.setdefault("sigma", 1.0)
        params.setdefault("delta", 0.05)
        params.setdefault("trials", 1000)
        return validate_linear_martingale(rng=rng, **params)
    params.setdefault("K", 100)
    params.setdefault("T0", 100.0)
    params.setdefault("sigma", 1.0)
    params.setdefault("delta", 0.05)
    params.setdefault("trials", 1000)
    return validate_quadratic_term(rng=rng, **params)
