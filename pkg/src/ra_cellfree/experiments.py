"""Benchmark schemes and paired Monte Carlo experiments."""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .association import two_stage_association
from .channel import draw_fading
from .layout import make_layout
from .optimizer import OptimizerConfig, aligned_pointing, initial_pointing, optimize_pointing
from .params import SystemParams
from .rates import rate_report

log = logging.getLogger(__name__)

SCHEMES = ("optimized", "aligned", "isotropic", "fixed")

# purpose tags for per-trial random streams
LAYOUT_STREAM, FADING_STREAM, INIT_STREAM = 1, 2, 3


class Isotropic:
    """Marker: evaluate rates with an isotropic gain instead of a boresight."""

    def __init__(self, hemisphere=False, pointing=None):
        self.hemisphere = hemisphere
        self.pointing = pointing


@dataclass(frozen=True)
class ExperimentConfig:
    params: SystemParams = field(default_factory=SystemParams)
    opt: OptimizerConfig = field(default_factory=OptimizerConfig)
    schemes: tuple = SCHEMES
    trials: int = 100
    master_seed: int = 0
    sweep: str = "none"
    sweep_values: tuple = ()
    output_path: str = "results.csv"
    isotropic_hemisphere: bool = False
    workers: int = 1

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        unknown = set(self.schemes) - set(SCHEMES)
        if unknown or not self.schemes:
            raise ValueError(f"unknown schemes {sorted(unknown)}; choose from {SCHEMES}")
        if self.sweep not in ("none", "aps", "users"):
            raise ValueError(f"unknown sweep {self.sweep!r}")
        if self.sweep != "none" and not self.sweep_values:
            raise ValueError("sweep values must be non-empty")
        for L, K in self.points():
            if L < K or K < 1:
                raise ValueError(f"sweep point L={L}, K={K} violates L >= K >= 1")

    def points(self):
        """(L, K) pairs covered by this experiment."""
        L, K = self.params.num_aps, self.params.num_users
        if self.sweep == "aps":
            return [(int(v), K) for v in self.sweep_values]
        if self.sweep == "users":
            return [(L, int(v)) for v in self.sweep_values]
        return [(L, K)]


@dataclass(frozen=True)
class TrialRecord:
    trial_id: int
    scheme: str
    L: int
    K: int
    per_user_rate: tuple
    sum_rate: float
    iterations_used: int = 0
    convergence_trace: tuple = ()


def trial_seed(master_seed, stream, trial_id, L, K):
    """Independent stream for one purpose of one trial at one (L, K) point."""
    return np.random.SeedSequence([master_seed, stream, trial_id, L, K])


def scheme_pointing(scheme, layout, fading, assoc, params, cfg=None, rng=None,
                    isotropic_hemisphere=False):
    """Boresights used by a benchmark scheme, or an :class:`Isotropic` marker."""
    if scheme == "fixed":
        return initial_pointing("fixed", layout, assoc)
    if scheme == "aligned":
        return aligned_pointing(layout, assoc)
    if scheme == "optimized":
        return optimize_pointing(layout, fading, assoc, params, cfg, rng=rng)[0]
    if scheme == "isotropic":
        if isotropic_hemisphere:
            return Isotropic(True, aligned_pointing(layout, assoc))
        return Isotropic()
    raise ValueError(f"unknown scheme {scheme!r}")


def evaluate_pointing(pointing, layout, fading, assoc, params, denom_mode="as_printed"):
    if isinstance(pointing, Isotropic):
        mode = "isotropic_hemisphere" if pointing.hemisphere else "isotropic"
        return rate_report(layout, fading, assoc, pointing.pointing, params, denom_mode, mode)
    return rate_report(layout, fading, assoc, pointing, params, denom_mode)


def run_trial(trial_id, config: ExperimentConfig, L, K):
    """Evaluate every requested scheme on one shared layout/fading draw."""
    params = config.params.with_size(L, K)
    seed = config.master_seed
    layout = make_layout(params, trial_seed(seed, LAYOUT_STREAM, trial_id, L, K))
    fading = draw_fading(layout, params, trial_seed(seed, FADING_STREAM, trial_id, L, K))
    assoc = two_stage_association(layout)
    denom = config.opt.denom_mode
    records = []
    for scheme in config.schemes:
        iterations, trace = 0, ()
        if scheme == "optimized":
            rng = np.random.default_rng(trial_seed(seed, INIT_STREAM, trial_id, L, K))
            pointing, trace = optimize_pointing(layout, fading, assoc, params, config.opt, rng=rng)
            iterations, trace = len(trace) - 1, tuple(trace)
        else:
            pointing = scheme_pointing(scheme, layout, fading, assoc, params,
                                       isotropic_hemisphere=config.isotropic_hemisphere)
        report = evaluate_pointing(pointing, layout, fading, assoc, params, denom)
        rates = tuple(float(r) for r in report.per_user_rate)
        records.append(TrialRecord(trial_id, scheme, L, K, rates, float(sum(rates)),
                                   iterations, trace))
    return records


def _run_task(task):
    trial_id, config, L, K = task
    try:
        return run_trial(trial_id, config, L, K), None
    except Exception as exc:  # keep the run going; failure is reported per trial
        return [], (trial_id, L, K, f"{type(exc).__name__}: {exc}")


@dataclass
class MonteCarloResult:
    records: list
    failures: list

    def mean_sum_rate(self, scheme, L=None, K=None):
        rows = [r.sum_rate for r in self.select(scheme, L, K)]
        return float(np.mean(rows))

    def select(self, scheme=None, L=None, K=None):
        return [r for r in self.records
                if (scheme is None or r.scheme == scheme)
                and (L is None or r.L == L) and (K is None or r.K == K)]


def sort_records(records):
    return sorted(records, key=lambda r: (r.L, r.K, r.trial_id, r.scheme))


def run_monte_carlo(config: ExperimentConfig, workers=None) -> MonteCarloResult:
    """Run all trials at every (L, K) point; output order is schedule independent."""
    workers = config.workers if workers is None else workers
    tasks = [(t, config, L, K) for L, K in config.points() for t in range(config.trials)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(_run_task, tasks, chunksize=4))
    else:
        outcomes = [_run_task(t) for t in tasks]
    records, failures = [], []
    for recs, failure in outcomes:
        records.extend(recs)
        if failure is not None:
            log.warning("trial %d (L=%d, K=%d) failed: %s", *failure)
            failures.append(failure)
    return MonteCarloResult(sort_records(records), sorted(failures))


def empirical_cdf(samples, grid):
    """Fraction of ``samples`` at or below each grid value."""
    samples = np.sort(np.asarray(samples, dtype=float))
    if samples.size == 0:
        raise ValueError("empirical_cdf needs at least one sample")
    grid = np.asarray(grid, dtype=float)
    if np.any(np.diff(grid) < 0):
        raise ValueError("grid must be sorted")
    frac = np.searchsorted(samples, grid, side="right") / samples.size
    return [(float(v), float(f)) for v, f in zip(grid, frac)]
