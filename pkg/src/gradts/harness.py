"""Optimization loop, experiment drivers and diagnostic metrics.

`run` executes one seeded Bayesian-optimization run (warm start, refit,
acquire, optional trust region with restarts) and records a per-evaluation
trace. The experiment drivers reproduce the analysis-style studies:
candidate sample quality, space-filling behaviour versus dimension,
query locality, and gradient-uncertainty decay.
"""

from __future__ import annotations

import itertools
import zlib
from dataclasses import dataclass, field, replace
from typing import Callable, Iterable, Optional

import numpy as np
from joblib import Parallel, delayed
from scipy.linalg import cholesky as _cholesky

from . import acquire as acq
from . import benchmarks, candidates as cand, gp, turbo
from .acquire import AcquisitionConfig
from .candidates import MaskVariant
from .gp import GpModel

GRAD_UNC_CHECKPOINTS = (50, 100, 200, 500, 750, 1000)

# Hyperparameter refit cadence inside a run: re-optimize every REFIT_EVERY
# iterations (warm-started), with a full cold multi-start every COLD_EVERY.
REFIT_EVERY = 5
COLD_EVERY = 50


@dataclass(frozen=True)
class RunConfig:
    problem: str
    d: int
    acquisition: AcquisitionConfig = field(default_factory=AcquisitionConfig)
    iterations: int = 100
    n_init: int = 30
    noise_sd: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.iterations < 0 or self.n_init < 1:
            raise ValueError("invalid iteration counts")


@dataclass
class RunTrace:
    """Per-evaluation record of one run."""

    cfg: RunConfig
    X: np.ndarray
    y: np.ndarray
    best: np.ndarray
    log_volume: np.ndarray
    degenerate_dims: np.ndarray
    grad_cov_trace: np.ndarray
    tr_length: np.ndarray

    @property
    def n(self) -> int:
        return self.y.shape[0]


def run(
    cfg: RunConfig,
    on_model: Optional[Callable[[int, GpModel, np.ndarray], None]] = None,
) -> RunTrace:
    """One seeded BO run. `on_model` is called after each refit with
    (evaluation count, model, incumbent), and once more with the final
    model after the evaluation budget is exhausted."""
    problem = benchmarks.make(cfg.problem, cfg.d, cfg.noise_sd)
    ss = np.random.SeedSequence(cfg.seed)
    s_init, s_noise, s_acq, s_fit = ss.spawn(4)
    noise_rng = np.random.default_rng(s_noise)
    acq_seeds = s_acq.spawn(cfg.iterations + 1)
    fit_seeds = s_fit.spawn(cfg.iterations + 1)
    init_seeds = s_init.spawn(64)

    budget = cfg.n_init + cfg.iterations * cfg.acquisition.q
    rows_x, rows_y = [], []
    log_vol, degen, gtrace, trlen = [], [], [], []

    acfg = cfg.acquisition
    tr_state = turbo.TrustRegionState.init(cfg.d, acfg.q) if acfg.use_turbo else None
    data_X: list[np.ndarray] = []
    data_y: list[float] = []
    best = -np.inf
    restart_idx = 0
    model: Optional[GpModel] = None

    def record(x, y, lv=np.nan, dg=np.nan, gt=np.nan):
        nonlocal best
        best = max(best, y)
        rows_x.append(np.asarray(x, dtype=float))
        rows_y.append(float(y))
        log_vol.append(lv)
        degen.append(dg)
        gtrace.append(gt)
        trlen.append(tr_state.length if tr_state is not None else np.nan)

    def warm_start():
        nonlocal data_X, data_y, restart_idx
        pts = cand.sobol(cfg.n_init, cfg.d, init_seeds[restart_idx])
        restart_idx += 1
        data_X, data_y = [], []
        for p in pts:
            if len(rows_y) >= budget:
                break
            yv = benchmarks.evaluate(problem, p, noise_rng)
            data_X.append(p)
            data_y.append(yv)
            record(p, yv)

    warm_start()
    it = 0
    warm_theta = None
    while len(rows_y) < budget:
        data = gp.Dataset.make(np.asarray(data_X), np.asarray(data_y))
        # Hyperparameters are re-optimized every REFIT_EVERY iterations (cold
        # multi-start every COLD_EVERY, to escape bad posterior modes the warm
        # path can lock in); other iterations rebuild the solve state with the
        # previous hyperparameters, which costs one Cholesky.
        if warm_theta is None or it % REFIT_EVERY == 0:
            cold = warm_theta is None or it % COLD_EVERY == 0
            model = gp.fit(data, seed=fit_seeds[it],
                           warm_start=None if cold else warm_theta,
                           restarts=4 if cold else 1,
                           maxiter=100 if cold else 40)
            warm_theta = gp.theta_of(model)
        else:
            model = gp.GpModel.build(model.params, data)
        if on_model is not None:
            x0, _ = gp.incumbent(model, acfg.incumbent_rule)
            on_model(len(rows_y), model, x0)

        trust_region = None
        if tr_state is not None:
            x0, _ = gp.incumbent(model, acfg.incumbent_rule)
            trust_region = turbo.region(tr_state, model, x0)
        res = acq.acquire(model, acfg, trust_region=trust_region, seed=acq_seeds[it])

        prev_best = max(data_y)
        improved = False
        for i in range(acfg.q):
            if len(rows_y) >= budget:
                break
            x = res.x_next[i]
            yv = benchmarks.evaluate(problem, x, noise_rng)
            improved = improved or yv > prev_best
            data_X.append(x)
            data_y.append(yv)
            gs = res.gradient_samples[i] if i < len(res.gradient_samples) else None
            record(
                x, yv,
                lv=res.region_log_volumes[i],
                gt=float(np.trace(gs.cov_g)) if gs is not None else np.nan,
            )
            if gs is not None:
                degen[-1] = float(np.sum(cand.cone_region(
                    gs.x0, gs.g, cand.unit_cube(cfg.d)).widths <= 0.0))
        it += 1

        if tr_state is not None:
            tr_state = turbo.update(tr_state, improved)
            if tr_state.needs_restart and len(rows_y) < budget:
                warm_start()
                warm_theta = None

    if on_model is not None and model is not None:
        data = gp.Dataset.make(np.asarray(data_X), np.asarray(data_y))
        model = gp.GpModel.build(model.params, data)
        x0, _ = gp.incumbent(model, acfg.incumbent_rule)
        on_model(len(rows_y), model, x0)

    return RunTrace(
        cfg=cfg,
        X=np.asarray(rows_x), y=np.asarray(rows_y),
        best=np.maximum.accumulate(np.asarray(rows_y)),
        log_volume=np.asarray(log_vol),
        degenerate_dims=np.asarray(degen),
        grad_cov_trace=np.asarray(gtrace),
        tr_length=np.asarray(trlen),
    )


def run_many(cfg: RunConfig, repeats: int, base_seed: int = 0,
             n_jobs: int = 1) -> list[RunTrace]:
    """Independent repeats with seeds base_seed..base_seed+repeats-1."""
    cfgs = [replace(cfg, seed=base_seed + i) for i in range(repeats)]
    if n_jobs == 1:
        return [run(c) for c in cfgs]
    return Parallel(n_jobs=n_jobs)(delayed(run)(c) for c in cfgs)


# ---------------------------------------------------------------------------
# Sample-quality experiment
# ---------------------------------------------------------------------------

def make_snapshots(
    problem: str, d: int, n_models: int, iterations: int = 200,
    n_init: int = 30, M: int = 500, base_seed: int = 0, n_jobs: int = 1,
) -> list[GpModel]:
    """Model snapshots from short RAASP-TS runs, one per seed."""
    cfg = RunConfig(
        problem=problem, d=d, iterations=iterations, n_init=n_init,
        acquisition=AcquisitionConfig(M=M, policy="raasp"),
    )
    traces = run_many(cfg, n_models, base_seed=base_seed, n_jobs=n_jobs)
    models = []
    for tr in traces:
        data = gp.Dataset.make(tr.X, tr.y)
        models.append(gp.fit(data, seed=tr.cfg.seed))
    return models


def sample_quality_one(
    model: GpModel, problem: benchmarks.Problem, policy: str,
    M: int, n_draws: int, seed,
    mask_variant: MaskVariant = MaskVariant(),
) -> tuple[np.ndarray, np.ndarray]:
    """TS-max values and true objective at the argmax over repeated draws.

    One candidate set is generated per call (for gradient-guided policies this
    includes one gradient draw and its cone); the posterior is then drawn
    `n_draws` times on that set with a single covariance factorization.
    """
    cfg = AcquisitionConfig(M=M, policy=policy, mask_variant=mask_variant)
    ss = np.random.SeedSequence(seed)
    s_build, s_draw = ss.spawn(2)
    cs, gs = acq._member_candidates(model, cfg, None, s_build)
    mean, cov = gp.candidate_posterior(model, cs.points, gs)
    # destructive Cholesky: cov is M x M and memory is the binding constraint
    cov[np.diag_indices_from(cov)] += 1e-8
    L = _cholesky(cov, lower=True, overwrite_a=True, check_finite=False)
    del cov
    Z = np.random.default_rng(s_draw).standard_normal((M, n_draws))
    draws = mean[:, None] + L @ Z                      # (M, n_draws)
    idx = np.argmax(draws, axis=0)
    ts_max = draws[idx, np.arange(n_draws)]
    obj = problem.evaluate_true(cs.points[idx])
    return ts_max, obj


def experiment_sample_quality(
    models: list[GpModel], problem: benchmarks.Problem,
    policies: Iterable[str], M: int = 10_000, n_draws: int = 100,
    base_seed: int = 0, n_sets: int = 1,
) -> dict[str, dict[str, np.ndarray]]:
    """Per-policy TS-max and objective-at-argmax distributions, matched seeds.

    The n_draws per model are spread over n_sets independently generated
    candidate sets (fresh gradient draw and cone per set for the
    gradient-guided policies); a single set amortizes the covariance
    factorization but makes the per-model medians hostage to one region
    realization. Returns {policy: {"ts_max": (n_models, n_draws),
    "objective": same}}.
    """
    per_set = max(1, n_draws // n_sets)
    out: dict[str, dict[str, np.ndarray]] = {}
    for policy in policies:
        ts_all, obj_all = [], []
        for i, model in enumerate(models):
            ts_i, obj_i = [], []
            for s in range(n_sets):
                ts, obj = sample_quality_one(
                    model, problem, policy, M, per_set,
                    seed=(base_seed, i, s))
                ts_i.append(ts)
                obj_i.append(obj)
            ts_all.append(np.concatenate(ts_i))
            obj_all.append(np.concatenate(obj_i))
        out[policy] = {"ts_max": np.asarray(ts_all), "objective": np.asarray(obj_all)}
    return out


# ---------------------------------------------------------------------------
# Space-filling versus dimension
# ---------------------------------------------------------------------------

def budget_grid(max_budget: int, per_decade: int = 5) -> np.ndarray:
    """Log-spaced evaluation budgets from 10 up to max_budget."""
    lo = min(1.0, np.log10(max_budget))
    grid = np.unique(np.round(
        10 ** np.linspace(lo, np.log10(max_budget), num=max(
            2, int(per_decade * (np.log10(max_budget) - lo)) + 1))
    ).astype(int))
    return grid[grid >= 1]


def experiment_curse_of_dim(
    problem: benchmarks.Problem, max_budget: int,
    policies: Iterable[str] = ("sobol", "uniform"), seed: int = 0,
    grid: Optional[np.ndarray] = None, chunk: int = 100_000,
) -> dict[str, np.ndarray]:
    """Best noiseless value over the first N policy points, N on a log grid.

    Returns {"grid": budgets, policy: best-found values}.
    """
    if grid is None:
        grid = budget_grid(max_budget)
    grid = np.asarray(grid, dtype=int)
    out: dict[str, np.ndarray] = {"grid": grid}
    for policy in policies:
        rng = np.random.default_rng((seed, zlib.crc32(policy.encode())))
        eng = None
        if policy == "sobol":
            from scipy.stats import qmc
            import warnings as _w
            eng = qmc.Sobol(problem.d, scramble=True, seed=rng)
        best = -np.inf
        done = 0
        curve = np.empty(grid.shape[0])
        gi = 0
        while done < grid[-1]:
            m = min(chunk, grid[-1] - done)
            if eng is not None:
                import warnings as _w
                with _w.catch_warnings():
                    _w.simplefilter("ignore", UserWarning)
                    pts = eng.random(m)
            else:
                pts = rng.random((m, problem.d))
            vals = problem.evaluate_true(pts)
            running = np.maximum.accumulate(vals)
            running = np.maximum(running, best)
            while gi < grid.shape[0] and grid[gi] <= done + m:
                curve[gi] = running[grid[gi] - done - 1]
                gi += 1
            best = running[-1]
            done += m
        out[policy] = curve
    return out


# ---------------------------------------------------------------------------
# Locality metrics
# ---------------------------------------------------------------------------

def metric_locality(trace: RunTrace) -> tuple[float, float]:
    """Mean consecutive-query distance and greedy nearest-neighbour tour length."""
    X = trace.X
    if X.shape[0] < 2:
        raise ValueError("locality metrics need at least two queries")
    steps = np.linalg.norm(np.diff(X, axis=0), axis=1)
    mean_step = float(steps.mean())
    return mean_step, greedy_tour_length(X)


def greedy_tour_length(X: np.ndarray) -> float:
    """Nearest-neighbour tour over all points, starting from the first."""
    X = np.atleast_2d(X)
    n = X.shape[0]
    visited = np.zeros(n, dtype=bool)
    visited[0] = True
    cur = 0
    total = 0.0
    for _ in range(n - 1):
        dist = np.linalg.norm(X - X[cur], axis=1)
        dist[visited] = np.inf
        nxt = int(np.argmin(dist))
        total += float(dist[nxt])
        visited[nxt] = True
        cur = nxt
    return total


# ---------------------------------------------------------------------------
# Gradient-uncertainty metrics
# ---------------------------------------------------------------------------

def minority_sign_fraction(
    model: GpModel, x0: np.ndarray, n_draws: int = 100, seed=0,
) -> float:
    """Average over dimensions of the frequency of the less-common gradient sign."""
    mean, cov = gp.gradient_posterior(model, x0)
    L = gp.chol_with_jitter(cov)
    Z = np.random.default_rng(seed).standard_normal((model.d, n_draws))
    G = mean[:, None] + L @ Z
    pos = np.mean(G > 0, axis=1)
    return float(np.mean(np.minimum(pos, 1.0 - pos)))


def metric_gradient_uncertainty(
    cfg: RunConfig, checkpoints: Iterable[int] = GRAD_UNC_CHECKPOINTS,
    n_draws: int = 100,
) -> dict[int, dict[str, float]]:
    """Run cfg while measuring trace(cov_g) and the minority-sign fraction at
    evaluation-count checkpoints. Returns {t: {"cov_trace": .., "minority": ..}}."""
    checkpoints = sorted(t for t in checkpoints if t <= cfg.n_init + cfg.iterations)
    results: dict[int, dict[str, float]] = {}
    pending = list(checkpoints)

    def on_model(t: int, model: GpModel, x0: np.ndarray):
        while pending and t >= pending[0]:
            cp = pending.pop(0)
            _, cov = gp.gradient_posterior(model, x0)
            results[cp] = {
                "cov_trace": float(np.trace(cov)),
                "minority": minority_sign_fraction(
                    model, x0, n_draws=n_draws, seed=(cfg.seed, cp)),
            }

    run(cfg, on_model=on_model)
    return results


# ---------------------------------------------------------------------------
# Ablation driver
# ---------------------------------------------------------------------------

def ablation_driver(
    base: RunConfig,
    mask_variants: Iterable[MaskVariant] = (MaskVariant(),),
    policies: Iterable[str] = ("grad-raasp",),
    repeats: int = 1, base_seed: int = 0, n_jobs: int = 1,
) -> dict[tuple[str, str, float], list[RunTrace]]:
    """Cross-product of (policy, mask variant) runs under matched seeds."""
    out: dict[tuple[str, str, float], list[RunTrace]] = {}
    for policy, mv in itertools.product(policies, mask_variants):
        cfg = replace(base, acquisition=replace(
            base.acquisition, policy=policy, mask_variant=mv))
        out[(policy, mv.kind, mv.c)] = run_many(
            cfg, repeats, base_seed=base_seed, n_jobs=n_jobs)
    return out
