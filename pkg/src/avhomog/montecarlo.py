"""Equal-cost comparison of plain Monte Carlo and antithetic-pair estimators.

The plain arm runs 2M independent realizations; the antithetic arm runs M
pairs (U, 1-U) through identical pipelines, so both arms solve exactly 2M
corrector problems.  The reported variances are V_mc = Var_plain / 2 and
V_av = Var_pairs, whose ratio R measures the cost gain at equal accuracy.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .homogenize import PipelineError, full_pipeline
from .mesh_fem import build_mesh
from .newton import NewtonConfig
from .randomfield import DistributionSpec, antithetic, draw_uniforms, realize_field

QUANTITY_KEYS = (
    "value",
    "grad_1",
    "grad_2",
    "hess_11",
    "hess_12",
    "hess_22",
    "axial_first",
    "axial_second",
)

# The antithetic arm draws from a disjoint index range so the two arms are
# statistically independent experiments at equal cost.
AV_STREAM_OFFSET = 2**40


class RealizationError(RuntimeError):
    """A realization's solve failed; carries the realization index."""

    def __init__(self, index, cause):
        super().__init__(f"realization {index} failed: {cause}")
        self.index = index


@dataclass(frozen=True)
class RunSpec:
    """Everything needed to reproduce one experiment arm."""

    dist_a: DistributionSpec
    dist_c: DistributionSpec
    p: float
    xi: tuple
    half_width: int
    mesh_h: float
    newton_tol: float
    seed: int


def quantities_of(outputs):
    """The eight reported scalars, in QUANTITY_KEYS order."""
    return np.array(
        [
            outputs.value,
            outputs.grad[0],
            outputs.grad[1],
            outputs.hess[0, 0],
            outputs.hess[0, 1],
            outputs.hess[1, 1],
            outputs.axial_first,
            outputs.axial_second,
        ]
    )


_MESH_CACHE = {}


def _cached_mesh(half_width, h):
    key = (half_width, h)
    if key not in _MESH_CACHE:
        _MESH_CACHE[key] = build_mesh(half_width, h)
    return _MESH_CACHE[key]


def _solve_draws(run, draws):
    field = realize_field(run.dist_a, run.dist_c, draws, run.half_width, 2)
    mesh = _cached_mesh(run.half_width, run.mesh_h)
    cfg = NewtonConfig(tol=run.newton_tol)
    outputs, state = full_pipeline(field, run.p, np.asarray(run.xi), mesh, cfg)
    return quantities_of(outputs), state.iterations


def _mc_task(args):
    run, index = args
    draws = draw_uniforms(run.seed, index, run.half_width**2)
    try:
        return _solve_draws(run, draws)
    except PipelineError as exc:
        raise RealizationError(index, exc) from exc


def _av_task(args):
    run, pair_index = args
    draws = draw_uniforms(run.seed, AV_STREAM_OFFSET + pair_index, run.half_width**2)
    try:
        q_plain, it_plain = _solve_draws(run, draws)
        q_anti, it_anti = _solve_draws(run, antithetic(draws))
    except PipelineError as exc:
        raise RealizationError(pair_index, exc) from exc
    return 0.5 * (q_plain + q_anti), (it_plain, it_anti)


def _map_tasks(task, args, n_jobs):
    if n_jobs <= 1:
        return [task(a) for a in args]
    with ProcessPoolExecutor(max_workers=n_jobs) as pool:
        return list(pool.map(task, args, chunksize=4))


def run_mc(run, n, n_jobs=1):
    """2M plain realizations; returns (samples (n, 8), newton iteration counts)."""
    args = [(run, m) for m in range(n)]
    try:
        results = _map_tasks(_mc_task, args, n_jobs)
    except PipelineError as exc:
        raise RealizationError("mc", exc) from exc
    samples = np.array([q for q, _ in results])
    iterations = np.array([it for _, it in results])
    return samples, iterations


def run_av(run, m, n_jobs=1):
    """M antithetic pairs; returns (pair-average samples (m, 8), iteration counts (2m,))."""
    args = [(run, k) for k in range(m)]
    try:
        results = _map_tasks(_av_task, args, n_jobs)
    except PipelineError as exc:
        raise RealizationError("av", exc) from exc
    samples = np.array([q for q, _ in results])
    iterations = np.array([it for _, its in results for it in its])
    return samples, iterations


@dataclass(frozen=True)
class EstimatorStats:
    n_samples: int
    mean: float
    variance: float       # unbiased, divisor n - 1
    ci_halfwidth: float   # 1.96 sqrt(variance / n)

    @staticmethod
    def from_samples(x):
        x = np.asarray(x, dtype=float)
        n = x.size
        if n < 2:
            raise ValueError("need at least 2 samples")
        var = float(np.var(x, ddof=1))
        return EstimatorStats(n, float(np.mean(x)), var, 1.96 * np.sqrt(var / n))


@dataclass(frozen=True)
class QuantityComparison:
    mc: EstimatorStats
    av: EstimatorStats
    v_mc: float           # Var_plain / 2
    v_av: float           # Var_pairs
    ratio: float          # v_mc / v_av
    ratio_ci: tuple       # bootstrap 95% interval, (nan, nan) when degenerate
    degenerate: bool


@dataclass(frozen=True)
class ComparisonReport:
    quantities: dict      # QuantityKey -> QuantityComparison


def _bootstrap_ratio_ci(mc, av, n_resamples, rng):
    n, m = mc.size, av.size
    ratios = np.empty(n_resamples)
    for b in range(n_resamples):
        vm = np.var(mc[rng.integers(0, n, n)], ddof=1) / 2.0
        va = np.var(av[rng.integers(0, m, m)], ddof=1)
        ratios[b] = vm / va if va > 0.0 else np.nan
    ok = ratios[np.isfinite(ratios)]
    if ok.size == 0:
        return (float("nan"), float("nan"))
    return (float(np.percentile(ok, 2.5)), float(np.percentile(ok, 97.5)))


def compare(mc_samples, av_samples, bootstrap_resamples=1000, bootstrap_seed=0):
    """Per-quantity means, variances, confidence intervals, and ratios R."""
    mc_samples = np.asarray(mc_samples, dtype=float)
    av_samples = np.asarray(av_samples, dtype=float)
    if mc_samples.shape[0] < 2 or av_samples.shape[0] < 2:
        raise ValueError("each arm needs at least 2 samples")
    rng = np.random.default_rng(bootstrap_seed)
    quantities = {}
    for q, key in enumerate(QUANTITY_KEYS):
        mc = EstimatorStats.from_samples(mc_samples[:, q])
        av = EstimatorStats.from_samples(av_samples[:, q])
        v_mc = mc.variance / 2.0
        v_av = av.variance
        if v_av > 0.0:
            ratio = v_mc / v_av
            degenerate = False
            ci = _bootstrap_ratio_ci(
                mc_samples[:, q], av_samples[:, q], bootstrap_resamples, rng
            )
        else:
            ratio = float("nan") if v_mc == 0.0 else float("inf")
            degenerate = True
            ci = (float("nan"), float("nan"))
        quantities[key] = QuantityComparison(mc, av, v_mc, v_av, ratio, ci, degenerate)
    return ComparisonReport(quantities)
