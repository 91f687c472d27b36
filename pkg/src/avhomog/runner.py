"""Experiment driver: run both estimator arms across sizes and write outputs."""

from __future__ import annotations

import time
from pathlib import Path

import numpy as np

from .montecarlo import RunSpec, compare, run_av, run_mc
from .report import (
    emit_plot_data,
    render_figures,
    report_rows,
    write_manifest,
    write_results_csv,
)


def run_spec_for(config, two_n):
    return RunSpec(
        dist_a=config.dist_a,
        dist_c=config.dist_c,
        p=config.p,
        xi=tuple(config.xi),
        half_width=two_n // 2,
        mesh_h=config.mesh_h,
        newton_tol=config.newton_tol,
        seed=config.seed,
    )


def run_experiment(config, threads=1, emit_plots=False):
    """Run the configured experiment; returns the per-size ComparisonReports.

    Writes results.csv, manifest.json, and per-quantity plot-data series into
    config.output_dir (plus rendered PNG figures when emit_plots is set).
    """
    outdir = Path(config.output_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    reports = {}
    size_records = []
    for two_n in config.sizes:
        run = run_spec_for(config, two_n)
        t0 = time.perf_counter()
        mc_samples, mc_iters = run_mc(run, config.samples_2m, n_jobs=threads)
        t1 = time.perf_counter()
        av_samples, av_iters = run_av(run, config.samples_2m // 2, n_jobs=threads)
        t2 = time.perf_counter()
        reports[two_n] = compare(mc_samples, av_samples)
        iters = np.concatenate([mc_iters, av_iters])
        size_records.append(
            {
                "two_n": two_n,
                "wall_time_mc_s": t1 - t0,
                "wall_time_av_s": t2 - t1,
                "corrector_solves": int(mc_iters.size + av_iters.size),
                "newton_iterations": {
                    "median": float(np.median(iters)),
                    "mean": float(np.mean(iters)),
                    "max": int(np.max(iters)),
                    "per_solve": [int(i) for i in iters],
                },
            }
        )
    write_results_csv(outdir / "results.csv", report_rows(reports))
    write_manifest(outdir / "manifest.json", config, size_records, threads)
    emit_plot_data(reports, outdir / "plotdata")
    if emit_plots:
        render_figures(reports, outdir / "figures")
    return reports
