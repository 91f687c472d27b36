"""CSV/JSON serialization and figure rendering for experiment results."""

from __future__ import annotations

import csv
import json
import platform
import time
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np
import scipy

from .montecarlo import QUANTITY_KEYS

CSV_HEADER = [
    "quantity",
    "two_n",
    "mc_mean",
    "mc_var",
    "mc_ci",
    "av_mean",
    "av_var",
    "av_ci",
    "v_mc",
    "v_av",
    "ratio",
]


def report_rows(reports_by_size):
    """Flatten ComparisonReports into CSV rows, sizes outer, quantities inner."""
    rows = []
    for two_n in sorted(reports_by_size):
        rep = reports_by_size[two_n]
        for key in QUANTITY_KEYS:
            q = rep.quantities[key]
            rows.append(
                [
                    key,
                    two_n,
                    q.mc.mean,
                    q.mc.variance,
                    q.mc.ci_halfwidth,
                    q.av.mean,
                    q.av.variance,
                    q.av.ci_halfwidth,
                    q.v_mc,
                    q.v_av,
                    q.ratio,
                ]
            )
    return rows


def _fmt(x):
    return repr(x) if isinstance(x, float) else str(x)


def write_results_csv(path, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_HEADER)
        for row in rows:
            writer.writerow([_fmt(x) for x in row])


def emit_plot_data(reports_by_size, outdir):
    """Per-quantity series files for external plotting.

    One variance file (two_n, v_mc, v_av, flagged) and one mean file
    (two_n, mc_mean, mc_ci, av_mean, av_ci) per quantity; rows with a
    nonpositive variance are flagged so log-log consumers can skip them.
    """
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    written = []
    for key in QUANTITY_KEYS:
        var_path = outdir / f"{key}_variance.csv"
        with open(var_path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["two_n", "v_mc", "v_av", "flagged"])
            for two_n in sorted(reports_by_size):
                q = reports_by_size[two_n].quantities[key]
                flagged = int(not (q.v_mc > 0.0 and q.v_av > 0.0))
                writer.writerow([two_n, _fmt(q.v_mc), _fmt(q.v_av), flagged])
        mean_path = outdir / f"{key}_mean.csv"
        with open(mean_path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["two_n", "mc_mean", "mc_ci", "av_mean", "av_ci"])
            for two_n in sorted(reports_by_size):
                q = reports_by_size[two_n].quantities[key]
                writer.writerow(
                    [
                        two_n,
                        _fmt(q.mc.mean),
                        _fmt(q.mc.ci_halfwidth),
                        _fmt(q.av.mean),
                        _fmt(q.av.ci_halfwidth),
                    ]
                )
        written += [var_path, mean_path]
    return written


def render_figures(reports_by_size, outdir):
    """Variance (log-log) and mean +/- CI figures, one pair per quantity."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    sizes = sorted(reports_by_size)
    written = []
    for key in QUANTITY_KEYS:
        v_mc = [reports_by_size[s].quantities[key].v_mc for s in sizes]
        v_av = [reports_by_size[s].quantities[key].v_av for s in sizes]
        fig, ax = plt.subplots(figsize=(5, 4))
        if all(v > 0 for v in v_mc + v_av):
            ax.loglog(sizes, v_mc, "o-", color="tab:blue", label="MC")
            ax.loglog(sizes, v_av, "s-", color="tab:red", label="AV")
        else:
            ax.plot(sizes, v_mc, "o-", color="tab:blue", label="MC")
            ax.plot(sizes, v_av, "s-", color="tab:red", label="AV")
        ax.set_xlabel("2N")
        ax.set_ylabel("variance")
        ax.set_title(key)
        ax.legend()
        fig.tight_layout()
        var_png = outdir / f"{key}_variance.png"
        fig.savefig(var_png, dpi=120)
        plt.close(fig)

        mc_mean = [reports_by_size[s].quantities[key].mc.mean for s in sizes]
        mc_ci = [reports_by_size[s].quantities[key].mc.ci_halfwidth for s in sizes]
        av_mean = [reports_by_size[s].quantities[key].av.mean for s in sizes]
        av_ci = [reports_by_size[s].quantities[key].av.ci_halfwidth for s in sizes]
        fig, ax = plt.subplots(figsize=(5, 4))
        ax.errorbar(sizes, mc_mean, yerr=mc_ci, fmt="o-", color="tab:blue", label="MC")
        ax.errorbar(sizes, av_mean, yerr=av_ci, fmt="s-", color="tab:red", label="AV")
        ax.set_xlabel("2N")
        ax.set_ylabel("estimate")
        ax.set_title(key)
        ax.legend()
        fig.tight_layout()
        mean_png = outdir / f"{key}_mean.png"
        fig.savefig(mean_png, dpi=120)
        plt.close(fig)
        written += [var_png, mean_png]
    return written


def write_manifest(path, config, size_records, threads):
    manifest = {
        "config": config.to_dict(),
        "seed": config.seed,
        "threads": threads,
        "sizes": size_records,
        "versions": {
            "python": platform.python_version(),
            "numpy": np.__version__,
            "scipy": scipy.__version__,
        },
        "floating_point_note": (
            "results are deterministic for a fixed (config, seed) on a given "
            "platform; identical across platforms only with identical IEEE-754 "
            "libm behavior"
        ),
        "written_at_unix": time.time(),
    }
    with open(path, "w") as fh:
        json.dump(manifest, fh, indent=2)
