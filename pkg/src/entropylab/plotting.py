"""CSV emission and matplotlib figures for suite reports and studies.

Every delimited output has a figure companion rendered next to it (same
stem, .png), so report paths double as plot paths.
"""
from __future__ import annotations

import csv
from pathlib import Path

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402


def write_rows_csv(path, fieldnames, rows) -> None:
    """Delimited series output; header-only when rows is empty."""
    with Path(path).open("w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=fieldnames)
        writer.writeheader()
        for row in rows:
            writer.writerow(row)


def emit_plot_data(records, path) -> None:
    """(check_id, p, min_margin) series from verification records."""
    rows = [{"check_id": rec.check_id,
             "p": rec.instance.get("p", ""),
             "min_margin": rec.min_margin(),
             "passed": int(rec.passed)} for rec in records]
    write_rows_csv(path, ["check_id", "p", "min_margin", "passed"], rows)


def render_report_figure(report, path) -> None:
    """Bar chart of the worst margin per check in a suite report."""
    names = sorted(report.checks)
    margins = [report.checks[n].min_margin for n in names]
    fig, ax = plt.subplots(figsize=(9, 0.5 * max(len(names), 4) + 1.5))
    colors = ["tab:green" if report.checks[n].failures == 0 else "tab:red"
              for n in names]
    ax.barh(names, margins, color=colors)
    ax.set_xscale("symlog", linthresh=1e-12)
    ax.axvline(0.0, color="k", lw=0.8)
    ax.set_xlabel("worst margin (negative = violation)")
    ax.set_title(f"suite '{report.config.suite}' "
                 f"({report.failures} failures)")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_convergence_figure(rows, path) -> None:
    """Log-log error-vs-nodes plot for the two quadrature routes."""
    nodes = [r["nodes"] for r in rows]
    fig, ax = plt.subplots(figsize=(6, 4.5))
    ax.loglog(nodes, [max(r["geometric_mean_error"], 1e-17) for r in rows],
              "o-", label="geometric mean (Gauss-Jacobi)")
    ax.loglog(nodes, [max(r["relative_entropy_error"], 1e-17) for r in rows],
              "s-", label="relative entropy (Gauss-Legendre)")
    ax.set_xlabel("quadrature nodes")
    ax.set_ylabel("relative error vs closed form")
    ax.legend()
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_sandwich_figure(rows, path) -> None:
    """Lower/value/upper curves of the parametric entropy sandwich."""
    p = [r["p"] for r in rows]
    fig, ax = plt.subplots(figsize=(6, 4.5))
    ax.plot(p, [r["lower"] for r in rows], "v--", label="lower bound")
    ax.plot(p, [r["value"] for r in rows], "o-", label="parametric entropy")
    ax.plot(p, [r["upper"] for r in rows], "^--", label="upper bound")
    ax.set_xlabel("p")
    ax.legend()
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_conjugate_figure(f, fstar, path) -> None:
    """Primal functional and its conjugate, finite parts only."""
    fig, axes = plt.subplots(1, 2, figsize=(9, 4))
    for ax, fn, title in ((axes[0], f, "f"), (axes[1], fstar, "f*")):
        mask = np.isfinite(fn.values)
        ax.plot(fn.x[mask], fn.values[mask], lw=1.2)
        ax.set_title(title)
        ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
