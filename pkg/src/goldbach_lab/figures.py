"""File-rendered figures for reports: CDF overlays, trends, scatter.

Everything renders through the Agg backend straight to disk; no figure
ever needs a display.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .limits import IdentityResidualReport, RatioRecord
from .partitions import PartitionTable
from .stats import ConvergenceReport, LimitCdf, StepCdf

_DPI = 150


def render_cdf_overlay(step: StepCdf, law: LimitCdf, title: str, path: str) -> None:
    """Step CDF against its continuous reference law."""
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    ax.plot(step.xs, step.cdf, drawstyle="steps-post", lw=1.0, label="exact CDF")
    dense = np.linspace(min(0.0, float(step.xs[0])), max(1.0, float(step.xs[-1])), 512)
    ax.plot(dense, law.evaluate(dense), lw=1.2, ls="--", label=law.value)
    ax.set_xlabel("x")
    ax.set_ylabel("CDF")
    ax.set_title(title)
    ax.legend(loc="lower right")
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)


def render_convergence_trends(report: ConvergenceReport, path: str) -> None:
    """KS distances and moment gaps across n, log-log."""
    ns = [r.n for r in report.rows]
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9.6, 4.2))
    ax1.loglog(ns, [r.ks_zn_vs_uniform for r in report.rows], "o-", label="KS: Zn vs uniform")
    ax1.loglog(ns, [r.ks_gn_vs_maxunif for r in report.rows], "s-",
               label="KS: Gn/n vs max-of-two")
    ax1.set_xlabel("n")
    ax1.set_ylabel("KS distance")
    ax1.legend()
    ax1.grid(True, which="both", alpha=0.3)
    for r_ord, marker in ((1, "o"), (2, "s"), (3, "^")):
        ax2.loglog(ns, [getattr(row, f"moment_gap_r{r_ord}") for row in report.rows],
                   marker + "-", label=f"moment gap r={r_ord}")
    ax2.set_xlabel("n")
    ax2.set_ylabel("|moment - limit|")
    ax2.legend()
    ax2.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)


def render_ratio_trends(records: list[RatioRecord], path: str) -> None:
    """Measured-over-claimed ratios across n with the target line at 1."""
    ns = [r.n for r in records]
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    ax.semilogx(ns, [r.total_ratio for r in records], "o-", label="total / (2n²/ln²n)")
    ax.semilogx(ns, [r.mean_ratio for r in records], "s-", label="mean / (2n/ln²n)")
    ax.semilogx(ns, [r.e_zn for r in records], "^-", label="E(Zn)")
    ax.axhline(1.0, color="k", lw=0.8, ls=":")
    ax.axhline(0.5, color="gray", lw=0.8, ls=":")
    ax.set_xlabel("n")
    ax.set_ylabel("ratio")
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)


def render_partition_scatter(table: PartitionTable, path: str, max_points: int = 20000) -> None:
    """The partition-count comet: Q(2k) against 2k.

    Thinned to at most ``max_points`` evenly spaced keys so the file stays
    a sane size at large n.
    """
    keys = np.arange(3, table.n + 1, dtype=np.int64)
    stride = max(1, len(keys) // max_points)
    keys = keys[::stride]
    q = table.q[::stride]
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    ax.scatter(2 * keys, q, s=2, alpha=0.4, linewidths=0)
    ax.set_xlabel("2k")
    ax.set_ylabel("Q(2k)")
    ax.set_title(f"partition counts up to n={table.n}")
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)


def render_identity_residuals(report: IdentityResidualReport, path: str) -> None:
    """Relative identity residuals over the transform grid, semilog-y."""
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for identity in sorted({r.identity for r in report.rows}):
        rows = [r for r in report.rows if r.identity == identity]
        lams = [r.lam for r in rows]
        rels = [max(r.rel_residual, 1e-18) for r in rows]
        ax.semilogy(lams, rels, "o-", label=identity)
    ax.set_xlabel("transform argument")
    ax.set_ylabel("relative residual")
    ax.legend()
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
