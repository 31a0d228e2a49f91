"""Figure rendering for comparison reports: one ROC plot per dimension.

Uses the non-interactive matplotlib backend and writes SVG with stable
element ids and no date metadata, so repeated runs produce identical files.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "beliefrules"

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .validation import ComparisonReport


def save_roc_figures(report: ComparisonReport, outdir: str | Path) -> list[Path]:
    """Write ``roc_<dimension>.svg`` for every dimension; returns the paths."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    paths = []
    for d in report.dimensions:
        fig, ax = plt.subplots(figsize=(4.5, 4.5))
        ax.plot([0, 1], [0, 1], linestyle="--", color="0.7", linewidth=1)
        ex, ey = zip(*d.engine_curve.points)
        ax.plot(ex, ey, color="tab:blue", label=f"engine (AUC {d.engine_auc:.3f})")
        lx, ly = zip(*d.lrf_curve.points)
        ax.plot(lx, ly, color="tab:orange", label=f"mean baseline (AUC {d.lrf_auc:.3f})")
        ax.set_xlim(-0.02, 1.02)
        ax.set_ylim(-0.02, 1.02)
        ax.set_xlabel("false positive rate")
        ax.set_ylabel("true positive rate")
        ax.set_title(d.dimension)
        ax.legend(loc="lower right", fontsize="small")
        fig.tight_layout()
        path = outdir / f"roc_{d.dimension}.svg"
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)
        paths.append(path)
    return paths
