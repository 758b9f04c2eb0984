"""Static figures written next to the JSON/CSV output.

Figures are decoration: nothing in the numerical pipeline reads them back.
SVG output is made reproducible by pinning the hash salt and dropping the
date stamp.
"""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .geometry import HullPolygon, convex_hull  # noqa: E402

STYLE = {
    "font.size": 10,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "svg.hashsalt": "gausslucas",
    "svg.fonttype": "none",
}


def _save(fig, path: str | Path):
    path = Path(path)
    fmt = path.suffix.lstrip(".") or "svg"
    meta = {"Date": None} if fmt == "svg" else None
    fig.savefig(path, format=fmt, metadata=meta, bbox_inches="tight")
    plt.close(fig)
    return path


def _draw_hull(ax, hull: HullPolygon, **kw):
    v = list(hull.vertices)
    if not v:
        return
    v = v + v[:1]
    ax.plot([p.real for p in v], [p.imag for p in v], **kw)


def plot_zero_sets(
    roots: Sequence[complex],
    critical_points: Sequence[complex] = (),
    hull: HullPolygon | None = None,
    path: str | Path = "zeros.svg",
    title: str = "",
):
    """Zeros of P as circles, zeros of P' as crosses, hull of Z(P) as a polygon."""
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(5, 5))
        hull = hull if hull is not None else convex_hull(roots)
        _draw_hull(ax, hull, color="0.6", lw=1.0, label="hull of Z(P)")
        ax.scatter([z.real for z in roots], [z.imag for z in roots], s=40,
                   facecolors="none", edgecolors="C0", label="Z(P)")
        if len(critical_points):
            ax.scatter([z.real for z in critical_points], [z.imag for z in critical_points],
                       marker="x", color="C3", label="Z(P')")
        ax.set_aspect("equal", adjustable="datalim")
        ax.set_xlabel("Re z")
        ax.set_ylabel("Im z")
        if title:
            ax.set_title(title)
        ax.legend(loc="best", frameon=False)
        return _save(fig, path)


def plot_witness(estimate, derivative_zeros: Sequence[complex], path: str | Path):
    """Witness configuration for d(n,k) with the zeros of its k-th derivative."""
    title = f"d({estimate.n},{estimate.k}) >= {estimate.best_ratio:.6f}"
    return plot_zero_sets(estimate.witness_roots, derivative_zeros, path=path, title=title)


def plot_dnk_table(rows, path: str | Path):
    """best_ratio against n, one line per k; exact cells are filled markers."""
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(6, 4))
        ks = sorted({r.k for r in rows})
        for k in ks:
            sub = [r for r in rows if r.k == k]
            ax.plot([r.n for r in sub], [r.best_ratio for r in sub], color=f"C{k % 10}", lw=1, label=f"k={k}")
            for r in sub:
                filled = r.exactness == "EXACT"
                ax.scatter([r.n], [r.best_ratio], color=f"C{k % 10}",
                           facecolors=f"C{k % 10}" if filled else "none", zorder=3)
        ax.axhline(1.0, color="0.7", lw=0.8, ls="--")
        ax.set_xlabel("n")
        ax.set_ylabel("best ratio (lower bound for d(n,k))")
        ax.set_ylim(0, 1.05)
        ax.legend(frameon=False, fontsize=8, ncol=2)
        return _save(fig, path)
