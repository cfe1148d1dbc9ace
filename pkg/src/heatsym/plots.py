"""Figure rendering for the report paths.

Opt-in from the CLI: each report command can save one PNG next to its
delimited output.  Everything draws through the Agg backend so the
figures render identically headless.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = [
    "counterexample_figure",
    "funk_hecke_figure",
    "symmetry_figure",
    "geometry_figure",
]

_FLOOR = 1e-20  # display floor for log axes; zeros happen legitimately


def _finish(fig, path) -> None:
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def counterexample_figure(records, path) -> None:
    """Level radius against its bounds, and the constancy margins."""
    t = [rec.t for rec in records]
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9.0, 3.6))

    ax1.loglog(t, [rec.r for rec in records], "o-", label="level radius")
    ax1.loglog(t, [rec.lower for rec in records], "--", label="lower bound")
    ax1.loglog(t, [rec.upper for rec in records], "--", label="upper bound")
    ax1.set_xlabel("t")
    ax1.set_ylabel("radius")
    ax1.legend(fontsize=8)

    spread = [max(rec.sphere_spread, _FLOOR) for rec in records]
    gap = [max(rec.nonradial_gap, _FLOOR) for rec in records]
    ax2.loglog(t, spread, "o-", label="on-sphere spread")
    ax2.loglog(t, gap, "s-", label="off-sphere gap")
    ax2.set_xlabel("t")
    ax2.set_ylabel("max - min of u")
    ax2.legend(fontsize=8)
    _finish(fig, path)


def funk_hecke_figure(rows, path) -> None:
    """Eigenvalue decay in the degree, one trace per kernel parameter."""
    fig, ax = plt.subplots(figsize=(5.2, 3.6))
    by_L: dict[float, list[tuple[int, float]]] = {}
    for k, _n, L, lam_closed, *_rest in rows:
        by_L.setdefault(L, []).append((k, abs(lam_closed)))
    for L, pairs in sorted(by_L.items()):
        pairs.sort()
        ax.semilogy([p[0] for p in pairs],
                    [max(p[1], _FLOOR) for p in pairs],
                    "o-", label=f"L={L:g}")
    ax.set_xlabel("degree k")
    ax.set_ylabel("|eigenvalue|")
    ax.legend(fontsize=8)
    _finish(fig, path)


def symmetry_figure(rows, path) -> None:
    """Each check's magnitude against its reference level."""
    fig, ax = plt.subplots(figsize=(7.0, 3.8))
    idx = np.arange(len(rows))
    values = [max(abs(float(row[3])), _FLOOR) for row in rows]
    refs = [max(abs(float(row[4])), _FLOOR) for row in rows]
    ax.semilogy(idx, values, "o", label="measured")
    ax.semilogy(idx, refs, "_", markersize=12, label="reference")
    ax.set_xticks(idx)
    ax.set_xticklabels([f"{row[1]}\n{row[2]}" for row in rows],
                       fontsize=6, rotation=45, ha="right")
    ax.set_ylabel("magnitude")
    ax.legend(fontsize=8)
    _finish(fig, path)


def geometry_figure(boundary, path) -> None:
    """Per-sample misalignment between position and outward normal."""
    mis = []
    for sample in boundary:
        p = sample.point
        nu = sample.normal
        tangential = p - float(np.dot(p, nu)) * nu
        mis.append(float(np.linalg.norm(tangential) / np.linalg.norm(p)))
    fig, ax = plt.subplots(figsize=(5.2, 3.6))
    ax.semilogy(np.arange(len(mis)),
                np.maximum(mis, _FLOOR), ".", markersize=4)
    ax.set_xlabel("boundary sample")
    ax.set_ylabel("tangential fraction")
    _finish(fig, path)
