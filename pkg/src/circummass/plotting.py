"""Figures written next to CLI reports.

Uses ``matplotlib.figure.Figure`` directly so nothing touches pyplot state
or needs a display.
"""
from __future__ import annotations

import math

import numpy as np
from matplotlib.figure import Figure

from .chain import Chain

FIGSIZE = (6.0, 4.0)


def residual_histogram(residuals, tolerance: float, path, title: str = "") -> None:
    """log10 histogram of residuals with the tolerance marked."""
    r = np.asarray(residuals, dtype=float)
    finite = r[np.isfinite(r)]
    floor = 1e-20
    logs = np.log10(np.maximum(finite, floor))
    fig = Figure(figsize=FIGSIZE)
    ax = fig.add_subplot(1, 1, 1)
    if logs.size:
        ax.hist(logs, bins=min(50, max(10, int(math.sqrt(logs.size)))), color="0.35")
    ax.axvline(math.log10(tolerance), color="firebrick", linestyle="--", label=f"tolerance {tolerance:g}")
    ax.set_xlabel("log10(normalized residual)")
    ax.set_ylabel("trials")
    if title:
        ax.set_title(title)
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=120)


def planar_chain(c: Chain, points: dict[str, np.ndarray], path, title: str = "") -> None:
    """Draw a planar 1- or 2-chain and mark the given named points."""
    if c.ambient_dim != 2:
        raise ValueError("only planar chains can be drawn")
    fig = Figure(figsize=(5.0, 5.0))
    ax = fig.add_subplot(1, 1, 1)
    for idx, coef in c.terms:
        v = c.simplex_vertices(idx)
        if len(idx) == 3:
            tri = np.vstack([v, v[:1]])
            ax.fill(tri[:, 0], tri[:, 1], color="tab:blue" if coef > 0 else "tab:orange", alpha=0.15)
            ax.plot(tri[:, 0], tri[:, 1], color="0.5", lw=0.6)
        elif len(idx) == 2:
            ax.plot(v[:, 0], v[:, 1], color="0.2", lw=1.2)
    markers = iter("o^sDvP")
    for name, p in points.items():
        if p is not None:
            ax.plot(p[0], p[1], next(markers), label=name, ms=7)
    ax.set_aspect("equal")
    if points:
        ax.legend(frameon=False, loc="best")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
