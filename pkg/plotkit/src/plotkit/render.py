"""Figure renderers for the macromech sweep tables.

Three renderer families (lines, bars, heatmap) behind five figure kinds:
fig1b, fig2, fig3d, weights, wigner. Output is deterministic for fixed
inputs and style: the Agg backend, a pinned dpi, and stripped PNG metadata.
"""

from __future__ import annotations

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .io import SchemaError, read_table, validate
from .style import load_style

FIGURE_KINDS = ("fig1b", "fig2", "fig3d", "weights", "wigner")


def render(kind: str, in_path, out_path, style_path: str | None = None) -> Path:
    """Render one figure kind from a table file to an image file."""
    if kind not in FIGURE_KINDS:
        raise ValueError(f"unknown figure kind {kind!r}; choose from {FIGURE_KINDS}")
    style = load_style(style_path)
    columns = read_table(in_path)
    validate(columns, kind, in_path)
    fig = _RENDERERS[kind](columns, style)
    out_path = Path(out_path)
    fig.savefig(
        out_path,
        dpi=style["dpi"],
        bbox_inches="tight",
        metadata=_strip_metadata(out_path.suffix.lower()),
    )
    plt.close(fig)
    return out_path


def _strip_metadata(suffix: str):
    if suffix == ".png":
        return {"Software": None}
    if suffix == ".svg":
        return {"Date": None, "Creator": None}
    return None


def _new_fig(style):
    fig, ax = plt.subplots(figsize=style["figsize"], dpi=style["dpi"])
    ax.tick_params(labelsize=style["font_size"])
    ax.grid(True, alpha=style["grid_alpha"])
    return fig, ax


def _render_fig1b(columns, style):
    ks = np.asarray(columns["k"], dtype=float)
    ivals = np.asarray(columns["I"], dtype=float)
    mvals = np.asarray(columns["M"], dtype=float)
    fig, ax = _new_fig(style)
    colors = style["line_colors"]
    ax.plot(ks, ivals, color=colors[0], lw=style["line_width"], label="I")
    ax.plot(ks, mvals, color=colors[1], lw=style["line_width"], ls="--", label="M")
    ax.set_xlabel("k", fontsize=style["font_size"])
    ax.set_ylabel("I, M", fontsize=style["font_size"])
    ax.legend(fontsize=style["font_size"], frameon=False)
    lo, hi = style["inset_range"]
    if style["inset"] and ks.max() > hi:
        sub = fig.add_axes([0.24, 0.55, 0.3, 0.3])
        mask = (ks >= lo) & (ks <= hi)
        sub.plot(ks[mask], ivals[mask], color=colors[0], lw=1.0)
        sub.plot(ks[mask], mvals[mask], color=colors[1], lw=1.0, ls="--")
        sub.tick_params(labelsize=style["font_size"] - 2)
        sub.set_xlim(lo, hi)
    return fig


def _render_fig2(columns, style):
    ks = np.asarray(columns["k"], dtype=float)
    nbars = np.asarray(columns["nbar"], dtype=float)
    ivals = np.asarray(columns["I"], dtype=float)
    fig, ax = _new_fig(style)
    colors = style["line_colors"]
    if np.unique(ks).size > 1:
        # one curve per occupation against the coupling
        for idx, nb in enumerate(sorted(set(nbars.tolist()))):
            mask = nbars == nb
            ax.plot(
                ks[mask], ivals[mask], color=colors[idx % len(colors)],
                lw=style["line_width"], label=f"nbar = {nb:g}",
            )
        ax.set_xlabel("k", fontsize=style["font_size"])
        ax.legend(fontsize=style["font_size"] - 1, frameon=False)
    else:
        # occupation scan at fixed coupling, log-x
        order = np.argsort(nbars)
        ax.plot(nbars[order], ivals[order], color=colors[0], lw=style["line_width"])
        ax.set_xscale("log")
        ax.set_xlabel("nbar", fontsize=style["font_size"])
    ax.set_ylabel("I", fontsize=style["font_size"])
    return fig


def _render_fig3d(columns, style):
    rs = np.asarray(columns["r"], dtype=float)
    ivals = np.asarray(columns["I"], dtype=float)
    fig, ax = _new_fig(style)
    ax.plot(rs, ivals, color=style["line_colors"][0], lw=style["line_width"], label="I = M")
    ax.set_xlabel("squeeze degree", fontsize=style["font_size"])
    ax.set_ylabel("I = M", fontsize=style["font_size"])
    ax.legend(fontsize=style["font_size"], frameon=False)
    return fig


def _render_weights(columns, style):
    ns = np.asarray(columns["n"], dtype=float)
    ws = np.asarray(columns["weight_abs"], dtype=float)
    fig, ax = _new_fig(style)
    ax.bar(ns, ws, color=style["bar_color"], width=0.72)
    ax.set_xlabel("photon number", fontsize=style["font_size"])
    ax.set_ylabel("|weight|", fontsize=style["font_size"])
    return fig


def _render_wigner(columns, style):
    xs = np.asarray(columns["x"], dtype=float)
    ps = np.asarray(columns["p"], dtype=float)
    ws = np.asarray(columns["W"], dtype=float)
    ux = np.unique(xs)
    up = np.unique(ps)
    if ux.size * up.size != ws.size:
        raise SchemaError(
            f"wigner table is not a full grid: {ux.size} x {up.size} != {ws.size} rows"
        )
    grid = np.full((up.size, ux.size), np.nan)
    ix = np.searchsorted(ux, xs)
    ip = np.searchsorted(up, ps)
    grid[ip, ix] = ws
    vmax = float(np.abs(grid).max()) or 1.0
    fig, ax = plt.subplots(figsize=style["figsize"], dpi=style["dpi"])
    mesh = ax.pcolormesh(
        ux, up, grid, cmap=style["cmap"], vmin=-vmax, vmax=vmax, shading="nearest"
    )
    fig.colorbar(mesh, ax=ax)
    ax.set_xlabel("x", fontsize=style["font_size"])
    ax.set_ylabel("p", fontsize=style["font_size"])
    ax.set_aspect("equal")
    return fig


_RENDERERS = {
    "fig1b": _render_fig1b,
    "fig2": _render_fig2,
    "fig3d": _render_fig3d,
    "weights": _render_weights,
    "wigner": _render_wigner,
}
