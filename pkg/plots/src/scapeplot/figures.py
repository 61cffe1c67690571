"""Figure builders: turn a validated spec into an image file.

Every builder assembles and validates its numbers before the first
matplotlib call, so a schema or data error never leaves a partial image
behind. The numbers that were drawn come back in RenderResult.data so
callers can check the figure against its inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Mapping

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from scapeplot.landscape import field_values
from scapeplot.overlays import iso_ratio, iso_sojourn
from scapeplot.readers import (ReaderError, read_aggregate, read_config,
                               read_connectivity, read_metrics, read_snapshot)
from scapeplot.spec import FigureKind, FigureSpec, SpecError


@dataclass(frozen=True)
class RenderResult:
    """Where the image went plus the exact numbers that were drawn."""

    output: Path
    data: dict[str, Any]


def _check_options(kind: FigureKind, options: Mapping[str, Any],
                   allowed: frozenset[str]) -> None:
    unknown = sorted(set(options) - allowed)
    if unknown:
        raise SpecError(f"figure '{kind.value}' does not accept options: {', '.join(unknown)}")


def _float_list(options: Mapping[str, Any], key: str) -> list[float]:
    raw = options.get(key, [])
    if not isinstance(raw, (list, tuple)):
        raise SpecError(f"option '{key}' must be a list of numbers")
    out = []
    for item in raw:
        if isinstance(item, bool) or not isinstance(item, (int, float)):
            raise SpecError(f"option '{key}' must be a list of numbers")
        out.append(float(item))
    return out


def _float_or_none(options: Mapping[str, Any], key: str) -> float | None:
    value = options.get(key)
    if value is None:
        return None
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SpecError(f"option '{key}' must be a number")
    return float(value)


def _int_option(options: Mapping[str, Any], key: str, default: int) -> int:
    value = options.get(key, default)
    if isinstance(value, bool) or not isinstance(value, int):
        raise SpecError(f"option '{key}' must be an integer")
    return value


def _log_edges(centers: np.ndarray) -> np.ndarray:
    """Cell edges in log10 space around strictly increasing positive centers."""
    lg = np.log10(centers)
    if lg.size == 1:
        return np.array([lg[0] - 0.5, lg[0] + 0.5])
    mid = (lg[1:] + lg[:-1]) / 2.0
    first = lg[0] - (mid[0] - lg[0])
    last = lg[-1] + (lg[-1] - mid[-1])
    return np.concatenate([[first], mid, [last]])


def _save(fig: plt.Figure, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    suffix = path.suffix.lower()
    if suffix == ".svg":
        # fixed hash salt pins the generated element ids
        with plt.rc_context({"svg.hashsalt": "scapeplot"}):
            fig.savefig(path, metadata={"Date": None})
    elif suffix == ".pdf":
        fig.savefig(path, metadata={"CreationDate": None})
    elif suffix == ".png":
        # dropping the Software entry leaves only content-derived bytes
        fig.savefig(path, dpi=150, metadata={"Software": None})
    else:
        fig.savefig(path, dpi=150)


def _phase_heatmap(spec: FigureSpec) -> tuple[plt.Figure, dict[str, Any]]:
    _check_options(spec.kind, spec.options,
                   frozenset({"value", "vmin", "vmax", "iso_ratios", "iso_sojourns", "title"}))
    path = spec.inputs["aggregate"]
    value_col = str(spec.options.get("value", "median_normalized_e_p_o"))
    cells = [c for c in read_aggregate(path, value_col) if not c.is_baseline]
    if not cells:
        raise ReaderError(f"{path}: no sweep cells, only baseline rows")
    p_e_vals = np.array(sorted({c.p_e for c in cells}))
    p_m_vals = np.array(sorted({c.p_m for c in cells}))
    if p_e_vals[0] <= 0.0 or p_m_vals[0] <= 0.0:
        raise ReaderError(f"{path}: columns 'p_e' and 'p_m' must be positive for log axes")
    e_idx = {v: i for i, v in enumerate(p_e_vals)}
    m_idx = {v: i for i, v in enumerate(p_m_vals)}
    grid = np.full((p_m_vals.size, p_e_vals.size), np.nan)
    for c in cells:
        grid[m_idx[c.p_m], e_idx[c.p_e]] = c.value

    pe_line = np.logspace(np.log10(p_e_vals[0]), np.log10(p_e_vals[-1]), 256)
    try:
        ratio_curves = {m: (pe_line, iso_ratio(pe_line, m))
                        for m in _float_list(spec.options, "iso_ratios")}
        sojourn_curves = {tau: (pe_line, iso_sojourn(pe_line, tau))
                          for tau in _float_list(spec.options, "iso_sojourns")}
    except ValueError as exc:
        raise SpecError(str(exc)) from exc
    vmin = _float_or_none(spec.options, "vmin")
    vmax = _float_or_none(spec.options, "vmax")

    edges_x = _log_edges(p_e_vals)
    edges_y = _log_edges(p_m_vals)
    fig, ax = plt.subplots(figsize=(6.4, 5.2))
    mesh = ax.pcolormesh(edges_x, edges_y, grid, shading="flat", cmap="viridis",
                         vmin=vmin, vmax=vmax)
    fig.colorbar(mesh, ax=ax, label=value_col)
    for m, (xs, ys) in ratio_curves.items():
        ax.plot(np.log10(xs), np.log10(ys), "w--", linewidth=1.2,
                label=f"ratio {m:g}")
    for tau, (xs, ys) in sojourn_curves.items():
        with np.errstate(invalid="ignore"):
            ax.plot(np.log10(xs), np.log10(ys), "w:", linewidth=1.2,
                    label=f"stint {tau:g}")
    if ratio_curves or sojourn_curves:
        ax.legend(loc="upper left", fontsize=8)
    ax.set_xlim(edges_x[0], edges_x[-1])
    ax.set_ylim(edges_y[0], edges_y[-1])
    ax.set_xlabel("log10 p_e")
    ax.set_ylabel("log10 p_m")
    ax.set_title(str(spec.options.get("title", value_col)))
    data = {"p_e": p_e_vals, "p_m": p_m_vals, "grid": grid, "value_column": value_col,
            "iso_ratio": ratio_curves, "iso_sojourn": sojourn_curves}
    return fig, data


def _connectivity_curves(spec: FigureSpec) -> tuple[plt.Figure, dict[str, Any]]:
    _check_options(spec.kind, spec.options, frozenset({"title"}))
    path = spec.inputs["connectivity"]
    points = sorted(read_connectivity(path), key=lambda p: p.r_comm)
    r = np.array([p.r_comm for p in points])
    data = {
        "r_comm": r,
        "median_initial_n_clusters": np.array([p.median_initial_n_clusters for p in points]),
        "median_final_n_clusters": np.array([p.median_final_n_clusters for p in points]),
        "median_initial_e_p_o": np.array([p.median_initial_e_p_o for p in points]),
        "median_final_e_p_o": np.array([p.median_final_e_p_o for p in points]),
    }
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9.0, 4.0))
    ax1.plot(r, data["median_initial_n_clusters"], "o-", label="initial")
    ax1.plot(r, data["median_final_n_clusters"], "s-", label="final")
    ax1.set_xlabel("r_comm")
    ax1.set_ylabel("median cluster count")
    ax1.legend()
    ax2.plot(r, data["median_initial_e_p_o"], "o-", label="initial")
    ax2.plot(r, data["median_final_e_p_o"], "s-", label="final")
    if (data["median_initial_e_p_o"] > 0).all() and (data["median_final_e_p_o"] > 0).all():
        ax2.set_yscale("log")
    ax2.set_xlabel("r_comm")
    ax2.set_ylabel("median opinion precision error")
    ax2.legend()
    fig.suptitle(str(spec.options.get("title", "connectivity sweep")))
    fig.tight_layout()
    return fig, data


def _snapshot_scatter(spec: FigureSpec) -> tuple[plt.Figure, dict[str, Any]]:
    _check_options(spec.kind, spec.options,
                   frozenset({"run_id", "t", "title", "contour_levels"}))
    snap_path = spec.inputs["snapshot"]
    points = read_snapshot(snap_path)
    info = read_config(spec.inputs["config"])
    run_id = _int_option(spec.options, "run_id", min(p.run_id for p in points))
    in_run = [p for p in points if p.run_id == run_id]
    if not in_run:
        raise ReaderError(f"{snap_path}: no rows for run_id={run_id}")
    t = _int_option(spec.options, "t", max(p.t for p in in_run))
    chosen = [p for p in in_run if p.t == t]
    if not chosen:
        raise ReaderError(f"{snap_path}: no rows for run_id={run_id} at t={t}")
    x = np.array([p.x for p in chosen])
    y = np.array([p.y for p in chosen])
    opinion = np.array([p.opinion for p in chosen])
    state = np.array([p.state for p in chosen])
    n_levels = _int_option(spec.options, "contour_levels", 10)

    gx, gy = np.meshgrid(np.linspace(0.0, info.width, 256),
                         np.linspace(0.0, info.height, 256))
    field = field_values(info.kind, info.params, info.width, gx, gy)
    fig, ax = plt.subplots(figsize=(5.6, 5.6))
    background = ax.contour(gx, gy, field, levels=n_levels,
                            colors="gray", linewidths=0.6)
    ax.contour(gx, gy, field, levels=[info.ground_truth],
               colors="crimson", linewidths=2.0)
    vmin, vmax = float(opinion.min()), float(opinion.max())
    for mask, marker, label in ((state == "exploiter", "o", "exploiter"),
                                (state == "messenger", "^", "messenger")):
        if mask.any():
            ax.scatter(x[mask], y[mask], c=opinion[mask], cmap="viridis",
                       vmin=vmin, vmax=vmax, marker=marker, s=36,
                       edgecolors="black", linewidths=0.4, label=label)
    ax.legend(loc="upper right", fontsize=8)
    ax.set_xlim(0.0, info.width)
    ax.set_ylim(0.0, info.height)
    ax.set_aspect("equal")
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.set_title(str(spec.options.get("title", f"run {run_id}, t={t}")))
    data = {"x": x, "y": y, "opinion": opinion, "state": state,
            "run_id": run_id, "t": t, "width": info.width, "height": info.height,
            "ground_truth_level": info.ground_truth,
            "background_levels": np.asarray(background.levels, dtype=np.float64)}
    return fig, data


def _temporal_panels(spec: FigureSpec) -> tuple[plt.Figure, dict[str, Any]]:
    _check_options(spec.kind, spec.options, frozenset({"title"}))
    path = spec.inputs["metrics"]
    points = read_metrics(path)
    runs = sorted({p.run_id for p in points})
    series: dict[str, dict[int, np.ndarray]] = {"t": {}}
    columns = ("e_p_o", "e_p_s", "n_clusters", "messenger_ratio")
    for col in columns:
        series[col] = {}
    for run in runs:
        rows = sorted((p for p in points if p.run_id == run), key=lambda p: p.t)
        series["t"][run] = np.array([p.t for p in rows], dtype=np.float64)
        for col in columns:
            series[col][run] = np.array([getattr(p, col) for p in rows])

    fig, axes = plt.subplots(2, 2, figsize=(9.0, 7.0))
    for ax, col in zip(axes.flat, columns):
        for run in runs:
            ax.plot(series["t"][run], series[col][run], linewidth=1.0,
                    label=f"run {run}")
        ax.set_xlabel("t")
        ax.set_ylabel(col)
        if col in ("e_p_o", "e_p_s") and all((series[col][run] > 0).all() for run in runs):
            ax.set_yscale("log")
    if len(runs) > 1:
        axes.flat[0].legend(fontsize=8)
    fig.suptitle(str(spec.options.get("title", "metric time development")))
    fig.tight_layout()
    data = {"runs": runs, **series}
    return fig, data


_BUILDERS: dict[FigureKind, Callable[[FigureSpec], tuple[plt.Figure, dict[str, Any]]]] = {
    FigureKind.PHASE_HEATMAP: _phase_heatmap,
    FigureKind.CONNECTIVITY_CURVES: _connectivity_curves,
    FigureKind.SNAPSHOT_SCATTER: _snapshot_scatter,
    FigureKind.TEMPORAL_PANELS: _temporal_panels,
}


def render(spec: FigureSpec) -> RenderResult:
    """Render a validated spec to its output image.

    Identical inputs produce byte-identical png, svg, and pdf files.
    """
    fig, data = _BUILDERS[spec.kind](spec)
    try:
        _save(fig, spec.output)
    finally:
        plt.close(fig)
    return RenderResult(output=spec.output, data=data)
