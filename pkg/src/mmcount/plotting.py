"""Figures for benchmark reports, written next to the JSONL/CSV output.

Uses the object-oriented matplotlib API with the Agg canvas, so nothing
here touches global pyplot state or needs a display.
"""
from __future__ import annotations

from itertools import combinations
from pathlib import Path

from matplotlib.backends.backend_agg import FigureCanvasAgg
from matplotlib.figure import Figure

from .bench import Report, RunRecord

_MARKERS = {"projenum": "o", "hashcount": "s", "minlb": "^", "bruteforce": "x"}


def _log2_bound(r: RunRecord):
    if not r.has_bound:
        return None
    if r.bound_log2 is not None:
        return r.bound_log2
    return 0.0  # zero count: plotted on the axis floor


def new_figure(width: float = 5.0, height: float | None = None) -> Figure:
    height = height or width * 0.8
    fig = Figure(figsize=(width, height), dpi=120)
    FigureCanvasAgg(fig)
    return fig


def bound_scatter(report: Report, x_method: str, y_method: str) -> Figure:
    """Each point is one instance: log2 bounds of ``x_method`` vs ``y_method``."""
    fig = new_figure()
    ax = fig.add_subplot()
    xs, ys = [], []
    for recs in report.by_instance().values():
        a, b = recs.get(x_method), recs.get(y_method)
        if a is None or b is None:
            continue
        la, lb = _log2_bound(a), _log2_bound(b)
        if la is None or lb is None:
            continue
        xs.append(la)
        ys.append(lb)
    ax.scatter(xs, ys, s=14, marker=_MARKERS.get(x_method, "o"))
    lim = [min(xs + ys + [0.0]), max(xs + ys + [1.0])]
    ax.plot(lim, lim, color="grey", lw=0.8, ls="--")
    ax.set_xlabel(f"log2 bound, {x_method}")
    ax.set_ylabel(f"log2 bound, {y_method}")
    fig.tight_layout()
    return fig


def bound_profile(report: Report) -> Figure:
    """Sorted log2 bounds per method: point (x, y) means x instances have bound at most 2**y."""
    fig = new_figure()
    ax = fig.add_subplot()
    for m in report.methods:
        vals = sorted(v for r in report.records if r.method == m
                      for v in [_log2_bound(r)] if v is not None)
        if vals:
            ax.plot(range(1, len(vals) + 1), vals, marker=_MARKERS.get(m, "o"), ms=3, label=m)
    ax.set_xlabel("instances")
    ax.set_ylabel("log2 of lower bound")
    if ax.get_lines():
        ax.legend(frameon=False)
    fig.tight_layout()
    return fig


def quality_vs_size(report: Report, method: str, reference: str, size_field: str) -> Figure:
    """Relative quality of ``method`` against ``reference`` by cut or support size."""
    fig = new_figure()
    ax = fig.add_subplot()
    series = dict(report.relative_quality().get(f"{method}/{reference}", []))
    pts = []
    for inst, recs in report.by_instance().items():
        r = recs.get(method)
        size = getattr(r, size_field, None) if r else None
        if inst in series and size is not None:
            pts.append((size, series[inst]))
    if pts:
        ax.scatter(*zip(*pts), s=14, marker=_MARKERS.get(method, "o"))
    ax.axhline(1.0, color="grey", lw=0.8)
    ax.set_xlabel(size_field.replace("_", " "))
    ax.set_ylabel(f"relative quality vs {reference}")
    fig.tight_layout()
    return fig


def render_report(report: Report, outdir: Path | str, fmt: str = "png") -> list[Path]:
    """Write every applicable figure into ``outdir``; returns the written paths."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    figures = {"bound_profile": bound_profile(report)}
    for a, b in combinations(report.methods, 2):
        figures[f"bounds_{a}_vs_{b}"] = bound_scatter(report, a, b)
    reference = "bruteforce" if "bruteforce" in report.methods else None
    if reference:
        if "projenum" in report.methods:
            figures["quality_projenum_by_cut"] = quality_vs_size(report, "projenum", reference, "cut_size")
        if "hashcount" in report.methods:
            figures["quality_hashcount_by_support"] = quality_vs_size(
                report, "hashcount", reference, "support_size")
    paths = []
    for name, fig in figures.items():
        p = outdir / f"{name}.{fmt}"
        fig.savefig(p)
        paths.append(p)
    return paths
