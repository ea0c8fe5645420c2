"""Figure rendering from published simulation artifacts.

No physics is recomputed here: every plotted number, fitted line, and
annotation comes straight out of the input CSV/JSON files, so figures
cannot drift from the published results.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "figgen"  # deterministic SVG ids

import matplotlib.pyplot as plt
import numpy as np

from . import schema

KINDS = ("fig3", "fig4")

FIG3_OBSERVABLES = (
    ("mean_domain_size", "average domain size"),
    ("domain_size_width", "domain size width"),
    ("mean_degree", "average vertex degree"),
)


@dataclass
class FigureSpec:
    kind: str
    inputs: list[str]
    output: str
    xlabel: str | None = None
    ylabel: str | None = None
    fit_overlay: bool = True

    def __post_init__(self):
        if self.kind not in KINDS:
            raise schema.SchemaError(f"unknown figure kind {self.kind!r}")
        if not self.inputs:
            raise schema.SchemaError("no input files given")


def _classify_inputs(spec: FigureSpec, csv_schema: str, json_schema: str):
    csv_path = json_path = None
    for p in spec.inputs:
        if str(p).endswith(".json"):
            json_path = p
        else:
            csv_path = p
    if csv_path is None or json_path is None:
        raise schema.SchemaError(
            f"{spec.kind} needs one {csv_schema} CSV and one {json_schema} JSON")
    return csv_path, json_path


def render(spec: FigureSpec) -> dict:
    """Write the figure; returns the plotted series and annotations."""
    if spec.kind == "fig3":
        report = _render_fig3(spec)
    else:
        report = _render_fig4(spec)
    return report


def _render_fig3(spec: FigureSpec) -> dict:
    csv_path, json_path = _classify_inputs(spec, "summary", "extrapolation")
    rows = schema.read_csv(csv_path, "summary",
                           ("L", "observable", "mean", "stderr"))
    extra = schema.read_json(json_path, "extrapolation")

    series: dict[str, tuple[np.ndarray, np.ndarray, np.ndarray]] = {}
    for name, _ in FIG3_OBSERVABLES + (("max_domain_size", ""),):
        pts = sorted((int(r["L"]), float(r["mean"]), float(r["stderr"]))
                     for r in rows if r["observable"] == name)
        if not pts:
            raise schema.SchemaError(f"{csv_path}: observable {name!r} missing")
        arr = np.array(pts, dtype=float)
        series[name] = (arr[:, 0], arr[:, 1], arr[:, 2])

    log_fit = extra.get("results", {}).get("max_domain_log_fit")
    if log_fit is None:
        raise schema.SchemaError(f"{json_path}: max_domain_log_fit missing")
    slope = float(log_fit["slope"])
    intercept = float(log_fit["intercept"])

    fig, ax = plt.subplots(figsize=(6.0, 4.2))
    for name, label in FIG3_OBSERVABLES:
        L, mean, err = series[name]
        ax.errorbar(L, mean, yerr=err, marker="o", ms=3.5, lw=1.0,
                    capsize=2, label=label)
    ax.set_xlabel(spec.xlabel or "L")
    ax.set_ylabel(spec.ylabel or "ensemble average")
    ax.legend(loc="center right", fontsize=8)

    inset = ax.inset_axes([0.52, 0.12, 0.44, 0.34])
    L, mean, err = series["max_domain_size"]
    N = L * L
    inset.errorbar(N, mean, yerr=err, fmt="s", ms=3, lw=0.8, capsize=2,
                   color="tab:red")
    slope_note = f"{slope:.3f} ln N {intercept:+.3f}"
    if spec.fit_overlay:
        xs = np.geomspace(N.min(), N.max(), 64)
        inset.plot(xs, slope * np.log(xs) + intercept, "k--", lw=0.8)
        inset.text(0.05, 0.82, slope_note, transform=inset.transAxes,
                   fontsize=7)
    inset.set_xscale("log")
    inset.set_xlabel("N", fontsize=7)
    inset.set_ylabel("largest domain", fontsize=7)
    inset.tick_params(labelsize=6)

    fig.tight_layout()
    fig.savefig(spec.output, metadata={"Date": None})
    plt.close(fig)
    return {
        "kind": "fig3",
        "series": {k: tuple(v.tolist() for v in series[k]) for k in series},
        "annotations": {"inset_slope": round(slope, 3),
                        "inset_intercept": round(intercept, 3),
                        "inset_text": slope_note},
        "output": str(spec.output),
    }


def _render_fig4(spec: FigureSpec) -> dict:
    csv_path, json_path = _classify_inputs(spec, "threshold_curve", "thresholds")
    rows = schema.read_csv(csv_path, "threshold_curve",
                           ("mode", "L", "p_delete", "p_cluster", "stderr"))
    thresholds = schema.read_json(json_path, "thresholds")["thresholds"]

    series: dict[tuple[str, str], np.ndarray] = {}
    for r in rows:
        key = (r["mode"], r["L"])
        series.setdefault(key, []).append(
            (float(r["p_delete"]), float(r["p_cluster"]), float(r["stderr"])))

    fig, ax = plt.subplots(figsize=(5.6, 4.0))
    annotations = {}
    for (mode, L), pts in sorted(series.items()):
        arr = np.array(sorted(pts), dtype=float)
        ax.errorbar(arr[:, 0], arr[:, 1], yerr=arr[:, 2], marker="o", ms=3,
                    lw=1.0, capsize=2, label=f"{mode}, L={L}")
        entry = thresholds.get(L, {}).get(mode)
        if entry is None:
            raise schema.SchemaError(
                f"{json_path}: no threshold for mode {mode!r} at L={L}")
        p_star = float(entry["p_star"])
        ax.axvline(p_star, color="gray", lw=0.8, ls="--")
        ax.text(p_star, 1.02, f"{p_star:.3f}", fontsize=7, ha="center")
        annotations[f"{mode}_L{L}_p_star"] = round(p_star, 3)
    ax.axhline(0.5, color="k", lw=0.6, ls=":")
    ax.set_ylim(-0.05, 1.1)
    ax.set_xlabel(spec.xlabel or "deletion probability")
    ax.set_ylabel(spec.ylabel or "spanning probability")
    ax.legend(fontsize=8)

    fig.tight_layout()
    fig.savefig(spec.output, metadata={"Date": None})
    plt.close(fig)
    return {
        "kind": "fig4",
        "series": {f"{m}_L{L}": sorted(pts) for (m, L), pts in series.items()},
        "annotations": annotations,
        "output": str(spec.output),
    }
