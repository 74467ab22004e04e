"""Bundle an entropy analysis into files: JSON report, CSV profile,
and two rendered figures (block-count growth, finite-scale entropy)."""

from __future__ import annotations

import json
import os

import numpy as np

from .entropy import EntropyReport

__all__ = ["render_figures", "write_bundle"]


def _ensure_agg():
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    return plt


def render_figures(rep: EntropyReport, out_dir: str,
                   stem: str = "entropy") -> list[str]:
    """Write growth and h-curve PNGs, return their paths."""
    plt = _ensure_agg()
    prof = rep.profile
    ms = np.array([row.m for row in prof.rows])
    b = np.array([row.b_count for row in prof.rows], dtype=np.float64)
    r = np.array([row.r_count for row in prof.rows], dtype=np.float64)
    paths = []

    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.semilogy(ms, b, "o-", label="sliding blocks", markersize=3)
    ax.semilogy(ms, r, "s--", label="aligned blocks", markersize=3)
    ax.set_xlabel("block length m")
    ax.set_ylabel("distinct blocks")
    ax.set_title(f"block-count growth (n={prof.n})")
    ax.legend()
    ax.grid(True, which="both", alpha=0.3)
    p = os.path.join(out_dir, f"{stem}_growth.png")
    fig.savefig(p, dpi=120, bbox_inches="tight")
    plt.close(fig)
    paths.append(p)

    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    h = np.array([v for _, v in rep.h_values])
    hr = np.array([v for _, v in rep.h_regular])
    ax.plot(ms, h, "o-", label="ln b(m)/m", markersize=3)
    ax.plot(ms, hr, "s--", label="ln r(m)/m", markersize=3)
    ax.axhline(rep.point_estimate, color="k", lw=0.8, ls=":",
               label=f"estimate {rep.point_estimate:.4f}")
    ax.axvline(rep.m_star, color="gray", lw=0.8, ls=":")
    ax.set_xlabel("block length m")
    ax.set_ylabel(f"finite-scale entropy ({rep.units})")
    title = "entropy vs scale"
    if rep.saturated:
        title += " [saturated]"
    ax.set_title(title)
    ax.legend()
    ax.grid(True, alpha=0.3)
    p = os.path.join(out_dir, f"{stem}_h.png")
    fig.savefig(p, dpi=120, bbox_inches="tight")
    plt.close(fig)
    paths.append(p)
    return paths


def write_bundle(rep: EntropyReport, out_dir: str, run_config: dict,
                 stem: str = "entropy", timestamp: str | None = None) -> dict:
    """Write report.json, profile.csv, and figures under out_dir.

    The JSON embeds the resolved run configuration so the bundle can be
    replayed; the timestamp is the only field expected to differ between
    identical runs.
    """
    os.makedirs(out_dir, exist_ok=True)
    if timestamp is None:
        import datetime
        timestamp = datetime.datetime.now(datetime.timezone.utc).isoformat()
    doc = rep.to_json_dict()
    doc["config"] = run_config
    doc["timestamp"] = timestamp
    json_path = os.path.join(out_dir, f"{stem}_report.json")
    with open(json_path, "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")
    csv_path = os.path.join(out_dir, f"{stem}_profile.csv")
    with open(csv_path, "w") as fh:
        fh.write(rep.profile.to_csv())
    figs = render_figures(rep, out_dir, stem)
    return {"report": json_path, "profile": csv_path, "figures": figs}
