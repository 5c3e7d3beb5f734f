"""Figures for search reports, written straight to files (Agg backend)."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

STYLE = {
    "figure.figsize": (6.0, 3.0),
    "font.size": 10,
    "axes.titlesize": 10,
    "axes.linewidth": 0.6,
    "savefig.bbox": "tight",
    "savefig.dpi": 150,
}

TRUE_C, FALSE_C, INFER_C = "#4c956c", "#d1495b", "#a3c4bc"


def _save(fig, path):
    # fixed metadata keeps repeated renders byte-stable
    fig.savefig(path, metadata={"Software": None} if str(path).endswith(".png") else None)
    plt.close(fig)
    return path


def plot_arrows_trace(report, path, title=None):
    """One bar per index: green where arrows holds, red where it fails, pale where inferred.

    When the report carries realizing primes a second panel marks them on the
    number line inside the candidate window.
    """
    data = report.to_json() if hasattr(report, "to_json") else report
    idx = np.asarray(data["indices"])
    trace = np.asarray(data["arrows_trace"], dtype=bool)
    computed = np.asarray(data.get("computed", [True] * len(idx)), dtype=bool)
    extras = data.get("extras", {})
    primes = extras.get("realizing_primes")

    with plt.rc_context(STYLE):
        if primes:
            fig, (ax, ax2) = plt.subplots(
                2, 1, figsize=(6.0, 4.4), gridspec_kw={"height_ratios": [2, 1]}, layout="constrained"
            )
        else:
            fig, ax = plt.subplots(layout="constrained")
            ax2 = None
        colors = [(TRUE_C if c else INFER_C) if v else FALSE_C for v, c in zip(trace, computed)]
        ax.bar(idx, np.where(trace, 1, -1), color=colors, width=0.8)
        ax.axhline(0, color="k", lw=0.5)
        ax.set_yticks([-1, 1])
        ax.set_yticklabels(["fails", "holds"])
        ax.set_xticks(idx)
        ax.set_xlabel("index i")
        cand = data.get("candidate_value")
        if cand is not None:
            ax.axvline(cand - 0.5, color="k", ls="--", lw=0.8)
            ax.text(cand - 0.4, 0.5, f"candidate {cand}", fontsize=8)
        ax.set_title(title or f"arrows trace up to horizon {data['horizon']} ({data['soundness']})")

        if ax2 is not None:
            window = extras.get("window_primes") or primes
            ax2.scatter(window, np.zeros(len(window)), s=12, color="0.6")
            ax2.scatter(primes, np.zeros(len(primes)), s=40, color=TRUE_C, zorder=3)
            for p in primes:
                ax2.annotate(str(p), (p, 0), textcoords="offset points", xytext=(0, 6), ha="center", fontsize=8)
            ax2.set_yticks([])
            ax2.set_xlabel("primes in the candidate window (realizing ones highlighted)")
        return _save(fig, path)


def plot_prime_scan(rows, path, title=None):
    """Heat map of candidate indices over (t, m); blank cells found nothing."""
    ts = [r["t"] for r in rows]
    ms = sorted({int(m) for r in rows for m in r["candidates"]})
    grid = np.full((len(ts), len(ms)), np.nan)
    for a, r in enumerate(rows):
        for b, m in enumerate(ms):
            v = r["candidates"].get(str(m))
            if v is not None:
                grid[a, b] = v
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        im = ax.imshow(np.ma.masked_invalid(grid), aspect="auto", cmap="viridis", origin="lower")
        ax.set_xticks(range(len(ms)))
        ax.set_xticklabels(ms)
        ax.set_yticks(range(len(ts)))
        ax.set_yticklabels([f"gap {2 * t}" for t in ts])
        ax.set_xlabel("starting prime index m")
        fig.colorbar(im, ax=ax, label="candidate index")
        ax.set_title(title or "first window showing each consecutive-prime gap")
        return _save(fig, path)
