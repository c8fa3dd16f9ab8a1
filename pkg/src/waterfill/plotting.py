"""Report figures written next to the CSV/JSONL benchmark output."""

import math

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

STYLE = {
    "font.size": 9,
    "axes.labelsize": 9,
    "axes.titlesize": 10,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "savefig.dpi": 150,
    "savefig.bbox": "tight",
}


def _finite(values):
    return [v if math.isfinite(v) else np.nan for v in values]


def plot_ks_sweep(reports, path):
    """Mean output PSNR and mean runtime against the sampling rate."""
    summaries = [r.summary() for r in reports]
    ks = [s["ks"] for s in summaries]
    with plt.rc_context(STYLE):
        fig, (ax_p, ax_t) = plt.subplots(1, 2, figsize=(7.0, 2.8))
        ax_p.plot(ks, _finite([s["psnr_out_db"] for s in summaries]), "o-", color="C0")
        ax_p.set_xlabel("sampling rate $k_s$")
        ax_p.set_ylabel("mean PSNR (dB)")
        ax_p.set_xticks(ks)
        ax_t.plot(ks, [s["elapsed_ms"] for s in summaries], "s-", color="C3")
        ax_t.set_xlabel("sampling rate $k_s$")
        ax_t.set_ylabel("mean time (ms)")
        ax_t.set_xticks(ks)
        fig.tight_layout()
        fig.savefig(path)
        plt.close(fig)


def plot_psnr_bars(report, path):
    """Per-document PSNR of the shaded input and the corrected output."""
    rows = report.ok_rows
    x = np.arange(len(rows))
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(max(4.0, 0.35 * len(rows) + 1.5), 2.8))
        ax.bar(x - 0.2, _finite([r.psnr_in_db for r in rows]), 0.4, label="input", color="0.6")
        ax.bar(x + 0.2, _finite([r.psnr_out_db for r in rows]), 0.4, label="corrected", color="C0")
        ax.set_xticks(x)
        ax.set_xticklabels([r.spec_id for r in rows], rotation=60, ha="right")
        ax.set_ylabel("PSNR (dB)")
        ax.set_title(f"k_s = {report.ks}")
        ax.legend(frameon=False)
        fig.tight_layout()
        fig.savefig(path)
        plt.close(fig)


def plot_snapshots(snapshots, path, cmap="gray"):
    """Side-by-side panels of the water surface at recorded iterations.

    ``snapshots`` is a list of ``(t, G)`` pairs.
    """
    n = len(snapshots)
    if n == 0:
        return
    with plt.rc_context(STYLE):
        fig, axes = plt.subplots(1, n, figsize=(2.4 * n, 2.4), squeeze=False)
        for ax, (t, g) in zip(axes[0], snapshots):
            ax.imshow(g, cmap=cmap, vmin=0, vmax=255, interpolation="nearest")
            ax.set_title(f"t = {t}")
            ax.set_axis_off()
        fig.tight_layout()
        fig.savefig(path)
        plt.close(fig)
