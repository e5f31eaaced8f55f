"""Report figures rendered alongside machine-readable outputs.

All figures go through the Agg backend and straight to files; nothing
here opens a window. Used by the CLI report paths.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .classify import HIGH_LOW_BORDER, NORMAL_LOW_BORDER, KeyMassReport, LStarHistogram
from .colorspace import lab_to_lch_array
from .gamut import GamutBoundary, MappingScores

_SAVE_KW = {"dpi": 120, "metadata": {"Software": "gamutlab"}}


def save_histogram_figure(
    hist: LStarHistogram, report: KeyMassReport, path: str
) -> None:
    """Bar chart of the L* histogram with the class borders marked."""
    edges = [hist.bin_edges(i) for i in range(hist.step_count)]
    centers = [(lo + hi) / 2 for lo, hi in edges]
    widths = [hi - lo for lo, hi in edges]
    shares = [c / hist.total_pixels for c in hist.counts]

    fig, ax = plt.subplots(figsize=(7, 4))
    ax.bar(centers, shares, width=[w * 0.92 for w in widths], color="#555f6e")
    for border in (NORMAL_LOW_BORDER, HIGH_LOW_BORDER):
        ax.axvline(border, color="#b5442d", linestyle="--", linewidth=1)
    ax.set_xlabel("L*")
    ax.set_ylabel("pixel share")
    ax.set_title(
        f"{report.chosen.value}  "
        f"(low {report.low_mass:.2f} / normal {report.normal_mass:.2f} / high {report.high_mass:.2f})"
    )
    ax.set_xlim(0, 100)
    fig.tight_layout()
    fig.savefig(path, **_SAVE_KW)
    plt.close(fig)


def save_mapping_figure(
    src_lab: np.ndarray,
    mapped_lab: np.ndarray,
    bd: GamutBoundary,
    scores: MappingScores,
    path: str,
) -> None:
    """Two panels: chroma/lightness scatter before and after mapping with
    the destination band profile, and the score breakdown."""
    src_lch = lab_to_lch_array(src_lab)
    mapped_lch = lab_to_lch_array(mapped_lab)

    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(11, 4.5))

    band_l = [(b + 0.5) * 100.0 / bd.lightness_bands for b in range(bd.lightness_bands)]
    band_c = bd.max_chroma.max(axis=0)
    ax1.fill_betweenx(band_l, 0, band_c, color="#d7dde4", label="destination")
    ax1.scatter(src_lch[:, 1], src_lch[:, 0], s=4, c="#b5442d", alpha=0.5, label="source")
    ax1.scatter(mapped_lch[:, 1], mapped_lch[:, 0], s=4, c="#2d6fb5", alpha=0.5, label="mapped")
    ax1.set_xlabel("C*")
    ax1.set_ylabel("L*")
    ax1.set_ylim(0, 100)
    ax1.legend(loc="upper right", fontsize=8)
    ax1.set_title("gamut cross-section")

    names = ["gray axis\n/100", "1 - contrast", "OOG", "hue shift\n/180", "chroma\ndecrease"]
    values = [
        scores.gray_axis_deviation / 100.0,
        max(0.0, 1.0 - scores.luminance_contrast),
        scores.oog_fraction,
        scores.mean_abs_hue_shift / 180.0,
        scores.chroma_decrease_fraction,
    ]
    ax2.bar(names, values, color="#555f6e")
    ax2.set_ylabel("normalized penalty")
    ax2.set_title("mapping criteria")
    fig.tight_layout()
    fig.savefig(path, **_SAVE_KW)
    plt.close(fig)
