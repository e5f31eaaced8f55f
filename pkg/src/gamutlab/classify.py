"""L* histogram analysis and image key classification.

Images are sorted into high-key, normal-key and low-key by where their
lightness mass sits. Class border ranges:

    low-key     L* in [0, 40]
    normal-key  L* in (40, 60]
    high-key    L* in (60, 100]

A border value belongs to the lower class. Histogram bins are
lower-closed ([lo, hi), last bin closed), so mass recorded exactly at a
border edge lands in the bin above it; callers probing border behavior
should present such pixels at or just below the border.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .colorspace import SeparationParams, rgb_to_lab_array
from .errors import DomainError
from .formats import RasterImage

HIGH_LOW_BORDER = 60.0
NORMAL_LOW_BORDER = 40.0

DEFAULT_STEP_COUNT = 10

# Background-peak exclusion: a histogram bin centered at L* >= 95 holding
# more than 30% of all pixels is treated as a white backdrop.
BACKGROUND_L_THRESHOLD = 95.0
BACKGROUND_SHARE_THRESHOLD = 0.30


class ImageKeyClass(enum.Enum):
    LOW_KEY = "low-key"
    NORMAL_KEY = "normal-key"
    HIGH_KEY = "high-key"

    @classmethod
    def from_label(cls, label: str) -> "ImageKeyClass":
        for member in cls:
            if member.value == label:
                return member
        raise DomainError(f"unknown key class {label!r}")


def key_class_range(cls: ImageKeyClass) -> tuple[float, float]:
    """L* interval (lo, hi) for a class; the lower border belongs to
    the class below, except 0 which belongs to low-key."""
    if cls is ImageKeyClass.LOW_KEY:
        return 0.0, NORMAL_LOW_BORDER
    if cls is ImageKeyClass.NORMAL_KEY:
        return NORMAL_LOW_BORDER, HIGH_LOW_BORDER
    return HIGH_LOW_BORDER, 100.0


@dataclass(frozen=True)
class LStarHistogram:
    """Pixel counts over equal L* steps covering [0, 100]."""

    step_count: int
    counts: tuple[int, ...]
    total_pixels: int

    def __post_init__(self):
        if self.step_count < 3:
            raise DomainError(f"step_count {self.step_count} < 3")
        if len(self.counts) != self.step_count:
            raise DomainError("counts length does not match step_count")
        if any(c < 0 for c in self.counts):
            raise DomainError("negative bin count")
        if sum(self.counts) != self.total_pixels or self.total_pixels <= 0:
            raise DomainError("counts must sum to a positive total_pixels")

    def bin_edges(self, i: int) -> tuple[float, float]:
        return 100.0 * i / self.step_count, 100.0 * (i + 1) / self.step_count


@dataclass(frozen=True)
class KeyMassReport:
    """Mass fractions per key class and the chosen class."""

    high_mass: float
    normal_mass: float
    low_mass: float
    chosen: ImageKeyClass


def lstar_histogram(image: RasterImage, step_count: int = DEFAULT_STEP_COUNT) -> LStarHistogram:
    """Histogram of per-pixel L* over step_count equal bins."""
    if step_count < 3:
        raise DomainError(f"step_count {step_count} < 3")
    lab = rgb_to_lab_array(image.pixels)
    lstar = lab[..., 0].ravel()
    if lstar.size == 0:
        raise DomainError("empty image")
    idx = np.clip((lstar * step_count / 100.0).astype(int), 0, step_count - 1)
    counts = np.bincount(idx, minlength=step_count)
    return LStarHistogram(step_count, tuple(int(c) for c in counts), int(lstar.size))


def _range_overlap(bin_lo: float, bin_hi: float, lo: float, hi: float) -> float:
    return max(0.0, min(bin_hi, hi) - max(bin_lo, lo))


def classify_key(hist: LStarHistogram, exclude_background_peak: bool = False) -> KeyMassReport:
    """Assign a key class from histogram mass.

    Bin mass is split proportionally across class ranges by overlap
    length. With exclude_background_peak, the largest bin centered at
    L* >= 95 holding over 30% of pixels is dropped first (unless that
    would empty the histogram). Ties go to normal-key.
    """
    counts = list(hist.counts)
    total = hist.total_pixels

    if exclude_background_peak:
        candidates = []
        for i, c in enumerate(counts):
            lo, hi = hist.bin_edges(i)
            center = (lo + hi) / 2.0
            if center >= BACKGROUND_L_THRESHOLD and c > BACKGROUND_SHARE_THRESHOLD * total:
                candidates.append((c, i))
        if candidates:
            peak_count, peak_idx = max(candidates)
            if peak_count < total:
                counts[peak_idx] = 0
                total -= peak_count

    low = normal = high = 0.0
    for i, c in enumerate(counts):
        if c == 0:
            continue
        lo, hi = hist.bin_edges(i)
        width = hi - lo
        frac = c / total
        low += frac * _range_overlap(lo, hi, 0.0, NORMAL_LOW_BORDER) / width
        normal += frac * _range_overlap(lo, hi, NORMAL_LOW_BORDER, HIGH_LOW_BORDER) / width
        high += frac * _range_overlap(lo, hi, HIGH_LOW_BORDER, 100.0) / width

    masses = {
        ImageKeyClass.LOW_KEY: low,
        ImageKeyClass.NORMAL_KEY: normal,
        ImageKeyClass.HIGH_KEY: high,
    }
    top = max(masses.values())
    tied = [cls for cls, m in masses.items() if abs(m - top) <= 1e-12]
    chosen = tied[0] if len(tied) == 1 else ImageKeyClass.NORMAL_KEY
    return KeyMassReport(high, normal, low, chosen)


# Separation presets per key class; values are repo policy, tabulated in
# docs/formats.md.
SEPARATION_PRESETS = {
    ImageKeyClass.LOW_KEY: SeparationParams(0.9, 0.1, 0.7, 3.0),
    ImageKeyClass.NORMAL_KEY: SeparationParams(0.7, 0.2, 0.6, 3.2),
    ImageKeyClass.HIGH_KEY: SeparationParams(0.5, 0.3, 0.5, 3.4),
}


def recommend_separation(cls: ImageKeyClass) -> SeparationParams:
    """Separation preset for an image key class."""
    try:
        return SEPARATION_PRESETS[cls]
    except KeyError:
        raise DomainError(f"unknown key class {cls!r}")
