"""Test chart construction: image-adapted charts and IT8-style targets.

An IT8-style scanner target is a 12 x 22 patch grid totalling 264
colors: a standardized block of 12 hue angles x 3 lightness levels x 4
chroma steps (144 patches, columns 1-12), seven 12-step tone scales
(84 patches, columns 13-19) and a 36-patch vendor block (columns
20-22). Standardized chroma steps are even fractions (25% to 100%) of
the maximum chroma reproducible in sRGB at that hue and lightness,
found by bisection against the Lab -> sRGB gamut test.

Image-adapted charts concentrate their patch targets inside the L*
border range of one image key class: a neutral lightness ramp plus hue
samples at two chroma levels.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .classify import ImageKeyClass, key_class_range
from .colorspace import LabColor, RGBColor, lab_to_rgb, rgb_to_lab
from .errors import CapacityError, DomainError
from .formats import RasterImage

IT8_ROWS = 12
IT8_COLS = 22
IT8_HUE_COUNT = 12
IT8_LIGHTNESS_LEVELS = (25.0, 50.0, 75.0)
IT8_CHROMA_FRACTIONS = (0.25, 0.50, 0.75, 1.00)
IT8_TONE_SCALE_STEPS = 12
IT8_VENDOR_CAPACITY = 36

# Tone-scale colors: six chromatic scales anchored at the sRGB cube
# corners plus one neutral ramp.
TONE_SCALE_CORNERS = (
    ("cyan", (0.0, 1.0, 1.0)),
    ("magenta", (1.0, 0.0, 1.0)),
    ("yellow", (1.0, 1.0, 0.0)),
    ("red", (1.0, 0.0, 0.0)),
    ("green", (0.0, 1.0, 0.0)),
    ("blue", (0.0, 0.0, 1.0)),
)

ADAPTED_CHART_HUES = (0.0, 60.0, 120.0, 180.0, 240.0, 300.0)
ADAPTED_CHART_CHROMA_FRACTIONS = (0.45, 0.9)
ADAPTED_MIN_RAMP = 6
ADAPTED_MIN_PATCHES = 12


class ChartRole(enum.Enum):
    STANDARDIZED = "standardized"
    TONE_SCALE = "tone-scale"
    VENDOR = "vendor"
    CUSTOM = "custom"
    NEUTRAL_RAMP = "neutral-ramp"


@dataclass(frozen=True)
class Patch:
    row: int
    col: int
    target: LabColor
    role: ChartRole

    def __post_init__(self):
        if not 0.0 <= self.target.l <= 100.0:
            raise DomainError(f"patch target L*={self.target.l} outside [0, 100]")


@dataclass(frozen=True)
class TestChartLayout:
    rows: int
    cols: int
    patches: tuple[Patch, ...]
    key_class: ImageKeyClass | None = None

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise DomainError("chart grid must be at least 1x1")
        if len(self.patches) != self.rows * self.cols:
            raise DomainError(
                f"{len(self.patches)} patches do not fill a {self.rows}x{self.cols} grid"
            )
        seen = set()
        for p in self.patches:
            if not (0 <= p.row < self.rows and 0 <= p.col < self.cols):
                raise DomainError(f"patch position ({p.row}, {p.col}) outside grid")
            if (p.row, p.col) in seen:
                raise DomainError(f"duplicate patch position ({p.row}, {p.col})")
            seen.add((p.row, p.col))

    def patch_at(self, row: int, col: int) -> Patch:
        for p in self.patches:
            if p.row == row and p.col == col:
                return p
        raise DomainError(f"no patch at ({row}, {col})")


def max_srgb_chroma(lightness: float, hue: float, tol: float = 1e-6) -> float:
    """Largest chroma at (L*, hue) that stays inside sRGB, by bisection.

    Returns the highest chroma verified in gamut, so a color built at
    the returned value renders without clamping.
    """
    if not 0.0 <= lightness <= 100.0:
        raise DomainError(f"lightness {lightness} outside [0, 100]")
    lo = 0.0
    hi = 16.0
    while lab_to_rgb(lch_lab_color(lightness, hi, hue))[1]:
        lo = hi
        hi *= 2.0
        if hi > 512.0:
            return lo
    while hi - lo > tol:
        mid = (lo + hi) / 2.0
        if lab_to_rgb(lch_lab_color(lightness, mid, hue))[1]:
            lo = mid
        else:
            hi = mid
    return lo


def lch_lab_color(lightness: float, chroma: float, hue: float) -> LabColor:
    hr = math.radians(hue)
    return LabColor(lightness, chroma * math.cos(hr), chroma * math.sin(hr))


def generate_adapted_chart(cls: ImageKeyClass, rows: int, cols: int) -> TestChartLayout:
    """Chart whose targets sit inside the class border range.

    The leading row(s) hold a neutral ramp of at least six evenly spaced
    L* values, descending; the rest sample six hue angles at two chroma
    levels across three in-range lightness levels.
    """
    if rows * cols < ADAPTED_MIN_PATCHES:
        raise DomainError(
            f"{rows}x{cols} grid holds {rows * cols} patches, need {ADAPTED_MIN_PATCHES}"
        )
    lo, hi = key_class_range(cls)
    span = hi - lo

    ramp_rows = max(1, math.ceil(ADAPTED_MIN_RAMP / cols))
    ramp_count = ramp_rows * cols
    if ramp_count > rows * cols - 1:
        ramp_rows = 1
        ramp_count = cols
    # values in (lo, hi], strictly decreasing
    ramp_values = [hi - i * span / ramp_count for i in range(ramp_count)]

    lightness_levels = [lo + span * f for f in (0.75, 0.5, 0.25)]
    chromatic: list[LabColor] = []
    for level in lightness_levels:
        for frac in ADAPTED_CHART_CHROMA_FRACTIONS:
            for hue in ADAPTED_CHART_HUES:
                chroma = frac * max_srgb_chroma(level, hue)
                chromatic.append(lch_lab_color(level, chroma, hue))

    patches: list[Patch] = []
    for i, value in enumerate(ramp_values):
        patches.append(Patch(i // cols, i % cols, LabColor(value, 0.0, 0.0), ChartRole.NEUTRAL_RAMP))
    remaining = rows * cols - ramp_count
    for j in range(remaining):
        idx = ramp_count + j
        patches.append(
            Patch(idx // cols, idx % cols, chromatic[j % len(chromatic)], ChartRole.CUSTOM)
        )
    return TestChartLayout(rows, cols, tuple(patches), cls)


def build_it8_target(vendor_patches: list[LabColor] | None = None) -> TestChartLayout:
    """Build the 264-patch IT8-style target.

    vendor_patches fill the vendor block in row-major order; remaining
    vendor slots default to neutral L* 50.
    """
    vendor_patches = list(vendor_patches or [])
    if len(vendor_patches) > IT8_VENDOR_CAPACITY:
        raise CapacityError(
            f"{len(vendor_patches)} vendor patches exceed capacity {IT8_VENDOR_CAPACITY}"
        )
    for lab in vendor_patches:
        if not 0.0 <= lab.l <= 100.0:
            raise DomainError(f"vendor patch L*={lab.l} outside [0, 100]")

    patches: list[Patch] = []

    # Standardized block, columns 0-11: column = hue angle, row encodes
    # (lightness level, chroma step).
    for col in range(IT8_HUE_COUNT):
        hue = 360.0 * col / IT8_HUE_COUNT
        for li, lightness in enumerate(IT8_LIGHTNESS_LEVELS):
            cmax = max_srgb_chroma(lightness, hue)
            for ci, frac in enumerate(IT8_CHROMA_FRACTIONS):
                row = li * len(IT8_CHROMA_FRACTIONS) + ci
                patches.append(
                    Patch(row, col, lch_lab_color(lightness, frac * cmax, hue), ChartRole.STANDARDIZED)
                )

    # Tone scales, columns 12-18: constant hue, chroma ascending from the
    # lowest step; the neutral scale is a descending gray ramp.
    for si, (_, corner) in enumerate(TONE_SCALE_CORNERS):
        col = IT8_HUE_COUNT + si
        corner_lab = rgb_to_lab(RGBColor(*corner))
        hue = math.degrees(math.atan2(corner_lab.b, corner_lab.a)) % 360.0
        cmax = max_srgb_chroma(50.0, hue)
        for step in range(IT8_TONE_SCALE_STEPS):
            chroma = cmax * (step + 1) / IT8_TONE_SCALE_STEPS
            patches.append(Patch(step, col, lch_lab_color(50.0, chroma, hue), ChartRole.TONE_SCALE))
    neutral_col = IT8_HUE_COUNT + len(TONE_SCALE_CORNERS)
    for step in range(IT8_TONE_SCALE_STEPS):
        lightness = 95.0 - 90.0 * step / (IT8_TONE_SCALE_STEPS - 1)
        patches.append(Patch(step, neutral_col, LabColor(lightness, 0.0, 0.0), ChartRole.TONE_SCALE))

    # Vendor block, columns 19-21, row-major fill.
    slot = 0
    for row in range(IT8_ROWS):
        for col in range(neutral_col + 1, IT8_COLS):
            if slot < len(vendor_patches):
                target = vendor_patches[slot]
            else:
                target = LabColor(50.0, 0.0, 0.0)
            patches.append(Patch(row, col, target, ChartRole.VENDOR))
            slot += 1

    patches.sort(key=lambda p: (p.row, p.col))
    return TestChartLayout(IT8_ROWS, IT8_COLS, tuple(patches))


def it8_block_counts(layout: TestChartLayout) -> dict[ChartRole, int]:
    counts: dict[ChartRole, int] = {}
    for p in layout.patches:
        counts[p.role] = counts.get(p.role, 0) + 1
    return counts


def customize_target(target: TestChartLayout, custom: list[LabColor]) -> TestChartLayout:
    """Replace leading vendor-block slots with custom colors.

    Slots are taken in row-major order; applying the same list twice
    yields the same chart.
    """
    if len(custom) > IT8_VENDOR_CAPACITY:
        raise CapacityError(
            f"{len(custom)} custom patches exceed capacity {IT8_VENDOR_CAPACITY}"
        )
    for lab in custom:
        if not 0.0 <= lab.l <= 100.0:
            raise DomainError(f"custom patch L*={lab.l} outside [0, 100]")

    vendor_cols = range(IT8_COLS - 3, IT8_COLS)
    slots = [
        (p.row, p.col)
        for p in sorted(target.patches, key=lambda p: (p.row, p.col))
        if p.col in vendor_cols
    ]
    replacement = {
        pos: Patch(pos[0], pos[1], lab, ChartRole.CUSTOM)
        for pos, lab in zip(slots, custom)
    }
    patches = tuple(replacement.get((p.row, p.col), p) for p in target.patches)
    return TestChartLayout(target.rows, target.cols, patches, target.key_class)


def render_chart(layout: TestChartLayout, patch_px: int) -> tuple[RasterImage, list[Patch]]:
    """Rasterize a layout at patch_px pixels per patch side.

    Returns the image and the sidecar list of patches whose targets fell
    outside sRGB and were clamped.
    """
    if patch_px < 1:
        raise DomainError(f"patch_px {patch_px} < 1")
    px = np.zeros((layout.rows * patch_px, layout.cols * patch_px, 3), dtype=float)
    clamped: list[Patch] = []
    for p in layout.patches:
        rgb, in_gamut = lab_to_rgb(p.target)
        if not in_gamut:
            clamped.append(p)
        r0, c0 = p.row * patch_px, p.col * patch_px
        px[r0:r0 + patch_px, c0:c0 + patch_px, 0] = rgb.r
        px[r0:r0 + patch_px, c0:c0 + patch_px, 1] = rgb.g
        px[r0:r0 + patch_px, c0:c0 + patch_px, 2] = rgb.b
    return RasterImage(layout.cols * patch_px, layout.rows * patch_px, px), clamped


def layout_to_dict(layout: TestChartLayout) -> dict:
    """JSON-ready form of a chart layout (schema in docs/formats.md)."""
    return {
        "rows": layout.rows,
        "cols": layout.cols,
        "keyClass": layout.key_class.value if layout.key_class else None,
        "patches": [
            {
                "row": p.row,
                "col": p.col,
                "role": p.role.value,
                "lab": [p.target.l, p.target.a, p.target.b],
            }
            for p in layout.patches
        ],
    }


def layout_from_dict(data: dict) -> TestChartLayout:
    try:
        patches = tuple(
            Patch(
                int(p["row"]),
                int(p["col"]),
                LabColor(float(p["lab"][0]), float(p["lab"][1]), float(p["lab"][2])),
                ChartRole(p["role"]),
            )
            for p in data["patches"]
        )
        key_class = data.get("keyClass")
        return TestChartLayout(
            int(data["rows"]),
            int(data["cols"]),
            patches,
            ImageKeyClass.from_label(key_class) if key_class else None,
        )
    except (KeyError, IndexError, TypeError, ValueError) as exc:
        if isinstance(exc, DomainError):
            raise
        raise DomainError(f"malformed chart layout: {exc}")
