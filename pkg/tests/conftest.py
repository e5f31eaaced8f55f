"""Shared test fixtures and synthetic-data helpers."""

from __future__ import annotations

import numpy as np
import pytest

from gamutlab import LabColor, RasterImage, RGBColor, lab_to_rgb, rgb_to_lab


def gray_for_lstar(l_target: float, at_or_below: bool = False) -> RGBColor:
    """Gray whose measured L* equals l_target to machine precision.

    Class borders belong to the lower class, so border-valued images are
    represented just below the border: with at_or_below the returned gray
    is nudged by ulps until its L*, measured through the same array path
    the histogram uses, sits strictly under l_target.
    """
    from gamutlab.colorspace import rgb_to_lab_array

    rgb, in_gamut = lab_to_rgb(LabColor(l_target, 0.0, 0.0))
    assert in_gamut
    v = rgb.r

    def measured(value: float) -> float:
        arr = np.array([[value, value, value]])
        return float(max(rgb_to_lab_array(arr)[0, 0], rgb_to_lab(RGBColor(value, value, value)).l))

    if at_or_below:
        while measured(v) >= l_target:
            v = float(np.nextafter(v, 0.0))
    return RGBColor(v, v, v)


def uniform_image(color: RGBColor, width: int = 4, height: int = 4) -> RasterImage:
    return RasterImage.filled(width, height, color)


def image_from_rows(rows: list[list[RGBColor]]) -> RasterImage:
    height = len(rows)
    width = len(rows[0])
    px = np.array([[[c.r, c.g, c.b] for c in row] for row in rows], dtype=float)
    return RasterImage(width, height, px)


def cgats_text(entries: list[tuple[float, float, float, float, float, float]],
               line_ending: str = "\n", extra_columns: bool = False) -> str:
    """Minimal CGATS file; entries are (r8, g8, b8, L, a, b) with RGB on
    the 0-255 scale."""
    cols = "SAMPLE_ID RGB_R RGB_G RGB_B LAB_L LAB_A LAB_B" if extra_columns \
        else "RGB_R RGB_G RGB_B LAB_L LAB_A LAB_B"
    lines = [
        'ORIGINATOR "gamutlab tests"',
        "NUMBER_OF_FIELDS %d" % len(cols.split()),
        "BEGIN_DATA_FORMAT",
        cols,
        "END_DATA_FORMAT",
        "NUMBER_OF_SETS %d" % len(entries),
        "BEGIN_DATA",
    ]
    for i, (r, g, b, L, a, bb) in enumerate(entries, start=1):
        prefix = f"A{i} " if extra_columns else ""
        lines.append(f"{prefix}{r:g} {g:g} {b:g} {L:g} {a:g} {bb:g}")
    lines.append("END_DATA")
    return line_ending.join(lines) + line_ending


def identity_measurement_entries(steps: int = 3):
    """Device measurements of an sRGB-faithful device on a steps^3 grid."""
    values = np.linspace(0.0, 255.0, steps)
    entries = []
    for r in values:
        for g in values:
            for b in values:
                lab = rgb_to_lab(RGBColor(r / 255.0, g / 255.0, b / 255.0))
                entries.append((r, g, b, lab.l, lab.a, lab.b))
    return entries


@pytest.fixture
def rng():
    return np.random.default_rng(20260810)
