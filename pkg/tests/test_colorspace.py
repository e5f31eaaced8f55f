import math

import numpy as np
import pytest

from gamutlab import (
    D65,
    DomainError,
    LabColor,
    LChColor,
    RGBColor,
    SeparationParams,
    delta_e76,
    lab_lch,
    lab_to_rgb,
    lch_lab,
    rgb_to_lab,
    separate_to_cmyk,
    srgb_decode,
)
from gamutlab.colorspace import (
    lab_to_rgb_array,
    rgb_to_lab_array,
    separate_to_cmyk_array,
)

# Published XYZ -> linear sRGB matrix, used as an oracle independent of
# the library's own (numerically inverted) matrix.
# http://www.brucelindbloom.com/index.html?Eqn_XYZ_to_RGB.html
XYZ_TO_SRGB_PUBLISHED = [
    [3.2404542, -1.5371385, -0.4985314],
    [-0.9692660, 1.8760108, 0.0415560],
    [0.0556434, -0.2040259, 1.0572252],
]


def test_decode_fixed_points():
    assert srgb_decode(RGBColor(0, 0, 0)) == (0.0, 0.0, 0.0)
    assert srgb_decode(RGBColor(1, 1, 1)) == (1.0, 1.0, 1.0)


def test_decode_half_gray():
    # independent evaluation of the piecewise decode at 0.5
    expected = ((0.5 + 0.055) / 1.055) ** 2.4
    assert abs(expected - 0.21404114048223255) < 1e-15
    got = srgb_decode(RGBColor(0.5, 0.5, 0.5))
    for channel in got:
        assert abs(channel - expected) < 1e-12


def test_decode_rejects_out_of_range_channels():
    with pytest.raises(DomainError):
        RGBColor(1.2, 0.0, 0.0)
    with pytest.raises(DomainError):
        RGBColor(0.0, -0.1, 0.0)


def test_white_and_black_lab():
    white = rgb_to_lab(RGBColor(1, 1, 1))
    assert abs(white.l - 100.0) < 1e-9
    assert abs(white.a) < 1e-9 and abs(white.b) < 1e-9
    black = rgb_to_lab(RGBColor(0, 0, 0))
    assert abs(black.l) < 1e-9 and abs(black.a) < 1e-9 and abs(black.b) < 1e-9


def test_mid_gray_lab():
    # independent chain: decode -> Y (gray: Y equals the linear value) -> L
    lin = ((0.5 + 0.055) / 1.055) ** 2.4
    expected_l = 116.0 * lin ** (1.0 / 3.0) - 16.0
    assert abs(expected_l - 53.38896474111432) < 1e-12
    lab = rgb_to_lab(RGBColor(0.5, 0.5, 0.5))
    assert abs(lab.l - expected_l) < 1e-9
    assert abs(lab.a) < 1e-9 and abs(lab.b) < 1e-9


def test_lab_to_rgb_white_exact():
    rgb, in_gamut = lab_to_rgb(LabColor(100, 0, 0))
    assert in_gamut
    assert abs(rgb.r - 1) < 1e-9 and abs(rgb.g - 1) < 1e-9 and abs(rgb.b - 1) < 1e-9


def test_round_trip_random(rng):
    for _ in range(1000):
        r, g, b = rng.random(3)
        rgb = RGBColor(r, g, b)
        back, in_gamut = lab_to_rgb(rgb_to_lab(rgb))
        assert in_gamut
        assert abs(back.r - r) < 1e-7
        assert abs(back.g - g) < 1e-7
        assert abs(back.b - b) < 1e-7


def test_out_of_gamut_lab_is_flagged_and_clamped():
    lab = LabColor(50, 100, -100)
    # oracle: compute the pre-clamp linear channels with the published
    # inverse matrix and the Lab f-inverse
    delta = 6.0 / 29.0
    fy = (lab.l + 16) / 116
    fx = fy + lab.a / 500
    fz = fy - lab.b / 200
    finv = lambda t: t ** 3 if t > delta else 3 * delta * delta * (t - 4.0 / 29.0)
    xyz = (finv(fx) * D65.xn, finv(fy) * D65.yn, finv(fz) * D65.zn)
    linear = [sum(m * c for m, c in zip(row, xyz)) for row in XYZ_TO_SRGB_PUBLISHED]
    assert any(c < 0 or c > 1 for c in linear)

    rgb, in_gamut = lab_to_rgb(lab)
    assert not in_gamut
    for channel in (rgb.r, rgb.g, rgb.b):
        assert 0.0 <= channel <= 1.0


def test_lch_neutral_and_345():
    neutral = lab_lch(LabColor(50, 0, 0))
    assert (neutral.l, neutral.c, neutral.h) == (50, 0, 0)
    lch = lab_lch(LabColor(50, 3, 4))
    assert abs(lch.c - 5.0) < 1e-12
    assert abs(lch.h - math.degrees(math.atan2(4, 3))) < 1e-12
    assert abs(lch.h - 53.13010235415598) < 1e-9


def test_lch_round_trip(rng):
    for _ in range(200):
        lab = LabColor(rng.random() * 100, rng.normal() * 60, rng.normal() * 60)
        back = lch_lab(lab_lch(lab))
        assert abs(back.l - lab.l) < 1e-9
        assert abs(back.a - lab.a) < 1e-9
        assert abs(back.b - lab.b) < 1e-9


def test_lch_hue_normalized(rng):
    for _ in range(200):
        lch = lab_lch(LabColor(50, rng.normal() * 50, rng.normal() * 50))
        assert 0.0 <= lch.h < 360.0
        assert lch.c >= 0.0


def test_delta_e76_metric(rng):
    p = LabColor(50, 0, 0)
    q = LabColor(50, 3, 4)
    assert delta_e76(p, p) == 0.0
    assert delta_e76(p, q) == 5.0
    assert delta_e76(q, p) == 5.0
    for _ in range(100):
        a, b, c = (LabColor(*(rng.random(3) * 100)) for _ in range(3))
        assert delta_e76(a, b) >= 0
        assert delta_e76(a, b) == delta_e76(b, a)
        assert delta_e76(a, c) <= delta_e76(a, b) + delta_e76(b, c) + 1e-12


def test_separation_gray_full_gcr():
    got = separate_to_cmyk(RGBColor(0.5, 0.5, 0.5), SeparationParams(1.0, 0.0, 1.0, 3.2))
    assert abs(got.c - 0.25) < 1e-12
    assert abs(got.m - 0.25) < 1e-12
    assert abs(got.y - 0.25) < 1e-12
    assert abs(got.k - 0.25) < 1e-12


def test_separation_pure_red_no_black():
    got = separate_to_cmyk(RGBColor(1, 0, 0), SeparationParams(0.8, 0.1, 0.5, 3.0))
    assert (got.c, got.m, got.y, got.k) == (0.0, 1.0, 1.0, 0.0)


def test_separation_black_ink_limit_scaling():
    got = separate_to_cmyk(RGBColor(0, 0, 0), SeparationParams(0.0, 0.0, 1.0, 2.4))
    assert abs(got.c - 0.8) < 1e-12
    assert abs(got.m - 0.8) < 1e-12
    assert abs(got.y - 0.8) < 1e-12
    assert got.k == 0.0


def test_separation_ink_cap_and_neutrality(rng):
    for _ in range(200):
        params = SeparationParams(
            rng.random(), rng.random(), 0.05 + 0.95 * rng.random(), 1.0 + 3.0 * rng.random()
        )
        rgb = RGBColor(*rng.random(3))
        got = separate_to_cmyk(rgb, params)
        assert got.c + got.m + got.y + got.k <= params.total_ink_limit + 1e-9
        for channel in (got.c, got.m, got.y, got.k):
            assert 0.0 <= channel <= 1.0 + 1e-12
    # full GCR keeps gray symmetric, with some black for any v < 1
    for v in (0.0, 0.2, 0.5, 0.9):
        got = separate_to_cmyk(RGBColor(v, v, v), SeparationParams(1.0, 0.0, 1.0, 3.2))
        assert got.c == got.m == got.y
        assert got.k > 0.0


def test_separation_params_validation():
    with pytest.raises(DomainError):
        SeparationParams(1.5, 0, 1, 3)
    with pytest.raises(DomainError):
        SeparationParams(0.5, 0, 0, 3)
    with pytest.raises(DomainError):
        SeparationParams(0.5, 0, 1, 5)


def test_array_paths_match_scalar(rng):
    rgb = rng.random((64, 3))
    lab = rgb_to_lab_array(rgb)
    for i in range(0, 64, 7):
        scalar = rgb_to_lab(RGBColor(*rgb[i]))
        assert abs(lab[i, 0] - scalar.l) < 1e-12
        assert abs(lab[i, 1] - scalar.a) < 1e-12
        assert abs(lab[i, 2] - scalar.b) < 1e-12
    back, in_gamut = lab_to_rgb_array(lab)
    assert in_gamut.all()
    assert np.abs(back - rgb).max() < 1e-7

    params = SeparationParams(0.7, 0.2, 0.6, 3.2)
    cmyk = separate_to_cmyk_array(rgb, params)
    for i in range(0, 64, 7):
        scalar = separate_to_cmyk(RGBColor(*rgb[i]), params)
        assert np.abs(cmyk[i] - [scalar.c, scalar.m, scalar.y, scalar.k]).max() < 1e-12


def test_neutral_closure_and_lightness_monotonicity():
    previous = -1.0
    for v in np.linspace(0, 1, 101):
        lab = rgb_to_lab(RGBColor(v, v, v))
        assert abs(lab.a) < 1e-9 and abs(lab.b) < 1e-9
        assert lab.l > previous
        previous = lab.l
