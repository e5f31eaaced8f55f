import math

import numpy as np
import pytest

from gamutlab import (
    AutoFitConfig,
    ChromaScale,
    DomainError,
    GamutMap,
    HueRotate,
    LabColor,
    LightnessScale,
    LightnessTranslate,
    MapStats,
    RasterImage,
    RGBColor,
    apply_map,
    auto_fit_detailed,
    boundary_mesh,
    contains,
    gamut_from_points,
    lab_lch,
    map_image,
    oog_fraction,
    oog_mask,
    pixels_for_region,
    rgb_to_lab,
    score_principles,
    weighted_objective,
    write_ppm,
)
from gamutlab.colorspace import rgb_to_lab_array
from gamutlab.gamut import (
    DEFAULT_FIT_WEIGHTS,
    apply_map_array,
    map_from_dicts,
    map_to_dicts,
    transform_from_dict,
    transform_to_dict,
)

from .conftest import image_from_rows, uniform_image


def lch_point(l, c, h):
    hr = math.radians(h)
    return LabColor(l, c * math.cos(hr), c * math.sin(hr))


def srgb_cloud(samples=9):
    g = np.linspace(0.0, 1.0, samples)
    cube = np.array([[r, gg, b] for r in g for gg in g for b in g])
    return rgb_to_lab_array(cube)


def brute_force_boundary(points, sectors, bands):
    """Independent segment-maxima oracle with its own binning arithmetic.

    Chroma is sqrt(a*a + b*b), the documented formula; sqrt is correctly
    rounded, so scalar and array evaluations agree bitwise.
    """
    max_c = np.zeros((sectors, bands))
    l_values = []
    for l, a, b in points:
        c = math.sqrt(a * a + b * b)
        h = math.degrees(math.atan2(b, a)) % 360.0
        s = int(h / 360.0 * sectors) % sectors
        band = min(int(l / 100.0 * bands), bands - 1)
        max_c[s, band] = max(max_c[s, band], c)
        l_values.append(l)
    return max_c, min(l_values), max(l_values)


# ---------------------------------------------------------------------------
# boundary construction


def test_all_neutral_points_zero_chroma():
    points = [LabColor(l, 0, 0) for l in (10, 50, 90)]
    bd = gamut_from_points(points, 8, 4)
    assert bd.max_chroma.max() == 0.0
    assert (bd.l_min, bd.l_max) == (10.0, 90.0)


def test_single_point_fill():
    p = lch_point(50, 20, 90)
    bd = gamut_from_points([p], 12, 6)
    lch = lab_lch(p)
    s = int(lch.h / 360 * 12) % 12
    band = min(int(lch.l / 100 * 6), 5)
    assert bd.max_chroma[s, band] == pytest.approx(20.0)
    assert bd.max_chroma.max() <= 20.0 + 1e-12
    assert bd.interpolated.sum() == 12 * 6 - 1


def test_segment_maxima_matches_brute_force(rng):
    lab = srgb_cloud(9)
    bd = gamut_from_points(lab, 36, 18)
    want, lmin, lmax = brute_force_boundary(lab, 36, 18)
    seen = want > 0
    measured = ~bd.interpolated
    # every cell with data must match exactly; cells without data are flagged
    assert np.array_equal(bd.max_chroma[measured], want[measured])
    assert bd.l_min == lmin and bd.l_max == lmax


def test_boundary_validation():
    with pytest.raises(DomainError):
        gamut_from_points([], 8, 4)
    with pytest.raises(DomainError):
        gamut_from_points([LabColor(50, 0, 0)], 3, 4)
    with pytest.raises(DomainError):
        gamut_from_points([LabColor(50, 0, 0)], 8, 2)


# ---------------------------------------------------------------------------
# containment


@pytest.fixture(scope="module")
def cloud_boundary():
    return gamut_from_points(srgb_cloud(9), 36, 18)


def test_contains_basics(cloud_boundary):
    bd = cloud_boundary
    mid = (bd.l_min + bd.l_max) / 2.0
    assert contains(bd, LabColor(mid, 0, 0))
    assert not contains(bd, LabColor(mid, 500, 0))
    assert not contains(bd, LabColor(bd.l_max + 1.0, 0, 0))


def test_containment_monotone_in_chroma(cloud_boundary, rng):
    bd = cloud_boundary
    for _ in range(100):
        l = rng.random() * 100
        h = rng.random() * 360
        c = rng.random() * 80
        p = lch_point(l, c, h)
        if contains(bd, p):
            q = lch_point(l, c * rng.random(), h)
            assert contains(bd, q)


def test_oog_fraction_constructed(cloud_boundary):
    bd = cloud_boundary
    inside = [LabColor((bd.l_min + bd.l_max) / 2, 0, 0)] * 7
    outside = [LabColor(bd.l_max + 5, 0, 0)] * 3
    assert oog_fraction(bd, inside) == 0.0
    assert oog_fraction(bd, outside) == 1.0
    assert oog_fraction(bd, inside + outside) == pytest.approx(0.3)
    with pytest.raises(DomainError):
        oog_fraction(bd, [])


# ---------------------------------------------------------------------------
# transforms


def test_empty_map_is_identity():
    p = LabColor(37.3, -12.4, 55.1)
    assert apply_map(GamutMap(), p) == p


def test_identity_parameters_are_exact():
    m = GamutMap((LightnessTranslate(0.0), LightnessScale(1.0, 50.0),
                  ChromaScale(1.0), HueRotate(0.0)))
    for p in (LabColor(37.3, -12.4, 55.1), LabColor(0, 0, 0), LabColor(99.9, 3, -7)):
        assert apply_map(m, p) == p


def test_chroma_scale_fixes_neutrals():
    p = LabColor(42.0, 0.0, 0.0)
    got = apply_map(GamutMap((ChromaScale(0.5),)), p)
    assert got == p


def test_transform_order_matters():
    p = LabColor(90, 0, 0)
    forward = GamutMap((LightnessScale(0.5, 50.0), LightnessTranslate(10.0)))
    reverse = GamutMap((LightnessTranslate(10.0), LightnessScale(0.5, 50.0)))
    assert apply_map(forward, p).l == pytest.approx(80.0)
    assert apply_map(reverse, p).l == pytest.approx(75.0)


def test_hue_invariance_of_scales(rng):
    for _ in range(100):
        p = lch_point(rng.random() * 100, 5 + rng.random() * 60, rng.random() * 360)
        src_h = lab_lch(p).h
        for m in (GamutMap((ChromaScale(0.3 + rng.random(),),)),
                  GamutMap((LightnessTranslate(rng.normal() * 10),)),
                  GamutMap((LightnessScale(0.5 + rng.random(), 50.0),))):
            got_h = lab_lch(apply_map(m, p)).h
            dh = abs((got_h - src_h + 180.0) % 360.0 - 180.0)
            assert dh < 1e-9


def test_lightness_clamp_counted():
    stats = MapStats()
    got = apply_map(GamutMap((LightnessTranslate(60.0),)), LabColor(90, 0, 0), stats)
    assert got.l == 100.0
    assert stats.lightness_clamped == 1
    stats2 = MapStats()
    apply_map(GamutMap((LightnessTranslate(5.0),)), LabColor(90, 0, 0), stats2)
    assert stats2.lightness_clamped == 0


def test_hue_rotate_normalization():
    assert HueRotate(190.0).theta == pytest.approx(-170.0)
    assert HueRotate(-180.0).theta == 180.0
    assert HueRotate(180.0).theta == 180.0
    assert HueRotate(540.0).theta == 180.0


def test_scale_validation():
    with pytest.raises(DomainError):
        ChromaScale(0.0)
    with pytest.raises(DomainError):
        LightnessScale(-1.0)


def test_transform_dict_round_trip():
    transforms = (LightnessTranslate(-3.5), LightnessScale(0.8, 50.0),
                  ChromaScale(1.2), HueRotate(15.0))
    m = GamutMap(transforms)
    back = map_from_dicts(map_to_dicts(m))
    assert back == m
    with pytest.raises(DomainError):
        transform_from_dict({"type": "bogus"})
    with pytest.raises(DomainError):
        transform_from_dict({"type": "chromaScale"})
    assert transform_to_dict(HueRotate(10))["type"] == "hueRotate"


# ---------------------------------------------------------------------------
# scoring


def test_identity_scores_clean(cloud_boundary):
    src = srgb_cloud(5)
    scores = score_principles(src, cloud_boundary, GamutMap())
    assert scores.gray_axis_deviation == pytest.approx(0.0, abs=1e-9)
    assert scores.oog_fraction == 0.0
    assert scores.mean_abs_hue_shift == pytest.approx(0.0, abs=1e-9)
    assert scores.chroma_decrease_fraction == 0.0
    assert scores.luminance_contrast == pytest.approx(1.0)


def test_uniform_hue_rotation_score(cloud_boundary):
    src = srgb_cloud(5)
    scores = score_principles(src, cloud_boundary, GamutMap((HueRotate(10.0),)))
    assert scores.mean_abs_hue_shift == pytest.approx(10.0, abs=1e-6)


def test_chroma_halving_scores_full_decrease(cloud_boundary):
    src = [lch_point(50, 30 + i, i * 36.0) for i in range(10)]
    scores = score_principles(src, cloud_boundary, GamutMap((ChromaScale(0.5),)))
    assert scores.chroma_decrease_fraction == 1.0


def test_gray_axis_deviation_zero_for_template(rng, cloud_boundary):
    neutrals = [LabColor(float(l), 0.0, 0.0) for l in rng.random(50) * 100]
    for _ in range(100):
        m = GamutMap((
            LightnessTranslate(float(rng.normal() * 20)),
            LightnessScale(float(0.3 + rng.random() * 1.4), 50.0),
            ChromaScale(float(0.3 + rng.random() * 1.4)),
        ))
        scores = score_principles(neutrals, cloud_boundary, m)
        assert scores.gray_axis_deviation < 1e-9


# ---------------------------------------------------------------------------
# auto-fit


def inflated_source(bd_points: np.ndarray, factor: float = 1.2) -> np.ndarray:
    out = bd_points.copy()
    out[:, 1] *= factor
    out[:, 2] *= factor
    return out


def test_auto_fit_recovers_chroma_inflation(cloud_boundary):
    dest_points = srgb_cloud(10)
    bd = gamut_from_points(dest_points, 36, 18)
    src = inflated_source(dest_points)
    result = auto_fit_detailed(src, bd)
    chroma_scales = [t for t in result.map if isinstance(t, ChromaScale)]
    assert len(chroma_scales) == 1
    assert 0.78 <= chroma_scales[0].s <= 0.90
    assert result.scores.oog_fraction <= 0.05
    trace = result.objective_trace
    assert all(b <= a for a, b in zip(trace, trace[1:]))


def test_auto_fit_beats_brute_force_coarse(cloud_boundary):
    dest_points = srgb_cloud(8)
    bd = gamut_from_points(dest_points, 36, 18)
    src = inflated_source(dest_points)
    result = auto_fit_detailed(src, bd)
    # coarse exhaustive oracle over the same template space
    best = math.inf
    for d in np.linspace(-10, 10, 5):
        for s in np.linspace(0.8, 1.2, 5):
            for cs in np.linspace(0.5, 1.1, 25):
                m = GamutMap((LightnessTranslate(float(d)),
                              LightnessScale(float(s), 50.0), ChromaScale(float(cs))))
                obj = weighted_objective(score_principles(src, bd, m), DEFAULT_FIT_WEIGHTS)
                best = min(best, obj)
    assert result.objective <= best + 1e-9


def test_auto_fit_keeps_contained_source_unchanged(cloud_boundary):
    # strictly inside: the boundary's own samples with chroma pulled in
    src = inflated_source(srgb_cloud(9), factor=0.8)
    result = auto_fit_detailed(src, cloud_boundary)
    identity_obj = weighted_objective(
        score_principles(src, cloud_boundary, GamutMap()), DEFAULT_FIT_WEIGHTS
    )
    assert result.objective <= identity_obj
    assert result.scores.oog_fraction == 0.0


def test_auto_fit_weight_validation(cloud_boundary):
    src = srgb_cloud(4)
    with pytest.raises(DomainError):
        auto_fit_detailed(src, cloud_boundary, (0, 0, 0, 0, 0))
    with pytest.raises(DomainError):
        auto_fit_detailed(src, cloud_boundary, (1, 1, -1, 1, 1))
    with pytest.raises(DomainError):
        auto_fit_detailed(src, cloud_boundary, (1, 1, 1))


def test_auto_fit_deterministic(cloud_boundary):
    src = srgb_cloud(5)
    a = auto_fit_detailed(src, cloud_boundary)
    b = auto_fit_detailed(src, cloud_boundary)
    assert a.map == b.map
    assert a.objective == b.objective


# ---------------------------------------------------------------------------
# image operations


def test_map_image_identity_bit_for_bit(rng):
    px = rng.random((6, 5, 3))
    img = RasterImage(5, 6, px)
    mapped = map_image(img, GamutMap())
    assert write_ppm(mapped) == write_ppm(img)


def test_map_image_neutral_fixed_point():
    img = uniform_image(RGBColor(0.4, 0.4, 0.4), 3, 3)
    mapped = map_image(img, GamutMap((ChromaScale(0.5),)))
    assert np.abs(mapped.pixels - img.pixels).max() <= 1.0 / 255.0


def test_map_image_matches_scalar_path(rng):
    from gamutlab import lab_to_rgb

    px = rng.random((4, 4, 3))
    img = RasterImage(4, 4, px)
    m = GamutMap((LightnessTranslate(-20.0),))
    mapped = map_image(img, m)
    for _ in range(10):
        r, c = rng.integers(0, 4, 2)
        # scalar recomputation: lightness drops by 20 before clamping,
        # then the pixel is the sRGB rendering of that Lab value
        src_lab = rgb_to_lab(img.pixel(r, c))
        scalar_lab = apply_map(m, src_lab)
        assert scalar_lab.l == pytest.approx(max(src_lab.l - 20.0, 0.0), abs=1e-9)
        want_rgb, _ = lab_to_rgb(scalar_lab)
        got = mapped.pixel(r, c)
        assert got.r == pytest.approx(want_rgb.r, abs=1e-7)
        assert got.g == pytest.approx(want_rgb.g, abs=1e-7)
        assert got.b == pytest.approx(want_rgb.b, abs=1e-7)


def test_oog_mask_self_containment(rng):
    px = rng.random((5, 5, 3))
    img = RasterImage(5, 5, px)
    bd = gamut_from_points(rgb_to_lab_array(px.reshape(-1, 3)), 12, 6)
    assert not oog_mask(img, bd).any()


def test_oog_mask_degenerate_boundary():
    import gamutlab.gamut as gamut_mod

    colorful = image_from_rows([
        [RGBColor(1, 0, 0), RGBColor(0, 1, 0)],
        [RGBColor(0, 0, 1), RGBColor(1, 1, 0)],
    ])
    bd = gamut_mod.GamutBoundary(
        8, 4, np.zeros((8, 4)), 50.0, 50.0, np.zeros((8, 4), dtype=bool)
    )
    assert oog_mask(colorful, bd).all()


def test_oog_mask_half_density():
    # boundary from the inside color's own measured Lab, so containment
    # is exact for it; white sits above the lightness range
    inside = RGBColor(0.5, 0.5, 0.5)
    outside = RGBColor(1.0, 1.0, 1.0)
    img = image_from_rows([[inside, outside], [outside, inside]])
    inside_lab = rgb_to_lab_array(np.array([[inside.r, inside.g, inside.b]]))
    bd = gamut_from_points(inside_lab, 8, 4)
    mask = oog_mask(img, bd)
    assert mask.mean() == 0.5
    assert mask[0, 1] and mask[1, 0]
    assert not mask[0, 0] and not mask[1, 1]


def test_pixels_for_region():
    img = uniform_image(RGBColor(0.2, 0.6, 0.9), 3, 2)
    lch = lab_lch(rgb_to_lab(RGBColor(0.2, 0.6, 0.9)))
    hits = pixels_for_region(
        img, (lch.l - 1, lch.l + 1), (lch.c - 1, lch.c + 1), (lch.h - 2, lch.h + 2)
    )
    assert sorted(hits) == [(r, c) for r in range(2) for c in range(3)]
    assert pixels_for_region(img, (0, 1), (0, 1), (0, 1)) == []


def test_pixels_for_region_hue_wrap():
    # pixel with hue ~= 0 degrees (a > 0, b ~= 0)
    zero_hue = rgb_to_lab(RGBColor(0.8, 0.55, 0.62))
    h = lab_lch(zero_hue).h
    assert h < 15.0 or h > 345.0
    img = uniform_image(RGBColor(0.8, 0.55, 0.62), 2, 2)
    hits = pixels_for_region(img, (0, 100), (0, 200), (350.0, 10.0))
    assert len(hits) == 4


# ---------------------------------------------------------------------------
# mesh


def edge_counts(triangles):
    counts = {}
    for a, b, c in triangles:
        for e in ((a, b), (b, c), (c, a)):
            key = tuple(sorted(e))
            counts[key] = counts.get(key, 0) + 1
    return counts


def test_mesh_vertex_count():
    bd = gamut_from_points(srgb_cloud(5), 12, 6)
    mesh = boundary_mesh(bd)
    assert len(mesh.vertices) == 12 * 6 + 2
    assert len(mesh.triangles) == 2 * 12 * 6


def test_mesh_watertight():
    bd = gamut_from_points(srgb_cloud(5), 12, 6)
    mesh = boundary_mesh(bd)
    for count in edge_counts(mesh.triangles).values():
        assert count == 2


def test_mesh_degenerate_neutral_boundary():
    bd = gamut_from_points([LabColor(l, 0, 0) for l in (20, 50, 80)], 8, 4)
    mesh = boundary_mesh(bd)
    n = len(mesh.vertices)
    assert n == 8 * 4 + 2
    for tri in mesh.triangles:
        assert all(0 <= idx < n for idx in tri)
    for count in edge_counts(mesh.triangles).values():
        assert count == 2
