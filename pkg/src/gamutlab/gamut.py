"""Gamut boundaries, containment, mapping transforms and auto-fit.

The boundary representation is segment maxima: a hue-sector by
lightness-band grid storing the maximum chroma seen in each cell, plus
the gray-axis lightness range. Unlike a convex hull it preserves
concavities in hue and lightness slices, and containment is a single
cell lookup.

Gamut maps are ordered lists of elementary transforms (lightness
translate/scale, chroma scale, hue rotate). They are applied in LCh
terms but computed directly on Lab components, so identity parameters
reproduce inputs bit for bit and neutrals (a = b = 0) stay neutral
exactly.

Mapping quality is scored on five appearance criteria: gray-axis
preservation, luminance contrast, few out-of-gamut colors, small hue
shifts, and no chroma loss. ``auto_fit`` minimizes their weighted sum
over a translate/scale/chroma-scale template by coordinate descent on
successively refined grids.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .colorspace import (
    LabColor,
    lab_to_lch_array,
    lab_to_rgb_array,
    rgb_to_lab_array,
)
from .errors import DomainError
from .formats import RasterImage

DEFAULT_HUE_SECTORS = 36
DEFAULT_LIGHTNESS_BANDS = 18

# Chroma below this is treated as neutral when scoring; decreases smaller
# than CHROMA_DECREASE_EPS are not counted as losses.
NEUTRAL_CHROMA = 0.5
CHROMA_DECREASE_EPS = 0.1

DEFAULT_FIT_WEIGHTS = (1.0, 1.0, 4.0, 1.0, 0.25)


# ---------------------------------------------------------------------------
# Boundary

@dataclass
class GamutBoundary:
    """Segment-maxima boundary: max chroma per (hue sector, lightness band)."""

    hue_sectors: int
    lightness_bands: int
    max_chroma: np.ndarray          # shape (hue_sectors, lightness_bands)
    l_min: float
    l_max: float
    interpolated: np.ndarray        # bool, same shape; True where cell had no data

    def __post_init__(self):
        self.max_chroma = np.asarray(self.max_chroma, dtype=float)
        self.interpolated = np.asarray(self.interpolated, dtype=bool)
        shape = (self.hue_sectors, self.lightness_bands)
        if self.max_chroma.shape != shape or self.interpolated.shape != shape:
            raise DomainError("boundary grid shapes do not match sector/band counts")
        if self.l_min > self.l_max:
            raise DomainError(f"l_min {self.l_min} > l_max {self.l_max}")
        if self.max_chroma.min() < 0.0:
            raise DomainError("negative max chroma")


def _points_array(points) -> np.ndarray:
    if isinstance(points, np.ndarray):
        arr = np.asarray(points, dtype=float)
    else:
        arr = np.array([[p.l, p.a, p.b] for p in points], dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 3 or arr.shape[0] == 0:
        raise DomainError("expected a nonempty list of Lab points")
    return arr


def _cell_indices(lch: np.ndarray, sectors: int, bands: int) -> tuple[np.ndarray, np.ndarray]:
    sec = (lch[:, 2] / 360.0 * sectors).astype(int) % sectors
    band = np.clip((lch[:, 0] / 100.0 * bands).astype(int), 0, bands - 1)
    return sec, band


def gamut_from_points(
    points,
    hue_sectors: int = DEFAULT_HUE_SECTORS,
    lightness_bands: int = DEFAULT_LIGHTNESS_BANDS,
) -> GamutBoundary:
    """Build a segment-maxima boundary from Lab points.

    Cells with no data take the chroma of the circularly nearest
    populated cell in the same lightness band (searching lower sector
    indices first) and are flagged interpolated; bands with no data at
    all stay at zero chroma.
    """
    if hue_sectors < 4:
        raise DomainError(f"hue_sectors {hue_sectors} < 4")
    if lightness_bands < 3:
        raise DomainError(f"lightness_bands {lightness_bands} < 3")
    arr = _points_array(points)
    lch = lab_to_lch_array(arr)
    sec, band = _cell_indices(lch, hue_sectors, lightness_bands)

    max_chroma = np.zeros((hue_sectors, lightness_bands))
    seen = np.zeros((hue_sectors, lightness_bands), dtype=bool)
    np.maximum.at(max_chroma, (sec, band), lch[:, 1])
    seen[sec, band] = True

    interpolated = ~seen
    for b in range(lightness_bands):
        filled = np.flatnonzero(seen[:, b])
        if filled.size == 0 or filled.size == hue_sectors:
            continue
        for s in np.flatnonzero(~seen[:, b]):
            for dist in range(1, hue_sectors):
                for cand in ((s - dist) % hue_sectors, (s + dist) % hue_sectors):
                    if seen[cand, b]:
                        max_chroma[s, b] = max_chroma[cand, b]
                        break
                else:
                    continue
                break

    return GamutBoundary(
        hue_sectors,
        lightness_bands,
        max_chroma,
        float(lch[:, 0].min()),
        float(lch[:, 0].max()),
        interpolated,
    )


def contains(bd: GamutBoundary, p: LabColor) -> bool:
    """True iff p lies within the boundary's lightness range and its
    chroma does not exceed its cell's maximum."""
    return bool(contains_array(bd, np.array([[p.l, p.a, p.b]]))[0])


def contains_array(bd: GamutBoundary, points: np.ndarray) -> np.ndarray:
    lch = lab_to_lch_array(np.asarray(points, dtype=float))
    sec, band = _cell_indices(lch, bd.hue_sectors, bd.lightness_bands)
    in_l = (lch[:, 0] >= bd.l_min) & (lch[:, 0] <= bd.l_max)
    return in_l & (lch[:, 1] <= bd.max_chroma[sec, band])


def oog_fraction(bd: GamutBoundary, points) -> float:
    """Fraction of points outside the boundary."""
    arr = _points_array(points)
    return float(1.0 - contains_array(bd, arr).mean())


# ---------------------------------------------------------------------------
# Elementary transforms

@dataclass(frozen=True)
class LightnessTranslate:
    d: float


@dataclass(frozen=True)
class LightnessScale:
    s: float
    pivot: float = 50.0

    def __post_init__(self):
        if self.s <= 0.0:
            raise DomainError(f"lightness scale {self.s} must be > 0")


@dataclass(frozen=True)
class ChromaScale:
    s: float

    def __post_init__(self):
        if self.s <= 0.0:
            raise DomainError(f"chroma scale {self.s} must be > 0")


@dataclass(frozen=True)
class HueRotate:
    """Rotation in degrees, normalized to (-180, 180]."""

    theta: float

    def __post_init__(self):
        norm = -((-self.theta + 180.0) % 360.0 - 180.0)
        object.__setattr__(self, "theta", 180.0 if norm == -180.0 else norm)


ElementaryTransform = LightnessTranslate | LightnessScale | ChromaScale | HueRotate


@dataclass(frozen=True)
class GamutMap:
    """Ordered elementary transforms; application order is list order."""

    transforms: tuple[ElementaryTransform, ...] = ()

    def __iter__(self):
        return iter(self.transforms)


def transform_to_dict(t: ElementaryTransform) -> dict:
    """Wire form of one transform (schema in docs/formats.md)."""
    if isinstance(t, LightnessTranslate):
        return {"type": "lightnessTranslate", "d": t.d}
    if isinstance(t, LightnessScale):
        return {"type": "lightnessScale", "s": t.s, "pivot": t.pivot}
    if isinstance(t, ChromaScale):
        return {"type": "chromaScale", "s": t.s}
    if isinstance(t, HueRotate):
        return {"type": "hueRotate", "theta": t.theta}
    raise DomainError(f"unknown transform {t!r}")


def transform_from_dict(data: dict) -> ElementaryTransform:
    try:
        kind = data["type"]
        if kind == "lightnessTranslate":
            return LightnessTranslate(float(data["d"]))
        if kind == "lightnessScale":
            return LightnessScale(float(data["s"]), float(data.get("pivot", 50.0)))
        if kind == "chromaScale":
            return ChromaScale(float(data["s"]))
        if kind == "hueRotate":
            return HueRotate(float(data["theta"]))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, DomainError):
            raise
        raise DomainError(f"malformed transform: {exc}")
    raise DomainError(f"unknown transform type {kind!r}")


def map_to_dicts(m: GamutMap) -> list[dict]:
    return [transform_to_dict(t) for t in m]


def map_from_dicts(items: list[dict]) -> GamutMap:
    if not isinstance(items, (list, tuple)):
        raise DomainError("transform list must be an array")
    return GamutMap(tuple(transform_from_dict(item) for item in items))


@dataclass
class MapStats:
    """Diagnostics accumulated while applying a map."""

    lightness_clamped: int = 0


def apply_map(m: GamutMap, p: LabColor, stats: MapStats | None = None) -> LabColor:
    """Apply transforms in order; final lightness is clamped to [0, 100]
    (counted in stats when given, never silently dropped elsewhere)."""
    out = apply_map_array(m, np.array([[p.l, p.a, p.b]]), stats)[0]
    return LabColor(float(out[0]), float(out[1]), float(out[2]))


def apply_map_array(m: GamutMap, points: np.ndarray, stats: MapStats | None = None) -> np.ndarray:
    arr = np.array(points, dtype=float, copy=True)
    for t in m:
        if isinstance(t, LightnessTranslate):
            arr[:, 0] += t.d
        elif isinstance(t, LightnessScale):
            # written so s == 1 is exactly the identity
            arr[:, 0] = arr[:, 0] * t.s + t.pivot * (1.0 - t.s)
        elif isinstance(t, ChromaScale):
            arr[:, 1] *= t.s
            arr[:, 2] *= t.s
        elif isinstance(t, HueRotate):
            rad = math.radians(t.theta)
            cos_t, sin_t = math.cos(rad), math.sin(rad)
            a = arr[:, 1] * cos_t - arr[:, 2] * sin_t
            b = arr[:, 1] * sin_t + arr[:, 2] * cos_t
            arr[:, 1], arr[:, 2] = a, b
        else:
            raise DomainError(f"unknown transform {t!r}")
    clipped = (arr[:, 0] < 0.0) | (arr[:, 0] > 100.0)
    if stats is not None:
        stats.lightness_clamped += int(clipped.sum())
    arr[:, 0] = np.clip(arr[:, 0], 0.0, 100.0)
    return arr


# ---------------------------------------------------------------------------
# Scoring

@dataclass(frozen=True)
class MappingScores:
    """The five appearance criteria, all nonnegative and finite."""

    gray_axis_deviation: float      # max chroma of mapped neutral inputs
    luminance_contrast: float       # mapped L* span / destination L* span
    oog_fraction: float             # mapped points outside the destination
    mean_abs_hue_shift: float       # degrees, chromatic inputs only
    chroma_decrease_fraction: float # chromatic inputs losing chroma

    def as_dict(self) -> dict:
        return {
            "grayAxisDeviation": self.gray_axis_deviation,
            "luminanceContrast": self.luminance_contrast,
            "oogFraction": self.oog_fraction,
            "meanAbsHueShift": self.mean_abs_hue_shift,
            "chromaDecreaseFraction": self.chroma_decrease_fraction,
        }


def score_principles(src, bd: GamutBoundary, m: GamutMap) -> MappingScores:
    """Score a map over source points against a destination boundary."""
    arr = _points_array(src)
    return _score_arrays(arr, lab_to_lch_array(arr), bd, apply_map_array(m, arr))


def _score_arrays(
    src: np.ndarray, src_lch: np.ndarray, bd: GamutBoundary, mapped: np.ndarray
) -> MappingScores:
    mapped_lch = lab_to_lch_array(mapped)
    chromatic = src_lch[:, 1] > NEUTRAL_CHROMA

    if np.all(chromatic):
        gray_dev = 0.0
    else:
        gray_dev = float(mapped_lch[~chromatic, 1].max())

    dest_span = bd.l_max - bd.l_min
    span = float(mapped[:, 0].max() - mapped[:, 0].min())
    contrast = span / dest_span if dest_span > 0.0 else (1.0 if span == 0.0 else math.inf)
    if not math.isfinite(contrast):
        contrast = 1e9

    oog = float(1.0 - contains_array(bd, mapped).mean())

    if np.any(chromatic):
        dh = np.abs(
            (mapped_lch[chromatic, 2] - src_lch[chromatic, 2] + 180.0) % 360.0 - 180.0
        )
        hue_shift = float(dh.mean())
        dec = float(
            (mapped_lch[chromatic, 1] < src_lch[chromatic, 1] - CHROMA_DECREASE_EPS).mean()
        )
    else:
        hue_shift = 0.0
        dec = 0.0

    return MappingScores(gray_dev, contrast, oog, hue_shift, dec)


def weighted_objective(scores: MappingScores, weights) -> float:
    """Weighted sum of the five criteria, each normalized to O(1)."""
    w1, w2, w3, w4, w5 = weights
    return (
        w3 * scores.oog_fraction
        + w1 * scores.gray_axis_deviation / 100.0
        + w2 * max(0.0, 1.0 - scores.luminance_contrast)
        + w4 * scores.mean_abs_hue_shift / 180.0
        + w5 * scores.chroma_decrease_fraction
    )


# ---------------------------------------------------------------------------
# Auto-fit

@dataclass(frozen=True)
class AutoFitConfig:
    """Coordinate-descent settings for auto_fit.

    Axis order is chroma scale, lightness translate, lightness scale:
    containment moves first, then the lightness placement refines. Grid
    spans shrink by ``shrink`` per round.

    Objectives are compared at ``objective_resolution``: moves need a
    full resolution step of improvement, and among candidates tied at
    that resolution the one closest to the axis' identity value wins, so
    no transform is applied without need and float noise cannot walk the
    parameters away from identity across a flat plateau.
    """

    translate_range: tuple[float, float] = (-50.0, 50.0)
    scale_range: tuple[float, float] = (0.2, 2.0)
    chroma_range: tuple[float, float] = (0.2, 2.0)
    grid_points: int = 21
    rounds: int = 4
    shrink: float = 0.35
    pivot: float = 50.0
    objective_resolution: float = 1e-9


@dataclass
class AutoFitResult:
    map: GamutMap
    scores: MappingScores
    objective: float
    objective_trace: list[float] = field(default_factory=list)


def auto_fit(src, bd: GamutBoundary, weights=DEFAULT_FIT_WEIGHTS, cfg: AutoFitConfig | None = None) -> GamutMap:
    """Fit [LightnessTranslate, LightnessScale, ChromaScale] to the
    destination boundary; hue rotation is never introduced automatically."""
    return auto_fit_detailed(src, bd, weights, cfg).map


def auto_fit_detailed(
    src, bd: GamutBoundary, weights=DEFAULT_FIT_WEIGHTS, cfg: AutoFitConfig | None = None
) -> AutoFitResult:
    weights = tuple(float(w) for w in weights)
    if len(weights) != 5:
        raise DomainError(f"expected 5 weights, got {len(weights)}")
    if any(w < 0.0 for w in weights):
        raise DomainError("weights must be nonnegative")
    if not any(w > 0.0 for w in weights):
        raise DomainError("weights must not all be zero")
    cfg = cfg or AutoFitConfig()
    arr = _points_array(src)
    src_lch = lab_to_lch_array(arr)

    ident = {"d": 0.0, "s": 1.0, "cs": 1.0}
    ranges = {"d": cfg.translate_range, "s": cfg.scale_range, "cs": cfg.chroma_range}
    spans = {
        "d": (cfg.translate_range[1] - cfg.translate_range[0]) / 2.0,
        "s": (cfg.scale_range[1] - cfg.scale_range[0]) / 2.0,
        "cs": (cfg.chroma_range[1] - cfg.chroma_range[0]) / 2.0,
    }
    cur = dict(ident)

    def evaluate(params: dict) -> tuple[float, MappingScores]:
        m = _template_map(params, cfg.pivot)
        scores = _score_arrays(arr, src_lch, bd, apply_map_array(m, arr))
        return weighted_objective(scores, weights), scores

    res = cfg.objective_resolution

    def quantize(value: float) -> float:
        return round(value / res) * res

    identity_true, identity_scores = evaluate(cur)
    best_true, best_scores = identity_true, identity_scores
    best_q = quantize(best_true)
    trace = [best_q]
    for _ in range(cfg.rounds):
        for axis in ("cs", "d", "s"):
            lo = max(ranges[axis][0], cur[axis] - spans[axis])
            hi = min(ranges[axis][1], cur[axis] + spans[axis])
            grid = np.linspace(lo, hi, cfg.grid_points)
            qvals = [quantize(evaluate({**cur, axis: float(v)})[0]) for v in grid]
            qmin = min(qvals)
            if qmin <= best_q:
                tied = [float(v) for v, q in zip(grid, qvals) if q == qmin]
                pick = min(tied, key=lambda v: abs(v - ident[axis]))
                closer = abs(pick - ident[axis]) < abs(cur[axis] - ident[axis])
                if qmin < best_q or closer:
                    cur[axis] = pick
                    best_true, best_scores = evaluate(cur)
                    best_q = qmin
            trace.append(best_q)
        for axis in spans:
            spans[axis] *= cfg.shrink
    if best_true > identity_true:
        # tie moves stay within one resolution step of the accepted
        # objective; never hand back anything worse than the identity
        return AutoFitResult(_template_map(ident, cfg.pivot), identity_scores,
                             identity_true, trace)
    return AutoFitResult(_template_map(cur, cfg.pivot), best_scores, best_true, trace)


def _template_map(params: dict, pivot: float) -> GamutMap:
    return GamutMap(
        (
            LightnessTranslate(params["d"]),
            LightnessScale(params["s"], pivot),
            ChromaScale(params["cs"]),
        )
    )


# ---------------------------------------------------------------------------
# Image operations

def map_image(image: RasterImage, m: GamutMap, stats: MapStats | None = None) -> RasterImage:
    """Apply a gamut map to every pixel; out-of-sRGB results are clamped."""
    flat = image.pixels.reshape(-1, 3)
    lab = rgb_to_lab_array(flat)
    mapped = apply_map_array(m, lab, stats)
    rgb, _ = lab_to_rgb_array(mapped)
    return RasterImage(image.width, image.height, rgb.reshape(image.pixels.shape))


def oog_mask(image: RasterImage, bd: GamutBoundary) -> np.ndarray:
    """Boolean mask (height, width): True where the pixel is out of gamut."""
    flat = image.pixels.reshape(-1, 3)
    inside = contains_array(bd, rgb_to_lab_array(flat))
    return (~inside).reshape(image.height, image.width)


def pixels_for_region(
    image: RasterImage,
    l_range: tuple[float, float],
    c_range: tuple[float, float],
    h_range: tuple[float, float],
) -> list[tuple[int, int]]:
    """(row, col) coordinates of pixels whose LCh falls in all three
    ranges; the hue range wraps when its low end exceeds its high end."""
    lch = lab_to_lch_array(rgb_to_lab_array(image.pixels.reshape(-1, 3)))
    sel = (
        (lch[:, 0] >= l_range[0]) & (lch[:, 0] <= l_range[1])
        & (lch[:, 1] >= c_range[0]) & (lch[:, 1] <= c_range[1])
    )
    h_lo, h_hi = h_range[0] % 360.0, h_range[1] % 360.0
    if h_lo <= h_hi:
        sel &= (lch[:, 2] >= h_lo) & (lch[:, 2] <= h_hi)
    else:
        sel &= (lch[:, 2] >= h_lo) | (lch[:, 2] <= h_hi)
    rows, cols = np.divmod(np.flatnonzero(sel), image.width)
    return list(zip(rows.tolist(), cols.tolist()))


# ---------------------------------------------------------------------------
# Mesh export

@dataclass
class GamutMesh:
    """Triangulated boundary surface with per-vertex display colors."""

    vertices: list[tuple[LabColor, tuple[float, float, float]]]
    triangles: list[tuple[int, int, int]]


def boundary_mesh(bd: GamutBoundary) -> GamutMesh:
    """Closed surface over the boundary grid.

    One vertex per (sector, band) at the band-center lightness and cell
    chroma, plus bottom and top pole vertices on the gray axis at l_min
    and l_max. Quad strips between adjacent bands wrap in hue; pole fans
    close the ends, so every edge is shared by exactly two triangles.
    """
    H, B = bd.hue_sectors, bd.lightness_bands
    labs = []
    for s in range(H):
        hue = math.radians((s + 0.5) * 360.0 / H)
        for b in range(B):
            lightness = (b + 0.5) * 100.0 / B
            chroma = bd.max_chroma[s, b]
            labs.append([lightness, chroma * math.cos(hue), chroma * math.sin(hue)])
    labs.append([bd.l_min, 0.0, 0.0])
    labs.append([bd.l_max, 0.0, 0.0])
    labs = np.array(labs)
    rgb, _ = lab_to_rgb_array(labs)

    vertices = [
        (LabColor(*map(float, lab)), tuple(map(float, c))) for lab, c in zip(labs, rgb)
    ]
    vid = lambda s, b: (s % H) * B + b
    bottom = H * B
    top = H * B + 1

    triangles: list[tuple[int, int, int]] = []
    for s in range(H):
        for b in range(B - 1):
            v00, v10 = vid(s, b), vid(s + 1, b)
            v01, v11 = vid(s, b + 1), vid(s + 1, b + 1)
            triangles.append((v00, v10, v11))
            triangles.append((v00, v11, v01))
        triangles.append((bottom, vid(s + 1, 0), vid(s, 0)))
        triangles.append((top, vid(s, B - 1), vid(s + 1, B - 1)))
    return GamutMesh(vertices, triangles)


def mesh_to_dict(mesh: GamutMesh) -> dict:
    """JSON-ready form of a mesh (schema in docs/formats.md)."""
    return {
        "vertices": [
            {"lab": [v.l, v.a, v.b], "rgb": list(c)} for v, c in mesh.vertices
        ],
        "triangles": [list(t) for t in mesh.triangles],
    }
