"""Color-space conversions and GCR/UCR separation.

sRGB <-> XYZ <-> CIELAB <-> LCh plus the CIE 1976 color difference and a
parametric RGB -> CMYK separation with gray component replacement and a
total ink limit.

Conventions:
  * RGB channels are sRGB-encoded (nonlinear) in [0, 1].
  * XYZ is normalized so that the white point has Y = 1.
  * The default white point is D65, taken as the row sums of the
    sRGB -> XYZ matrix so that white round-trips exactly.
  * Separation operates on the encoded RGB channels (c = 1 - r etc.);
    no ink transfer model is applied.

Scalar functions operate on the frozen dataclasses below; the ``*_array``
variants operate on numpy arrays with channels along the last axis and are
used by the image-scale code paths.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

# sRGB <-> XYZ (D65, 2 degree observer), IEC 61966-2-1 primaries.
# http://www.brucelindbloom.com/index.html?Eqn_RGB_XYZ_Matrix.html
SRGB_TO_XYZ = np.array([
    [0.4124564, 0.3575761, 0.1804375],
    [0.2126729, 0.7151522, 0.0721750],
    [0.0193339, 0.1191920, 0.9503041],
])
XYZ_TO_SRGB = np.linalg.inv(SRGB_TO_XYZ)

# Matrix products are written out elementwise below: BLAS matmul picks
# its summation order by array shape, which would make the same color
# convert to bitwise-different Lab depending on batch size.
(_M00, _M01, _M02), (_M10, _M11, _M12), (_M20, _M21, _M22) = (
    tuple(float(v) for v in row) for row in SRGB_TO_XYZ
)
(_I00, _I01, _I02), (_I10, _I11, _I12), (_I20, _I21, _I22) = (
    tuple(float(v) for v in row) for row in XYZ_TO_SRGB
)

# sRGB transfer-curve constants (IEC 61966-2-1).
SRGB_DECODE_THRESHOLD = 0.04045
SRGB_ENCODE_THRESHOLD = 0.0031308
SRGB_LINEAR_SLOPE = 12.92
SRGB_GAMMA = 2.4
SRGB_OFFSET = 0.055

# CIELAB f(t) segment constants, delta = 6/29.
LAB_DELTA = 6.0 / 29.0
LAB_EPSILON = LAB_DELTA ** 3
LAB_SLOPE = 1.0 / (3.0 * LAB_DELTA * LAB_DELTA)
LAB_INTERCEPT = 4.0 / 29.0

# Linear channels within this distance of [0, 1] still count as in gamut;
# absorbs round-off from the matrix inverse.
GAMUT_EPS = 1e-9


@dataclass(frozen=True)
class RGBColor:
    """sRGB-encoded color, each channel in [0, 1]."""

    r: float
    g: float
    b: float

    def __post_init__(self):
        for name, v in (("r", self.r), ("g", self.g), ("b", self.b)):
            if not 0.0 <= v <= 1.0:
                raise DomainError(f"RGB channel {name}={v} outside [0, 1]")


@dataclass(frozen=True)
class XYZColor:
    """Tristimulus values, white-point relative (Y of white = 1)."""

    x: float
    y: float
    z: float


@dataclass(frozen=True)
class LabColor:
    """CIE 1976 L*a*b*; L in [0, 100] for colors from valid RGB."""

    l: float
    a: float
    b: float


@dataclass(frozen=True)
class LChColor:
    """Cylindrical CIELAB: lightness, chroma >= 0, hue in [0, 360)."""

    l: float
    c: float
    h: float


@dataclass(frozen=True)
class CMYKColor:
    """Ink fractions in [0, 1] per channel."""

    c: float
    m: float
    y: float
    k: float


@dataclass(frozen=True)
class SeparationParams:
    """GCR/UCR separation settings.

    gcr_strength scales how much of the gray component moves to black;
    black_start is the gray level where black ink begins; black_width is
    the gray-component span over which the black ramp reaches full
    strength; total_ink_limit caps c+m+y+k.
    """

    gcr_strength: float
    black_start: float
    black_width: float
    total_ink_limit: float

    def __post_init__(self):
        if not 0.0 <= self.gcr_strength <= 1.0:
            raise DomainError(f"gcr_strength {self.gcr_strength} outside [0, 1]")
        if not 0.0 <= self.black_start <= 1.0:
            raise DomainError(f"black_start {self.black_start} outside [0, 1]")
        if not 0.0 < self.black_width <= 1.0:
            raise DomainError(f"black_width {self.black_width} outside (0, 1]")
        if not 1.0 <= self.total_ink_limit <= 4.0:
            raise DomainError(f"total_ink_limit {self.total_ink_limit} outside [1, 4]")


@dataclass(frozen=True)
class WhitePoint:
    """Reference white tristimulus (yn = 1)."""

    xn: float
    yn: float
    zn: float


# Row sums of the matrix: guarantees rgb(1,1,1) -> XYZ == white exactly.
D65 = WhitePoint(*(float(v) for v in SRGB_TO_XYZ.sum(axis=1)))


def srgb_decode(rgb: RGBColor) -> tuple[float, float, float]:
    """Decode sRGB-encoded channels to linear light."""
    return tuple(_decode_channel(v) for v in (rgb.r, rgb.g, rgb.b))


def srgb_encode(linear: tuple[float, float, float]) -> RGBColor:
    """Encode linear channels (clamped to [0, 1]) back to sRGB."""
    return RGBColor(*(_encode_channel(min(max(v, 0.0), 1.0)) for v in linear))


def _decode_channel(v: float) -> float:
    if v <= SRGB_DECODE_THRESHOLD:
        return v / SRGB_LINEAR_SLOPE
    return ((v + SRGB_OFFSET) / (1.0 + SRGB_OFFSET)) ** SRGB_GAMMA


def _encode_channel(v: float) -> float:
    if v <= SRGB_ENCODE_THRESHOLD:
        return v * SRGB_LINEAR_SLOPE
    return (1.0 + SRGB_OFFSET) * v ** (1.0 / SRGB_GAMMA) - SRGB_OFFSET


def _lab_f(t: float) -> float:
    if t > LAB_EPSILON:
        return t ** (1.0 / 3.0)
    return LAB_SLOPE * t + LAB_INTERCEPT


def _lab_finv(ft: float) -> float:
    if ft > LAB_DELTA:
        return ft ** 3
    return (ft - LAB_INTERCEPT) / LAB_SLOPE


def rgb_to_xyz(rgb: RGBColor) -> XYZColor:
    r, g, b = srgb_decode(rgb)
    return XYZColor(
        _M00 * r + _M01 * g + _M02 * b,
        _M10 * r + _M11 * g + _M12 * b,
        _M20 * r + _M21 * g + _M22 * b,
    )


def rgb_to_lab(rgb: RGBColor, wp: WhitePoint = D65) -> LabColor:
    """sRGB -> CIELAB against the given reference white."""
    xyz = rgb_to_xyz(rgb)
    fx = _lab_f(xyz.x / wp.xn)
    fy = _lab_f(xyz.y / wp.yn)
    fz = _lab_f(xyz.z / wp.zn)
    return LabColor(116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz))


def lab_to_rgb(lab: LabColor, wp: WhitePoint = D65) -> tuple[RGBColor, bool]:
    """CIELAB -> sRGB.

    Returns the color and an in-gamut flag; when any linear channel falls
    outside [0, 1] (beyond GAMUT_EPS) the flag is False and the channels
    are clamped.
    """
    fy = (lab.l + 16.0) / 116.0
    fx = fy + lab.a / 500.0
    fz = fy - lab.b / 200.0
    x = _lab_finv(fx) * wp.xn
    y = _lab_finv(fy) * wp.yn
    z = _lab_finv(fz) * wp.zn
    lin = (
        _I00 * x + _I01 * y + _I02 * z,
        _I10 * x + _I11 * y + _I12 * z,
        _I20 * x + _I21 * y + _I22 * z,
    )
    in_gamut = all(-GAMUT_EPS <= v <= 1.0 + GAMUT_EPS for v in lin)
    return srgb_encode(lin), in_gamut


def lab_lch(lab: LabColor) -> LChColor:
    """Rectangular -> cylindrical. Hue of a neutral (c = 0) is 0.

    Chroma is computed as sqrt(a*a + b*b), matching the array path bit
    for bit (sqrt is correctly rounded; hypot variants differ by an ulp
    across implementations).
    """
    c = math.sqrt(lab.a * lab.a + lab.b * lab.b)
    h = math.degrees(math.atan2(lab.b, lab.a)) % 360.0
    return LChColor(lab.l, c, h)


def lch_lab(lch: LChColor) -> LabColor:
    hr = math.radians(lch.h)
    return LabColor(lch.l, lch.c * math.cos(hr), lch.c * math.sin(hr))


def delta_e76(p: LabColor, q: LabColor) -> float:
    """CIE 1976 color difference (Euclidean distance in Lab)."""
    return math.sqrt((p.l - q.l) ** 2 + (p.a - q.a) ** 2 + (p.b - q.b) ** 2)


def separate_to_cmyk(rgb: RGBColor, params: SeparationParams) -> CMYKColor:
    """Naive GCR separation of encoded RGB with a total ink limit.

    Base inks are the channel complements; the gray component
    g = min(c, m, y) feeds a black ramp t = clamp((g - start)/width, 0, 1)
    so k = gcr_strength * t * g. CMY are reduced by k and, if the ink sum
    still exceeds the limit, scaled down together; k is preserved.
    """
    c = 1.0 - rgb.r
    m = 1.0 - rgb.g
    y = 1.0 - rgb.b
    g = min(c, m, y)
    t = min(max((g - params.black_start) / params.black_width, 0.0), 1.0)
    k = params.gcr_strength * t * g
    c = max(c - k, 0.0)
    m = max(m - k, 0.0)
    y = max(y - k, 0.0)
    total = c + m + y + k
    if total > params.total_ink_limit:
        scale = (params.total_ink_limit - k) / (c + m + y)
        c *= scale
        m *= scale
        y *= scale
    return CMYKColor(c, m, y, k)


# ---------------------------------------------------------------------------
# Array variants: channels along the last axis, shapes (..., 3) / (..., 4).
# Same constants and formulas as the scalar path.

def srgb_decode_array(rgb: np.ndarray) -> np.ndarray:
    rgb = np.asarray(rgb, dtype=float)
    return np.where(
        rgb <= SRGB_DECODE_THRESHOLD,
        rgb / SRGB_LINEAR_SLOPE,
        ((rgb + SRGB_OFFSET) / (1.0 + SRGB_OFFSET)) ** SRGB_GAMMA,
    )


def srgb_encode_array(linear: np.ndarray) -> np.ndarray:
    lin = np.clip(np.asarray(linear, dtype=float), 0.0, 1.0)
    return np.where(
        lin <= SRGB_ENCODE_THRESHOLD,
        lin * SRGB_LINEAR_SLOPE,
        (1.0 + SRGB_OFFSET) * lin ** (1.0 / SRGB_GAMMA) - SRGB_OFFSET,
    )


def _lab_f_array(t: np.ndarray) -> np.ndarray:
    return np.where(t > LAB_EPSILON, np.cbrt(t), LAB_SLOPE * t + LAB_INTERCEPT)


def _lab_finv_array(ft: np.ndarray) -> np.ndarray:
    return np.where(ft > LAB_DELTA, ft ** 3, (ft - LAB_INTERCEPT) / LAB_SLOPE)


def rgb_to_lab_array(rgb: np.ndarray, wp: WhitePoint = D65) -> np.ndarray:
    lin = srgb_decode_array(rgb)
    r, g, b = lin[..., 0], lin[..., 1], lin[..., 2]
    fx = _lab_f_array((_M00 * r + _M01 * g + _M02 * b) / wp.xn)
    fy = _lab_f_array((_M10 * r + _M11 * g + _M12 * b) / wp.yn)
    fz = _lab_f_array((_M20 * r + _M21 * g + _M22 * b) / wp.zn)
    return np.stack([116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)], axis=-1)


def lab_to_rgb_array(lab: np.ndarray, wp: WhitePoint = D65) -> tuple[np.ndarray, np.ndarray]:
    """Returns (encoded rgb array, boolean in-gamut array of shape lab.shape[:-1])."""
    lab = np.asarray(lab, dtype=float)
    fy = (lab[..., 0] + 16.0) / 116.0
    fx = fy + lab[..., 1] / 500.0
    fz = fy - lab[..., 2] / 200.0
    x = _lab_finv_array(fx) * wp.xn
    y = _lab_finv_array(fy) * wp.yn
    z = _lab_finv_array(fz) * wp.zn
    lin = np.stack(
        [
            _I00 * x + _I01 * y + _I02 * z,
            _I10 * x + _I11 * y + _I12 * z,
            _I20 * x + _I21 * y + _I22 * z,
        ],
        axis=-1,
    )
    in_gamut = np.all((lin >= -GAMUT_EPS) & (lin <= 1.0 + GAMUT_EPS), axis=-1)
    return srgb_encode_array(lin), in_gamut


def lab_to_lch_array(lab: np.ndarray) -> np.ndarray:
    lab = np.asarray(lab, dtype=float)
    a, b = lab[..., 1], lab[..., 2]
    c = np.sqrt(a * a + b * b)
    h = np.degrees(np.arctan2(b, a)) % 360.0
    return np.stack([lab[..., 0], c, h], axis=-1)


def separate_to_cmyk_array(rgb: np.ndarray, params: SeparationParams) -> np.ndarray:
    """Array form of separate_to_cmyk; returns shape (..., 4)."""
    rgb = np.asarray(rgb, dtype=float)
    cmy = 1.0 - rgb
    g = cmy.min(axis=-1)
    t = np.clip((g - params.black_start) / params.black_width, 0.0, 1.0)
    k = params.gcr_strength * t * g
    cmy = np.maximum(cmy - k[..., None], 0.0)
    total = cmy.sum(axis=-1) + k
    over = total > params.total_ink_limit
    if np.any(over):
        body = cmy.sum(axis=-1)
        scale = np.ones_like(total)
        scale[over] = (params.total_ink_limit - k[over]) / body[over]
        cmy = cmy * scale[..., None]
    return np.concatenate([cmy, k[..., None]], axis=-1)
