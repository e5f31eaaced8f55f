"""gamutlab: prepress color toolkit.

Image key classification, adapted and IT8-style test charts, device
characterization from measurements, and principle-guided gamut mapping
in CIELAB, with a CLI and an HTTP service for the interactive studio.
"""

from .classify import (
    ImageKeyClass,
    KeyMassReport,
    LStarHistogram,
    classify_key,
    key_class_range,
    lstar_histogram,
    recommend_separation,
)
from .charts import (
    ChartRole,
    Patch,
    TestChartLayout,
    build_it8_target,
    customize_target,
    generate_adapted_chart,
    layout_from_dict,
    layout_to_dict,
    max_srgb_chroma,
    render_chart,
)
from .colorspace import (
    CMYKColor,
    D65,
    LabColor,
    LChColor,
    RGBColor,
    SeparationParams,
    WhitePoint,
    XYZColor,
    delta_e76,
    lab_lch,
    lab_to_rgb,
    lch_lab,
    rgb_to_lab,
    separate_to_cmyk,
    srgb_decode,
)
from .errors import CapacityError, DomainError, GamutLabError, ParseError
from .formats import MeasurementSet, RasterImage, parse_cgats, read_ppm, write_ppm
from .gamut import (
    AutoFitConfig,
    ChromaScale,
    GamutBoundary,
    GamutMap,
    GamutMesh,
    HueRotate,
    LightnessScale,
    LightnessTranslate,
    MappingScores,
    MapStats,
    apply_map,
    auto_fit,
    auto_fit_detailed,
    boundary_mesh,
    contains,
    gamut_from_points,
    map_image,
    mesh_to_dict,
    oog_fraction,
    oog_mask,
    pixels_for_region,
    score_principles,
    weighted_objective,
)
from .profiles import (
    DeviceProfile,
    characterize_device,
    identity_profile,
    profile_eval,
    profile_from_dict,
    profile_gamut_points,
    profile_to_dict,
)

__version__ = "0.1.0"
