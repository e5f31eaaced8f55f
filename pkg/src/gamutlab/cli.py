"""Batch command-line interface.

Subcommands cover the scripted pipeline: classify, chart generation and
rendering, device characterization, gamut meshes, auto-fit mapping and
separation. Outputs are written only to paths given on the command line;
``--report`` additionally renders a PNG figure next to the report file
(same stem, .png suffix). Exit codes: 0 success, 1 domain or parse
error, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import classify as classify_mod
from .charts import (
    build_it8_target,
    generate_adapted_chart,
    layout_from_dict,
    layout_to_dict,
    render_chart,
)
from .classify import ImageKeyClass, classify_key, lstar_histogram, recommend_separation
from .colorspace import rgb_to_lab_array, separate_to_cmyk_array
from .errors import GamutLabError
from .formats import parse_cgats, read_ppm, write_ppm
from .gamut import (
    DEFAULT_FIT_WEIGHTS,
    MapStats,
    auto_fit_detailed,
    boundary_mesh,
    gamut_from_points,
    map_image,
    map_to_dicts,
    mesh_to_dict,
)
from .profiles import (
    characterize_device,
    profile_from_dict,
    profile_gamut_points,
    profile_to_dict,
)

MESH_PROFILE_SAMPLES = 9
AUTO_FIT_MAX_POINTS = 10000


def _write_json(path: str, payload: dict) -> None:
    Path(path).write_bytes((json.dumps(payload, indent=2) + "\n").encode("ascii"))


def _read_image(path: str):
    return read_ppm(Path(path).read_bytes())


def _read_profile(path: str):
    return profile_from_dict(json.loads(Path(path).read_text()))


def _image_lab_points(image, cap: int = AUTO_FIT_MAX_POINTS) -> np.ndarray:
    lab = rgb_to_lab_array(image.pixels.reshape(-1, 3))
    if len(lab) > cap:
        stride = -(-len(lab) // cap)
        lab = lab[::stride]
    return lab


def _profile_boundary(profile):
    pts = profile_gamut_points(profile, MESH_PROFILE_SAMPLES)
    return gamut_from_points(pts)


def cmd_classify(args) -> int:
    image = _read_image(args.image)
    hist = lstar_histogram(image, args.steps)
    report = classify_key(hist, args.exclude_bg)
    print(report.chosen.value)
    print(
        f"low={report.low_mass:.6f} normal={report.normal_mass:.6f} "
        f"high={report.high_mass:.6f} pixels={hist.total_pixels}"
    )
    if args.report:
        _write_json(
            args.report,
            {
                "chosen": report.chosen.value,
                "lowMass": report.low_mass,
                "normalMass": report.normal_mass,
                "highMass": report.high_mass,
                "stepCount": hist.step_count,
                "counts": list(hist.counts),
                "totalPixels": hist.total_pixels,
            },
        )
        from .figures import save_histogram_figure

        save_histogram_figure(hist, report, str(Path(args.report).with_suffix(".png")))
    return 0


def cmd_chart_adapted(args) -> int:
    layout = generate_adapted_chart(ImageKeyClass.from_label(args.key_class), args.rows, args.cols)
    _write_json(args.output, layout_to_dict(layout))
    return 0


def cmd_chart_it8(args) -> int:
    _write_json(args.output, layout_to_dict(build_it8_target()))
    return 0


def cmd_chart_render(args) -> int:
    layout = layout_from_dict(json.loads(Path(args.layout).read_text()))
    image, clamped = render_chart(layout, args.patch_px)
    Path(args.output).write_bytes(write_ppm(image))
    print(f"clamped={len(clamped)}")
    for p in clamped:
        print(f"  ({p.row},{p.col}) L={p.target.l:.2f} a={p.target.a:.2f} b={p.target.b:.2f}")
    return 0


def cmd_characterize(args) -> int:
    ms = parse_cgats(Path(args.measurements).read_text())
    profile = characterize_device(ms, args.grid)
    _write_json(args.output, profile_to_dict(profile))
    return 0


def cmd_gamut_mesh(args) -> int:
    if args.image:
        image = _read_image(args.image)
        points = rgb_to_lab_array(image.pixels.reshape(-1, 3))
        bd = gamut_from_points(points)
    else:
        bd = _profile_boundary(_read_profile(args.profile))
    _write_json(args.output, mesh_to_dict(boundary_mesh(bd)))
    return 0


def cmd_map_auto(args) -> int:
    image = _read_image(args.image)
    profile = _read_profile(args.profile)
    bd = _profile_boundary(profile)
    src = _image_lab_points(image)
    weights = (args.w1, args.w2, args.w3, args.w4, args.w5)
    result = auto_fit_detailed(src, bd, weights)
    stats = MapStats()
    mapped = map_image(image, result.map, stats)
    Path(args.output).write_bytes(write_ppm(mapped))
    if args.report:
        _write_json(
            args.report,
            {
                "transforms": map_to_dicts(result.map),
                "scores": result.scores.as_dict(),
                "objective": result.objective,
                "objectiveTrace": result.objective_trace,
                "weights": list(weights),
                "lightnessClamped": stats.lightness_clamped,
            },
        )
        from .figures import save_mapping_figure
        from .gamut import apply_map_array

        save_mapping_figure(
            src,
            apply_map_array(result.map, src),
            bd,
            result.scores,
            str(Path(args.report).with_suffix(".png")),
        )
    return 0


def cmd_separate(args) -> int:
    image = _read_image(args.image)
    params = recommend_separation(ImageKeyClass.from_label(args.key_class))
    cmyk = separate_to_cmyk_array(image.pixels.reshape(-1, 3), params)
    _write_json(
        args.output,
        {
            "class": args.key_class,
            "params": {
                "gcrStrength": params.gcr_strength,
                "blackStart": params.black_start,
                "blackWidth": params.black_width,
                "totalInkLimit": params.total_ink_limit,
            },
            "width": image.width,
            "height": image.height,
            "cmyk": [[round(float(v), 8) for v in row] for row in cmyk],
        },
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gamutlab", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="classify an image by L* key")
    p.add_argument("image", help="input PPM (P6)")
    p.add_argument("--steps", type=int, default=classify_mod.DEFAULT_STEP_COUNT)
    p.add_argument("--exclude-bg", action="store_true", help="drop a white background peak")
    p.add_argument("--report", help="write a JSON report plus <report-stem>.png figure")
    p.set_defaults(func=cmd_classify)

    chart = sub.add_parser("chart", help="generate or render test charts")
    chart_sub = chart.add_subparsers(dest="chart_command", required=True)

    p = chart_sub.add_parser("adapted", help="image-adapted chart for a key class")
    p.add_argument("--class", dest="key_class", required=True,
                   choices=[c.value for c in ImageKeyClass])
    p.add_argument("--rows", type=int, required=True)
    p.add_argument("--cols", type=int, required=True)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_chart_adapted)

    p = chart_sub.add_parser("it8", help="standard 264-patch IT8-style target")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_chart_it8)

    p = chart_sub.add_parser("render", help="rasterize a chart layout to PPM")
    p.add_argument("layout", help="layout JSON")
    p.add_argument("--patch-px", type=int, required=True)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_chart_render)

    p = sub.add_parser("characterize", help="fit a device profile from measurements")
    p.add_argument("measurements", help="CGATS measurement file")
    p.add_argument("--grid", type=int, required=True)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_characterize)

    gamut = sub.add_parser("gamut", help="gamut analysis")
    gamut_sub = gamut.add_subparsers(dest="gamut_command", required=True)
    p = gamut_sub.add_parser("mesh", help="boundary mesh JSON from an image or profile")
    grp = p.add_mutually_exclusive_group(required=True)
    grp.add_argument("--image", help="input PPM")
    grp.add_argument("--profile", help="profile JSON")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_gamut_mesh)

    mp = sub.add_parser("map", help="gamut mapping")
    map_sub = mp.add_subparsers(dest="map_command", required=True)
    p = map_sub.add_parser("auto", help="auto-fit an image to a profile gamut")
    p.add_argument("--image", required=True)
    p.add_argument("--profile", required=True)
    for i, default in enumerate(DEFAULT_FIT_WEIGHTS, start=1):
        p.add_argument(f"--w{i}", type=float, default=default)
    p.add_argument("-o", "--output", required=True, help="mapped PPM")
    p.add_argument("--report", help="write scores JSON plus <report-stem>.png figure")
    p.set_defaults(func=cmd_map_auto)

    p = sub.add_parser("separate", help="RGB -> CMYK separation with class presets")
    p.add_argument("image", help="input PPM")
    p.add_argument("--class", dest="key_class", required=True,
                   choices=[c.value for c in ImageKeyClass])
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_separate)

    return parser


def run_cli(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (GamutLabError, json.JSONDecodeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
