"""HTTP facade for the studio UI and scripted clients.

Endpoints (JSON unless noted; schemas in docs/formats.md):

    POST /api/assets?kind=image|profile     raw PPM bytes or CGATS text,
                                            multipart also accepted -> {id}
    GET  /api/assets/{id}/classification    key-class report for an image
    GET  /api/assets/{id}/mesh?source=...   boundary mesh JSON
    GET  /api/assets/{id}/pixels            stored image as PNG
    POST /api/map/preview                   {imageId, profileId, transforms[]}
    POST /api/map/autofit                   {imageId, profileId, weights[5]}
    GET  /api/charts/it8                    standard target layout
    POST /api/charts/adapted                {class, rows, cols}

Assets live in process memory only; ids are never reused. Responses are
pure functions of stored assets and the request body. Errors carry
{"code", "message"} with 404 for unknown ids, 422 for malformed
payloads and 413 for oversize uploads.
"""

from __future__ import annotations

import io
import threading
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, Response

from .charts import build_it8_target, generate_adapted_chart, layout_to_dict
from .classify import DEFAULT_STEP_COUNT, ImageKeyClass, classify_key, lstar_histogram
from .colorspace import lab_to_rgb_array, rgb_to_lab_array
from .errors import GamutLabError, ParseError
from .formats import RasterImage, parse_cgats, read_ppm
from .gamut import (
    GamutBoundary,
    MapStats,
    apply_map_array,
    auto_fit_detailed,
    boundary_mesh,
    contains_array,
    gamut_from_points,
    map_from_dicts,
    map_to_dicts,
    mesh_to_dict,
    score_principles,
)
from .profiles import DeviceProfile, characterize_device, profile_gamut_points

DEFAULT_MAX_BODY = 8 * 1024 * 1024
DEFAULT_PROFILE_GRID = 9
PROFILE_GAMUT_SAMPLES = 9


@dataclass
class Asset:
    kind: str                       # "image" or "profile"
    image: RasterImage | None = None
    profile: DeviceProfile | None = None
    lab_points: np.ndarray | None = None
    boundary: GamutBoundary | None = None


@dataclass
class AssetStore:
    """Process-lifetime asset map with monotonically issued ids."""

    _lock: threading.Lock = field(default_factory=threading.Lock)
    _assets: dict[str, Asset] = field(default_factory=dict)
    _next: int = 1

    def put(self, asset: Asset) -> str:
        with self._lock:
            asset_id = f"a{self._next}"
            self._next += 1
            self._assets[asset_id] = asset
            return asset_id

    def get(self, asset_id: str) -> Asset | None:
        with self._lock:
            return self._assets.get(asset_id)


def _error(status: int, code: str, message: str) -> JSONResponse:
    return JSONResponse({"code": code, "message": message}, status_code=status)


async def _json_body(request: Request) -> dict:
    try:
        payload = await request.json()
    except Exception:
        raise ParseError("request body is not valid JSON")
    if not isinstance(payload, dict):
        raise ParseError("request body must be a JSON object")
    return payload


def _mask_rle(mask: np.ndarray) -> dict:
    """Row-major alternating run lengths; the first run counts zeros and
    may be 0. Runs sum to width * height."""
    flat = mask.ravel().astype(np.uint8)
    runs: list[int] = []
    value = 0
    i = 0
    n = len(flat)
    while i < n:
        j = i
        while j < n and flat[j] == value:
            j += 1
        runs.append(j - i)
        value ^= 1
        i = j
    return {"width": int(mask.shape[1]), "height": int(mask.shape[0]), "runs": runs}


def _image_asset(image: RasterImage) -> Asset:
    lab = rgb_to_lab_array(image.pixels.reshape(-1, 3))
    return Asset("image", image=image, lab_points=lab, boundary=gamut_from_points(lab))


def _profile_asset(profile: DeviceProfile) -> Asset:
    pts = profile_gamut_points(profile, PROFILE_GAMUT_SAMPLES)
    lab = np.array([[p.l, p.a, p.b] for p in pts])
    return Asset("profile", profile=profile, lab_points=lab, boundary=gamut_from_points(lab))


def create_app(max_body_bytes: int = DEFAULT_MAX_BODY, static_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="gamutlab studio service")
    store = AssetStore()

    @app.exception_handler(GamutLabError)
    async def _domain_handler(request, exc: GamutLabError):
        code = "parse_error" if isinstance(exc, ParseError) else "domain_error"
        return _error(422, code, str(exc))

    @app.exception_handler(RequestValidationError)
    async def _validation_handler(request, exc: RequestValidationError):
        return _error(422, "invalid_request", str(exc.errors()))

    def _require(asset_id: str, kind: str | None = None) -> Asset | JSONResponse:
        asset = store.get(asset_id)
        if asset is None:
            return _error(404, "not_found", f"unknown asset id {asset_id!r}")
        if kind and asset.kind != kind:
            return _error(422, "wrong_kind", f"asset {asset_id!r} is {asset.kind}, not {kind}")
        return asset

    @app.post("/api/assets")
    async def ingest_asset(request: Request, kind: str):
        if kind not in ("image", "profile"):
            return _error(422, "invalid_request", f"unknown asset kind {kind!r}")
        body = await request.body()
        if len(body) > max_body_bytes:
            return _error(413, "too_large", f"payload of {len(body)} bytes exceeds {max_body_bytes}")
        content_type = request.headers.get("content-type", "")
        if content_type.startswith("multipart/form-data"):
            form = await request.form()
            upload = form.get("file")
            if upload is None:
                return _error(422, "invalid_request", "multipart body missing 'file' field")
            body = await upload.read()
            if len(body) > max_body_bytes:
                return _error(413, "too_large", f"payload exceeds {max_body_bytes}")
        if kind == "image":
            asset = _image_asset(read_ppm(body))
        else:
            ms = parse_cgats(body.decode("utf-8", errors="replace"))
            grid = int(request.query_params.get("grid", DEFAULT_PROFILE_GRID))
            asset = _profile_asset(characterize_device(ms, grid))
        return JSONResponse({"id": store.put(asset)}, status_code=201)

    @app.get("/api/assets/{asset_id}/classification")
    def classification(asset_id: str, steps: int = DEFAULT_STEP_COUNT, excludeBg: bool = False):
        asset = _require(asset_id, "image")
        if isinstance(asset, JSONResponse):
            return asset
        hist = lstar_histogram(asset.image, steps)
        report = classify_key(hist, excludeBg)
        return {
            "chosen": report.chosen.value,
            "lowMass": report.low_mass,
            "normalMass": report.normal_mass,
            "highMass": report.high_mass,
            "stepCount": hist.step_count,
            "counts": list(hist.counts),
        }

    @app.get("/api/assets/{asset_id}/mesh")
    def fetch_mesh(asset_id: str, source: str | None = None):
        asset = _require(asset_id)
        if isinstance(asset, JSONResponse):
            return asset
        if source is not None and source != asset.kind:
            return _error(422, "wrong_kind", f"asset {asset_id!r} is {asset.kind}, not {source}")
        return mesh_to_dict(boundary_mesh(asset.boundary))

    @app.get("/api/assets/{asset_id}/regions")
    def fetch_regions(asset_id: str):
        """Per-pixel gamut cell ids (sector * bands + band), row-major;
        the id convention matches mesh vertex indices."""
        asset = _require(asset_id, "image")
        if isinstance(asset, JSONResponse):
            return asset
        bd = asset.boundary
        from .gamut import _cell_indices
        from .colorspace import lab_to_lch_array

        lch = lab_to_lch_array(asset.lab_points)
        sec, band = _cell_indices(lch, bd.hue_sectors, bd.lightness_bands)
        return {
            "width": asset.image.width,
            "height": asset.image.height,
            "sectors": bd.hue_sectors,
            "bands": bd.lightness_bands,
            "cells": (sec * bd.lightness_bands + band).tolist(),
        }

    @app.get("/api/assets/{asset_id}/pixels")
    def fetch_pixels(asset_id: str):
        asset = _require(asset_id, "image")
        if isinstance(asset, JSONResponse):
            return asset
        from PIL import Image

        arr = np.clip(np.rint(asset.image.pixels * 255.0), 0, 255).astype(np.uint8)
        buf = io.BytesIO()
        Image.fromarray(arr, mode="RGB").save(buf, format="PNG")
        return Response(buf.getvalue(), media_type="image/png")

    @app.post("/api/map/preview")
    async def preview_mapping(request: Request):
        payload = await _json_body(request)
        image_asset = _require(str(payload.get("imageId")), "image")
        if isinstance(image_asset, JSONResponse):
            return image_asset
        profile_asset = _require(str(payload.get("profileId")), "profile")
        if isinstance(profile_asset, JSONResponse):
            return profile_asset
        gamut_map = map_from_dicts(payload.get("transforms", []))

        src = image_asset.lab_points
        bd = profile_asset.boundary
        stats = MapStats()
        mapped = apply_map_array(gamut_map, src, stats)
        scores = score_principles(src, bd, gamut_map)
        mask = ~contains_array(bd, mapped).reshape(
            image_asset.image.height, image_asset.image.width
        )
        rgb, _ = lab_to_rgb_array(mapped)
        preview = RasterImage(
            image_asset.image.width,
            image_asset.image.height,
            rgb.reshape(image_asset.image.pixels.shape),
        )
        preview_id = store.put(_image_asset(preview))
        return {
            "scores": scores.as_dict(),
            "previewId": preview_id,
            "mask": _mask_rle(mask),
            "lightnessClamped": stats.lightness_clamped,
        }

    @app.post("/api/map/autofit")
    async def autofit_endpoint(request: Request):
        payload = await _json_body(request)
        image_asset = _require(str(payload.get("imageId")), "image")
        if isinstance(image_asset, JSONResponse):
            return image_asset
        profile_asset = _require(str(payload.get("profileId")), "profile")
        if isinstance(profile_asset, JSONResponse):
            return profile_asset
        weights = payload.get("weights")
        if not isinstance(weights, (list, tuple)) or len(weights) != 5:
            return _error(422, "invalid_request", "weights must be an array of 5 numbers")
        result = auto_fit_detailed(image_asset.lab_points, profile_asset.boundary, weights)
        return {
            "transforms": map_to_dicts(result.map),
            "scores": result.scores.as_dict(),
            "objective": result.objective,
        }

    @app.get("/api/charts/it8")
    def it8_chart():
        return layout_to_dict(build_it8_target())

    @app.post("/api/charts/adapted")
    async def adapted_chart(request: Request):
        payload = await _json_body(request)
        cls = ImageKeyClass.from_label(str(payload.get("class")))
        rows = int(payload.get("rows", 0))
        cols = int(payload.get("cols", 0))
        return layout_to_dict(generate_adapted_chart(cls, rows, cols))

    if static_dir is None:
        candidate = Path(__file__).resolve().parents[2] / "frontend" / "dist"
        static_dir = str(candidate) if candidate.is_dir() else ""
    if static_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=static_dir, html=True), name="studio")

    return app


def main() -> None:
    import uvicorn

    uvicorn.run(create_app(), host="127.0.0.1", port=8000)


if __name__ == "__main__":
    main()
