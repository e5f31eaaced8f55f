/**
 * Studio wiring: upload an image and a measurement file, inspect both
 * gamuts in 3-D, steer the mapping with live-scored sliders, toggle the
 * OOG overlay, and click between gamut cells and image pixels.
 */

import { ApiClient } from "./api.js";
import type { RegionsDto } from "./api.js";
import { createPanel } from "./controls.js";
import { createImageView } from "./imageview.js";
import { buildOverlay } from "./overlay.js";
import { cellForPixel, pixelIndexAt, pixelsForCell } from "./region.js";
import { createGamutScene } from "./scene.js";
import { PreviewSession } from "./session.js";
import { sliderRow } from "./controls.js";

const api = new ApiClient("");

function el<T extends HTMLElement>(id: string): T {
  const found = document.getElementById(id);
  if (!found) throw new Error(`missing #${id}`);
  return found as T;
}

async function start(): Promise<void> {
  const scene = createGamutScene(el("scene"));
  const imageView = createImageView(el("image-view"));
  const session: PreviewSession = new PreviewSession((transforms) =>
    api.preview(session.imageId!, session.profileId!, transforms),
  );
  const panel = createPanel((name, value) => session.setParam(name, value));
  el("panel-slot").append(panel.root);

  let regions: RegionsDto | null = null;

  const viewControls = el("view-controls");
  viewControls.append(
    sliderRow({
      name: "destination opacity",
      min: 0.05,
      max: 1,
      step: 0.05,
      value: 0.35,
      onInput: (v) => scene.setProfileOpacity(v),
    }),
    sliderRow({
      name: "light angle",
      min: 0,
      max: 360,
      step: 5,
      value: 45,
      onInput: (v) => scene.setLightAngle(v),
    }),
  );
  const oogToggleRow = document.createElement("label");
  oogToggleRow.className = "toggle-row";
  const oogToggle = document.createElement("input");
  oogToggle.type = "checkbox";
  oogToggle.checked = true;
  oogToggleRow.append(oogToggle, document.createTextNode(" highlight out-of-gamut"));
  viewControls.append(oogToggleRow);
  oogToggle.addEventListener("change", () => {
    imageView.setOverlayEnabled(oogToggle.checked);
  });

  panel.onAutofit(async () => {
    if (!session.imageId || !session.profileId) return;
    try {
      const fit = await api.autofit(session.imageId, session.profileId, [1, 1, 4, 1, 0.25]);
      session.adoptTransforms(fit.transforms);
    } catch (error) {
      panel.setError(error instanceof Error ? error.message : String(error));
    }
  });

  scene.onCellPicked((cell) => {
    session.selectCell(cell);
    if (regions) imageView.highlightPixels(pixelsForCell(regions, cell));
    scene.setSelectedCell(cell);
  });
  imageView.onPixelPicked((row, col) => {
    if (!regions) return;
    const cell = cellForPixel(regions, pixelIndexAt(regions, row, col));
    session.selectCell(cell);
    scene.setSelectedCell(cell);
    imageView.highlightPixels(pixelsForCell(regions, cell));
  });

  session.onChange((snap) => {
    panel.setParams(snap.params);
    panel.setScores(snap.scores, snap.stale, snap.preview?.lightnessClamped ?? 0);
    panel.setError(snap.lastError);
    if (snap.preview && regions) {
      const overlay = buildOverlay(snap.preview.mask, regions);
      imageView.setOverlay(overlay);
      scene.setOogCells(overlay.cells);
      void imageView.showImage(
        api.pixelsUrl(snap.preview.previewId),
        regions.width,
        regions.height,
      );
      // the image gamut follows the mapped preview
      api
        .mesh(snap.preview.previewId)
        .then((mesh) => scene.setImageMesh(mesh))
        .catch((error) =>
          panel.setError(error instanceof Error ? error.message : String(error)),
        );
    }
  });

  const imageInput = el<HTMLInputElement>("image-file");
  const profileInput = el<HTMLInputElement>("profile-file");
  const status = el("status");

  async function maybeReady(): Promise<void> {
    if (!session.imageId || !session.profileId) return;
    status.textContent = "loading gamuts...";
    try {
      const [imageMesh, profileMesh, regionData, classification] = await Promise.all([
        api.mesh(session.imageId),
        api.mesh(session.profileId),
        api.regions(session.imageId),
        api.classification(session.imageId),
      ]);
      regions = regionData;
      scene.setImageMesh(imageMesh);
      scene.setProfileMesh(profileMesh);
      await imageView.showImage(
        api.pixelsUrl(session.imageId),
        regionData.width,
        regionData.height,
      );
      status.textContent = `image: ${classification.chosen}`;
      await session.requestPreview();
    } catch (error) {
      panel.setError(error instanceof Error ? error.message : String(error));
      status.textContent = "load failed";
    }
  }

  imageInput.addEventListener("change", async () => {
    const file = imageInput.files?.[0];
    if (!file) return;
    try {
      session.imageId = await api.ingest("image", await file.arrayBuffer());
      await maybeReady();
    } catch (error) {
      panel.setError(error instanceof Error ? error.message : String(error));
    }
  });
  profileInput.addEventListener("change", async () => {
    const file = profileInput.files?.[0];
    if (!file) return;
    try {
      session.profileId = await api.ingest("profile", await file.text());
      await maybeReady();
    } catch (error) {
      panel.setError(error instanceof Error ? error.message : String(error));
    }
  });
}

start().catch((error) => {
  document.body.textContent = `startup failed: ${error}`;
});
