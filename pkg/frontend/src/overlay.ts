/**
 * Out-of-gamut overlay data, derived once from the preview's RLE mask:
 * the set of OOG pixel indices for the image tint and the set of OOG
 * mesh cells for the gamut outline. One payload, both views.
 */

import type { RegionsDto, RleMask } from "./api.js";
import { decodeMask } from "./rle.js";
import { cellForPixel } from "./region.js";

export interface OogOverlay {
  pixelIndices: number[];
  cells: Set<number>;
}

export function buildOverlay(mask: RleMask, regions: RegionsDto): OogOverlay {
  if (mask.width !== regions.width || mask.height !== regions.height) {
    throw new Error(
      `mask ${mask.width}x${mask.height} does not match regions ` +
      `${regions.width}x${regions.height}`,
    );
  }
  const bits = decodeMask(mask);
  const pixelIndices: number[] = [];
  const cells = new Set<number>();
  for (let i = 0; i < bits.length; i++) {
    if (bits[i] === 1) {
      pixelIndices.push(i);
      cells.add(cellForPixel(regions, i));
    }
  }
  return { pixelIndices, cells };
}

/** Paint the OOG tint into an RGBA buffer (premultiplied by caller). */
export function paintOverlay(
  overlay: OogOverlay,
  width: number,
  height: number,
  rgba: [number, number, number, number] = [255, 46, 46, 168],
): Uint8ClampedArray<ArrayBuffer> {
  const out = new Uint8ClampedArray(width * height * 4);
  for (const idx of overlay.pixelIndices) {
    const at = idx * 4;
    out[at] = rgba[0];
    out[at + 1] = rgba[1];
    out[at + 2] = rgba[2];
    out[at + 3] = rgba[3];
  }
  return out;
}
