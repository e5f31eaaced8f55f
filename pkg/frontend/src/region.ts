/**
 * Pixel <-> gamut cell correspondence.
 *
 * The service's regions payload assigns every pixel the cell id of its
 * color (sector * bands + band, the mesh vertex convention), so both
 * directions of tool linking are plain lookups with no color math.
 */

import type { RegionsDto } from "./api.js";

export function cellForPixel(regions: RegionsDto, pixelIndex: number): number {
  if (pixelIndex < 0 || pixelIndex >= regions.cells.length) {
    throw new Error(`pixel index ${pixelIndex} outside ${regions.cells.length}`);
  }
  return regions.cells[pixelIndex];
}

export function pixelsForCell(regions: RegionsDto, cell: number): number[] {
  const out: number[] = [];
  for (let i = 0; i < regions.cells.length; i++) {
    if (regions.cells[i] === cell) out.push(i);
  }
  return out;
}

export function pixelIndexAt(regions: RegionsDto, row: number, col: number): number {
  if (row < 0 || row >= regions.height || col < 0 || col >= regions.width) {
    throw new Error(`(${row}, ${col}) outside ${regions.width}x${regions.height}`);
  }
  return row * regions.width + col;
}

/** Cells present in the image, with pixel counts (for mesh shading). */
export function cellHistogram(regions: RegionsDto): Map<number, number> {
  const out = new Map<number, number>();
  for (const cell of regions.cells) {
    out.set(cell, (out.get(cell) ?? 0) + 1);
  }
  return out;
}
