/**
 * Run-length mask codec. The wire form is row-major alternating run
 * lengths starting with a zero-run (possibly 0); runs sum to
 * width * height. The decoded form is one byte per pixel (0 or 1).
 */

import type { RleMask } from "./api.js";

export function decodeMask(mask: RleMask): Uint8Array {
  const total = mask.width * mask.height;
  const out = new Uint8Array(total);
  let value = 0;
  let at = 0;
  for (const run of mask.runs) {
    if (run < 0 || at + run > total) {
      throw new Error(`mask runs exceed ${total} pixels`);
    }
    if (value === 1) out.fill(1, at, at + run);
    at += run;
    value ^= 1;
  }
  if (at !== total) {
    throw new Error(`mask runs cover ${at} of ${total} pixels`);
  }
  return out;
}

export function maskedPixelIndices(mask: RleMask): number[] {
  const bits = decodeMask(mask);
  const out: number[] = [];
  for (let i = 0; i < bits.length; i++) {
    if (bits[i] === 1) out.push(i);
  }
  return out;
}
