/**
 * Image panel: the mapped preview PNG on a base canvas, an overlay
 * canvas for the OOG tint and region highlights, and pixel picking.
 * Scaling is nearest-neighbor so overlay pixels align exactly.
 */

import type { OogOverlay } from "./overlay.js";
import { paintOverlay } from "./overlay.js";

export interface ImageViewHandles {
  showImage(url: string, width: number, height: number): Promise<void>;
  setOverlay(overlay: OogOverlay | null): void;
  setOverlayEnabled(enabled: boolean): void;
  highlightPixels(indices: number[]): void;
  onPixelPicked(cb: (row: number, col: number) => void): void;
}

const SCALE_TARGET = 320;

export function createImageView(container: HTMLElement): ImageViewHandles {
  const base = document.createElement("canvas");
  const top = document.createElement("canvas");
  base.className = "image-layer";
  top.className = "image-layer image-overlay";
  container.append(base, top);

  let pixelWidth = 0;
  let pixelHeight = 0;
  let scale = 1;
  let overlay: OogOverlay | null = null;
  let overlayEnabled = true;
  let highlighted: number[] = [];
  let pickListener: ((row: number, col: number) => void) | null = null;

  function redrawOverlay(): void {
    const ctx = top.getContext("2d");
    if (!ctx || pixelWidth === 0) return;
    ctx.clearRect(0, 0, top.width, top.height);
    const paint = (buffer: Uint8ClampedArray<ArrayBuffer>) => {
      const small = new OffscreenCanvas(pixelWidth, pixelHeight);
      const sctx = small.getContext("2d")!;
      sctx.putImageData(new ImageData(buffer, pixelWidth, pixelHeight), 0, 0);
      ctx.imageSmoothingEnabled = false;
      ctx.drawImage(small, 0, 0, top.width, top.height);
    };
    if (overlay && overlayEnabled) {
      paint(paintOverlay(overlay, pixelWidth, pixelHeight));
    }
    if (highlighted.length > 0) {
      const buffer = new Uint8ClampedArray(pixelWidth * pixelHeight * 4);
      for (const idx of highlighted) {
        const at = idx * 4;
        buffer[at] = 102;
        buffer[at + 1] = 209;
        buffer[at + 2] = 255;
        buffer[at + 3] = 190;
      }
      paint(buffer);
    }
  }

  top.addEventListener("click", (event) => {
    if (!pickListener || pixelWidth === 0) return;
    const rect = top.getBoundingClientRect();
    const col = Math.floor(((event.clientX - rect.left) / rect.width) * pixelWidth);
    const row = Math.floor(((event.clientY - rect.top) / rect.height) * pixelHeight);
    if (row >= 0 && row < pixelHeight && col >= 0 && col < pixelWidth) {
      pickListener(row, col);
    }
  });

  return {
    showImage(url, width, height) {
      pixelWidth = width;
      pixelHeight = height;
      scale = Math.max(1, Math.floor(SCALE_TARGET / Math.max(width, height)));
      base.width = top.width = width * scale;
      base.height = top.height = height * scale;
      return new Promise((resolve, reject) => {
        const img = new Image();
        img.onload = () => {
          const ctx = base.getContext("2d")!;
          ctx.imageSmoothingEnabled = false;
          ctx.drawImage(img, 0, 0, base.width, base.height);
          redrawOverlay();
          resolve();
        };
        img.onerror = () => reject(new Error(`failed to load ${url}`));
        img.src = url;
      });
    },
    setOverlay(next) {
      overlay = next;
      redrawOverlay();
    },
    setOverlayEnabled(enabled) {
      overlayEnabled = enabled;
      redrawOverlay();
    },
    highlightPixels(indices) {
      highlighted = indices;
      redrawOverlay();
    },
    onPixelPicked(cb) {
      pickListener = cb;
    },
  };
}
