/**
 * Preview session state machine.
 *
 * Owns the transform parameters, debounces slider changes into preview
 * requests (150 ms trailing edge), stamps every request with a growing
 * sequence number and drops responses that arrive after a newer request
 * has already been acknowledged, so the score panel can never show
 * stale numbers. The transforms held here are exactly the transforms
 * last sent to the service.
 */

import type { PreviewResponse, Scores, TransformDto } from "./api.js";
import { debounce } from "./debounce.js";

export interface TransformParams {
  d: number;      // lightness translate, [-50, 50]
  s: number;      // lightness scale around pivot 50, [0.2, 2]
  cs: number;     // chroma scale, [0.2, 2]
  theta: number;  // hue rotate degrees, [-45, 45]
}

export const IDENTITY_PARAMS: TransformParams = { d: 0, s: 1, cs: 1, theta: 0 };

export const PARAM_BOUNDS: Record<keyof TransformParams, [number, number]> = {
  d: [-50, 50],
  s: [0.2, 2],
  cs: [0.2, 2],
  theta: [-45, 45],
};

export const PREVIEW_DEBOUNCE_MS = 150;

export function paramsToTransforms(p: TransformParams): TransformDto[] {
  const out: TransformDto[] = [
    { type: "lightnessTranslate", d: p.d },
    { type: "lightnessScale", s: p.s, pivot: 50 },
    { type: "chromaScale", s: p.cs },
  ];
  if (p.theta !== 0) out.push({ type: "hueRotate", theta: p.theta });
  return out;
}

export function transformsToParams(transforms: TransformDto[]): TransformParams {
  const p = { ...IDENTITY_PARAMS };
  for (const t of transforms) {
    switch (t.type) {
      case "lightnessTranslate":
        p.d = t.d;
        break;
      case "lightnessScale":
        p.s = t.s;
        break;
      case "chromaScale":
        p.cs = t.s;
        break;
      case "hueRotate":
        p.theta = t.theta;
        break;
    }
  }
  return p;
}

export type PreviewTransport = (
  transforms: TransformDto[],
  seq: number,
) => Promise<PreviewResponse>;

export interface SessionSnapshot {
  imageId: string | null;
  profileId: string | null;
  params: TransformParams;
  /** transforms of the most recently issued request */
  sentTransforms: TransformDto[] | null;
  scores: Scores | null;
  preview: PreviewResponse | null;
  /** true while the newest request has not been acknowledged */
  stale: boolean;
  lastError: string | null;
  selectedCell: number | null;
}

export class PreviewSession {
  private params: TransformParams = { ...IDENTITY_PARAMS };
  private nextSeq = 1;
  private acknowledgedSeq = 0;
  private sentTransforms: TransformDto[] | null = null;
  private scores: Scores | null = null;
  private preview: PreviewResponse | null = null;
  private stale = false;
  private lastError: string | null = null;
  private selectedCell: number | null = null;
  private listeners: ((snapshot: SessionSnapshot) => void)[] = [];
  private readonly schedulePreview: (() => void) & { cancel(): void };

  imageId: string | null = null;
  profileId: string | null = null;

  constructor(
    private readonly transport: PreviewTransport,
    debounceMs: number = PREVIEW_DEBOUNCE_MS,
  ) {
    this.schedulePreview = debounce(() => this.requestPreview(), debounceMs);
  }

  onChange(listener: (snapshot: SessionSnapshot) => void): void {
    this.listeners.push(listener);
  }

  snapshot(): SessionSnapshot {
    return {
      imageId: this.imageId,
      profileId: this.profileId,
      params: { ...this.params },
      sentTransforms: this.sentTransforms,
      scores: this.scores,
      preview: this.preview,
      stale: this.stale,
      lastError: this.lastError,
      selectedCell: this.selectedCell,
    };
  }

  private emit(): void {
    const snap = this.snapshot();
    for (const listener of this.listeners) listener(snap);
  }

  /** Slider input: clamp, store and schedule a debounced preview. */
  setParam(name: keyof TransformParams, value: number): void {
    const [lo, hi] = PARAM_BOUNDS[name];
    this.params[name] = Math.min(hi, Math.max(lo, value));
    this.stale = true;
    this.emit();
    this.schedulePreview();
  }

  setParams(params: TransformParams): void {
    this.params = { ...params };
    this.stale = true;
    this.emit();
    this.schedulePreview();
  }

  selectCell(cell: number | null): void {
    this.selectedCell = cell;
    this.emit();
  }

  /** Issue a preview immediately (also the debounce target). */
  requestPreview(): Promise<void> {
    if (!this.imageId || !this.profileId) return Promise.resolve();
    const seq = this.nextSeq++;
    const transforms = paramsToTransforms(this.params);
    this.sentTransforms = transforms;
    return this.transport(transforms, seq).then(
      (response) => this.acknowledge(seq, response),
      (error) => this.fail(seq, error),
    );
  }

  private acknowledge(seq: number, response: PreviewResponse): void {
    // drop anything that is not newer than what the panel already shows
    if (seq <= this.acknowledgedSeq) return;
    this.acknowledgedSeq = seq;
    this.scores = response.scores;
    this.preview = response;
    this.lastError = null;
    this.stale = seq !== this.nextSeq - 1;
    this.emit();
  }

  private fail(seq: number, error: unknown): void {
    if (seq <= this.acknowledgedSeq) return;
    // keep the last good scores, mark them stale, stay responsive
    this.lastError = error instanceof Error ? error.message : String(error);
    this.stale = true;
    this.emit();
  }

  /** Load auto-fit transforms into the sliders and refresh the preview. */
  adoptTransforms(transforms: TransformDto[]): void {
    this.schedulePreview.cancel();
    this.params = transformsToParams(transforms);
    this.stale = true;
    this.emit();
    void this.requestPreview();
  }
}
