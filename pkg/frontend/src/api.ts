/**
 * Typed client for the gamutlab service. All color and gamut numbers
 * come from here; the UI never derives Lab values locally.
 */

export type TransformDto =
  | { type: "lightnessTranslate"; d: number }
  | { type: "lightnessScale"; s: number; pivot: number }
  | { type: "chromaScale"; s: number }
  | { type: "hueRotate"; theta: number };

export interface Scores {
  grayAxisDeviation: number;
  luminanceContrast: number;
  oogFraction: number;
  meanAbsHueShift: number;
  chromaDecreaseFraction: number;
}

export interface RleMask {
  width: number;
  height: number;
  runs: number[];
}

export interface PreviewResponse {
  scores: Scores;
  previewId: string;
  mask: RleMask;
  lightnessClamped: number;
}

export interface AutofitResponse {
  transforms: TransformDto[];
  scores: Scores;
  objective: number;
}

export interface MeshDto {
  vertices: { lab: [number, number, number]; rgb: [number, number, number] }[];
  triangles: [number, number, number][];
}

export interface RegionsDto {
  width: number;
  height: number;
  sectors: number;
  bands: number;
  cells: number[];
}

export interface ClassificationDto {
  chosen: string;
  lowMass: number;
  normalMass: number;
  highMass: number;
}

async function expectOk(response: Response): Promise<Response> {
  if (!response.ok) {
    let message = `${response.status}`;
    try {
      const body = await response.json();
      if (body && body.message) message = `${body.code ?? response.status}: ${body.message}`;
    } catch {
      /* non-JSON error body */
    }
    throw new Error(message);
  }
  return response;
}

export class ApiClient {
  constructor(private readonly base: string = "") {}

  async ingest(kind: "image" | "profile", payload: BodyInit): Promise<string> {
    const r = await expectOk(
      await fetch(`${this.base}/api/assets?kind=${kind}`, { method: "POST", body: payload }),
    );
    return (await r.json()).id as string;
  }

  async classification(assetId: string): Promise<ClassificationDto> {
    const r = await expectOk(
      await fetch(`${this.base}/api/assets/${assetId}/classification`),
    );
    return r.json();
  }

  async mesh(assetId: string): Promise<MeshDto> {
    const r = await expectOk(await fetch(`${this.base}/api/assets/${assetId}/mesh`));
    return r.json();
  }

  async regions(assetId: string): Promise<RegionsDto> {
    const r = await expectOk(await fetch(`${this.base}/api/assets/${assetId}/regions`));
    return r.json();
  }

  pixelsUrl(assetId: string): string {
    return `${this.base}/api/assets/${assetId}/pixels`;
  }

  async preview(
    imageId: string,
    profileId: string,
    transforms: TransformDto[],
  ): Promise<PreviewResponse> {
    const r = await expectOk(
      await fetch(`${this.base}/api/map/preview`, {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify({ imageId, profileId, transforms }),
      }),
    );
    return r.json();
  }

  async autofit(
    imageId: string,
    profileId: string,
    weights: [number, number, number, number, number],
  ): Promise<AutofitResponse> {
    const r = await expectOk(
      await fetch(`${this.base}/api/map/autofit`, {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify({ imageId, profileId, weights }),
      }),
    );
    return r.json();
  }
}
