/**
 * Parameter panel: one keyboard-operable slider row per transform
 * parameter, the score readout with a stale marker, the auto-fit
 * button, destination transparency and light angle sliders, and the
 * OOG overlay toggle.
 */

import type { Scores } from "./api.js";
import type { TransformParams } from "./session.js";
import { PARAM_BOUNDS } from "./session.js";

export interface SliderOptions {
  name: string;
  min: number;
  max: number;
  step: number;
  value: number;
  onInput: (value: number) => void;
}

export function sliderRow(opts: SliderOptions): HTMLElement {
  const wrap = document.createElement("label");
  wrap.className = "slider-row";

  const title = document.createElement("span");
  title.textContent = opts.name;

  const value = document.createElement("span");
  value.className = "mono";
  value.textContent = opts.value.toFixed(2);

  const input = document.createElement("input");
  input.type = "range";
  input.min = String(opts.min);
  input.max = String(opts.max);
  input.step = String(opts.step);
  input.value = String(opts.value);
  input.addEventListener("input", () => {
    const next = Number(input.value);
    value.textContent = next.toFixed(2);
    opts.onInput(next);
  });

  wrap.append(title, value, input);
  return wrap;
}

export interface PanelHandles {
  root: HTMLElement;
  setParams(params: TransformParams): void;
  setScores(scores: Scores | null, stale: boolean, clamped: number): void;
  setError(message: string | null): void;
  onAutofit(cb: () => void): void;
}

const PARAM_LABELS: [keyof TransformParams, string, number][] = [
  ["d", "lightness translate", 0.5],
  ["s", "lightness scale", 0.01],
  ["cs", "chroma scale", 0.01],
  ["theta", "hue rotate", 0.5],
];

const SCORE_LABELS: [keyof Scores, string][] = [
  ["grayAxisDeviation", "gray axis deviation"],
  ["luminanceContrast", "luminance contrast"],
  ["oogFraction", "out of gamut"],
  ["meanAbsHueShift", "mean hue shift"],
  ["chromaDecreaseFraction", "chroma decrease"],
];

export function createPanel(
  onParam: (name: keyof TransformParams, value: number) => void,
): PanelHandles {
  const root = document.createElement("div");
  root.className = "panel";

  const inputs = new Map<keyof TransformParams, HTMLInputElement>();
  const valueLabels = new Map<keyof TransformParams, HTMLElement>();
  for (const [name, label, step] of PARAM_LABELS) {
    const [min, max] = PARAM_BOUNDS[name];
    const initial = name === "s" || name === "cs" ? 1 : 0;
    const row = sliderRow({
      name: label,
      min,
      max,
      step,
      value: initial,
      onInput: (v) => onParam(name, v),
    });
    inputs.set(name, row.querySelector("input")!);
    valueLabels.set(name, row.querySelector(".mono")!);
    root.append(row);
  }

  const autofit = document.createElement("button");
  autofit.textContent = "auto-fit";
  autofit.className = "autofit";
  root.append(autofit);

  const scoreList = document.createElement("dl");
  scoreList.className = "scores";
  const scoreValues = new Map<keyof Scores, HTMLElement>();
  for (const [key, label] of SCORE_LABELS) {
    const dt = document.createElement("dt");
    dt.textContent = label;
    const dd = document.createElement("dd");
    dd.className = "mono";
    dd.textContent = "-";
    scoreValues.set(key, dd);
    scoreList.append(dt, dd);
  }
  const staleMark = document.createElement("p");
  staleMark.className = "stale-mark";
  staleMark.hidden = true;
  staleMark.textContent = "updating...";
  const clampNote = document.createElement("p");
  clampNote.className = "clamp-note mono";
  const errorBanner = document.createElement("p");
  errorBanner.className = "error-banner";
  errorBanner.hidden = true;
  root.append(scoreList, staleMark, clampNote, errorBanner);

  return {
    root,
    setParams(params) {
      for (const [name] of PARAM_LABELS) {
        inputs.get(name)!.value = String(params[name]);
        valueLabels.get(name)!.textContent = params[name].toFixed(2);
      }
    },
    setScores(scores, stale, clamped) {
      if (scores) {
        for (const [key] of SCORE_LABELS) {
          scoreValues.get(key)!.textContent = scores[key].toFixed(4);
        }
        clampNote.textContent =
          clamped > 0 ? `${clamped} pixels lightness-clamped` : "";
      }
      staleMark.hidden = !stale;
    },
    setError(message) {
      errorBanner.hidden = message === null;
      errorBanner.textContent = message ?? "";
    },
    onAutofit(cb) {
      autofit.addEventListener("click", cb);
    },
  };
}
