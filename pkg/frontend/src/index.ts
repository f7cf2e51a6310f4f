/**
 * Array-in/array-out bindings over the engine CLI.
 *
 * Accepts 8-bit images (RawImage) or pre-normalized real images
 * (NormalizedImage, values in [0, 1] = byte/255) and returns the same kind.
 * All heavy lifting happens in the engine process; this layer only moves
 * PPM and CSV files in and out of a scratch directory.
 */
import { join } from "node:path";

import {
  readBytes,
  readText,
  runEngine,
  withScratchDir,
  writeBytes,
} from "./cli.js";
import {
  EdgeTable,
  LabelMatrix,
  parseEdgeCsv,
  parseLabelCsv,
  parseLossHistory,
} from "./csv.js";
import {
  NormalizedImage,
  RawImage,
  checkShape,
  decodePpm,
  encodePpm,
  isNormalized,
  normalize,
  quantize,
} from "./ppm.js";

export { EngineError, runEngine } from "./cli.js";
export { EDGE_HEADER, parseEdgeCsv, parseLabelCsv, parseLossHistory } from "./csv.js";
export type { EdgeTable, LabelMatrix } from "./csv.js";
export { decodePpm, encodePpm, isNormalized, normalize, quantize } from "./ppm.js";
export type { NormalizedImage, RawImage } from "./ppm.js";

export interface FilterParams {
  /** resolution the merge loop stops at, default 0.6 */
  targetRes?: number;
  /** per-step resolution decrement, default 0.1 */
  dr?: number;
  /** smallest color distance perceived at full resolution, default 0.03 */
  d0?: number;
  alpha?: number;
  beta?: number;
  threshold?: "t1" | "t2";
  rm?: number;
}

export interface DenoiseParams {
  lambda?: number;
  sigmoidAlpha?: number;
  steps?: number;
  stepSize?: number;
}

export interface FilterOutput<I> {
  image: I;
  labels: LabelMatrix;
  edges: EdgeTable;
}

export interface GraphOutput {
  labels: LabelMatrix;
  edges: EdgeTable;
}

function filterFlags(params: FilterParams): string[] {
  const flags: string[] = [];
  if (params.targetRes !== undefined) flags.push("--target-res", String(params.targetRes));
  if (params.dr !== undefined) flags.push("--dr", String(params.dr));
  if (params.d0 !== undefined) flags.push("--d0", String(params.d0));
  if (params.alpha !== undefined) flags.push("--alpha", String(params.alpha));
  if (params.beta !== undefined) flags.push("--beta", String(params.beta));
  if (params.threshold !== undefined) flags.push("--threshold", params.threshold);
  if (params.rm !== undefined) flags.push("--rm", String(params.rm));
  return flags;
}

function denoiseFlags(params: DenoiseParams): string[] {
  const flags: string[] = [];
  if (params.lambda !== undefined) flags.push("--lambda", String(params.lambda));
  if (params.sigmoidAlpha !== undefined) flags.push("--sigmoid-alpha", String(params.sigmoidAlpha));
  if (params.steps !== undefined) flags.push("--steps", String(params.steps));
  if (params.stepSize !== undefined) flags.push("--step-size", String(params.stepSize));
  return flags;
}

function toRaw(image: RawImage | NormalizedImage): RawImage {
  checkShape(image);
  return isNormalized(image) ? quantize(image) : image;
}

function sameKindAs<I extends RawImage | NormalizedImage>(input: I, raw: RawImage): I {
  return (isNormalized(input) ? normalize(raw) : raw) as I;
}

/**
 * Merge-based filtering. Returns the filtered image plus the final region
 * graph as a per-pixel label matrix and an edge table.
 */
export async function filter<I extends RawImage | NormalizedImage>(
  image: I,
  params: FilterParams = {},
): Promise<FilterOutput<I>> {
  const raw = toRaw(image);
  return withScratchDir(async (dir) => {
    const input = join(dir, "in.ppm");
    const output = join(dir, "out.ppm");
    const edgeCsv = join(dir, "graph.csv");
    const labelCsv = join(dir, "labels.csv");
    await writeBytes(input, encodePpm(raw));
    await runEngine([
      "filter", input, output,
      "--export-graph", edgeCsv,
      "--export-labels", labelCsv,
      ...filterFlags(params),
    ]);
    return {
      image: sameKindAs(image, decodePpm(await readBytes(output))),
      labels: parseLabelCsv(await readText(labelCsv)),
      edges: parseEdgeCsv(await readText(edgeCsv)),
    };
  });
}

/** Variational smoothing; returns the same image kind it was given. */
export async function denoise<I extends RawImage | NormalizedImage>(
  image: I,
  params: DenoiseParams = {},
): Promise<I> {
  const { image: out } = await denoiseWithLoss(image, params);
  return out;
}

/** denoise plus the optimizer's per-iteration loss trace. */
export async function denoiseWithLoss<I extends RawImage | NormalizedImage>(
  image: I,
  params: DenoiseParams = {},
): Promise<{ image: I; lossHistory: number[] }> {
  const raw = toRaw(image);
  return withScratchDir(async (dir) => {
    const input = join(dir, "in.ppm");
    const output = join(dir, "out.ppm");
    const loss = join(dir, "loss.txt");
    await writeBytes(input, encodePpm(raw));
    await runEngine([
      "denoise", input, output,
      "--loss-history", loss,
      ...denoiseFlags(params),
    ]);
    return {
      image: sameKindAs(image, decodePpm(await readBytes(output))),
      lossHistory: parseLossHistory(await readText(loss)),
    };
  });
}

/** Full-resolution region graph of an image, before any merging. */
export async function img2graph(image: RawImage | NormalizedImage): Promise<GraphOutput> {
  const raw = toRaw(image);
  return withScratchDir(async (dir) => {
    const input = join(dir, "in.ppm");
    const edgeCsv = join(dir, "graph.csv");
    const labelCsv = join(dir, "labels.csv");
    await writeBytes(input, encodePpm(raw));
    await runEngine([
      "graph", input, edgeCsv,
      "--initial",
      "--export-labels", labelCsv,
    ]);
    return {
      labels: parseLabelCsv(await readText(labelCsv)),
      edges: parseEdgeCsv(await readText(edgeCsv)),
    };
  });
}
