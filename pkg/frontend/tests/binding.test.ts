/**
 * End-to-end binding behavior, including parity with direct CLI calls on a
 * deterministic fixture set. Engine invocations dominate the runtime here.
 */
import { mkdtemp, readFile, rm, writeFile } from "node:fs/promises";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import {
  EngineError,
  denoise,
  denoiseWithLoss,
  encodePpm,
  filter,
  img2graph,
  normalize,
  parseEdgeCsv,
  parseLabelCsv,
  runEngine,
} from "../src/index.js";
import type { EdgeTable, RawImage } from "../src/index.js";

// deterministic PRNG so fixtures are stable across runs
function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) | 0;
    let t = Math.imul(a ^ (a >>> 15), 1 | a);
    t = (t + Math.imul(t ^ (t >>> 7), 61 | t)) ^ t;
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

function paletteImage(seed: number, width = 14, height = 14, ncolors = 4): RawImage {
  const rand = mulberry32(seed);
  const palette = Array.from({ length: ncolors }, () =>
    [0, 0, 0].map(() => Math.floor(rand() * 256)),
  );
  const data = new Uint8Array(width * height * 3);
  for (let p = 0; p < width * height; p++) {
    const c = palette[Math.floor(rand() * ncolors)]!;
    data.set(c, p * 3);
  }
  return { width, height, data };
}

function uniformImage(byte: number, width = 8, height = 8): RawImage {
  return { width, height, data: new Uint8Array(width * height * 3).fill(byte) };
}

function noiseImage(seed: number, width = 16, height = 16): RawImage {
  const rand = mulberry32(seed);
  const data = new Uint8Array(width * height * 3);
  for (let i = 0; i < data.length; i++) data[i] = Math.floor(rand() * 256);
  return { width, height, data };
}

const FIXTURES = Array.from({ length: 10 }, (_, k) => paletteImage(1000 + k));

let scratch: string;
beforeAll(async () => {
  scratch = await mkdtemp(join(tmpdir(), "ragfilter-parity-"));
});
afterAll(async () => {
  await rm(scratch, { recursive: true, force: true });
});

function expectSameTable(a: EdgeTable, b: EdgeTable): void {
  for (const key of Object.keys(a) as (keyof EdgeTable)[]) {
    expect([...a[key]], String(key)).toEqual([...b[key]]);
  }
}

describe("filter binding", () => {
  it("matches direct CLI output on every fixture image", async () => {
    for (let k = 0; k < FIXTURES.length; k++) {
      const img = FIXTURES[k]!;
      const bound = await filter(img);

      const input = join(scratch, `f${k}.ppm`);
      const output = join(scratch, `f${k}_out.ppm`);
      const edgeCsv = join(scratch, `f${k}.csv`);
      const labelCsv = join(scratch, `f${k}_labels.csv`);
      await writeFile(input, encodePpm(img));
      await runEngine([
        "filter", input, output,
        "--export-graph", edgeCsv,
        "--export-labels", labelCsv,
      ]);

      const cliImage = new Uint8Array(await readFile(output));
      expect([...encodePpm(bound.image)]).toEqual([...cliImage]);
      const cliLabels = parseLabelCsv(await readFile(labelCsv, "ascii"));
      expect([...bound.labels.labels]).toEqual([...cliLabels.labels]);
      expectSameTable(bound.edges, parseEdgeCsv(await readFile(edgeCsv, "ascii")));
    }
  });

  it("returns a uniform image unchanged with a single node", async () => {
    const img = uniformImage(64);
    const out = await filter(img);
    expect([...out.image.data]).toEqual([...img.data]);
    expect(Math.max(...out.labels.labels)).toBe(0);
    expect(out.edges.src.length).toBe(0);
  });

  it("treats 8-bit and normalized input identically", async () => {
    const img = FIXTURES[0]!;
    const fromBytes = await filter(img, { d0: 0.1 });
    const fromReals = await filter(normalize(img), { d0: 0.1 });
    expect([...encodePpm(fromBytes.image)]).toEqual([
      ...encodePpm((await import("../src/index.js")).quantize(fromReals.image)),
    ]);
    expect([...fromBytes.labels.labels]).toEqual([...fromReals.labels.labels]);
    expectSameTable(fromBytes.edges, fromReals.edges);
  });

  it("labels index edge endpoints consistently", async () => {
    const out = await filter(FIXTURES[1]!, { d0: 0.05 });
    const n = Math.max(...out.labels.labels) + 1;
    for (let e = 0; e < out.edges.src.length; e++) {
      expect(out.edges.src[e]!).toBeLessThan(out.edges.dst[e]!);
      expect(out.edges.dst[e]!).toBeLessThan(n);
    }
  });

  it("surfaces engine parameter errors with the engine message", async () => {
    await expect(filter(FIXTURES[0]!, { targetRes: 1.5 })).rejects.toThrow(EngineError);
    await expect(filter(FIXTURES[0]!, { targetRes: 1.5 })).rejects.toThrow(/resolution/);
  });

  it("rejects malformed buffers locally", async () => {
    const broken = { width: 4, height: 4, data: new Uint8Array(5) };
    await expect(filter(broken)).rejects.toThrow(/expected 48/);
  });
});

describe("denoise binding", () => {
  it("matches direct CLI output bit-exactly", async () => {
    const img = FIXTURES[2]!;
    const bound = await denoiseWithLoss(img, { steps: 30 });

    const input = join(scratch, "d.ppm");
    const output = join(scratch, "d_out.ppm");
    const loss = join(scratch, "d_loss.txt");
    await writeFile(input, encodePpm(img));
    await runEngine(["denoise", input, output, "--steps", "30", "--loss-history", loss]);

    expect([...encodePpm(bound.image)]).toEqual([...new Uint8Array(await readFile(output))]);
    const cliLoss = (await readFile(loss, "ascii")).split("\n").filter(Boolean).map(Number);
    expect(bound.lossHistory).toEqual(cliLoss);
  });

  it("returns the input when no steps are taken", async () => {
    const img = FIXTURES[3]!;
    const out = await denoise(img, { steps: 0 });
    expect([...out.data]).toEqual([...img.data]);
  });

  it("keeps a constant image constant", async () => {
    const img = uniformImage(200, 6, 6);
    const out = await denoise(img, { steps: 25 });
    expect([...out.data]).toEqual([...img.data]);
  });

  it("exposes a non-increasing loss history on a random 16x16 image", async () => {
    const img = noiseImage(77);
    const { lossHistory } = await denoiseWithLoss(img);
    expect(lossHistory.length).toBe(201);
    for (let i = 1; i < lossHistory.length; i++) {
      expect(lossHistory[i]!).toBeLessThanOrEqual(lossHistory[i - 1]!);
    }
  });

  it("gives a normalized caller a normalized result", async () => {
    const img = normalize(FIXTURES[4]!);
    const out = await denoise(img, { steps: 5 });
    expect(out.data).toBeInstanceOf(Float64Array);
    expect(out.width).toBe(img.width);
    for (const v of out.data) expect(v >= 0 && v <= 1).toBe(true);
  });
});

describe("img2graph binding", () => {
  it("builds the full-resolution graph", async () => {
    // 2x2 with a distinct right column: three regions at full resolution
    const img: RawImage = {
      width: 2,
      height: 2,
      data: Uint8Array.from([0, 0, 0, 255, 255, 255, 0, 0, 0, 10, 10, 10]),
    };
    const g = await img2graph(img);
    expect(g.labels.width).toBe(2);
    expect([...g.labels.labels]).toEqual([0, 1, 0, 2]);
    expect(g.edges.src.length).toBeGreaterThan(0);
    const sizes = new Map<number, number>();
    for (const l of g.labels.labels) sizes.set(l, (sizes.get(l) ?? 0) + 1);
    for (let e = 0; e < g.edges.src.length; e++) {
      expect(g.edges.src_size[e]!).toBe(sizes.get(g.edges.src[e]!)!);
      expect(g.edges.dst_size[e]!).toBe(sizes.get(g.edges.dst[e]!)!);
    }
  });

  it("has one node per pixel on a no-two-equal-neighbors image", async () => {
    const img = paletteImage(5, 4, 4, 4);
    const g = await img2graph(img);
    const initialNodes = Math.max(...g.labels.labels) + 1;
    const filtered = await filter(img, { d0: 0.4 });
    expect(Math.max(...filtered.labels.labels) + 1).toBeLessThanOrEqual(initialNodes);
  });
});
