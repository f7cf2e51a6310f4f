import { describe, expect, it } from "vitest";

import {
  EDGE_HEADER,
  decodePpm,
  encodePpm,
  normalize,
  parseEdgeCsv,
  parseLabelCsv,
  parseLossHistory,
  quantize,
} from "../src/index.js";
import type { RawImage } from "../src/index.js";

function image(width: number, height: number, bytes: number[]): RawImage {
  return { width, height, data: Uint8Array.from(bytes) };
}

describe("ppm codec", () => {
  it("encodes the documented header and raw pixels", () => {
    const img = image(2, 1, [0, 0, 0, 255, 255, 255]);
    const bytes = encodePpm(img);
    const text = new TextDecoder().decode(bytes.subarray(0, 11));
    expect(text).toBe("P6\n2 1\n255\n");
    expect([...bytes.subarray(11)]).toEqual([0, 0, 0, 255, 255, 255]);
  });

  it("round-trips", () => {
    const img = image(3, 2, Array.from({ length: 18 }, (_, i) => (i * 37) % 256));
    const back = decodePpm(encodePpm(img));
    expect(back.width).toBe(3);
    expect(back.height).toBe(2);
    expect([...back.data]).toEqual([...img.data]);
  });

  it("tolerates header comments", () => {
    const body = Uint8Array.from([1, 2, 3]);
    const head = new TextEncoder().encode("P6 # c\n# full line\n1 1\n255\n");
    const joined = new Uint8Array(head.length + body.length);
    joined.set(head);
    joined.set(body, head.length);
    const img = decodePpm(joined);
    expect(img.width).toBe(1);
    expect([...img.data]).toEqual([1, 2, 3]);
  });

  it("rejects damaged files", () => {
    expect(() => decodePpm(Uint8Array.from([0x50, 0x35]))).toThrow(/P6/);
    expect(() => decodePpm(new TextEncoder().encode("P6\n2 2\n255\n"))).toThrow(/truncated/);
    expect(() => decodePpm(new TextEncoder().encode("P6\n1 1\n65535\n aaaaaa"))).toThrow(/maxval/);
  });

  it("rejects shape mismatches", () => {
    expect(() => encodePpm(image(2, 2, [0, 0, 0]))).toThrow(/expected 12/);
  });
});

describe("normalization", () => {
  it("quantize inverts normalize exactly on byte values", () => {
    const img = image(2, 2, [0, 1, 2, 127, 128, 129, 253, 254, 255, 10, 20, 30]);
    const back = quantize(normalize(img));
    expect([...back.data]).toEqual([...img.data]);
  });

  it("quantize rounds half up", () => {
    const half = { width: 1, height: 1, data: Float64Array.from([0.5, 0, 1]) };
    expect([...quantize(half).data]).toEqual([128, 0, 255]);
  });

  it("quantize rejects out-of-range values", () => {
    const bad = { width: 1, height: 1, data: Float64Array.from([0, 0, 1.5]) };
    expect(() => quantize(bad)).toThrow(/out of \[0, 1\]/);
  });
});

describe("edge csv", () => {
  const row = "0,1,1.732051,2,0.333333,0.333333,2,2,0.000000,0.000000,0.000000,1.000000,1.000000,1.000000";

  it("parses columns with the right types", () => {
    const t = parseEdgeCsv(`${EDGE_HEADER}\n${row}\n`);
    expect(t.src[0]).toBe(0);
    expect(t.dst[0]).toBe(1);
    expect(t.shared_pixels[0]).toBe(2);
    expect(t.color_distance[0]).toBeCloseTo(Math.sqrt(3), 5);
    expect(t.dst_r[0]).toBe(1);
    expect(t.src_size).toBeInstanceOf(Int32Array);
    expect(t.perim_frac_src).toBeInstanceOf(Float64Array);
  });

  it("handles a header-only table", () => {
    expect(parseEdgeCsv(`${EDGE_HEADER}\n`).src.length).toBe(0);
  });

  it("rejects foreign headers and ragged rows", () => {
    expect(() => parseEdgeCsv("src,dst\n0,1\n")).toThrow(/header/);
    expect(() => parseEdgeCsv(`${EDGE_HEADER}\n0,1\n`)).toThrow(/short/);
  });
});

describe("label csv", () => {
  it("parses a matrix", () => {
    const m = parseLabelCsv("0,0,1\n2,2,1\n");
    expect(m.width).toBe(3);
    expect(m.height).toBe(2);
    expect([...m.labels]).toEqual([0, 0, 1, 2, 2, 1]);
  });

  it("rejects ragged and empty input", () => {
    expect(() => parseLabelCsv("0,1\n2\n")).toThrow(/ragged/);
    expect(() => parseLabelCsv("")).toThrow(/empty/);
  });
});

describe("loss history", () => {
  it("parses one float per line", () => {
    expect(parseLossHistory("3.25\n1e-3\n0\n")).toEqual([3.25, 0.001, 0]);
    expect(() => parseLossHistory("abc\n")).toThrow(/bad loss/);
  });
});
