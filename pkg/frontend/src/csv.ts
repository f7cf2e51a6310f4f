/**
 * Parsers for the engine's CSV exports: the edge table and the label matrix.
 */

export const EDGE_HEADER =
  "src,dst,color_distance,shared_pixels,perim_frac_src,perim_frac_dst," +
  "src_size,dst_size,src_r,src_g,src_b,dst_r,dst_g,dst_b";

const INT_COLUMNS = new Set(["src", "dst", "shared_pixels", "src_size", "dst_size"]);

/** Edge attributes as parallel columns, one entry per edge. */
export interface EdgeTable {
  src: Int32Array;
  dst: Int32Array;
  color_distance: Float64Array;
  shared_pixels: Int32Array;
  perim_frac_src: Float64Array;
  perim_frac_dst: Float64Array;
  src_size: Int32Array;
  dst_size: Int32Array;
  src_r: Float64Array;
  src_g: Float64Array;
  src_b: Float64Array;
  dst_r: Float64Array;
  dst_g: Float64Array;
  dst_b: Float64Array;
}

export function parseEdgeCsv(text: string): EdgeTable {
  const lines = text.split("\n").filter((l) => l.length > 0);
  if (lines[0] !== EDGE_HEADER) {
    throw new Error(`unexpected edge CSV header: ${lines[0] ?? "<empty>"}`);
  }
  const names = EDGE_HEADER.split(",");
  const rows = lines.slice(1).map((line) => line.split(","));
  for (const row of rows) {
    if (row.length !== names.length) throw new Error(`short edge CSV row: ${row.join(",")}`);
  }
  const table: Record<string, Int32Array | Float64Array> = {};
  names.forEach((name, col) => {
    if (INT_COLUMNS.has(name)) {
      table[name] = Int32Array.from(rows, (row) => {
        const v = Number(row[col]);
        if (!Number.isInteger(v)) throw new Error(`non-integer ${name}: ${row[col]}`);
        return v;
      });
    } else {
      table[name] = Float64Array.from(rows, (row) => {
        const v = Number(row[col]);
        if (!Number.isFinite(v)) throw new Error(`non-numeric ${name}: ${row[col]}`);
        return v;
      });
    }
  });
  return table as unknown as EdgeTable;
}

/** Per-pixel node ids with the image's shape. */
export interface LabelMatrix {
  width: number;
  height: number;
  /** row-major, length width*height */
  labels: Int32Array;
}

export function parseLabelCsv(text: string): LabelMatrix {
  const rows = text.split("\n").filter((l) => l.length > 0);
  if (rows.length === 0) throw new Error("empty label matrix");
  const first = rows[0]!.split(",");
  const width = first.length;
  const labels = new Int32Array(rows.length * width);
  rows.forEach((line, y) => {
    const cells = line.split(",");
    if (cells.length !== width) throw new Error(`ragged label row ${y}`);
    cells.forEach((cell, x) => {
      const v = Number(cell);
      if (!Number.isInteger(v) || v < 0) throw new Error(`bad label ${cell}`);
      labels[y * width + x] = v;
    });
  });
  return { width, height: rows.length, labels };
}

/** Loss trace from the denoiser, one value per line. */
export function parseLossHistory(text: string): number[] {
  return text
    .split("\n")
    .filter((l) => l.length > 0)
    .map((l) => {
      const v = Number(l);
      if (!Number.isFinite(v)) throw new Error(`bad loss value ${l}`);
      return v;
    });
}
