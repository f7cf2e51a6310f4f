/**
 * Binary PPM (P6, 8-bit) codec. This is the transport format between the
 * bindings and the engine process, chosen because both ends produce it
 * byte-for-byte deterministically.
 */

/** 8-bit RGB image, row-major, 3 bytes per pixel. */
export interface RawImage {
  width: number;
  height: number;
  data: Uint8Array;
}

/** Normalized RGB image, values in [0, 1]. */
export interface NormalizedImage {
  width: number;
  height: number;
  data: Float64Array;
}

export function isNormalized(img: RawImage | NormalizedImage): img is NormalizedImage {
  return img.data instanceof Float64Array;
}

export function checkShape(img: RawImage | NormalizedImage): void {
  if (img.width < 1 || img.height < 1 || !Number.isInteger(img.width) || !Number.isInteger(img.height)) {
    throw new Error(`bad image dimensions ${img.width}x${img.height}`);
  }
  if (img.data.length !== img.width * img.height * 3) {
    throw new Error(
      `image buffer holds ${img.data.length} values, expected ${img.width * img.height * 3}`,
    );
  }
}

/** v/255 normalization, exact inverse of quantize on byte-valued inputs. */
export function normalize(img: RawImage): NormalizedImage {
  checkShape(img);
  const data = new Float64Array(img.data.length);
  for (let i = 0; i < data.length; i++) data[i] = img.data[i]! / 255;
  return { width: img.width, height: img.height, data };
}

/** Round-half-up quantization to bytes, matching the engine's writer. */
export function quantize(img: NormalizedImage): RawImage {
  checkShape(img);
  const data = new Uint8Array(img.data.length);
  for (let i = 0; i < data.length; i++) {
    const v = img.data[i]!;
    if (!Number.isFinite(v) || v < 0 || v > 1) {
      throw new Error(`normalized value out of [0, 1]: ${v}`);
    }
    data[i] = Math.min(255, Math.floor(v * 255 + 0.5));
  }
  return { width: img.width, height: img.height, data };
}

export function encodePpm(img: RawImage): Uint8Array {
  checkShape(img);
  const header = new TextEncoder().encode(`P6\n${img.width} ${img.height}\n255\n`);
  const out = new Uint8Array(header.length + img.data.length);
  out.set(header, 0);
  out.set(img.data, header.length);
  return out;
}

function isSpace(b: number): boolean {
  return b === 0x20 || b === 0x09 || b === 0x0a || b === 0x0d || b === 0x0b || b === 0x0c;
}

export function decodePpm(bytes: Uint8Array): RawImage {
  if (bytes[0] !== 0x50 || bytes[1] !== 0x36) {
    throw new Error("not a binary PPM (missing P6 magic)");
  }
  const fields: number[] = [];
  let pos = 2;
  while (fields.length < 3) {
    while (pos < bytes.length && isSpace(bytes[pos]!)) pos++;
    if (bytes[pos] === 0x23) {
      // comment runs to end of line
      while (pos < bytes.length && bytes[pos] !== 0x0a) pos++;
      continue;
    }
    let start = pos;
    while (pos < bytes.length && !isSpace(bytes[pos]!)) pos++;
    if (start === pos) throw new Error("truncated PPM header");
    const token = new TextDecoder().decode(bytes.subarray(start, pos));
    const value = Number(token);
    if (!Number.isInteger(value) || value < 0) throw new Error(`bad PPM header field ${token}`);
    fields.push(value);
  }
  pos++; // single whitespace after maxval
  const [width, height, maxval] = fields as [number, number, number];
  if (maxval !== 255) throw new Error(`unsupported PPM maxval ${maxval}`);
  const need = width * height * 3;
  if (bytes.length - pos < need) throw new Error("truncated PPM pixel data");
  return { width, height, data: bytes.slice(pos, pos + need) };
}
