// Value-level codecs, mirrored op-for-op from the primary so outputs are
// byte-identical: numeric strings, float32 bytes, scale bins, RSQ.

import { formatFixed } from "./decimal.js";
import { DomainError, ParseError, TokenError } from "./errors.js";
import { exceedsHalf, exp10Portable, log10Portable, nextAfterDown, nextAfterUp } from "./math.js";
import type { LoadedSpec, ScaleParams } from "./spec.js";

// ---------------------------------------------------------------------------
// scale transforms

export function transform(v: number, s: ScaleParams): number {
  if (!Number.isFinite(v) || v < 0) {
    throw new DomainError(`transform requires a finite value >= 0, got ${v}`);
  }
  if (s.kind === "linear") return v;
  return log10Portable(v + s.epsilon);
}

export function inverseTransform(u: number, s: ScaleParams): number {
  if (!Number.isFinite(u)) throw new DomainError(`inverse_transform requires a finite value, got ${u}`);
  const raw = s.kind === "linear" ? u : exp10Portable(u) - s.epsilon;
  return raw <= 0 ? 0 : raw; // comparison clamp: never emits -0
}

// ---------------------------------------------------------------------------
// numeric strings

const NUMERIC_RE = /^[0-9]+(\.[0-9]+)?/;

export function encodeNumeric(v: number, precision: number): string {
  return formatFixed(v, precision);
}

export function decodeNumeric(s: string): number {
  const m = NUMERIC_RE.exec(s);
  if (m === null || m[0].length !== s.length) {
    throw new ParseError(`not a fixed-point number: '${s}'`, m === null ? 0 : m[0].length);
  }
  return Number(s);
}

// ---------------------------------------------------------------------------
// float32 bytes

const f32 = new DataView(new ArrayBuffer(4));
const BYTE_RE = /^<\|byte_(\d{3})\|>$/;

export function encodeBytes(v: number): string[] {
  if (!Number.isFinite(v)) throw new DomainError(`encode_bytes requires a finite value, got ${v}`);
  const narrowed = Math.fround(v);
  if (!Number.isFinite(narrowed)) throw new DomainError(`value ${v} overflows single precision`);
  f32.setFloat32(0, narrowed, true);
  const out: string[] = [];
  for (let i = 0; i < 4; i++) out.push(`<|byte_${String(f32.getUint8(i)).padStart(3, "0")}|>`);
  return out;
}

export function decodeBytes(tokens: readonly string[]): number {
  if (tokens.length !== 4) throw new TokenError(`byte decode needs exactly 4 tokens, got ${tokens.length}`);
  for (let i = 0; i < 4; i++) {
    const m = BYTE_RE.exec(tokens[i]);
    if (!m) throw new TokenError(`not a byte token literal: '${tokens[i]}'`);
    const value = Number(m[1]);
    if (value > 255) throw new TokenError(`byte token out of range: '${tokens[i]}'`);
    f32.setUint8(i, value);
  }
  const out = f32.getFloat32(0, true);
  if (!Number.isFinite(out)) throw new TokenError("byte tokens decode outside the finite range");
  return out;
}

// ---------------------------------------------------------------------------
// uniform scale bins

const BIN_RE = /^<\|bin_(\d{3,})\|>$/;

function binWidth(spec: LoadedSpec): number {
  return (spec.hi! - spec.lo!) / spec.k!;
}

export function binIndex(v: number, spec: LoadedSpec): number {
  const u = transform(v, spec.scale!);
  const j = Math.floor((u - spec.lo!) / binWidth(spec));
  if (j < 0) return 0;
  if (j > spec.k! - 1) return spec.k! - 1;
  return j;
}

export function binCenter(spec: LoadedSpec, j: number): number {
  const w = binWidth(spec);
  const half = w / 2.0;
  let c = spec.lo! + (j + 0.5) * w;
  if (spec.k! > 1) {
    if (j === 0) {
      while (exceedsHalf(c, spec.lo!, half)) c = nextAfterDown(c);
    } else if (j === spec.k! - 1) {
      while (exceedsHalf(spec.hi!, c, half)) c = nextAfterUp(c);
    }
  }
  return c;
}

export function binEncode(v: number, spec: LoadedSpec): string {
  return `<|bin_${String(binIndex(v, spec)).padStart(3, "0")}|>`;
}

export function binDecode(token: string, spec: LoadedSpec): number {
  const m = BIN_RE.exec(token);
  if (!m) throw new TokenError(`not a bin token literal: '${token}'`);
  const j = Number(m[1]);
  if (!(j >= 0 && j < spec.k!)) throw new TokenError(`bin index ${j} out of range [0, ${spec.k})`);
  return inverseTransform(binCenter(spec, j), spec.scale!);
}

// ---------------------------------------------------------------------------
// residual scalar quantization

const LEVEL_RE = /^<\|L(\d+)_(\d{3,})\|>$/;

/** bisect_left over the centroid midpoints; an exact tie lands on the lower index. */
function nearestIndex(centroids: readonly number[], x: number): number {
  let lo = 0;
  let hi = centroids.length - 1; // number of midpoints
  while (lo < hi) {
    const mid = (lo + hi) >> 1;
    const boundary = (centroids[mid] + centroids[mid + 1]) / 2.0;
    if (boundary < x) lo = mid + 1;
    else hi = mid;
  }
  return lo;
}

export function rsqEncode(v: number, spec: LoadedSpec): string[] {
  let r = transform(v, spec.scale!);
  const out: string[] = [];
  for (let level = 0; level < spec.levels!.length; level++) {
    const cents = spec.levels![level];
    const q = nearestIndex(cents, r);
    r = r - cents[q];
    out.push(`<|L${level}_${String(q).padStart(3, "0")}|>`);
  }
  return out;
}

export function rsqDecode(tokens: readonly string[], spec: LoadedSpec): number {
  const n = spec.levels!.length;
  if (tokens.length !== n) throw new TokenError(`RSQ decode needs exactly ${n} tokens, got ${tokens.length}`);
  let total = 0.0;
  for (let i = 0; i < n; i++) {
    const m = LEVEL_RE.exec(tokens[i]);
    if (!m) throw new TokenError(`not an RSQ token literal: '${tokens[i]}'`, i);
    const level = Number(m[1]);
    const idx = Number(m[2]);
    if (level !== i) throw new TokenError(`expected level ${i} token, got '${tokens[i]}'`, i);
    const cents = spec.levels![i];
    if (!(idx >= 0 && idx < cents.length)) {
      throw new TokenError(`index ${idx} out of range for level ${i} (k=${cents.length})`, i);
    }
    total = total + cents[idx];
  }
  return inverseTransform(total, spec.scale!);
}
