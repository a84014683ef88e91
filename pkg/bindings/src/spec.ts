// Tokenizer spec file loading: schema validation, version gate, checksum
// verification. The checksum canonical form replaces every float with its
// big-endian IEEE-754 bit-hex string and serializes with sorted keys and
// compact separators, exactly as the primary does.

import { createHash } from "node:crypto";
import { readFileSync } from "node:fs";

import { doubleToHex } from "./math.js";
import { ChecksumMismatchError, SpecFileError, VersionMismatchError } from "./errors.js";

export const SPEC_FORMAT_VERSION = "1";

export type Strategy = "numeric" | "byte" | "cal_abs" | "cal_rel" | "scale_bin" | "rsq";
export type Unit = "second" | "hour" | "day" | "week" | "month";
export type ResolutionName = "day" | "hour" | "minute" | "second";

export const SECONDS_PER_UNIT: Record<Unit, number> = {
  second: 1,
  hour: 3600,
  day: 86400,
  week: 604800,
  month: 2592000,
};

export interface ScaleParams {
  kind: "linear" | "log10";
  epsilon: number;
}

export interface LoadedSpec {
  version: string;
  strategy: Strategy;
  unit: Unit;
  precision?: number;
  resolution?: ResolutionName;
  yearLo?: number;
  yearHi?: number;
  scale?: ScaleParams;
  k?: number;
  lo?: number;
  hi?: number;
  levels?: number[][];
}

type Canon = string | number | Canon[] | { [k: string]: Canon };

function stableStringify(node: Canon): string {
  if (typeof node === "string") return JSON.stringify(node);
  if (typeof node === "number") {
    if (!Number.isInteger(node)) throw new SpecFileError(`non-integer number ${node} in canonical form`);
    return String(node);
  }
  if (Array.isArray(node)) return "[" + node.map(stableStringify).join(",") + "]";
  const keys = Object.keys(node).sort();
  return "{" + keys.map((k) => JSON.stringify(k) + ":" + stableStringify(node[k])).join(",") + "}";
}

const f = (x: number): string => "f:" + doubleToHex(x);

function canonicalParams(strategy: Strategy, p: Record<string, unknown>): Canon {
  switch (strategy) {
    case "numeric":
      return { precision: p.precision as number };
    case "byte":
      return {};
    case "cal_abs":
      return { resolution: p.resolution as string, year_lo: p.year_lo as number, year_hi: p.year_hi as number };
    case "cal_rel":
      return { resolution: p.resolution as string };
    case "scale_bin": {
      const s = p.scale as { kind: string; epsilon: number };
      return { scale: { kind: s.kind, epsilon: f(s.epsilon) }, k: p.k as number, lo: f(p.lo as number), hi: f(p.hi as number) };
    }
    case "rsq": {
      const s = p.scale as { kind: string; epsilon: number };
      return { scale: { kind: s.kind, epsilon: f(s.epsilon) }, levels: (p.levels as number[][]).map((row) => row.map(f)) };
    }
  }
}

function checksum(version: string, strategy: Strategy, unit: string, params: Canon): string {
  const blob = stableStringify({ version, strategy, unit, params });
  return "sha256:" + createHash("sha256").update(blob, "utf8").digest("hex");
}

const STRATEGIES = new Set(["numeric", "byte", "cal_abs", "cal_rel", "scale_bin", "rsq"]);
const UNITS = new Set(["second", "hour", "day", "week", "month"]);
const RESOLUTIONS = new Set(["day", "hour", "minute", "second"]);

export function loadSpecFile(path: string): LoadedSpec {
  let body: unknown;
  try {
    body = JSON.parse(readFileSync(path, "utf8"));
  } catch (exc) {
    throw new SpecFileError(`spec file is not valid JSON: ${(exc as Error).message}`);
  }
  if (typeof body !== "object" || body === null || Array.isArray(body)) {
    throw new SpecFileError("spec file must hold a JSON object");
  }
  const b = body as Record<string, unknown>;
  for (const key of ["version", "strategy", "unit", "params", "checksum"]) {
    if (!(key in b)) throw new SpecFileError(`spec file missing key '${key}'`);
  }
  if (b.version !== SPEC_FORMAT_VERSION) {
    throw new VersionMismatchError(`spec version '${b.version}' != supported '${SPEC_FORMAT_VERSION}'`);
  }
  const strategy = b.strategy as Strategy;
  if (!STRATEGIES.has(strategy)) throw new SpecFileError(`unknown strategy '${strategy}'`);
  const unit = b.unit as Unit;
  if (!UNITS.has(unit)) throw new SpecFileError(`unknown unit '${unit}'`);
  const params = b.params as Record<string, unknown>;
  const expected = checksum(b.version as string, strategy, unit, canonicalParams(strategy, params));
  if (b.checksum !== expected) {
    throw new ChecksumMismatchError(`checksum mismatch: file has ${b.checksum}, content is ${expected}`);
  }
  return buildSpec(strategy, unit, b.version as string, params);
}

function need<T>(params: Record<string, unknown>, key: string, check: (v: unknown) => boolean): T {
  const v = params[key];
  if (!check(v)) throw new SpecFileError(`bad params: field '${key}' is missing or mistyped`);
  return v as T;
}

const isNum = (v: unknown) => typeof v === "number" && Number.isFinite(v);
const isInt = (v: unknown) => typeof v === "number" && Number.isInteger(v);

function parseScale(v: unknown): ScaleParams {
  if (typeof v !== "object" || v === null) throw new SpecFileError("bad params: scale must be an object");
  const s = v as Record<string, unknown>;
  if (s.kind !== "linear" && s.kind !== "log10") throw new SpecFileError(`bad scale kind '${s.kind}'`);
  if (!isNum(s.epsilon) || (s.kind === "log10" && (s.epsilon as number) <= 0)) {
    throw new SpecFileError("bad scale epsilon");
  }
  return { kind: s.kind, epsilon: s.epsilon as number };
}

function buildSpec(strategy: Strategy, unit: Unit, version: string, p: Record<string, unknown>): LoadedSpec {
  const spec: LoadedSpec = { version, strategy, unit };
  switch (strategy) {
    case "numeric": {
      const precision = need<number>(p, "precision", isInt);
      if (precision < 0 || precision > 17) throw new SpecFileError(`precision must be in [0, 17], got ${precision}`);
      spec.precision = precision;
      break;
    }
    case "byte":
      break;
    case "cal_abs": {
      const res = need<string>(p, "resolution", (v) => typeof v === "string" && RESOLUTIONS.has(v as string));
      spec.resolution = res as ResolutionName;
      spec.yearLo = need<number>(p, "year_lo", isInt);
      spec.yearHi = need<number>(p, "year_hi", isInt);
      if (!(1900 <= spec.yearLo && spec.yearLo <= spec.yearHi && spec.yearHi <= 2199)) {
        throw new SpecFileError(`fitted year range [${spec.yearLo}, ${spec.yearHi}] outside [1900, 2199]`);
      }
      break;
    }
    case "cal_rel": {
      const res = need<string>(p, "resolution", (v) => typeof v === "string" && RESOLUTIONS.has(v as string));
      spec.resolution = res as ResolutionName;
      break;
    }
    case "scale_bin": {
      spec.scale = parseScale(p.scale);
      spec.k = need<number>(p, "k", isInt);
      spec.lo = need<number>(p, "lo", isNum);
      spec.hi = need<number>(p, "hi", isNum);
      if (spec.k < 1) throw new SpecFileError(`bin count must be >= 1, got ${spec.k}`);
      if (!(spec.lo < spec.hi)) throw new SpecFileError(`bin range must satisfy lo < hi`);
      break;
    }
    case "rsq": {
      spec.scale = parseScale(p.scale);
      const levels = need<unknown[]>(p, "levels", Array.isArray);
      if (levels.length === 0) throw new SpecFileError("an RSQ spec needs at least one level");
      spec.levels = levels.map((row, i) => {
        if (!Array.isArray(row) || row.length === 0 || !row.every(isNum)) {
          throw new SpecFileError(`bad centroid row at level ${i}`);
        }
        const cents = row as number[];
        for (let j = 1; j < cents.length; j++) {
          if (!(cents[j - 1] < cents[j])) throw new SpecFileError("centroids must be strictly ascending");
        }
        return cents;
      });
      break;
    }
  }
  return spec;
}
