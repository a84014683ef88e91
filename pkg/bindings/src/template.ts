// Event-template rendering plus the per-strategy value dispatch.

import {
  binDecode,
  binEncode,
  decodeBytes,
  decodeNumeric,
  encodeBytes,
  encodeNumeric,
  rsqDecode,
  rsqEncode,
} from "./codecs.js";
import { decodeAbs, decodeRel, encodeAbs, encodeRel, resolutionFields } from "./calendar.js";
import { TimetokError, TokenError } from "./errors.js";
import type { LoadedSpec } from "./spec.js";

export const BEGIN_EVENT = "<|begin_of_event|>";
export const TYPE_PREFIX = "<|type_prefix|>";
export const TIME_PREFIX = "<|time_prefix|>";
export const END_EVENT = "<|end_of_event|>";
export const STRUCTURAL_TOKENS = [BEGIN_EVENT, TYPE_PREFIX, TIME_PREFIX, END_EVENT] as const;

export type TemplateOrder = "type_time" | "time_type";

export interface SequenceRecord {
  type_text: string[];
  timestamp: number[];
  interval: number[];
}

export function payloadArity(spec: LoadedSpec): number {
  switch (spec.strategy) {
    case "numeric":
    case "scale_bin":
      return 1;
    case "byte":
      return 4;
    case "cal_abs":
    case "cal_rel":
      return resolutionFields(spec.resolution!);
    case "rsq":
      return spec.levels!.length;
  }
}

/** Encode one time value: epoch seconds for cal_abs, gap seconds for cal_rel,
 * dataset units otherwise. */
export function encodeValue(spec: LoadedSpec, v: number): string[] {
  switch (spec.strategy) {
    case "numeric":
      return [encodeNumeric(v, spec.precision!)];
    case "byte":
      return encodeBytes(v);
    case "cal_abs":
      return encodeAbs(Math.floor(v), spec.resolution!);
    case "cal_rel":
      return encodeRel(v, spec.resolution!);
    case "scale_bin":
      return [binEncode(v, spec)];
    case "rsq":
      return rsqEncode(v, spec);
  }
}

export function decodeValue(spec: LoadedSpec, payload: readonly string[]): number {
  switch (spec.strategy) {
    case "numeric":
      if (payload.length !== 1) throw new TokenError(`numeric payload must be 1 element, got ${payload.length}`);
      return decodeNumeric(payload[0]);
    case "byte":
      return decodeBytes(payload);
    case "cal_abs":
      return decodeAbs(payload, spec.resolution!);
    case "cal_rel":
      return decodeRel(payload, spec.resolution!);
    case "scale_bin":
      if (payload.length !== 1) throw new TokenError(`bin payload must be 1 token, got ${payload.length}`);
      return binDecode(payload[0], spec);
    case "rsq":
      return rsqDecode(payload, spec);
  }
}

export function renderEvent(typeText: string, timeTokens: readonly string[], order: TemplateOrder): string[] {
  if (order === "type_time") {
    return [BEGIN_EVENT, TYPE_PREFIX, typeText, TIME_PREFIX, ...timeTokens, END_EVENT];
  }
  return [BEGIN_EVENT, TIME_PREFIX, ...timeTokens, TYPE_PREFIX, typeText, END_EVENT];
}

export function eventTimeValue(spec: LoadedSpec, seq: SequenceRecord, i: number): number {
  if (spec.strategy === "cal_abs") return seq.timestamp[i];
  if (spec.strategy === "cal_rel") return i === 0 ? 0 : seq.timestamp[i] - seq.timestamp[i - 1];
  return seq.interval[i];
}

export function renderSequence(
  seq: SequenceRecord,
  spec: LoadedSpec,
  order: TemplateOrder = "type_time",
): string[] {
  const n = seq.type_text.length;
  if (seq.timestamp.length !== n || seq.interval.length !== n) {
    throw new TimetokError(
      `array lengths differ: type_text=${n} timestamp=${seq.timestamp.length} interval=${seq.interval.length}`,
    );
  }
  const out: string[] = [];
  for (let i = 0; i < n; i++) {
    out.push(...renderEvent(seq.type_text[i], encodeValue(spec, eventTimeValue(spec, seq, i)), order));
  }
  return out;
}
