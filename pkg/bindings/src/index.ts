// Public surface: load a fitted tokenizer spec file and use it from Node.
// A BoundTokenizer is immutable after load and safe to share.

import { decodeValue, encodeValue, renderSequence, type SequenceRecord, type TemplateOrder } from "./template.js";
import { loadSpecFile, type LoadedSpec, type Strategy, type Unit } from "./spec.js";
import { buildVocab } from "./vocab.js";
import { TimetokError } from "./errors.js";

export * from "./errors.js";
export { loadSpecFile, SPEC_FORMAT_VERSION } from "./spec.js";
export type { LoadedSpec, SequenceRecord, Strategy, TemplateOrder, Unit };
export {
  BEGIN_EVENT,
  END_EVENT,
  STRUCTURAL_TOKENS,
  TIME_PREFIX,
  TYPE_PREFIX,
  payloadArity,
  renderEvent,
  eventTimeValue,
} from "./template.js";

export class BoundTokenizer {
  readonly strategy: Strategy;
  readonly unit: Unit;
  private readonly spec: LoadedSpec;

  constructor(spec: LoadedSpec) {
    this.spec = spec;
    this.strategy = spec.strategy;
    this.unit = spec.unit;
  }

  /** Tokens for one time value (epoch seconds for cal_abs, gap seconds for
   * cal_rel, dataset units otherwise). The numeric strategy returns its plain
   * string as a single element. */
  encodeValue(v: number): string[] {
    return encodeValue(this.spec, v);
  }

  decodeValue(tokens: readonly string[]): number {
    return decodeValue(this.spec, tokens);
  }

  /** Render a full event sequence (a dataset JSONL record, parsed or raw). */
  renderSequence(seq: SequenceRecord | string, order: TemplateOrder = "type_time"): string[] {
    const record = typeof seq === "string" ? (JSON.parse(seq) as SequenceRecord) : seq;
    if (!Array.isArray(record.type_text) || !Array.isArray(record.timestamp) || !Array.isArray(record.interval)) {
      throw new TimetokError("sequence record needs type_text/timestamp/interval arrays");
    }
    return renderSequence(record, this.spec, order);
  }

  /** The ordered special-token list this tokenizer adds to a host vocabulary. */
  vocab(): string[] {
    return buildVocab(this.spec);
  }
}

export function loadTokenizer(path: string): BoundTokenizer {
  return new BoundTokenizer(loadSpecFile(path));
}
