// Vocabulary manifest reconstruction: the same ordered token inventory the
// primary's manifest files carry.

import { resolutionFields } from "./calendar.js";
import type { LoadedSpec } from "./spec.js";
import { STRUCTURAL_TOKENS } from "./template.js";

const pad = (v: number, width: number) => String(v).padStart(width, "0");

function calendarTokens(spec: LoadedSpec): string[] {
  const out: string[] = [];
  const nFields = resolutionFields(spec.resolution!);
  let ranges: Array<[string, number, number]>;
  if (spec.strategy === "cal_abs") {
    for (let y = spec.yearLo!; y <= spec.yearHi!; y++) out.push(`<|year_${pad(y, 4)}|>`);
    ranges = [["month", 1, 12], ["day", 1, 31], ["hour", 0, 23], ["min", 0, 59], ["sec", 0, 59]];
  } else {
    for (let y = 0; y < 100; y++) out.push(`<|year_${pad(y, 2)}|>`);
    ranges = [["month", 0, 12], ["day", 0, 30], ["hour", 0, 23], ["min", 0, 59], ["sec", 0, 59]];
  }
  for (const [name, lo, hi] of ranges.slice(0, nFields - 1)) {
    for (let v = lo; v <= hi; v++) out.push(`<|${name}_${pad(v, 2)}|>`);
  }
  return out;
}

export function buildVocab(spec: LoadedSpec): string[] {
  const strategyTokens: string[] = [];
  switch (spec.strategy) {
    case "numeric":
      break;
    case "byte":
      for (let b = 0; b < 256; b++) strategyTokens.push(`<|byte_${pad(b, 3)}|>`);
      break;
    case "scale_bin":
      for (let j = 0; j < spec.k!; j++) strategyTokens.push(`<|bin_${pad(j, 3)}|>`);
      break;
    case "rsq":
      spec.levels!.forEach((cents, level) => {
        for (let i = 0; i < cents.length; i++) strategyTokens.push(`<|L${level}_${pad(i, 3)}|>`);
      });
      break;
    case "cal_abs":
    case "cal_rel":
      strategyTokens.push(...calendarTokens(spec));
      break;
  }
  return [...STRUCTURAL_TOKENS, ...strategyTokens];
}
