// Gregorian conversions and calendar tokenization, mirrored from the primary.
// All integer arithmetic; |values| stay far below 2^53.

import { DomainError, InvalidDateError, TokenError } from "./errors.js";

export const SECONDS_PER_DAY = 86400;
export const FIXED_YEAR_S = 365 * SECONDS_PER_DAY;
export const FIXED_MONTH_S = 30 * SECONDS_PER_DAY;
export const REL_SECONDS_MAX = 100 * FIXED_YEAR_S;

export type Resolution = "day" | "hour" | "minute" | "second";

export function resolutionFields(r: Resolution): number {
  return { day: 3, hour: 4, minute: 5, second: 6 }[r];
}

const DAYS_IN_MONTH = [31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31];

const floorDiv = (a: number, b: number) => Math.floor(a / b);
const floorMod = (a: number, b: number) => a - b * Math.floor(a / b);

function isLeap(y: number): boolean {
  return y % 4 === 0 && (y % 100 !== 0 || y % 400 === 0);
}

function daysInMonth(y: number, m: number): number {
  if (m === 2 && isLeap(y)) return 29;
  return DAYS_IN_MONTH[m - 1];
}

export interface CivilTime {
  year: number;
  month: number;
  day: number;
  hour: number;
  minute: number;
  second: number;
}

export function validateCivil(c: CivilTime): void {
  if (c.month < 1 || c.month > 12) throw new InvalidDateError(`month must be in [1, 12], got ${c.month}`);
  if (c.day < 1 || c.day > daysInMonth(c.year, c.month)) {
    throw new InvalidDateError(`day ${c.day} is invalid for ${c.year}-${c.month}`);
  }
  if (c.hour < 0 || c.hour > 23 || c.minute < 0 || c.minute > 59 || c.second < 0 || c.second > 59) {
    throw new InvalidDateError(`time ${c.hour}:${c.minute}:${c.second} out of range`);
  }
}

function daysFromCivil(y: number, m: number, d: number): number {
  y -= m <= 2 ? 1 : 0;
  const era = floorDiv(y, 400);
  const yoe = y - era * 400;
  const doy = floorDiv(153 * (m + (m > 2 ? -3 : 9)) + 2, 5) + d - 1;
  const doe = yoe * 365 + floorDiv(yoe, 4) - floorDiv(yoe, 100) + doy;
  return era * 146097 + doe - 719468;
}

function civilFromDays(z: number): [number, number, number] {
  z += 719468;
  const era = floorDiv(z, 146097);
  const doe = z - era * 146097;
  const yoe = floorDiv(doe - floorDiv(doe, 1460) + floorDiv(doe, 36524) - floorDiv(doe, 146096), 365);
  const y = yoe + era * 400;
  const doy = doe - (365 * yoe + floorDiv(yoe, 4) - floorDiv(yoe, 100));
  const mp = floorDiv(5 * doy + 2, 153);
  const d = doy - floorDiv(153 * mp + 2, 5) + 1;
  const m = mp + (mp < 10 ? 3 : -9);
  return [y + (m <= 2 ? 1 : 0), m, d];
}

export const EPOCH_MIN = daysFromCivil(1900, 1, 1) * SECONDS_PER_DAY;
export const EPOCH_MAX = daysFromCivil(2200, 1, 1) * SECONDS_PER_DAY; // exclusive

export function civilFromEpoch(t: number): CivilTime {
  if (!(t >= EPOCH_MIN && t < EPOCH_MAX)) {
    throw new DomainError(`epoch ${t} outside supported range [${EPOCH_MIN}, ${EPOCH_MAX})`);
  }
  const days = floorDiv(t, SECONDS_PER_DAY);
  const sod = floorMod(t, SECONDS_PER_DAY);
  const [year, month, day] = civilFromDays(days);
  return {
    year,
    month,
    day,
    hour: floorDiv(sod, 3600),
    minute: floorDiv(floorMod(sod, 3600), 60),
    second: floorMod(sod, 60),
  };
}

export function epochFromCivil(c: CivilTime): number {
  validateCivil(c);
  return daysFromCivil(c.year, c.month, c.day) * SECONDS_PER_DAY + c.hour * 3600 + c.minute * 60 + c.second;
}

const FIELD_NAMES = ["year", "month", "day", "hour", "min", "sec"] as const;
const TOKEN_RE = /^<\|(year|month|day|hour|min|sec)_(\d{2,4})\|>$/;

function fieldToken(name: string, value: number, width: number): string {
  return `<|${name}_${String(value).padStart(width, "0")}|>`;
}

export function encodeAbs(t: number, r: Resolution): string[] {
  const c = civilFromEpoch(t);
  const fields = [c.year, c.month, c.day, c.hour, c.minute, c.second];
  const out = [fieldToken("year", c.year, 4)];
  for (let i = 1; i < FIELD_NAMES.length; i++) out.push(fieldToken(FIELD_NAMES[i], fields[i], 2));
  return out.slice(0, resolutionFields(r));
}

function parseFields(tokens: readonly string[], r: Resolution, yearWidth: number): number[] {
  const n = resolutionFields(r);
  if (tokens.length !== n) {
    throw new TokenError(`${r} resolution needs ${n} tokens, got ${tokens.length}`, Math.min(tokens.length, n));
  }
  const values: number[] = [];
  for (let i = 0; i < tokens.length; i++) {
    const m = TOKEN_RE.exec(tokens[i]);
    if (!m || m[1] !== FIELD_NAMES[i]) {
      throw new TokenError(`expected a ${FIELD_NAMES[i]} token, got '${tokens[i]}'`, i);
    }
    const want = i === 0 ? yearWidth : 2;
    if (m[2].length !== want) {
      throw new TokenError(`${FIELD_NAMES[i]} token needs ${want} digits, got '${tokens[i]}'`, i);
    }
    values.push(Number(m[2]));
  }
  return values;
}

export function decodeAbs(tokens: readonly string[], r: Resolution): number {
  const v = parseFields(tokens, r, 4);
  while (v.length < 6) v.push(0);
  const t = epochFromCivil({ year: v[0], month: v[1], day: v[2], hour: v[3], minute: v[4], second: v[5] });
  if (!(t >= EPOCH_MIN && t < EPOCH_MAX)) {
    throw new TokenError(`decoded instant ${t} outside supported range`);
  }
  return t;
}

export function encodeRel(deltaS: number, r: Resolution): string[] {
  if (!Number.isFinite(deltaS) || deltaS < 0) {
    throw new DomainError(`relative span requires a finite value >= 0, got ${deltaS}`);
  }
  if (deltaS >= REL_SECONDS_MAX) {
    throw new DomainError(`span ${deltaS} s exceeds the 99-year token ceiling`);
  }
  let rem = Math.floor(deltaS);
  const years = floorDiv(rem, FIXED_YEAR_S);
  rem -= years * FIXED_YEAR_S;
  const months = floorDiv(rem, FIXED_MONTH_S);
  rem -= months * FIXED_MONTH_S;
  const days = floorDiv(rem, SECONDS_PER_DAY);
  rem -= days * SECONDS_PER_DAY;
  const hours = floorDiv(rem, 3600);
  rem -= hours * 3600;
  const minutes = floorDiv(rem, 60);
  const seconds = rem - minutes * 60;
  const fields = [years, months, days, hours, minutes, seconds];
  return fields.slice(0, resolutionFields(r)).map((v, i) => fieldToken(FIELD_NAMES[i], v, 2));
}

export function decodeRel(tokens: readonly string[], r: Resolution): number {
  const v = parseFields(tokens, r, 2);
  while (v.length < 6) v.push(0);
  if (v[1] > 12) throw new TokenError(`relative month field out of range: ${v[1]}`);
  return v[0] * FIXED_YEAR_S + v[1] * FIXED_MONTH_S + v[2] * SECONDS_PER_DAY + v[3] * 3600 + v[4] * 60 + v[5];
}
