// Exact fixed-point formatting of non-negative doubles: round-half-to-even
// on the true binary value, like the primary's formatter. BigInt arithmetic
// on the significand keeps it exact at every precision.

import { DomainError } from "./errors.js";

const view = new DataView(new ArrayBuffer(8));

/** (significand, exponent) with value = significand * 2^exponent, significand >= 0. */
function decompose(x: number): [bigint, number] {
  view.setFloat64(0, x);
  const bits = view.getBigUint64(0);
  const rawExp = Number((bits >> 52n) & 0x7ffn);
  const frac = bits & 0xfffffffffffffn;
  if (rawExp === 0) return [frac, -1074];
  return [frac | (1n << 52n), rawExp - 1075];
}

export function formatFixed(v: number, precision: number): string {
  if (!Number.isFinite(v) || v < 0) {
    throw new DomainError(`encode_numeric requires a finite value >= 0, got ${v}`);
  }
  if (precision < 0 || precision > 17) {
    throw new DomainError(`precision must be in [0, 17], got ${precision}`);
  }
  const [sig, exp] = decompose(v);
  const p = BigInt(precision);
  let scaled: bigint; // round(v * 10^precision), ties to even
  if (exp >= 0) {
    scaled = sig * (1n << BigInt(exp)) * 10n ** p;
  } else {
    const num = sig * 10n ** p;
    const den = 1n << BigInt(-exp);
    const q = num / den;
    const r = num % den;
    const twice = r * 2n;
    if (twice > den || (twice === den && (q & 1n) === 1n)) {
      scaled = q + 1n;
    } else {
      scaled = q;
    }
  }
  let digits = scaled.toString();
  if (precision === 0) return digits;
  if (digits.length <= precision) {
    digits = digits.padStart(precision + 1, "0");
  }
  const cut = digits.length - precision;
  return digits.slice(0, cut) + "." + digits.slice(cut);
}
