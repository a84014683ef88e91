// Fixed-sequence float helpers mirrored from the primary implementation.
// Every operation here is a plain IEEE-754 double op in a fixed order, so
// results are bit-identical to the primary across runtimes. Do not "simplify"
// arithmetic: the exact op sequence is the contract.

const LN2_HI = 0.6931471805599453;
const LN2_LO = 2.3190468138462996e-17;
const LN10_HI = 2.302585092994046;
const LN10_LO = -2.1707562233822494e-16;
const INV_LN10_HI = 0.4342944819032518;
const INV_LN10_LO = 1.098319650216765e-17;
const INV_LN2 = 1.4426950408889634;
const SQRT_HALF = 0.7071067811865476;

const POW10: number[] = [];
for (let n = -30; n <= 30; n++) POW10.push(Number(`1e${n}`));

const view = new DataView(new ArrayBuffer(8));

export function doubleToHex(x: number): string {
  view.setFloat64(0, x);
  return view.getBigUint64(0).toString(16).padStart(16, "0");
}

export function hexToDouble(h: string): number {
  view.setBigUint64(0, BigInt("0x" + h));
  return view.getFloat64(0);
}

export function nextAfterUp(x: number): number {
  if (Number.isNaN(x) || x === Infinity) return x;
  if (x === 0) return 5e-324;
  view.setFloat64(0, x);
  let bits = view.getBigUint64(0);
  bits += x > 0 ? 1n : -1n;
  view.setBigUint64(0, bits);
  return view.getFloat64(0);
}

export function nextAfterDown(x: number): number {
  if (Number.isNaN(x) || x === -Infinity) return x;
  if (x === 0) return -5e-324;
  view.setFloat64(0, x);
  let bits = view.getBigUint64(0);
  bits += x > 0 ? -1n : 1n;
  view.setBigUint64(0, bits);
  return view.getFloat64(0);
}

export function twoSum(a: number, b: number): [number, number] {
  const s = a + b;
  const bb = s - a;
  return [s, (a - (s - bb)) + (b - bb)];
}

function split(a: number): [number, number] {
  const c = 134217729.0 * a; // 2**27 + 1, Dekker splitting
  const hi = c - (c - a);
  return [hi, a - hi];
}

export function twoProd(a: number, b: number): [number, number] {
  const p = a * b;
  const [ah, al] = split(a);
  const [bh, bl] = split(b);
  return [p, ((ah * bh - p) + ah * bl + al * bh) + al * bl];
}

/** x = m * 2^e with m in [0.5, 1); x must be positive and finite. */
export function frexp(x: number): [number, number] {
  view.setFloat64(0, x);
  let bits = view.getBigUint64(0);
  let e = Number((bits >> 52n) & 0x7ffn);
  if (e === 0) {
    // subnormal: scale into the normal range first
    view.setFloat64(0, x * 0x10000000000000000); // 2^64
    bits = view.getBigUint64(0);
    e = Number((bits >> 52n) & 0x7ffn) - 64;
  }
  const exp = e - 1022;
  bits = (bits & 0x800fffffffffffffn) | (1022n << 52n);
  view.setBigUint64(0, bits);
  return [view.getFloat64(0), exp];
}

/** m * 2^k, exact for results in the normal range (the domain used here). */
export function ldexp(m: number, k: number): number {
  if (m === 0 || !Number.isFinite(m)) return m;
  let r = m;
  while (k > 1023) {
    r *= pow2(1023);
    k -= 1023;
  }
  while (k < -1022) {
    r *= pow2(-1022);
    k += 1022;
  }
  return r * pow2(k);
}

function pow2(k: number): number {
  view.setBigUint64(0, BigInt(k + 1023) << 52n);
  return view.getFloat64(0);
}

/** Base-10 log of a positive finite double, bit-identical to the primary. */
export function log10Portable(x: number): number {
  let [m, e] = frexp(x);
  if (m < SQRT_HALF) {
    m = m * 2.0;
    e = e - 1;
  }
  const t = (m - 1.0) / (m + 1.0);
  const z = t * t;
  let p = 1.0 / 21.0;
  p = p * z + 1.0 / 19.0;
  p = p * z + 1.0 / 17.0;
  p = p * z + 1.0 / 15.0;
  p = p * z + 1.0 / 13.0;
  p = p * z + 1.0 / 11.0;
  p = p * z + 1.0 / 9.0;
  p = p * z + 1.0 / 7.0;
  p = p * z + 1.0 / 5.0;
  p = p * z + 1.0 / 3.0;
  const lnM = 2.0 * (t + t * (z * p));
  let [eh, el] = twoProd(e, LN2_HI);
  el = el + e * LN2_LO;
  const [sh, sl0] = twoSum(eh, lnM);
  const sl = sl0 + el;
  const [rh, rl0] = twoProd(sh, INV_LN10_HI);
  const rl = rl0 + sh * INV_LN10_LO + sl * INV_LN10_HI;
  return rh + rl;
}

/** 10**u for finite u, bit-identical to the primary; exact at integer u in [-30, 30]. */
export function exp10Portable(u: number): number {
  if (u >= -30.0 && u <= 30.0 && u === Math.floor(u)) {
    return POW10[u + 30];
  }
  if (u > 310.0) return Infinity;
  if (u < -330.0) return 0.0;
  let [wh, wl] = twoProd(u, LN10_HI);
  wl = wl + u * LN10_LO;
  const k = Math.floor(wh * INV_LN2 + 0.5);
  let [th, tl] = twoProd(k, LN2_HI);
  tl = tl + k * LN2_LO;
  const [rh, e1] = twoSum(wh, -th);
  const rl = e1 + (wl - tl);
  let q = 1.0 / 6227020800.0;
  q = q * rh + 1.0 / 479001600.0;
  q = q * rh + 1.0 / 39916800.0;
  q = q * rh + 1.0 / 3628800.0;
  q = q * rh + 1.0 / 362880.0;
  q = q * rh + 1.0 / 40320.0;
  q = q * rh + 1.0 / 5040.0;
  q = q * rh + 1.0 / 720.0;
  q = q * rh + 1.0 / 120.0;
  q = q * rh + 1.0 / 24.0;
  q = q * rh + 1.0 / 6.0;
  q = q * rh + 0.5;
  q = q * rh + 1.0;
  q = q * rh + 1.0;
  q = q + q * rl;
  return ldexp(q, k);
}

/** Exact predicate for real(a - b) > half. */
export function exceedsHalf(a: number, b: number, half: number): boolean {
  const [t, te] = twoSum(a, -b);
  return t > half || (t === half && te > 0.0);
}
