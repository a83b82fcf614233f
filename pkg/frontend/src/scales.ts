// Axis scaling: linear or signed-log value transforms into [-1, 1] cube
// coordinates, plus the multiplicity-to-radius mapping.

export interface Extent {
  min: number;
  max: number;
}

export function extentOf(values: number[]): Extent {
  if (values.length === 0) return { min: 0, max: 0 };
  let min = values[0];
  let max = values[0];
  for (const v of values) {
    if (v < min) min = v;
    if (v > max) max = v;
  }
  return { min, max };
}

/** Log-style transform defined on all reals: sign(v) * log10(1 + |v|).
 *  Monotone, zero at zero, so negative-valued axes (seqdiff) stay usable. */
export function signedLog(v: number): number {
  return Math.sign(v) * Math.log10(1 + Math.abs(v));
}

/** Map a value into [-1, 1] given its axis extent; degenerate extents land
 *  everything at 0. */
export function normalize(v: number, ext: Extent, log: boolean): number {
  const t = log ? signedLog(v) : v;
  const lo = log ? signedLog(ext.min) : ext.min;
  const hi = log ? signedLog(ext.max) : ext.max;
  if (hi === lo) return 0;
  return -1 + (2 * (t - lo)) / (hi - lo);
}

/** Point radius grows with the square root of multiplicity so area tracks
 *  packet count; clamped for readability. */
export function radiusFor(n: number, maxN: number): number {
  const base = 2.5;
  const span = 9;
  if (maxN <= 1) return base;
  return base + (span * (Math.sqrt(n) - 1)) / (Math.sqrt(maxN) - 1);
}
