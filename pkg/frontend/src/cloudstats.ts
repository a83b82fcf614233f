// Pure helpers over fetched point clouds; also the invariants the UI surfaces.

import { CloudPoint, PointCloud, PointClass } from "./types";
import { ClassFilter } from "./state";

export function multiplicityTotal(points: CloudPoint[]): number {
  return points.reduce((sum, p) => sum + p.n, 0);
}

export function filterByClass(points: CloudPoint[], filter: ClassFilter): CloudPoint[] {
  if (filter === "all") return points;
  return points.filter((p) => p.class === filter);
}

/** Distinct values on one axis among points of the given class. */
export function distinctAxisValues(
  points: CloudPoint[],
  axis: 0 | 1 | 2,
  cls?: PointClass
): number[] {
  const pick = (p: CloudPoint) => [p.x, p.y, p.z][axis];
  const seen = new Set<number>();
  for (const p of points) {
    if (cls === undefined || p.class === cls) seen.add(pick(p));
  }
  return [...seen].sort((a, b) => a - b);
}

/** Coordinate-permuted copy of a cloud's points: slot i of the result takes
 *  its value from slot perm[i] of the source. */
export function permutePoints(points: CloudPoint[], perm: [number, number, number]): CloudPoint[] {
  return points.map((p) => {
    const coords = [p.x, p.y, p.z];
    return { x: coords[perm[0]], y: coords[perm[1]], z: coords[perm[2]], n: p.n, class: p.class };
  });
}

/** Canonical multiset encoding for point-set comparisons. */
export function pointKeys(points: CloudPoint[]): string[] {
  return points.map((p) => `${p.x}|${p.y}|${p.z}|${p.class}|${p.n}`).sort();
}

/** The display-side conservation check: shown multiplicity must equal the
 *  window packet count claimed by the server. */
export function conservationHolds(cloud: PointCloud): boolean {
  return multiplicityTotal(cloud.points) === cloud.meta.packets;
}
