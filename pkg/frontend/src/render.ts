// Canvas scatter renderer: cube frame, axis labels, depth-sorted points.

import { filterByClass } from "./cloudstats";
import { cubeEdges, projectPoint, Vec3 } from "./projection";
import { extentOf, normalize, radiusFor } from "./scales";
import { ClassFilter, ViewState } from "./state";
import { CloudPoint, PointCloud } from "./types";

export const CLASS_COLORS: Record<string, string> = {
  in_order: "#5aa9e6",
  out_of_order: "#ff4d4d", // alert color for delayed packets
};

export interface RenderedPoint {
  sx: number;
  sy: number;
  radius: number;
  point: CloudPoint;
}

/** Pure layout step: scale into the unit cube, rotate, project, depth-sort. */
export function layoutPoints(
  cloud: PointCloud,
  state: ViewState,
  width: number,
  height: number
): RenderedPoint[] {
  const visible = filterByClass(cloud.points, state.classFilter as ClassFilter);
  const extents = [
    extentOf(cloud.points.map((p) => p.x)),
    extentOf(cloud.points.map((p) => p.y)),
    extentOf(cloud.points.map((p) => p.z)),
  ];
  const maxN = cloud.points.reduce((m, p) => Math.max(m, p.n), 1);
  const projected = visible.map((p) => {
    const unit: Vec3 = {
      x: normalize(p.x, extents[0], state.logAxes[0]),
      y: normalize(p.y, extents[1], state.logAxes[1]),
      z: normalize(p.z, extents[2], state.logAxes[2]),
    };
    const s = projectPoint(unit, state.camera, width, height);
    return { sx: s.sx, sy: s.sy, radius: radiusFor(p.n, maxN), point: p, depth: s.depth };
  });
  projected.sort((a, b) => a.depth - b.depth);
  return projected.map(({ sx, sy, radius, point }) => ({ sx, sy, radius, point }));
}

export function drawCloud(
  ctx: CanvasRenderingContext2D,
  cloud: PointCloud,
  state: ViewState,
  width: number,
  height: number
): RenderedPoint[] {
  ctx.clearRect(0, 0, width, height);

  ctx.strokeStyle = "#3a4154";
  ctx.lineWidth = 1;
  for (const [a, b] of cubeEdges()) {
    const pa = projectPoint(a, state.camera, width, height);
    const pb = projectPoint(b, state.camera, width, height);
    ctx.beginPath();
    ctx.moveTo(pa.sx, pa.sy);
    ctx.lineTo(pb.sx, pb.sy);
    ctx.stroke();
  }

  ctx.fillStyle = "#8892a6";
  ctx.font = "12px sans-serif";
  const labelAnchors: [Vec3, string][] = [
    [{ x: 1.15, y: -1, z: -1 }, `x: ${cloud.axes[0]}${state.logAxes[0] ? " (log)" : ""}`],
    [{ x: -1, y: 1.2, z: -1 }, `y: ${cloud.axes[1]}${state.logAxes[1] ? " (log)" : ""}`],
    [{ x: -1, y: -1, z: 1.2 }, `z: ${cloud.axes[2]}${state.logAxes[2] ? " (log)" : ""}`],
  ];
  for (const [anchor, label] of labelAnchors) {
    const p = projectPoint(anchor, state.camera, width, height);
    ctx.fillText(label, p.sx, p.sy);
  }

  const maxN = cloud.points.reduce((m, p) => Math.max(m, p.n), 1);
  const rendered = layoutPoints(cloud, state, width, height);
  for (const r of rendered) {
    ctx.beginPath();
    // opacity tracks multiplicity; the alert class never fades out
    ctx.globalAlpha =
      r.point.class === "out_of_order"
        ? 0.95
        : Math.min(0.9, 0.35 + 0.55 * Math.sqrt(r.point.n / maxN));
    ctx.fillStyle = CLASS_COLORS[r.point.class];
    ctx.arc(r.sx, r.sy, r.radius, 0, 2 * Math.PI);
    ctx.fill();
  }
  ctx.globalAlpha = 1;
  return rendered;
}

/** Nearest rendered point within `maxDist` of the cursor, for inspection. */
export function hitTest(
  rendered: RenderedPoint[],
  x: number,
  y: number,
  maxDist = 10
): RenderedPoint | null {
  let best: RenderedPoint | null = null;
  let bestDist = maxDist;
  for (const r of rendered) {
    const d = Math.hypot(r.sx - x, r.sy - y) - r.radius;
    if (d < bestDist) {
      bestDist = d;
      best = r;
    }
  }
  return best;
}
