// Orthographic 3D camera: yaw about the vertical axis, then pitch, then a
// zoomed parallel projection onto the canvas.

import { Camera } from "./state";

export interface Vec3 {
  x: number;
  y: number;
  z: number;
}

export interface Projected {
  sx: number;
  sy: number;
  /** View-space depth; larger is closer to the viewer. */
  depth: number;
}

export function rotatePoint(p: Vec3, camera: Camera): Vec3 {
  const cy = Math.cos(camera.yaw);
  const sy = Math.sin(camera.yaw);
  const cp = Math.cos(camera.pitch);
  const sp = Math.sin(camera.pitch);
  const x1 = p.x * cy + p.z * sy;
  const z1 = -p.x * sy + p.z * cy;
  const y2 = p.y * cp - z1 * sp;
  const z2 = p.y * sp + z1 * cp;
  return { x: x1, y: y2, z: z2 };
}

export function projectPoint(p: Vec3, camera: Camera, width: number, height: number): Projected {
  const r = rotatePoint(p, camera);
  const scale = 0.38 * Math.min(width, height) * camera.zoom;
  return {
    sx: width / 2 + r.x * scale,
    sy: height / 2 - r.y * scale,
    depth: -r.z,
  };
}

/** Corner pairs of the [-1, 1] cube, for drawing the bounding box. */
export function cubeEdges(): [Vec3, Vec3][] {
  const corners: Vec3[] = [];
  for (const x of [-1, 1]) for (const y of [-1, 1]) for (const z of [-1, 1]) corners.push({ x, y, z });
  const edges: [Vec3, Vec3][] = [];
  for (let i = 0; i < corners.length; i++) {
    for (let j = i + 1; j < corners.length; j++) {
      const a = corners[i];
      const b = corners[j];
      const differing =
        Number(a.x !== b.x) + Number(a.y !== b.y) + Number(a.z !== b.z);
      if (differing === 1) edges.push([a, b]);
    }
  }
  return edges;
}
