// Wire formats served by the lacklab HTTP API (schema v1).

export const AXIS_NAMES = [
  "payload0_3",
  "seq",
  "seqdiff",
  "size",
  "ptype",
  "ssrc",
  "jitter",
  "arrival",
  "ooo",
] as const;

export type AxisName = (typeof AXIS_NAMES)[number];

export type PointClass = "in_order" | "out_of_order";

export interface CloudPoint {
  x: number;
  y: number;
  z: number;
  n: number;
  class: PointClass;
}

export interface PointCloud {
  axes: [string, string, string];
  meta: { ssrc: number; window: number; packets: number; v: number };
  points: CloudPoint[];
}

export interface WindowReport {
  window: number;
  packets: number;
  ooo_ratio: number;
  delay_cv: number | null;
  top_prefix_share_among_ooo: number;
  top_prefix_count_among_ooo: number;
  size_bias: number;
  fired_indicators: string[];
  verdict: "clean" | "suspicious";
}

export interface DetectionReport {
  v: number;
  ssrc: number;
  verdict: "clean" | "suspicious";
  thresholds: Record<string, number>;
  offsets: number[];
  windows: WindowReport[];
}

export interface StreamInfo {
  ssrc: number;
  packets: number;
  payload_type: number;
}

export interface CaptureInfo {
  id: string;
  path: string;
  streams: StreamInfo[];
}
