// URL construction and fetch plumbing for the read-only analysis API.

import { CaptureInfo, DetectionReport, PointCloud } from "./types";
import { ViewState } from "./state";

export function capturesUrl(base = ""): string {
  return `${base}/api/captures`;
}

function windowParams(state: ViewState, includeIndex: boolean): string[] {
  const params: string[] = [];
  if (state.wsize !== null) {
    params.push(`wsize=${state.wsize}`);
    params.push(`wstride=${state.wstride ?? state.wsize}`);
    if (includeIndex) params.push(`win=${state.win}`);
  }
  return params;
}

export function cloudUrl(state: ViewState, base = ""): string {
  if (state.capture === null || state.ssrc === null) {
    throw new Error("no capture/stream selected");
  }
  const params = [
    `x=${state.axes[0]}`,
    `y=${state.axes[1]}`,
    `z=${state.axes[2]}`,
    ...windowParams(state, true),
  ];
  return (
    `${base}/api/captures/${encodeURIComponent(state.capture)}` +
    `/streams/${state.ssrc}/pointcloud?${params.join("&")}`
  );
}

export function reportUrl(state: ViewState, base = ""): string {
  if (state.capture === null || state.ssrc === null) {
    throw new Error("no capture/stream selected");
  }
  const params = windowParams(state, false);
  const query = params.length ? `?${params.join("&")}` : "";
  return (
    `${base}/api/captures/${encodeURIComponent(state.capture)}` +
    `/streams/${state.ssrc}/report${query}`
  );
}

export interface Fetched<T> {
  data: T;
  /** Raw response text, kept for byte-exact display of numeric values. */
  raw: string;
}

export type FetchLike = (url: string) => Promise<{ ok: boolean; status: number; text(): Promise<string> }>;

/** One in-flight fetch per panel: responses arriving after a newer request
 *  started are discarded (resolved as null). */
export class LatestFetcher {
  private token = 0;

  constructor(private readonly fetchFn: FetchLike = (url) => fetch(url)) {}

  async fetchJson<T>(url: string): Promise<Fetched<T> | null> {
    const token = ++this.token;
    const response = await this.fetchFn(url);
    if (!response.ok) {
      throw new Error(`HTTP ${response.status} for ${url}`);
    }
    const raw = await response.text();
    if (token !== this.token) return null;
    return { data: JSON.parse(raw) as T, raw };
  }
}

export async function fetchCaptures(fetchFn: FetchLike = (url) => fetch(url), base = ""): Promise<CaptureInfo[]> {
  const response = await fetchFn(capturesUrl(base));
  if (!response.ok) throw new Error(`HTTP ${response.status} for /api/captures`);
  return JSON.parse(await response.text()) as CaptureInfo[];
}

export type CloudResult = Fetched<PointCloud>;
export type ReportResult = Fetched<DetectionReport>;
