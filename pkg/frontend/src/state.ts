// View state and its pure transitions; rendering and fetching key off this.

import { AxisName, PointClass } from "./types";

export interface Camera {
  yaw: number;
  pitch: number;
  zoom: number;
}

export type ClassFilter = "all" | PointClass;

export interface ViewState {
  capture: string | null;
  ssrc: number | null;
  axes: [AxisName, AxisName, AxisName];
  win: number;
  wsize: number | null;
  wstride: number | null;
  camera: Camera;
  classFilter: ClassFilter;
  logAxes: [boolean, boolean, boolean];
}

export function initialState(): ViewState {
  return {
    capture: null,
    ssrc: null,
    axes: ["seqdiff", "size", "payload0_3"],
    win: 0,
    wsize: null,
    wstride: null,
    camera: { yaw: 0.7, pitch: 0.45, zoom: 1 },
    classFilter: "all",
    logAxes: [false, false, false],
  };
}

/** Change one axis; if the name is already used elsewhere, swap the two slots
 *  so the three selections stay distinct. */
export function setAxis(state: ViewState, slot: 0 | 1 | 2, name: AxisName): ViewState {
  const axes = [...state.axes] as ViewState["axes"];
  const existing = axes.indexOf(name);
  if (existing >= 0 && existing !== slot) {
    axes[existing] = axes[slot];
  }
  axes[slot] = name;
  return { ...state, axes };
}

export function setTarget(state: ViewState, capture: string, ssrc: number): ViewState {
  return { ...state, capture, ssrc, win: 0 };
}

/** Windowing change resets the scrub position. */
export function setWindowing(
  state: ViewState,
  wsize: number | null,
  wstride: number | null
): ViewState {
  return { ...state, wsize, wstride: wsize === null ? null : wstride, win: 0 };
}

export function setWindowIndex(state: ViewState, win: number): ViewState {
  return { ...state, win: Math.max(0, win) };
}

export function rotateCamera(state: ViewState, dyaw: number, dpitch: number): ViewState {
  const pitch = Math.max(-1.5, Math.min(1.5, state.camera.pitch + dpitch));
  return { ...state, camera: { ...state.camera, yaw: state.camera.yaw + dyaw, pitch } };
}

export function zoomCamera(state: ViewState, factor: number): ViewState {
  const zoom = Math.max(0.2, Math.min(12, state.camera.zoom * factor));
  return { ...state, camera: { ...state.camera, zoom } };
}

export function toggleLogAxis(state: ViewState, slot: 0 | 1 | 2): ViewState {
  const logAxes = [...state.logAxes] as ViewState["logAxes"];
  logAxes[slot] = !logAxes[slot];
  return { ...state, logAxes };
}

export function setClassFilter(state: ViewState, filter: ClassFilter): ViewState {
  return { ...state, classFilter: filter };
}

/** Cache key for the point-cloud fetch: camera, filters, and log toggles are
 *  presentation-only and must not trigger a refetch. */
export function cloudQueryKey(state: ViewState): string | null {
  if (state.capture === null || state.ssrc === null) return null;
  const w = state.wsize === null ? "" : `|${state.win}|${state.wsize}|${state.wstride ?? state.wsize}`;
  return `${state.capture}|${state.ssrc}|${state.axes.join(",")}${w}`;
}

export function reportQueryKey(state: ViewState): string | null {
  if (state.capture === null || state.ssrc === null) return null;
  const w = state.wsize === null ? "" : `|${state.wsize}|${state.wstride ?? state.wsize}`;
  return `${state.capture}|${state.ssrc}${w}`;
}
