import { describe, expect, it } from "vitest";

import {
  cloudQueryKey,
  initialState,
  reportQueryKey,
  rotateCamera,
  setAxis,
  setTarget,
  setWindowIndex,
  setWindowing,
  toggleLogAxis,
  zoomCamera,
} from "../src/state";

function selected() {
  return setTarget(initialState(), "steg", 123);
}

describe("setAxis", () => {
  it("keeps the three axes distinct by swapping", () => {
    const s = initialState(); // seqdiff, size, payload0_3
    const next = setAxis(s, 0, "size");
    expect(next.axes).toEqual(["size", "seqdiff", "payload0_3"]);
  });

  it("plain change when no collision", () => {
    const next = setAxis(initialState(), 2, "jitter");
    expect(next.axes).toEqual(["seqdiff", "size", "jitter"]);
    expect(new Set(next.axes).size).toBe(3);
  });
});

describe("query keys", () => {
  it("are null until a capture and stream are chosen", () => {
    expect(cloudQueryKey(initialState())).toBeNull();
    expect(reportQueryKey(initialState())).toBeNull();
  });

  it("ignore camera, class filter, and log toggles", () => {
    const s = selected();
    const moved = zoomCamera(rotateCamera(s, 0.5, -0.2), 1.4);
    const logged = toggleLogAxis(moved, 1);
    expect(cloudQueryKey(logged)).toBe(cloudQueryKey(s));
    expect(reportQueryKey(logged)).toBe(reportQueryKey(s));
  });

  it("change when axes or windowing change", () => {
    const s = selected();
    expect(cloudQueryKey(setAxis(s, 0, "jitter"))).not.toBe(cloudQueryKey(s));
    const windowed = setWindowing(s, 500, 250);
    expect(cloudQueryKey(windowed)).not.toBe(cloudQueryKey(s));
    expect(cloudQueryKey(setWindowIndex(windowed, 2))).not.toBe(cloudQueryKey(windowed));
  });

  it("report key ignores the window index but not the window grid", () => {
    const s = setWindowing(selected(), 500, 250);
    expect(reportQueryKey(setWindowIndex(s, 3))).toBe(reportQueryKey(s));
    expect(reportQueryKey(s)).not.toBe(reportQueryKey(selected()));
  });
});

describe("windowing", () => {
  it("resets the scrub position", () => {
    const s = setWindowIndex(setWindowing(selected(), 500, 500), 4);
    expect(setWindowing(s, 250, 250).win).toBe(0);
  });

  it("clearing the size clears the stride", () => {
    const s = setWindowing(selected(), 500, 250);
    const whole = setWindowing(s, null, 250);
    expect(whole.wsize).toBeNull();
    expect(whole.wstride).toBeNull();
  });
});

describe("camera", () => {
  it("clamps pitch and zoom", () => {
    let s = selected();
    for (let i = 0; i < 50; i++) s = rotateCamera(s, 0, 0.5);
    expect(s.camera.pitch).toBeLessThanOrEqual(1.5);
    for (let i = 0; i < 50; i++) s = zoomCamera(s, 2);
    expect(s.camera.zoom).toBeLessThanOrEqual(12);
    for (let i = 0; i < 80; i++) s = zoomCamera(s, 0.5);
    expect(s.camera.zoom).toBeGreaterThanOrEqual(0.2);
  });
});
