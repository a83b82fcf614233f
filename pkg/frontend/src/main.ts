// Workbench wiring: selectors and canvas on the left, detector panel on the
// right; camera moves redraw locally, everything else refetches as needed.

import { CloudResult, LatestFetcher, ReportResult, cloudUrl, fetchCaptures, reportUrl } from "./api";
import { conservationHolds, multiplicityTotal } from "./cloudstats";
import { renderReportHtml } from "./panel";
import { RenderedPoint, drawCloud, hitTest } from "./render";
import {
  ClassFilter,
  ViewState,
  cloudQueryKey,
  initialState,
  reportQueryKey,
  rotateCamera,
  setAxis,
  setClassFilter,
  setTarget,
  setWindowIndex,
  setWindowing,
  toggleLogAxis,
  zoomCamera,
} from "./state";
import { AXIS_NAMES, AxisName, CaptureInfo } from "./types";

const $ = <T extends HTMLElement>(id: string): T => {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el as T;
};

let state: ViewState = initialState();
let captures: CaptureInfo[] = [];
let cloud: CloudResult | null = null;
let report: ReportResult | null = null;
let rendered: RenderedPoint[] = [];
let lastCloudKey: string | null = null;
let lastReportKey: string | null = null;

const cloudFetcher = new LatestFetcher();
const reportFetcher = new LatestFetcher();

function showError(message: string): void {
  const banner = $<HTMLDivElement>("error-banner");
  banner.textContent = message;
  banner.classList.remove("hidden");
}

function clearError(): void {
  $<HTMLDivElement>("error-banner").classList.add("hidden");
}

function canvasSize(canvas: HTMLCanvasElement): [number, number] {
  const rect = canvas.getBoundingClientRect();
  const dpr = window.devicePixelRatio || 1;
  canvas.width = rect.width * dpr;
  canvas.height = rect.height * dpr;
  const ctx = canvas.getContext("2d");
  if (ctx) ctx.setTransform(dpr, 0, 0, dpr, 0, 0);
  return [rect.width, rect.height];
}

function draw(): void {
  const canvas = $<HTMLCanvasElement>("scatter");
  const ctx = canvas.getContext("2d");
  if (!ctx) return;
  const [width, height] = canvasSize(canvas);
  if (cloud === null) {
    ctx.clearRect(0, 0, width, height);
    rendered = [];
    return;
  }
  rendered = drawCloud(ctx, cloud.data, state, width, height);
  const total = multiplicityTotal(cloud.data.points);
  const badge = $<HTMLDivElement>("badge");
  badge.textContent =
    `${cloud.data.points.length} points · ${total} packets` +
    (conservationHolds(cloud.data) ? "" : ` · MISMATCH vs meta.packets=${cloud.data.meta.packets}`);
  badge.classList.toggle("bad", !conservationHolds(cloud.data));
}

function renderPanel(): void {
  const panel = $<HTMLDivElement>("report-panel");
  if (report === null) {
    panel.innerHTML = "<p class=\"muted\">no report loaded</p>";
    return;
  }
  panel.innerHTML = renderReportHtml(report.data, report.raw, state.win);
  const slider = $<HTMLInputElement>("win");
  slider.max = String(Math.max(report.data.windows.length - 1, 0));
  slider.value = String(state.win);
  $<HTMLSpanElement>("win-label").textContent = `${state.win + 1}/${report.data.windows.length}`;
}

async function sync(): Promise<void> {
  const ck = cloudQueryKey(state);
  if (ck !== null && ck !== lastCloudKey) {
    try {
      const result = await cloudFetcher.fetchJson(cloudUrl(state)) as CloudResult | null;
      if (result !== null) {
        cloud = result;
        lastCloudKey = ck;
        clearError();
      }
    } catch (err) {
      showError(String(err));
    }
  }
  const rk = reportQueryKey(state);
  if (rk !== null && rk !== lastReportKey) {
    try {
      const result = await reportFetcher.fetchJson(reportUrl(state)) as ReportResult | null;
      if (result !== null) {
        report = result;
        lastReportKey = rk;
      }
    } catch (err) {
      showError(String(err));
    }
  }
  draw();
  renderPanel();
}

function update(next: ViewState): void {
  state = next;
  void sync();
}

function populateTargets(): void {
  const captureSel = $<HTMLSelectElement>("capture");
  captureSel.innerHTML = captures
    .map((c) => `<option value="${c.id}">${c.id} (${c.streams.length} streams)</option>`)
    .join("");
  populateStreams();
}

function populateStreams(): void {
  const captureSel = $<HTMLSelectElement>("capture");
  const streamSel = $<HTMLSelectElement>("stream");
  const capture = captures.find((c) => c.id === captureSel.value) ?? captures[0];
  if (!capture) return;
  streamSel.innerHTML = capture.streams
    .map((s) => `<option value="${s.ssrc}">ssrc ${s.ssrc} · pt ${s.payload_type} · ${s.packets} pkts</option>`)
    .join("");
  const ssrc = capture.streams[0]?.ssrc ?? null;
  if (ssrc !== null) update(setTarget(state, capture.id, ssrc));
}

function wireControls(): void {
  $<HTMLSelectElement>("capture").addEventListener("change", populateStreams);
  $<HTMLSelectElement>("stream").addEventListener("change", (ev) => {
    const ssrc = Number((ev.target as HTMLSelectElement).value);
    if (state.capture !== null) update(setTarget(state, state.capture, ssrc));
  });

  (["x", "y", "z"] as const).forEach((name, slot) => {
    const sel = $<HTMLSelectElement>(`axis-${name}`);
    sel.innerHTML = AXIS_NAMES.map((a) => `<option value="${a}">${a}</option>`).join("");
    sel.value = state.axes[slot];
    sel.addEventListener("change", () => {
      update(setAxis(state, slot as 0 | 1 | 2, sel.value as AxisName));
      syncAxisSelectors();
    });
    $<HTMLInputElement>(`log-${name}`).addEventListener("change", () => {
      update(toggleLogAxis(state, slot as 0 | 1 | 2));
    });
  });

  $<HTMLSelectElement>("class-filter").addEventListener("change", (ev) => {
    update(setClassFilter(state, (ev.target as HTMLSelectElement).value as ClassFilter));
  });

  const applyWindowing = () => {
    const wsize = $<HTMLInputElement>("wsize").valueAsNumber;
    const wstride = $<HTMLInputElement>("wstride").valueAsNumber;
    update(
      setWindowing(
        state,
        Number.isFinite(wsize) && wsize > 0 ? wsize : null,
        Number.isFinite(wstride) && wstride > 0 ? wstride : null
      )
    );
  };
  $<HTMLInputElement>("wsize").addEventListener("change", applyWindowing);
  $<HTMLInputElement>("wstride").addEventListener("change", applyWindowing);
  $<HTMLInputElement>("win").addEventListener("input", (ev) => {
    update(setWindowIndex(state, Number((ev.target as HTMLInputElement).value)));
  });
}

function syncAxisSelectors(): void {
  (["x", "y", "z"] as const).forEach((name, slot) => {
    $<HTMLSelectElement>(`axis-${name}`).value = state.axes[slot];
  });
}

function wireCanvas(): void {
  const canvas = $<HTMLCanvasElement>("scatter");
  let dragging = false;
  let last: [number, number] = [0, 0];
  canvas.addEventListener("pointerdown", (ev) => {
    dragging = true;
    last = [ev.clientX, ev.clientY];
    canvas.setPointerCapture(ev.pointerId);
  });
  canvas.addEventListener("pointerup", () => (dragging = false));
  canvas.addEventListener("pointermove", (ev) => {
    if (dragging) {
      const dyaw = (ev.clientX - last[0]) * 0.01;
      const dpitch = (ev.clientY - last[1]) * 0.01;
      last = [ev.clientX, ev.clientY];
      state = rotateCamera(state, dyaw, dpitch);
      draw(); // camera-only: no refetch
    } else {
      const rect = canvas.getBoundingClientRect();
      const hit = hitTest(rendered, ev.clientX - rect.left, ev.clientY - rect.top);
      $<HTMLDivElement>("inspect").textContent = hit
        ? `(${hit.point.x}, ${hit.point.y}, ${hit.point.z}) ×${hit.point.n} ${hit.point.class}`
        : "";
    }
  });
  canvas.addEventListener("wheel", (ev) => {
    ev.preventDefault();
    state = zoomCamera(state, ev.deltaY < 0 ? 1.12 : 1 / 1.12);
    draw();
  });
}

async function boot(): Promise<void> {
  wireControls();
  wireCanvas();
  try {
    captures = await fetchCaptures();
    if (captures.length === 0) {
      showError("server has no captures loaded; restart serve with pcap paths");
      return;
    }
    populateTargets();
  } catch (err) {
    showError(String(err));
  }
}

void boot();
