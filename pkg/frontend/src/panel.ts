// Indicator panel: per-window detector values, fired flags, and verdicts.
//
// Numeric cells show the response's literal bytes (via rawvalues), so what
// the analyst reads is exactly what the detector wrote.

import { DetectionReport } from "./types";
import { RawNode, literalText, nodeAt, parseSpans } from "./rawvalues";

export const VALUE_FIELDS = [
  "ooo_ratio",
  "delay_cv",
  "top_prefix_share_among_ooo",
  "top_prefix_count_among_ooo",
  "size_bias",
] as const;

export type ValueField = (typeof VALUE_FIELDS)[number];

const FIELD_LABEL: Record<ValueField, string> = {
  ooo_ratio: "out-of-order ratio",
  delay_cv: "delay CV",
  top_prefix_share_among_ooo: "top prefix share",
  top_prefix_count_among_ooo: "top prefix count",
  size_bias: "size bias",
};

const FIELD_INDICATOR: Record<ValueField, string> = {
  ooo_ratio: "ooo",
  delay_cv: "fixed_delay",
  top_prefix_share_among_ooo: "prefix",
  top_prefix_count_among_ooo: "prefix",
  size_bias: "size_bias",
};

export interface WindowLiterals {
  fields: Record<ValueField, string>;
}

/** Literal value substrings for every window in the report text. */
export function reportLiterals(rawText: string): WindowLiterals[] {
  const root = parseSpans(rawText);
  const windows = nodeAt(root, ["windows"]);
  if (windows === null || windows.kind !== "array") return [];
  return windows.elements.map((w: RawNode) => {
    const fields = {} as Record<ValueField, string>;
    for (const field of VALUE_FIELDS) {
      const node = w.kind === "object" ? w.members[field] : undefined;
      fields[field] = node ? literalText(rawText, node) : "";
    }
    return { fields };
  });
}

export function thresholdLiterals(rawText: string): Record<string, string> {
  const root = parseSpans(rawText);
  const thresholds = nodeAt(root, ["thresholds"]);
  const out: Record<string, string> = {};
  if (thresholds !== null && thresholds.kind === "object") {
    for (const [key, node] of Object.entries(thresholds.members)) {
      out[key] = literalText(rawText, node);
    }
  }
  return out;
}

export function escapeHtml(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function renderReportHtml(
  report: DetectionReport,
  rawText: string,
  currentWindow: number
): string {
  const literals = reportLiterals(rawText);
  const thresholds = thresholdLiterals(rawText);
  const rows = report.windows
    .map((w, i) => {
      const fired = new Set(w.fired_indicators);
      const cells = VALUE_FIELDS.map((field) => {
        const firedClass = fired.has(FIELD_INDICATOR[field]) ? " fired" : "";
        const value = literals[i]?.fields[field] ?? "";
        return `<td class="value${firedClass}" data-field="${field}">${escapeHtml(value)}</td>`;
      }).join("");
      const current = i === currentWindow ? ' class="current"' : "";
      const verdict = `<td class="verdict ${w.verdict}">${w.verdict}</td>`;
      const firedList = escapeHtml(w.fired_indicators.join(", ") || "none");
      return `<tr${current} data-window="${w.window}"><td>${w.window}</td><td>${w.packets}</td>${cells}<td>${firedList}</td>${verdict}</tr>`;
    })
    .join("");
  const header = VALUE_FIELDS.map((f) => `<th>${FIELD_LABEL[f]}</th>`).join("");
  const thresholdText = Object.entries(thresholds)
    .map(([key, value]) => `${key}=${value}`)
    .join(" · ");
  return (
    `<div class="report-verdict ${report.verdict}">stream verdict: ${report.verdict}</div>` +
    `<table class="report"><thead><tr><th>win</th><th>packets</th>${header}` +
    `<th>fired</th><th>verdict</th></tr></thead><tbody>${rows}</tbody></table>` +
    `<div class="thresholds">${escapeHtml(thresholdText)}</div>`
  );
}
