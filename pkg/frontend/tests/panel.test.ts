import { describe, expect, it } from "vitest";

import { escapeHtml, renderReportHtml, reportLiterals } from "../src/panel";
import { DetectionReport } from "../src/types";

const RAW =
  '{"offsets":[0,1,2,3],"ssrc":9,"thresholds":{"max_delay_cv":0.1,"max_ooo_ratio":0.01,' +
  '"min_prefix_count":10,"min_prefix_share":0.5,"size_bias_margin":0.0},"v":1,' +
  '"verdict":"suspicious","windows":[' +
  '{"delay_cv":1e-07,"fired_indicators":["ooo","fixed_delay"],"ooo_ratio":0.2,"packets":3000,' +
  '"size_bias":0.0,"top_prefix_count_among_ooo":600,"top_prefix_share_among_ooo":1.0,' +
  '"verdict":"suspicious","window":0},' +
  '{"delay_cv":null,"fired_indicators":[],"ooo_ratio":0.0,"packets":500,' +
  '"size_bias":0.0,"top_prefix_count_among_ooo":0,"top_prefix_share_among_ooo":0.0,' +
  '"verdict":"clean","window":1}]}';

const report = JSON.parse(RAW) as DetectionReport;

describe("reportLiterals", () => {
  it("extracts the exact value bytes per window", () => {
    const literals = reportLiterals(RAW);
    expect(literals).toHaveLength(2);
    expect(literals[0].fields.ooo_ratio).toBe("0.2");
    expect(literals[0].fields.delay_cv).toBe("1e-07");
    expect(literals[0].fields.top_prefix_share_among_ooo).toBe("1.0");
    expect(literals[0].fields.size_bias).toBe("0.0");
    expect(literals[1].fields.delay_cv).toBe("null");
  });
});

describe("renderReportHtml", () => {
  const html = renderReportHtml(report, RAW, 0);

  it("shows the stream verdict and one row per window", () => {
    expect(html).toContain("stream verdict: suspicious");
    expect((html.match(/<tr/g) ?? []).length).toBe(3); // header + 2 windows
  });

  it("renders values byte-for-byte from the response", () => {
    expect(html).toContain('data-field="ooo_ratio">0.2<');
    expect(html).toContain('data-field="delay_cv">1e-07<');
    expect(html).toContain('data-field="top_prefix_share_among_ooo">1.0<');
    expect(html).toContain('data-field="size_bias">0.0<');
    expect(html).toContain('data-field="delay_cv">null<');
  });

  it("marks fired indicator cells and the current window", () => {
    expect(html).toContain('class="value fired" data-field="ooo_ratio">0.2');
    expect(html).toContain('class="value fired" data-field="delay_cv">1e-07');
    expect(html).not.toContain('class="value fired" data-field="size_bias"');
    expect(html).toContain('<tr class="current" data-window="0">');
  });

  it("lists fired indicators and thresholds", () => {
    expect(html).toContain("ooo, fixed_delay");
    expect(html).toContain("max_ooo_ratio=0.01");
    expect(html).toContain("size_bias_margin=0.0");
  });
});

describe("escapeHtml", () => {
  it("neutralizes markup", () => {
    expect(escapeHtml('<img src="x">&')).toBe("&lt;img src=&quot;x&quot;&gt;&amp;");
  });
});
