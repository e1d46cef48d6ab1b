import { describe, expect, it } from "vitest";

import { parseCsv } from "../src/csv";
import { buildSeries, renderSvg } from "../src/render";

const HEADER = "scenario,estimator,snr_db,nmse,nmse_db,ser,trials,elapsed_ms,seed";

function csvFor(estimators: string[], snrs: number[], serOverride?: (i: number) => number): string {
  const rows: string[] = [];
  estimators.forEach((est, e) => {
    snrs.forEach((snr, i) => {
      const nmse = 1 / (1 + e + i);
      const ser = serOverride ? serOverride(i) : 0.1 / (1 + i);
      rows.push(
        [
          "np80-L10-K2-gmm1",
          est,
          String(snr),
          String(nmse),
          String(10 * Math.log10(nmse)),
          String(ser),
          "10",
          "0.0",
          "1",
        ].join(",")
      );
    });
  });
  return [HEADER, ...rows].join("\n") + "\n";
}

describe("buildSeries", () => {
  it("one curve per estimator with the full point count", () => {
    const table = parseCsv(csvFor(["gmm_sbl", "sbl"], [0, 5, 10, 15, 20]));
    const series = buildSeries(table, { x: "snr_db", y: "nmse_db", group: "estimator" });
    expect(series.map((s) => s.label)).toEqual(["gmm_sbl", "sbl"]);
    for (const s of series) {
      expect(s.points).toHaveLength(5);
    }
  });

  it("sorts points by x", () => {
    const table = parseCsv(csvFor(["omp"], [10, 0, 5]));
    const [s] = buildSeries(table, { x: "snr_db", y: "nmse_db", group: "estimator" });
    expect(s.points.map((p) => p.x)).toEqual([0, 5, 10]);
  });

  it("drops nonpositive values on the log ser axis", () => {
    const table = parseCsv(csvFor(["sbl"], [0, 5, 10], (i) => (i === 2 ? 0 : 0.1)));
    const [s] = buildSeries(table, { x: "snr_db", y: "ser", group: "estimator" });
    expect(s.points).toHaveLength(2);
  });
});

describe("renderSvg", () => {
  const table = parseCsv(csvFor(["gmm_sbl", "sbl", "omp"], [0, 5, 10]));
  const spec = { x: "snr_db", y: "nmse_db", group: "estimator" };

  it("emits one polyline per group and one marker per point", () => {
    const svg = renderSvg(buildSeries(table, spec), spec);
    expect(svg.match(/<polyline class="curve"/g)).toHaveLength(3);
    expect(svg.match(/<circle class="marker"/g)).toHaveLength(9);
    for (const name of ["gmm_sbl", "sbl", "omp"]) {
      expect(svg).toContain(`data-group="${name}"`);
    }
  });

  it("is deterministic", () => {
    const a = renderSvg(buildSeries(table, spec), spec);
    const b = renderSvg(buildSeries(table, spec), spec);
    expect(a).toBe(b);
  });

  it("labels axes", () => {
    const svg = renderSvg(buildSeries(table, spec), spec);
    expect(svg).toContain(">snr_db<");
    expect(svg).toContain(">nmse_db<");
  });

  it("marks the ser axis as log", () => {
    const serSpec = { x: "snr_db", y: "ser", group: "estimator" };
    const svg = renderSvg(buildSeries(table, serSpec), serSpec);
    expect(svg).toContain("ser (log)");
  });
});
