import { describe, expect, it } from "vitest";

import { EmptyInput, MissingColumn, numericColumn, parseCsv, validateDbConsistency } from "../src/csv";

const HEADER = "scenario,estimator,snr_db,nmse,nmse_db,ser,trials,elapsed_ms,seed";

function goldenCsv(): string {
  const rows = [
    ["np80-L10-K2-gmm1", "gmm_sbl", "0", "0.5", String(10 * Math.log10(0.5)), "0.25", "10", "0.0", "1"],
    ["np80-L10-K2-gmm1", "gmm_sbl", "5", "0.25", String(10 * Math.log10(0.25)), "0.12", "10", "0.0", "1"],
    ["np80-L10-K2-gmm1", "sbl", "0", "0.6", String(10 * Math.log10(0.6)), "0.3", "10", "0.0", "1"],
    ["np80-L10-K2-gmm1", "sbl", "5", "0.3", String(10 * Math.log10(0.3)), "0.2", "10", "0.0", "1"],
  ];
  return [HEADER, ...rows.map((r) => r.join(","))].join("\n") + "\n";
}

describe("parseCsv", () => {
  it("reads header and rows", () => {
    const table = parseCsv(goldenCsv());
    expect(table.header).toHaveLength(9);
    expect(table.rows).toHaveLength(4);
  });

  it("rejects an empty body", () => {
    expect(() => parseCsv(HEADER + "\n")).toThrow(EmptyInput);
  });

  it("rejects an empty file", () => {
    expect(() => parseCsv("")).toThrow(EmptyInput);
  });

  it("rejects ragged rows", () => {
    expect(() => parseCsv(HEADER + "\na,b,c\n")).toThrow(/cells/);
  });
});

describe("numericColumn", () => {
  it("extracts floats", () => {
    const table = parseCsv(goldenCsv());
    expect(numericColumn(table, "nmse")).toEqual([0.5, 0.25, 0.6, 0.3]);
  });

  it("raises MissingColumn for absent columns", () => {
    const table = parseCsv(goldenCsv());
    expect(() => numericColumn(table, "N_p")).toThrow(MissingColumn);
    expect(() => numericColumn(table, "L")).toThrow(MissingColumn);
  });
});

describe("validateDbConsistency", () => {
  it("accepts consistent pairs", () => {
    expect(() => validateDbConsistency(parseCsv(goldenCsv()))).not.toThrow();
  });

  it("rejects a corrupted nmse_db cell", () => {
    const bad = goldenCsv().replace(String(10 * Math.log10(0.5)), "-2.9");
    expect(() => validateDbConsistency(parseCsv(bad))).toThrow(/inconsistent/);
  });
});
