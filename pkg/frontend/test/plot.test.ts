import { mkdtemp, readFile, writeFile } from "fs/promises";
import { tmpdir } from "os";
import path from "path";

import { describe, expect, it } from "vitest";

import { MissingColumn } from "../src/csv";
import { renderFile } from "../src/plot";
import { parseArgs } from "../src/cli";

const HEADER = "scenario,estimator,snr_db,nmse,nmse_db,ser,trials,elapsed_ms,seed";

function goldenCsv(): string {
  const rows: string[] = [];
  for (const est of ["gmm_sbl", "sbl"]) {
    for (const snr of [0, 5, 10]) {
      const nmse = est === "gmm_sbl" ? 0.5 / (1 + snr) : 0.8 / (1 + snr);
      rows.push(
        ["np80-L10-K2-gmm1", est, String(snr), String(nmse), String(10 * Math.log10(nmse)), "0.1", "10", "0.0", "1"].join(",")
      );
    }
  }
  return [HEADER, ...rows].join("\n") + "\n";
}

async function withGolden(): Promise<{ dir: string; input: string }> {
  const dir = await mkdtemp(path.join(tmpdir(), "otfs-plot-"));
  const input = path.join(dir, "results.csv");
  await writeFile(input, goldenCsv(), "utf-8");
  return { dir, input };
}

describe("renderFile", () => {
  it("writes an svg with one curve per estimator", async () => {
    const { dir, input } = await withGolden();
    const out = path.join(dir, "fig.svg");
    const summary = await renderFile({ input, output: out, x: "snr_db", y: "nmse_db", group: "estimator" });
    expect(summary).toEqual({ curves: 2, points: 6 });
    const svg = await readFile(out, "utf-8");
    expect(svg.match(/<polyline class="curve"/g)).toHaveLength(2);
  });

  it("writes a png when asked", async () => {
    const { dir, input } = await withGolden();
    const out = path.join(dir, "fig.png");
    await renderFile({ input, output: out, x: "snr_db", y: "nmse_db", group: "estimator" });
    const bytes = await readFile(out);
    expect(bytes.subarray(0, 8)).toEqual(Buffer.from([0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a]));
  });

  it("errors cleanly on a missing column", async () => {
    const { input } = await withGolden();
    await expect(
      renderFile({ input, output: "unused.svg", x: "N_p", y: "nmse_db", group: "estimator" })
    ).rejects.toThrow(MissingColumn);
  });

  it("errors cleanly on an empty body", async () => {
    const dir = await mkdtemp(path.join(tmpdir(), "otfs-plot-"));
    const input = path.join(dir, "empty.csv");
    await writeFile(input, HEADER + "\n", "utf-8");
    await expect(
      renderFile({ input, output: path.join(dir, "fig.svg"), x: "snr_db", y: "nmse_db", group: "estimator" })
    ).rejects.toThrow(/no data rows/);
  });

  it("never mutates the input csv", async () => {
    const { dir, input } = await withGolden();
    const before = await readFile(input, "utf-8");
    await renderFile({ input, output: path.join(dir, "fig.svg"), x: "snr_db", y: "nmse_db", group: "estimator" });
    expect(await readFile(input, "utf-8")).toBe(before);
  });
});

describe("parseArgs", () => {
  it("applies the documented defaults", () => {
    const args = parseArgs(["--in", "a.csv", "--out", "b.svg"]);
    expect(args).toMatchObject({ x: "snr_db", y: "nmse_db", group: "estimator" });
  });

  it("requires --in and --out", () => {
    expect(() => parseArgs(["--x", "snr_db"])).toThrow(/required/);
  });

  it("rejects unknown flags", () => {
    expect(() => parseArgs(["--in", "a", "--out", "b", "--bogus", "1"])).toThrow(/unknown flag/);
  });
});
