/**
 * File-level entry: read a results CSV, render, write .svg or .png.
 *
 * PNG output rasterizes the SVG through sharp; SVG is written verbatim,
 * so repeated runs on identical inputs give identical bytes.
 */

import { readFile, writeFile } from "fs/promises";
import path from "path";

import { parseCsv } from "./csv";
import { buildSeries, renderSvg, PlotSpec } from "./render";

export interface RenderOptions extends PlotSpec {
  input: string;
  output: string;
}

export async function renderFile(opts: RenderOptions): Promise<{ curves: number; points: number }> {
  const text = await readFile(opts.input, "utf-8");
  const table = parseCsv(text);
  const series = buildSeries(table, opts);
  const svg = renderSvg(series, opts);

  const ext = path.extname(opts.output).toLowerCase();
  if (ext === ".svg" || ext === "") {
    await writeFile(opts.output, svg, "utf-8");
  } else if (ext === ".png") {
    const sharp = (await import("sharp")).default;
    const png = await sharp(Buffer.from(svg)).png().toBuffer();
    await writeFile(opts.output, png);
  } else {
    throw new Error(`unsupported output extension ${ext}; use .svg or .png`);
  }
  return {
    curves: series.length,
    points: series.reduce((acc, s) => acc + s.points.length, 0),
  };
}
