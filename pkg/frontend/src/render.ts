/**
 * SVG curve renderer: one polyline per group value, legend, axis ticks.
 *
 * Styling is fixed (palette, sizes, fonts) so identical inputs always
 * produce identical bytes.  The y axis is linear for dB-valued columns
 * and log10 for `ser`.
 */

import { CsvTable, EmptyInput, numericColumn, stringColumn, validateDbConsistency } from "./csv";

export interface PlotSpec {
  x: string;
  y: string;
  group: string;
  title?: string;
}

export interface Series {
  label: string;
  points: Array<{ x: number; y: number }>;
}

const WIDTH = 720;
const HEIGHT = 480;
const MARGIN = { left: 70, right: 160, top: 40, bottom: 55 };

const PALETTE = [
  "#1f77b4",
  "#d62728",
  "#2ca02c",
  "#9467bd",
  "#ff7f0e",
  "#8c564b",
  "#17becf",
  "#7f7f7f",
];

/** Group rows, sort each curve by x, drop points a log axis cannot show. */
export function buildSeries(table: CsvTable, spec: PlotSpec): Series[] {
  validateDbConsistency(table);
  const xs = numericColumn(table, spec.x);
  const ys = numericColumn(table, spec.y);
  const groups = stringColumn(table, spec.group);
  const logY = useLogScale(spec.y);

  const byGroup = new Map<string, Array<{ x: number; y: number }>>();
  for (let i = 0; i < xs.length; i++) {
    if (!Number.isFinite(xs[i]) || !Number.isFinite(ys[i])) {
      continue;
    }
    if (logY && ys[i] <= 0) {
      continue; // zero error rates have no place on a log axis
    }
    if (!byGroup.has(groups[i])) {
      byGroup.set(groups[i], []);
    }
    byGroup.get(groups[i])!.push({ x: xs[i], y: ys[i] });
  }
  const labels = [...byGroup.keys()].sort();
  const series = labels.map((label) => ({
    label,
    points: byGroup.get(label)!.slice().sort((a, b) => a.x - b.x),
  }));
  if (series.every((s) => s.points.length === 0)) {
    throw new EmptyInput("no plottable points after filtering non-finite values");
  }
  return series;
}

export function useLogScale(column: string): boolean {
  return column === "ser";
}

function niceTicks(lo: number, hi: number, count = 6): number[] {
  if (lo === hi) {
    return [lo];
  }
  const span = hi - lo;
  const step = Math.pow(10, Math.floor(Math.log10(span / count)));
  const candidates = [step, 2 * step, 5 * step, 10 * step];
  const chosen = candidates.find((s) => span / s <= count) ?? 10 * step;
  const ticks: number[] = [];
  for (let v = Math.ceil(lo / chosen) * chosen; v <= hi + 1e-12 * span; v += chosen) {
    ticks.push(Number(v.toFixed(12)));
  }
  return ticks;
}

function formatTick(v: number): string {
  if (v !== 0 && (Math.abs(v) >= 1e4 || Math.abs(v) < 1e-3)) {
    return v.toExponential(0);
  }
  return `${Number(v.toPrecision(6))}`;
}

/** Render the series to a standalone SVG document. */
export function renderSvg(series: Series[], spec: PlotSpec): string {
  const logY = useLogScale(spec.y);
  const pts = series.flatMap((s) => s.points);
  const xValues = pts.map((p) => p.x);
  const yValues = pts.map((p) => (logY ? Math.log10(p.y) : p.y));
  let xLo = Math.min(...xValues);
  let xHi = Math.max(...xValues);
  let yLo = Math.min(...yValues);
  let yHi = Math.max(...yValues);
  if (xLo === xHi) {
    xLo -= 1;
    xHi += 1;
  }
  if (yLo === yHi) {
    yLo -= 1;
    yHi += 1;
  }
  const yPad = 0.05 * (yHi - yLo);
  yLo -= yPad;
  yHi += yPad;

  const plotW = WIDTH - MARGIN.left - MARGIN.right;
  const plotH = HEIGHT - MARGIN.top - MARGIN.bottom;
  const sx = (x: number) => MARGIN.left + ((x - xLo) / (xHi - xLo)) * plotW;
  const sy = (y: number) => MARGIN.top + plotH - ((y - yLo) / (yHi - yLo)) * plotH;

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" viewBox="0 0 ${WIDTH} ${HEIGHT}">`
  );
  parts.push(`<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`);
  if (spec.title) {
    parts.push(
      `<text x="${MARGIN.left + plotW / 2}" y="22" font-family="sans-serif" font-size="15" text-anchor="middle">${escapeXml(spec.title)}</text>`
    );
  }

  // axes and grid
  for (const t of niceTicks(xLo, xHi)) {
    const px = sx(t);
    parts.push(
      `<line x1="${px.toFixed(2)}" y1="${MARGIN.top}" x2="${px.toFixed(2)}" y2="${MARGIN.top + plotH}" stroke="#dddddd" stroke-width="1"/>`
    );
    parts.push(
      `<text x="${px.toFixed(2)}" y="${MARGIN.top + plotH + 18}" font-family="sans-serif" font-size="12" text-anchor="middle">${formatTick(t)}</text>`
    );
  }
  for (const t of niceTicks(yLo, yHi)) {
    const py = sy(t);
    const label = logY ? `1e${formatTick(t)}` : formatTick(t);
    parts.push(
      `<line x1="${MARGIN.left}" y1="${py.toFixed(2)}" x2="${MARGIN.left + plotW}" y2="${py.toFixed(2)}" stroke="#dddddd" stroke-width="1"/>`
    );
    parts.push(
      `<text x="${MARGIN.left - 8}" y="${(py + 4).toFixed(2)}" font-family="sans-serif" font-size="12" text-anchor="end">${label}</text>`
    );
  }
  parts.push(
    `<rect x="${MARGIN.left}" y="${MARGIN.top}" width="${plotW}" height="${plotH}" fill="none" stroke="#333333" stroke-width="1"/>`
  );
  parts.push(
    `<text x="${MARGIN.left + plotW / 2}" y="${HEIGHT - 12}" font-family="sans-serif" font-size="13" text-anchor="middle">${escapeXml(spec.x)}</text>`
  );
  parts.push(
    `<text x="20" y="${MARGIN.top + plotH / 2}" font-family="sans-serif" font-size="13" text-anchor="middle" transform="rotate(-90 20 ${MARGIN.top + plotH / 2})">${escapeXml(spec.y + (logY ? " (log)" : ""))}</text>`
  );

  // curves with point markers
  series.forEach((s, i) => {
    const color = PALETTE[i % PALETTE.length];
    const coords = s.points
      .map((p) => `${sx(p.x).toFixed(2)},${sy(logY ? Math.log10(p.y) : p.y).toFixed(2)}`)
      .join(" ");
    parts.push(
      `<polyline class="curve" data-group="${escapeXml(s.label)}" points="${coords}" fill="none" stroke="${color}" stroke-width="2"/>`
    );
    for (const p of s.points) {
      parts.push(
        `<circle class="marker" data-group="${escapeXml(s.label)}" cx="${sx(p.x).toFixed(2)}" cy="${sy(logY ? Math.log10(p.y) : p.y).toFixed(2)}" r="3.5" fill="${color}"/>`
      );
    }
  });

  // legend
  series.forEach((s, i) => {
    const color = PALETTE[i % PALETTE.length];
    const ly = MARGIN.top + 16 + i * 20;
    const lx = MARGIN.left + plotW + 14;
    parts.push(
      `<line x1="${lx}" y1="${ly}" x2="${lx + 22}" y2="${ly}" stroke="${color}" stroke-width="2"/>`
    );
    parts.push(
      `<text x="${lx + 28}" y="${ly + 4}" font-family="sans-serif" font-size="12">${escapeXml(s.label)}</text>`
    );
  });

  parts.push("</svg>");
  return parts.join("\n") + "\n";
}

function escapeXml(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}
