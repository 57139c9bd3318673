/** The five figure styles rendered from the benchmark CLI's CSV outputs:
 * convergence bands, Thompson-max histograms, search-volume traces,
 * space-filling-vs-budget curves, and locality bars. */

import { Table, Row, requireColumns, numeric, groupBy } from "./csv.js";
import { band, Band, histogram } from "./stats.js";
import {
  Svg, drawAxes, drawLegend, linearScale, logScale, ticks, PALETTE, Margin,
} from "./svg.js";

const MARGIN: Margin = { top: 36, right: 20, bottom: 40, left: 64 };
const WIDTH = 640;
const HEIGHT = 420;

export type PlotKind =
  | "convergence" | "ts-histogram" | "volume" | "curse" | "locality";

export interface SeriesBand {
  label: string;
  x: number[];
  bands: Band[];
}

/** Per-x +/-2-stderr aggregation of `value` across runs, one series per
 * value of `seriesKey` (single unnamed series when the column is absent). */
export function aggregateSeries(
  table: Table, xKey: string, value: string, seriesKey: string, path = "input",
): SeriesBand[] {
  requireColumns(table, [xKey, value], path);
  const bySeries = table.columns.includes(seriesKey)
    ? groupBy(table.rows, seriesKey)
    : new Map([["", table.rows]]);
  const out: SeriesBand[] = [];
  for (const [label, rows] of bySeries) {
    const byX = new Map<number, number[]>();
    for (const row of rows) {
      const x = numeric(row, xKey);
      const v = numeric(row, value);
      if (!Number.isFinite(x) || !Number.isFinite(v)) continue;
      const bucket = byX.get(x);
      if (bucket) bucket.push(v);
      else byX.set(x, [v]);
    }
    const xs = [...byX.keys()].sort((a, b) => a - b);
    out.push({ label, x: xs, bands: xs.map((x) => band(byX.get(x)!)) });
  }
  return out;
}

function bandedLinePlot(
  series: SeriesBand[],
  opts: { xLabel: string; yLabel: string; title: string; logX?: boolean },
): string {
  if (series.length === 0 || series.every((s) => s.x.length === 0)) {
    throw new Error(`no finite data to plot for "${opts.title}"`);
  }
  const xs = series.flatMap((s) => s.x);
  const los = series.flatMap((s) => s.bands.map((b) => b.low));
  const his = series.flatMap((s) => s.bands.map((b) => b.high));
  const x0 = Math.min(...xs), x1 = Math.max(...xs);
  let y0 = Math.min(...los), y1 = Math.max(...his);
  if (y0 === y1) { y0 -= 1; y1 += 1; }
  const pad = 0.05 * (y1 - y0);
  y0 -= pad; y1 += pad;

  const svg = new Svg(WIDTH, HEIGHT);
  const px0 = MARGIN.left, px1 = WIDTH - MARGIN.right;
  const py0 = HEIGHT - MARGIN.bottom, py1 = MARGIN.top;
  const sx = opts.logX
    ? logScale(Math.max(x0, 1), Math.max(x1, 2), px0, px1)
    : linearScale(x0, x1, px0, px1);
  const sy = linearScale(y0, y1, py0, py1);
  const xTicks = opts.logX
    ? logTicks(Math.max(x0, 1), Math.max(x1, 2))
    : ticks(x0, x1);
  drawAxes(svg, {
    xLabel: opts.xLabel, yLabel: opts.yLabel, title: opts.title,
    xTicks, yTicks: ticks(y0, y1), xScale: sx, yScale: sy, margin: MARGIN,
  });
  series.forEach((s, i) => {
    const color = PALETTE[i % PALETTE.length];
    const upper = s.x.map((x, j) => [sx(x), sy(s.bands[j].high)] as [number, number]);
    const lower = s.x.map((x, j) => [sx(x), sy(s.bands[j].low)] as [number, number]);
    svg.polygon([...upper, ...lower.reverse()], color);
    svg.polyline(s.x.map((x, j) => [sx(x), sy(s.bands[j].mean)]), color);
  });
  if (series.length > 1 || series[0].label !== "") {
    drawLegend(svg, series.map((s) => s.label || "all runs"), px0 + 10, py1 + 14);
  }
  return svg.render();
}

function logTicks(lo: number, hi: number): number[] {
  const out: number[] = [];
  for (let e = Math.ceil(Math.log10(lo)); e <= Math.floor(Math.log10(hi)); e++) {
    out.push(10 ** e);
  }
  return out.length >= 2 ? out : [lo, hi];
}

/** Best-so-far traces, mean over seeds with +/-2-stderr bands. */
export function plotConvergence(table: Table, path = "results.csv"): string {
  const series = aggregateSeries(table, "t", "best_so_far", "method", path);
  return bandedLinePlot(series, {
    xLabel: "evaluations", yLabel: "best value found",
    title: "Convergence (mean ± 2 stderr)",
  });
}

/** Overlaid per-policy histograms of Thompson-sample maxima and the true
 * objective at the selected candidates (two panels). */
export function plotTsHistogram(table: Table, path = "samples.csv"): string {
  requireColumns(table, ["policy", "ts_max", "objective"], path);
  const byPolicy = groupBy(table.rows, "policy");
  const svg = new Svg(WIDTH, HEIGHT);
  const panels: Array<{ col: "ts_max" | "objective"; x0: number; x1: number }> = [
    { col: "ts_max", x0: MARGIN.left, x1: WIDTH / 2 - 12 },
    { col: "objective", x0: WIDTH / 2 + 36, x1: WIDTH - MARGIN.right },
  ];
  const py0 = HEIGHT - MARGIN.bottom, py1 = MARGIN.top;
  for (const panel of panels) {
    const values = new Map<string, number[]>();
    for (const [policy, rows] of byPolicy) {
      values.set(policy, rows.map((r) => numeric(r, panel.col)).filter(Number.isFinite));
    }
    const all = [...values.values()].flat();
    if (all.length === 0) throw new Error(`${path}: no finite "${panel.col}" values`);
    const hists = new Map(
      [...values].map(([p, v]) => [p, v.length ? histogram(v, 24) : []]));
    const maxCount = Math.max(
      1, ...[...hists.values()].flat().map((b) => b.count));
    const lo = Math.min(...all), hi = Math.max(...all);
    const sx = linearScale(lo, hi === lo ? lo + 1 : hi, panel.x0, panel.x1);
    const sy = linearScale(0, maxCount, py0, py1);
    drawAxes(svg, {
      xLabel: panel.col === "ts_max" ? "Thompson-sample max" : "objective at argmax",
      yLabel: panel.col === "ts_max" ? "count" : "",
      xTicks: ticks(lo, hi, 4), yTicks: ticks(0, maxCount, 4),
      xScale: sx, yScale: sy,
      margin: { ...MARGIN, left: panel.x0, right: WIDTH - panel.x1 },
    });
    let i = 0;
    for (const [, bins] of hists) {
      const color = PALETTE[i % PALETTE.length];
      for (const b of bins) {
        if (b.count === 0) continue;
        svg.rect(sx(b.lo), sy(b.count), sx(b.hi) - sx(b.lo),
                 py0 - sy(b.count), color, 0.45);
      }
      i += 1;
    }
  }
  drawLegend(svg, [...byPolicy.keys()], MARGIN.left + 10, py1 + 14);
  svg.text(WIDTH / 2, 18, "Candidate-set quality", { anchor: "middle", size: 13 });
  return svg.render();
}

/** Search-region log-volume over a run, mean +/-2 stderr across seeds. */
export function plotVolume(table: Table, path = "volume.csv"): string {
  const series = aggregateSeries(table, "t", "log_volume", "method", path);
  return bandedLinePlot(series, {
    xLabel: "evaluations", yLabel: "log search-region volume",
    title: "Search-space volume trace",
  });
}

/** Best-found value versus sampling budget (log x), per policy. */
export function plotCurse(table: Table, path = "curse.csv"): string {
  requireColumns(table, ["policy", "budget", "best_found"], path);
  const label = table.columns.includes("d")
    ? (r: Row) => `${r["policy"]} d=${r["d"]}`
    : (r: Row) => r["policy"] ?? "";
  const withLabel: Table = {
    columns: [...table.columns, "__series"],
    rows: table.rows.map((r) => ({ ...r, __series: label(r) })),
  };
  const series = aggregateSeries(withLabel, "budget", "best_found", "__series", path);
  return bandedLinePlot(series, {
    xLabel: "points sampled", yLabel: "best value found",
    title: "Space-filling search vs budget", logX: true,
  });
}

/** Mean consecutive-query distance per method, bars with stderr whiskers. */
export function plotLocality(table: Table, path = "locality.csv"): string {
  requireColumns(table, ["method", "mean_step_dist"], path);
  const byMethod = groupBy(table.rows, "method");
  const bars: Array<{ label: string; band: Band }> = [];
  for (const [method, rows] of byMethod) {
    const vals = rows.map((r) => numeric(r, "mean_step_dist")).filter(Number.isFinite);
    if (vals.length > 0) bars.push({ label: method, band: band(vals) });
  }
  if (bars.length === 0) throw new Error(`${path}: no finite "mean_step_dist" values`);
  const top = Math.max(...bars.map((b) => b.band.high)) * 1.1 || 1;
  const svg = new Svg(WIDTH, HEIGHT);
  const px0 = MARGIN.left, px1 = WIDTH - MARGIN.right;
  const py0 = HEIGHT - MARGIN.bottom, py1 = MARGIN.top;
  const sy = linearScale(0, top, py0, py1);
  drawAxes(svg, {
    xLabel: "method", yLabel: "mean consecutive-query distance",
    title: "Query locality", xTicks: [], yTicks: ticks(0, top),
    xScale: (v) => v, yScale: sy, margin: MARGIN,
  });
  const slot = (px1 - px0) / bars.length;
  bars.forEach((b, i) => {
    const cx = px0 + slot * (i + 0.5);
    const w = slot * 0.6;
    svg.rect(cx - w / 2, sy(b.band.mean), w, py0 - sy(b.band.mean),
             PALETTE[i % PALETTE.length], 0.8);
    svg.line(cx, sy(b.band.low), cx, sy(b.band.high), "#000", 1.5);
    svg.line(cx - 5, sy(b.band.low), cx + 5, sy(b.band.low), "#000");
    svg.line(cx - 5, sy(b.band.high), cx + 5, sy(b.band.high), "#000");
    svg.text(cx, py0 + 16, b.label, { anchor: "middle", size: 10 });
  });
  return svg.render();
}

export const PLOTTERS: Record<PlotKind, (t: Table, path?: string) => string> = {
  convergence: plotConvergence,
  "ts-histogram": plotTsHistogram,
  volume: plotVolume,
  curse: plotCurse,
  locality: plotLocality,
};
