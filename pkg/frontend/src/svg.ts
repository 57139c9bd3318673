/** Minimal SVG scene builder: axes, series, bands, bars. No timestamps, so
 * output bytes are stable for identical inputs. */

export interface Margin {
  top: number;
  right: number;
  bottom: number;
  left: number;
}

export const PALETTE = [
  "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
  "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
];

const esc = (s: string) =>
  s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");

export type Scale = (value: number) => number;

export function linearScale(d0: number, d1: number, r0: number, r1: number): Scale {
  const span = d1 - d0 || 1;
  return (v) => r0 + ((v - d0) / span) * (r1 - r0);
}

export function logScale(d0: number, d1: number, r0: number, r1: number): Scale {
  if (d0 <= 0 || d1 <= 0) throw new Error("log scale needs positive domain");
  const l0 = Math.log10(d0);
  const span = Math.log10(d1) - l0 || 1;
  return (v) => r0 + ((Math.log10(v) - l0) / span) * (r1 - r0);
}

/** Round-numbered tick positions covering [lo, hi]. */
export function ticks(lo: number, hi: number, count = 5): number[] {
  const span = hi - lo || 1;
  const step = 10 ** Math.floor(Math.log10(span / count));
  const err = (span / count) / step;
  const mult = err >= 7.5 ? 10 : err >= 3.5 ? 5 : err >= 1.5 ? 2 : 1;
  const s = step * mult;
  const out: number[] = [];
  for (let v = Math.ceil(lo / s) * s; v <= hi + 1e-12; v += s) {
    out.push(Math.abs(v) < s * 1e-9 ? 0 : v);
  }
  return out;
}

const fmtTick = (v: number) =>
  Math.abs(v) >= 1e4 || (v !== 0 && Math.abs(v) < 1e-3)
    ? v.toExponential(0)
    : String(Number(v.toPrecision(4)));

export class Svg {
  private parts: string[] = [];

  constructor(readonly width: number, readonly height: number) {}

  line(x1: number, y1: number, x2: number, y2: number, stroke: string, w = 1): void {
    this.parts.push(
      `<line x1="${f(x1)}" y1="${f(y1)}" x2="${f(x2)}" y2="${f(y2)}" ` +
      `stroke="${stroke}" stroke-width="${w}"/>`);
  }

  polyline(points: Array<[number, number]>, stroke: string, w = 1.5): void {
    const pts = points.map(([x, y]) => `${f(x)},${f(y)}`).join(" ");
    this.parts.push(
      `<polyline points="${pts}" fill="none" stroke="${stroke}" stroke-width="${w}"/>`);
  }

  polygon(points: Array<[number, number]>, fill: string, opacity = 0.2): void {
    const pts = points.map(([x, y]) => `${f(x)},${f(y)}`).join(" ");
    this.parts.push(`<polygon points="${pts}" fill="${fill}" opacity="${opacity}"/>`);
  }

  rect(x: number, y: number, w: number, h: number, fill: string, opacity = 1): void {
    this.parts.push(
      `<rect x="${f(x)}" y="${f(y)}" width="${f(w)}" height="${f(h)}" ` +
      `fill="${fill}" opacity="${opacity}"/>`);
  }

  text(x: number, y: number, content: string, opts: {
    size?: number; anchor?: "start" | "middle" | "end"; rotate?: number;
  } = {}): void {
    const size = opts.size ?? 11;
    const anchor = opts.anchor ?? "start";
    const rot = opts.rotate ? ` transform="rotate(${opts.rotate} ${f(x)} ${f(y)})"` : "";
    this.parts.push(
      `<text x="${f(x)}" y="${f(y)}" font-size="${size}" ` +
      `font-family="sans-serif" text-anchor="${anchor}"${rot}>${esc(content)}</text>`);
  }

  render(): string {
    return `<svg xmlns="http://www.w3.org/2000/svg" width="${this.width}" ` +
      `height="${this.height}" viewBox="0 0 ${this.width} ${this.height}">\n` +
      `<rect width="${this.width}" height="${this.height}" fill="white"/>\n` +
      this.parts.join("\n") + "\n</svg>\n";
  }
}

function f(v: number): string {
  return Number(v.toFixed(2)).toString();
}

export interface AxesSpec {
  xLabel: string;
  yLabel: string;
  title?: string;
  xTicks: number[];
  yTicks: number[];
  xScale: Scale;
  yScale: Scale;
  margin: Margin;
}

/** Draw frame, ticks, and labels for a plot area. */
export function drawAxes(svg: Svg, spec: AxesSpec): void {
  const { margin: m } = spec;
  const x0 = m.left, x1 = svg.width - m.right;
  const y0 = svg.height - m.bottom, y1 = m.top;
  svg.line(x0, y0, x1, y0, "#000");
  svg.line(x0, y0, x0, y1, "#000");
  for (const t of spec.xTicks) {
    const x = spec.xScale(t);
    svg.line(x, y0, x, y0 + 4, "#000");
    svg.text(x, y0 + 16, fmtTick(t), { anchor: "middle", size: 10 });
  }
  for (const t of spec.yTicks) {
    const y = spec.yScale(t);
    svg.line(x0 - 4, y, x0, y, "#000");
    svg.text(x0 - 6, y + 3, fmtTick(t), { anchor: "end", size: 10 });
  }
  svg.text((x0 + x1) / 2, svg.height - 6, spec.xLabel, { anchor: "middle" });
  svg.text(14, (y0 + y1) / 2, spec.yLabel, { anchor: "middle", rotate: -90 });
  if (spec.title) {
    svg.text((x0 + x1) / 2, m.top - 8, spec.title, { anchor: "middle", size: 13 });
  }
}

export function drawLegend(
  svg: Svg, labels: string[], x: number, y: number,
): void {
  labels.forEach((label, i) => {
    const yy = y + i * 16;
    svg.rect(x, yy - 8, 12, 8, PALETTE[i % PALETTE.length]);
    svg.text(x + 16, yy, label, { size: 10 });
  });
}
