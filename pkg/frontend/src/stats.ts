/** Aggregates used by every plot: mean and +/-2-standard-error bands. */

export interface Band {
  n: number;
  mean: number;
  /** sample standard deviation (n-1 denominator); 0 for a single value */
  sd: number;
  /** half-width of the +/-2-stderr band: 2 * sd / sqrt(n) */
  half: number;
  low: number;
  high: number;
}

export function mean(values: number[]): number {
  if (values.length === 0) throw new Error("mean of empty array");
  let s = 0;
  for (const v of values) s += v;
  return s / values.length;
}

export function sampleSd(values: number[]): number {
  if (values.length < 2) return 0;
  const m = mean(values);
  let s = 0;
  for (const v of values) s += (v - m) ** 2;
  return Math.sqrt(s / (values.length - 1));
}

export function band(values: number[]): Band {
  const m = mean(values);
  const sd = sampleSd(values);
  const half = 2 * sd / Math.sqrt(values.length);
  return { n: values.length, mean: m, sd, half, low: m - half, high: m + half };
}

export function median(values: number[]): number {
  if (values.length === 0) throw new Error("median of empty array");
  const sorted = [...values].sort((a, b) => a - b);
  const mid = Math.floor(sorted.length / 2);
  return sorted.length % 2 === 1 ? sorted[mid] : (sorted[mid - 1] + sorted[mid]) / 2;
}

export interface HistogramBin {
  lo: number;
  hi: number;
  count: number;
}

export function histogram(values: number[], bins: number): HistogramBin[] {
  const finite = values.filter(Number.isFinite);
  if (finite.length === 0) throw new Error("histogram needs finite values");
  let lo = Math.min(...finite);
  let hi = Math.max(...finite);
  if (lo === hi) {
    lo -= 0.5;
    hi += 0.5;
  }
  const width = (hi - lo) / bins;
  const out: HistogramBin[] = Array.from({ length: bins }, (_, i) => ({
    lo: lo + i * width,
    hi: lo + (i + 1) * width,
    count: 0,
  }));
  for (const v of finite) {
    const i = Math.min(bins - 1, Math.floor((v - lo) / width));
    out[i].count += 1;
  }
  return out;
}
