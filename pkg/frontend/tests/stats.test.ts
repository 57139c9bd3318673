import { describe, expect, it } from "vitest";
import { band, histogram, mean, median, sampleSd } from "../src/stats.js";

describe("band", () => {
  it("matches a spreadsheet-computed ±2 stderr band", () => {
    // values 3, 5, 7, 9, 11: AVERAGE=7, STDEV=3.1622776601683795,
    // 2*STDEV/SQRT(5)=2.8284271247461903 (verified against sheet formulas)
    const b = band([3, 5, 7, 9, 11]);
    expect(b.mean).toBe(7);
    expect(b.sd).toBeCloseTo(3.1622776601683795, 12);
    expect(b.half).toBeCloseTo(2.8284271247461903, 12);
    expect(b.low).toBeCloseTo(7 - 2.8284271247461903, 12);
    expect(b.high).toBeCloseTo(7 + 2.8284271247461903, 12);
  });

  it("second spreadsheet oracle with uneven values", () => {
    // values 1.5, 2.25, 4.0: AVERAGE=2.5833333333333335,
    // STDEV=1.282900359861721, band half = 2*STDEV/SQRT(3)
    const b = band([1.5, 2.25, 4.0]);
    expect(b.mean).toBeCloseTo(2.5833333333333335, 12);
    expect(b.sd).toBeCloseTo(1.282900359861721, 12);
    expect(b.half).toBeCloseTo((2 * 1.282900359861721) / Math.sqrt(3), 12);
  });

  it("single value gives a zero-width band", () => {
    const b = band([4.2]);
    expect(b.sd).toBe(0);
    expect(b.half).toBe(0);
    expect(b.low).toBe(4.2);
    expect(b.high).toBe(4.2);
  });

  it("constant values give a zero band", () => {
    const b = band([2, 2, 2, 2]);
    expect(b.half).toBe(0);
    expect(b.low).toBe(2);
    expect(b.high).toBe(2);
  });
});

describe("basic statistics", () => {
  it("mean and sample sd", () => {
    expect(mean([1, 2, 3])).toBe(2);
    expect(sampleSd([1, 2, 3])).toBeCloseTo(1, 12);
    expect(sampleSd([5])).toBe(0);
  });

  it("median handles even and odd lengths", () => {
    expect(median([3, 1, 2])).toBe(2);
    expect(median([4, 1, 3, 2])).toBe(2.5);
  });

  it("empty input throws", () => {
    expect(() => mean([])).toThrow();
    expect(() => median([])).toThrow();
  });
});

describe("histogram", () => {
  it("counts sum to input size and cover the range", () => {
    const values = [0, 0.1, 0.5, 0.9, 1.0, 1.0];
    const bins = histogram(values, 4);
    expect(bins).toHaveLength(4);
    expect(bins.reduce((s, b) => s + b.count, 0)).toBe(values.length);
    expect(bins[0].lo).toBe(0);
    expect(bins[3].hi).toBe(1);
  });

  it("degenerate range still bins", () => {
    const bins = histogram([2, 2, 2], 3);
    expect(bins.reduce((s, b) => s + b.count, 0)).toBe(3);
  });

  it("ignores non-finite values", () => {
    const bins = histogram([1, 2, NaN, -Infinity], 2);
    expect(bins.reduce((s, b) => s + b.count, 0)).toBe(2);
  });
});
