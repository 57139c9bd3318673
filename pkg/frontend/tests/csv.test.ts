import { describe, expect, it } from "vitest";
import { mkdtempSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { groupBy, numeric, readCsv, requireColumns } from "../src/csv.js";

const FIXTURES = new URL("./fixtures/", import.meta.url).pathname;

describe("readCsv", () => {
  it("parses a results file with all columns as strings", () => {
    const table = readCsv(join(FIXTURES, "run", "results.csv"));
    expect(table.columns).toEqual([
      "run_id", "seed", "t", "best_so_far", "y_t",
      "log_volume", "tr_length", "grad_cov_trace",
    ]);
    expect(table.rows.length).toBeGreaterThan(0);
    expect(typeof table.rows[0]["best_so_far"]).toBe("string");
  });

  it("keeps empty cells as empty strings", () => {
    const table = readCsv(join(FIXTURES, "volume", "volume.csv"));
    expect(table.rows[0]["log_volume"]).toBe("");
  });

  it("reports the path when a file cannot be read", () => {
    expect(() => readCsv(join(FIXTURES, "nope.csv"))).toThrow(/nope\.csv/);
  });

  it("names the path and row for malformed rows", () => {
    const dir = mkdtempSync(join(tmpdir(), "plots-csv-"));
    const bad = join(dir, "bad.csv");
    writeFileSync(bad, 'a,b\n"unterminated,1\n', "utf-8");
    expect(() => readCsv(bad)).toThrow(/bad\.csv.*parse error/);
  });
});

describe("requireColumns", () => {
  const table = { columns: ["t", "best_so_far"], rows: [] };

  it("accepts present columns", () => {
    expect(() => requireColumns(table, ["t", "best_so_far"])).not.toThrow();
  });

  it("errors naming the first missing column", () => {
    expect(() => requireColumns(table, ["t", "log_volume"], "x.csv"))
      .toThrow('x.csv: missing required column "log_volume"');
  });
});

describe("numeric", () => {
  it("parses plain numbers", () => {
    expect(numeric({ v: "-0.25" }, "v")).toBe(-0.25);
    expect(numeric({ v: "1e-3" }, "v")).toBe(1e-3);
  });

  it("maps empty and absent cells to NaN", () => {
    expect(numeric({ v: "" }, "v")).toBeNaN();
    expect(numeric({}, "v")).toBeNaN();
  });

  it("maps the CSV infinity spellings to +/-Infinity", () => {
    expect(numeric({ v: "-inf" }, "v")).toBe(-Infinity);
    expect(numeric({ v: "inf" }, "v")).toBe(Infinity);
  });
});

describe("groupBy", () => {
  it("groups rows preserving first-seen key order", () => {
    const rows = [
      { m: "b", v: "1" }, { m: "a", v: "2" }, { m: "b", v: "3" },
    ];
    const groups = groupBy(rows, "m");
    expect([...groups.keys()]).toEqual(["b", "a"]);
    expect(groups.get("b")!.map((r) => r["v"])).toEqual(["1", "3"]);
  });
});
