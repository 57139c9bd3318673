import { readFileSync } from "node:fs";
import Papa from "papaparse";

export type Row = Record<string, string>;

export interface Table {
  columns: string[];
  rows: Row[];
}

/** Parse one CSV file; all values stay as strings ("" marks missing). */
export function readCsv(path: string): Table {
  const text = readFileSync(path, "utf-8");
  const parsed = Papa.parse<Row>(text.trim(), {
    header: true,
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    const e = parsed.errors[0];
    throw new Error(`${path}: CSV parse error at row ${e.row}: ${e.message}`);
  }
  const columns = parsed.meta.fields ?? [];
  return { columns, rows: parsed.data };
}

/** Throw if any named column is absent, naming the first missing one. */
export function requireColumns(table: Table, names: string[], path = "input"): void {
  for (const name of names) {
    if (!table.columns.includes(name)) {
      throw new Error(`${path}: missing required column "${name}"`);
    }
  }
}

/** Numeric view of a column; "" -> NaN, "-inf" -> -Infinity. */
export function numeric(row: Row, column: string): number {
  const v = row[column];
  if (v === "" || v === undefined) return NaN;
  if (v === "-inf") return -Infinity;
  if (v === "inf") return Infinity;
  return Number(v);
}

/** Group rows by the value of one column, preserving first-seen order. */
export function groupBy(rows: Row[], column: string): Map<string, Row[]> {
  const groups = new Map<string, Row[]>();
  for (const row of rows) {
    const key = row[column] ?? "";
    const bucket = groups.get(key);
    if (bucket) bucket.push(row);
    else groups.set(key, [row]);
  }
  return groups;
}
