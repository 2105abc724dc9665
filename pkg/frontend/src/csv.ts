/**
 * CSV loading with strict schema validation.
 *
 * The sweep runner's schema is fixed; any figure that references a missing
 * column must fail loudly (exit code 2 at the CLI) rather than draw nonsense.
 */

import Papa from "papaparse";

export const RISK_COLUMNS = [
  "model", "target", "d", "N", "p", "n", "lambda", "seed",
  "train_mse", "test_mse", "R0", "normalized_risk", "elapsed_s",
] as const;

export const STAIRCASE_COLUMNS = [
  "model", "target", "d", "N", "p", "log_ratio", "seed",
  "risk", "R0", "normalized_risk",
] as const;

export type Row = Record<string, string | number>;

export class CsvSchemaError extends Error {}

export interface Table {
  columns: string[];
  rows: Row[];
}

export function parseCsv(text: string): Table {
  const parsed = Papa.parse<Row>(text.trim(), {
    header: true,
    dynamicTyping: true,
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    const e = parsed.errors[0];
    throw new CsvSchemaError(`CSV parse error at row ${e.row}: ${e.message}`);
  }
  return { columns: parsed.meta.fields ?? [], rows: parsed.data };
}

export function requireColumns(table: Table, needed: readonly string[]): void {
  const missing = needed.filter((c) => !table.columns.includes(c));
  if (missing.length > 0) {
    throw new CsvSchemaError(
      `missing column(s) ${missing.join(", ")}; have ${table.columns.join(", ")}`,
    );
  }
}

export function numeric(row: Row, col: string): number {
  const v = row[col];
  const x = typeof v === "number" ? v : Number(v);
  if (!Number.isFinite(x)) {
    throw new CsvSchemaError(`non-numeric value ${String(v)} in column ${col}`);
  }
  return x;
}
