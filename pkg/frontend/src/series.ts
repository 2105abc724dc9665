/**
 * Turn sweep rows into plottable series: one series per group value, one
 * point per x value, aggregated over repetitions as median plus IQR band.
 */

import { Row, numeric } from "./csv.js";
import { summarize } from "./stats.js";

export interface SeriesPoint {
  x: number;
  median: number;
  q25: number;
  q75: number;
  count: number;
}

export interface Series {
  key: string;
  points: SeriesPoint[];
}

export class EmptyDataError extends Error {}

export function applyFilters(rows: Row[], filters: Record<string, string>): Row[] {
  return rows.filter((r) =>
    Object.entries(filters).every(([col, want]) => String(r[col]) === want),
  );
}

export function buildSeries(
  rows: Row[],
  xOf: (row: Row) => number,
  yCol: string,
  groupBy?: string,
): Series[] {
  if (rows.length === 0) {
    throw new EmptyDataError("no rows left after filtering");
  }
  const groups = new Map<string, Map<number, number[]>>();
  for (const row of rows) {
    const key = groupBy ? String(row[groupBy]) : "all";
    const x = xOf(row);
    const y = numeric(row, yCol);
    if (!groups.has(key)) groups.set(key, new Map());
    const byX = groups.get(key)!;
    if (!byX.has(x)) byX.set(x, []);
    byX.get(x)!.push(y);
  }
  const out: Series[] = [];
  for (const [key, byX] of [...groups.entries()].sort()) {
    const points = [...byX.entries()]
      .sort((a, b) => a[0] - b[0])
      .map(([x, ys]) => ({ x, ...summarize(ys) }));
    out.push({ key, points });
  }
  return out;
}
