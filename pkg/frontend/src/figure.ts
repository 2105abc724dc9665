/**
 * Figure assembly: sweep CSV in, SVG out.
 *
 * Risk curves plot normalized risk against n/d (or any numeric column),
 * grouped by a column (one median line + IQR band per group), with the
 * trivial-predictor baseline at 1 and horizontal plateau references at the
 * values supplied by the experiment pipeline.  The staircase variant plots
 * normalized population risk against log(#params)/log d.
 */

import { readFileSync, writeFileSync } from "node:fs";

import { parseCsv, requireColumns, numeric, Row, RISK_COLUMNS, STAIRCASE_COLUMNS } from "./csv.js";
import { applyFilters, buildSeries, Series } from "./series.js";
import { renderSvg, RefLine } from "./svg.js";

export interface PlateauSpec {
  value: number;
  label: string;
}

export interface FigureOptions {
  input: string;
  out: string;
  groupBy?: string;
  filters?: Record<string, string>;
  baseline?: number;        // default 1.0; NaN disables
  plateaus?: PlateauSpec[];
  title?: string;
  logX?: boolean;
}

export interface FigureResult {
  out: string;
  seriesCount: number;
  pointCount: number;
  series: Series[];
}

export function parsePlateauArg(arg: string): PlateauSpec {
  const i = arg.indexOf(":");
  const value = Number(i < 0 ? arg : arg.slice(0, i));
  if (!Number.isFinite(value)) {
    throw new Error(`bad plateau spec ${arg}; expected value or value:label`);
  }
  const label = i < 0 ? `plateau ${value}` : arg.slice(i + 1);
  return { value, label };
}

function refLines(opts: FigureOptions): RefLine[] {
  const lines: RefLine[] = [];
  const base = opts.baseline ?? 1.0;
  if (Number.isFinite(base)) {
    lines.push({ value: base, label: "trivial predictor", kind: "baseline" });
  }
  for (const p of opts.plateaus ?? []) {
    lines.push({ value: p.value, label: p.label, kind: "plateau" });
  }
  return lines;
}

function buildFigure(
  opts: FigureOptions,
  required: readonly string[],
  xOf: (row: Row) => number,
  xLabel: string,
  defaultTitle: (rows: Row[]) => string,
): FigureResult {
  const table = parseCsv(readFileSync(opts.input, "utf-8"));
  requireColumns(table, required);
  if (opts.groupBy) requireColumns(table, [opts.groupBy]);
  const rows = applyFilters(table.rows, opts.filters ?? {});
  const series = buildSeries(rows, xOf, "normalized_risk", opts.groupBy);
  const svg = renderSvg({
    title: opts.title ?? defaultTitle(rows),
    xLabel,
    yLabel: "test risk / R0",
    series,
    refLines: refLines(opts),
    logX: opts.logX,
  });
  writeFileSync(opts.out, svg);
  return {
    out: opts.out,
    seriesCount: series.length,
    pointCount: series.reduce((acc, s) => acc + s.points.length, 0),
    series,
  };
}

export function makeRiskCurves(opts: FigureOptions): FigureResult {
  return buildFigure(
    opts,
    RISK_COLUMNS,
    (row) => numeric(row, "n") / numeric(row, "d"),
    "n / d",
    (rows) => `${String(rows[0]?.model ?? "?")} on ${String(rows[0]?.target ?? "?")}, d=${String(rows[0]?.d ?? "?")}`,
  );
}

export function makeStaircase(opts: FigureOptions): FigureResult {
  return buildFigure(
    opts,
    STAIRCASE_COLUMNS,
    (row) => numeric(row, "log_ratio"),
    "log(#params) / log d",
    (rows) => `approximation staircase: ${String(rows[0]?.model ?? "?")} on ${String(rows[0]?.target ?? "?")}`,
  );
}
