/**
 * Self-contained SVG line charts: median lines with IQR bands, horizontal
 * reference lines (risk baseline, predicted plateaus), axes and a legend.
 *
 * Elements carry classes and data attributes (series-line, iqr-band,
 * refline baseline/plateau, data-key, data-value) so tests and downstream
 * tooling can inspect the figure without rasterizing it.
 */

import { Series } from "./series.js";

export interface RefLine {
  value: number;
  label: string;
  kind: "baseline" | "plateau";
}

export interface FigureData {
  title: string;
  xLabel: string;
  yLabel: string;
  series: Series[];
  refLines: RefLine[];
  logX?: boolean;
}

const WIDTH = 760;
const HEIGHT = 480;
const MARGIN = { top: 48, right: 160, bottom: 56, left: 72 };

const COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
  "#8c564b", "#e377c2", "#7f7f7f"];

function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function ticks(lo: number, hi: number, n = 6): number[] {
  if (hi <= lo) return [lo];
  const span = hi - lo;
  const step = Math.pow(10, Math.floor(Math.log10(span / n)));
  const err = span / n / step;
  const mult = err >= 7.5 ? 10 : err >= 3.5 ? 5 : err >= 1.5 ? 2 : 1;
  const s = mult * step;
  const out: number[] = [];
  for (let v = Math.ceil(lo / s) * s; v <= hi + 1e-12 * span; v += s) {
    out.push(Number(v.toFixed(12)));
  }
  return out;
}

function fmt(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 1000 || a < 0.01) return v.toExponential(1);
  return String(Number(v.toPrecision(4)));
}

export function renderSvg(fig: FigureData): string {
  const innerW = WIDTH - MARGIN.left - MARGIN.right;
  const innerH = HEIGHT - MARGIN.top - MARGIN.bottom;

  const xsRaw = fig.series.flatMap((s) => s.points.map((p) => p.x));
  const tx = (x: number) => (fig.logX ? Math.log10(x) : x);
  const xs = xsRaw.map(tx);
  let xLo = Math.min(...xs);
  let xHi = Math.max(...xs);
  if (xHi === xLo) { xLo -= 0.5; xHi += 0.5; }

  const ys = fig.series.flatMap((s) => s.points.flatMap((p) => [p.q25, p.q75]));
  const refVals = fig.refLines.map((r) => r.value);
  const yHi = Math.max(1.05, ...ys, ...refVals) * 1.08;
  const yLo = Math.min(0, ...ys, ...refVals);

  const px = (x: number) => MARGIN.left + ((tx(x) - xLo) / (xHi - xLo)) * innerW;
  const py = (y: number) => MARGIN.top + (1 - (y - yLo) / (yHi - yLo)) * innerH;

  const parts: string[] = [];
  parts.push(`<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" viewBox="0 0 ${WIDTH} ${HEIGHT}" font-family="sans-serif" font-size="12">`);
  parts.push(`<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`);
  parts.push(`<text x="${MARGIN.left}" y="24" font-size="15" font-weight="bold">${esc(fig.title)}</text>`);

  // axes and grid
  for (const t of ticks(yLo, yHi)) {
    const y = py(t);
    parts.push(`<line x1="${MARGIN.left}" x2="${MARGIN.left + innerW}" y1="${y}" y2="${y}" stroke="#eee"/>`);
    parts.push(`<text x="${MARGIN.left - 8}" y="${y + 4}" text-anchor="end">${fmt(t)}</text>`);
  }
  const xTicks = ticks(xLo, xHi);
  for (const t of xTicks) {
    const x = MARGIN.left + ((t - xLo) / (xHi - xLo)) * innerW;
    parts.push(`<line x1="${x}" x2="${x}" y1="${MARGIN.top}" y2="${MARGIN.top + innerH}" stroke="#f4f4f4"/>`);
    const label = fig.logX ? fmt(Math.pow(10, t)) : fmt(t);
    parts.push(`<text x="${x}" y="${MARGIN.top + innerH + 18}" text-anchor="middle">${label}</text>`);
  }
  parts.push(`<rect x="${MARGIN.left}" y="${MARGIN.top}" width="${innerW}" height="${innerH}" fill="none" stroke="#999"/>`);
  parts.push(`<text x="${MARGIN.left + innerW / 2}" y="${HEIGHT - 14}" text-anchor="middle">${esc(fig.xLabel)}</text>`);
  parts.push(`<text x="20" y="${MARGIN.top + innerH / 2}" transform="rotate(-90 20 ${MARGIN.top + innerH / 2})" text-anchor="middle">${esc(fig.yLabel)}</text>`);

  // reference lines
  for (const ref of fig.refLines) {
    const y = py(ref.value);
    const dash = ref.kind === "baseline" ? "6 3" : "2 3";
    parts.push(`<line class="refline ${ref.kind}" data-value="${ref.value}" x1="${MARGIN.left}" x2="${MARGIN.left + innerW}" y1="${y}" y2="${y}" stroke="#444" stroke-dasharray="${dash}"/>`);
    parts.push(`<text x="${MARGIN.left + innerW + 6}" y="${y + 4}" fill="#444">${esc(ref.label)}</text>`);
  }

  // bands then lines, so lines stay visible
  fig.series.forEach((s, i) => {
    const color = COLORS[i % COLORS.length];
    if (s.points.length > 1) {
      const upper = s.points.map((p) => `${px(p.x)},${py(p.q75)}`);
      const lower = [...s.points].reverse().map((p) => `${px(p.x)},${py(p.q25)}`);
      parts.push(`<path class="iqr-band" data-key="${esc(s.key)}" d="M${upper.join(" L")} L${lower.join(" L")} Z" fill="${color}" opacity="0.15"/>`);
    }
    const line = s.points.map((p) => `${px(p.x)},${py(p.median)}`);
    parts.push(`<path class="series-line" data-key="${esc(s.key)}" d="M${line.join(" L")}" fill="none" stroke="${color}" stroke-width="2"/>`);
    for (const p of s.points) {
      parts.push(`<circle class="series-point" data-key="${esc(s.key)}" cx="${px(p.x)}" cy="${py(p.median)}" r="3" fill="${color}"/>`);
    }
    const ly = MARGIN.top + 16 * i;
    parts.push(`<line x1="${MARGIN.left + innerW + 6}" x2="${MARGIN.left + innerW + 26}" y1="${ly}" y2="${ly}" stroke="${color}" stroke-width="2"/>`);
    parts.push(`<text x="${MARGIN.left + innerW + 30}" y="${ly + 4}">${esc(s.key)}</text>`);
  });

  parts.push("</svg>");
  return parts.join("\n");
}
