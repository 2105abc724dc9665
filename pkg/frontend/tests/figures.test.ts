/**
 * Figure generation against the golden sweep CSVs produced by the
 * experiment pipeline (fixtures/), including the end-to-end acceptance
 * scenario: three images, expected series counts, baseline at 1.0 and
 * plateau reference lines at the pipeline-supplied values, exit code 0.
 */

import { mkdtempSync, readFileSync, existsSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { beforeAll, describe, expect, it } from "vitest";

import { main } from "../src/cli.js";
import { makeRiskCurves, makeStaircase } from "../src/figure.js";
import { parseCsv } from "../src/csv.js";

const FIX = join(__dirname, "..", "fixtures");

function plateauFrom(csvName: string): { value: number; label: string } {
  const rows = parseCsv(readFileSync(join(FIX, csvName), "utf-8")).rows;
  const r = rows[rows.length - 1];
  return {
    value: Number(r.plateau_ratio),
    label: `degree<=${r.ell} plateau`,
  };
}

let outDir: string;
beforeAll(() => {
  outDir = mkdtempSync(join(tmpdir(), "figs-"));
});

function countMatches(svg: string, re: RegExp): number {
  return (svg.match(re) ?? []).length;
}

describe("golden figure acceptance", () => {
  const cases = [
    { csv: "a4_rf_quad_d30.csv", plateau: "plateau_quad_d30.csv", out: "a4.svg" },
    { csv: "a5_nt_quad_d20.csv", plateau: "plateau_quad_d20.csv", out: "a5.svg" },
    { csv: "a6_nt_cubic_d20.csv", plateau: "plateau_cubic_d20.csv", out: "a6.svg" },
  ];

  it("emits three images with series, baseline and plateau lines, exit 0", async () => {
    for (const c of cases) {
      const p = plateauFrom(c.plateau);
      const out = join(outDir, c.out);
      const code = await main([
        "risk-curves",
        "--input", join(FIX, c.csv),
        "--out", out,
        "--group-by", "N",
        "--plateau", `${p.value}:${p.label}`,
      ]);
      expect(code).toBe(0);
      expect(existsSync(out)).toBe(true);
      const svg = readFileSync(out, "utf-8");
      // one N value per golden sweep -> exactly one median series
      expect(countMatches(svg, /class="series-line"/g)).toBe(1);
      expect(countMatches(svg, /class="refline baseline" data-value="1"/g)).toBe(1);
      const plateauLines = svg.match(/class="refline plateau" data-value="([^"]+)"/);
      expect(plateauLines).not.toBeNull();
      expect(Number(plateauLines![1])).toBeCloseTo(p.value, 10);
    }
  });

  it("risk levels in the golden data match the known outcomes", () => {
    // rf on the quadratic stays near the baseline; nt learns the quadratic
    // but not the cubic
    const risk = (csv: string) =>
      makeRiskCurves({
        input: join(FIX, csv),
        out: join(outDir, "tmp.svg"),
        groupBy: "N",
      }).series[0].points.at(-1)!.median;
    expect(risk("a4_rf_quad_d30.csv")).toBeGreaterThan(0.5);
    expect(risk("a5_nt_quad_d20.csv")).toBeLessThan(0.2);
    expect(risk("a6_nt_cubic_d20.csv")).toBeGreaterThan(0.75);
  });
});

describe("staircase figure", () => {
  it("draws a step: flat near 1 at small N, low past the degree-2 capacity", () => {
    const res = makeStaircase({
      input: join(FIX, "stair_rf_quad_d10.csv"),
      out: join(outDir, "stair.svg"),
    });
    expect(res.seriesCount).toBe(1);
    const pts = res.series[0].points;
    // at d=10 the quadratic capacity is B(10,2)=54 basis functions, so the
    // curve is flat only up to N ~ d (x <= 1) and is down well before N=320
    const low = pts.filter((p) => p.x <= 1.01).map((p) => p.median);
    const high = pts.filter((p) => p.x >= 2.5).map((p) => p.median);
    expect(low.length).toBeGreaterThan(0);
    expect(high.length).toBeGreaterThan(0);
    expect(Math.min(...low)).toBeGreaterThan(0.9);
    expect(Math.max(...high)).toBeLessThan(0.2);
    const svg = readFileSync(join(outDir, "stair.svg"), "utf-8");
    expect(svg).toContain("log(#params) / log d");
  });
});

describe("error handling", () => {
  it("missing columns exit 2", async () => {
    const bad = join(outDir, "bad.csv");
    const { writeFileSync } = await import("node:fs");
    writeFileSync(bad, "a,b\n1,2\n");
    const code = await main(["risk-curves", "--input", bad,
      "--out", join(outDir, "x.svg")]);
    expect(code).toBe(2);
    expect(existsSync(join(outDir, "x.svg"))).toBe(false);
  });

  it("empty data after filtering exits 1 and writes nothing", async () => {
    const code = await main([
      "risk-curves",
      "--input", join(FIX, "a4_rf_quad_d30.csv"),
      "--out", join(outDir, "y.svg"),
      "--filter", "model=nt",
    ]);
    expect(code).toBe(1);
    expect(existsSync(join(outDir, "y.svg"))).toBe(false);
  });

  it("identical inputs give identical plotted data", () => {
    const a = makeRiskCurves({
      input: join(FIX, "a5_nt_quad_d20.csv"),
      out: join(outDir, "s1.svg"),
      groupBy: "N",
    });
    const b = makeRiskCurves({
      input: join(FIX, "a5_nt_quad_d20.csv"),
      out: join(outDir, "s2.svg"),
      groupBy: "N",
    });
    expect(a.series).toEqual(b.series);
    expect(readFileSync(join(outDir, "s1.svg"), "utf-8"))
      .toBe(readFileSync(join(outDir, "s2.svg"), "utf-8"));
  });
});
