#!/usr/bin/env node
/**
 * risk-figures: render sweep CSVs to SVG.
 *
 *   risk-figures risk-curves --input sweep.csv --out fig.svg \
 *       --group-by N --plateau 0.981:"degree<=2 plateau" [--filter model=nt]
 *   risk-figures staircase --input stair.csv --out stair.svg
 *
 * Exit codes: 0 ok, 1 no data after filtering, 2 schema/argument error.
 */

import yargs from "yargs";
import { hideBin } from "yargs/helpers";

import { CsvSchemaError } from "./csv.js";
import { EmptyDataError } from "./series.js";
import { FigureOptions, makeRiskCurves, makeStaircase, parsePlateauArg } from "./figure.js";

function parseFilters(args: string[]): Record<string, string> {
  const out: Record<string, string> = {};
  for (const a of args) {
    const i = a.indexOf("=");
    if (i < 0) throw new Error(`bad --filter ${a}; expected column=value`);
    out[a.slice(0, i)] = a.slice(i + 1);
  }
  return out;
}

const common = {
  input: { type: "string" as const, demandOption: true, describe: "sweep CSV path" },
  out: { type: "string" as const, demandOption: true, describe: "output SVG path" },
  "group-by": { type: "string" as const, describe: "column giving one series per value" },
  baseline: { type: "number" as const, default: 1.0, describe: "baseline reference (NaN to omit)" },
  plateau: { type: "array" as const, default: [] as string[], describe: "value:label reference line (repeatable)" },
  filter: { type: "array" as const, default: [] as string[], describe: "column=value row filter (repeatable)" },
  title: { type: "string" as const },
  "log-x": { type: "boolean" as const, default: false },
};

function toOptions(argv: Record<string, unknown>): FigureOptions {
  return {
    input: argv.input as string,
    out: argv.out as string,
    groupBy: argv["group-by"] as string | undefined,
    baseline: argv.baseline as number,
    plateaus: (argv.plateau as string[]).map(String).map(parsePlateauArg),
    filters: parseFilters((argv.filter as string[]).map(String)),
    title: argv.title as string | undefined,
    logX: argv["log-x"] as boolean,
  };
}

export async function main(args: string[]): Promise<number> {
  let failure = 0;
  const parser = yargs(args)
    .command("risk-curves", "normalized risk vs n/d", common)
    .command("staircase", "population risk vs log(#params)/log d", common)
    .demandCommand(1)
    .strict()
    .exitProcess(false)
    .fail((msg, err) => {
      console.error(msg ?? err?.message);
      failure = 2;
    });
  const argv = await parser.parse();
  if (failure) return failure;
  const cmd = String(argv._[0]);
  try {
    const result = cmd === "staircase"
      ? makeStaircase(toOptions(argv))
      : makeRiskCurves(toOptions(argv));
    console.log(`${result.out}: ${result.seriesCount} series, ${result.pointCount} points`);
    return 0;
  } catch (err) {
    if (err instanceof EmptyDataError) {
      console.error(`no data: ${err.message}`);
      return 1;
    }
    if (err instanceof CsvSchemaError) {
      console.error(`schema error: ${err.message}`);
      return 2;
    }
    throw err;
  }
}

const invokedDirectly = process.argv[1] &&
  import.meta.url === new URL(`file://${process.argv[1]}`).href;
if (invokedDirectly) {
  main(hideBin(process.argv)).then((code) => {
    process.exitCode = code;
  });
}
