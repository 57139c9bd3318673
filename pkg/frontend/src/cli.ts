#!/usr/bin/env node
/** Render one figure from a benchmark CSV:
 *    gradts-plots <kind> --input results.csv --out figure.svg */

import { writeFileSync } from "node:fs";
import yargs from "yargs";
import { hideBin } from "yargs/helpers";
import { readCsv } from "./csv.js";
import { PLOTTERS, PlotKind } from "./plots.js";

export function main(argv: string[]): number {
  const args = yargs(argv)
    .command("$0 <kind>", "render a figure from benchmark CSV output", (y) =>
      y.positional("kind", {
        choices: Object.keys(PLOTTERS) as PlotKind[],
        demandOption: true,
      }))
    .option("input", { type: "string", demandOption: true, describe: "input CSV path" })
    .option("out", { type: "string", demandOption: true, describe: "output SVG path" })
    .strict()
    .exitProcess(false)
    .parseSync();

  const kind = args.kind as PlotKind;
  try {
    const table = readCsv(args.input);
    const svg = PLOTTERS[kind](table, args.input);
    writeFileSync(args.out, svg, "utf-8");
  } catch (err) {
    process.stderr.write(`error: ${(err as Error).message}\n`);
    return 1;
  }
  return 0;
}

if (process.argv[1] && /cli\.[jt]s$/.test(process.argv[1])) {
  process.exit(main(hideBin(process.argv)));
}
