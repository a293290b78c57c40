/**
 * plot <kind> <input> <output>
 *
 * Renders a sweep report (JSON) or an event trace (CSV) into a static SVG
 * figure. Every figure also writes `<output>.data.json` holding the exact
 * plotted rows, so downstream checks never have to scrape pixels.
 * Exits 1 on unknown kinds or schema mismatches.
 */

import * as fs from "fs";
import * as path from "path";

import { KINDS, Kind, renderSweep, renderTrajectory } from "./render";
import { SchemaError, parseSweepReport, parseTrace } from "./schema";

export function runPlot(kind: string, input: string, output: string): void {
  if (!(KINDS as readonly string[]).includes(kind)) {
    throw new SchemaError(
      `unknown figure kind '${kind}' (choose from ${KINDS.join(", ")})`);
  }
  const text = fs.readFileSync(input, "utf8");
  const figure = kind === "trajectory"
    ? renderTrajectory(parseTrace(text))
    : renderSweep(kind as Kind, parseSweepReport(text));
  fs.mkdirSync(path.dirname(path.resolve(output)), { recursive: true });
  fs.writeFileSync(output, figure.svg);
  fs.writeFileSync(`${output}.data.json`,
    JSON.stringify(figure.sidecar, null, 2) + "\n");
}

export function main(argv: string[]): number {
  if (argv.length !== 3) {
    process.stderr.write("usage: plot <kind> <input> <output>\n" +
      `kinds: ${KINDS.join(", ")}\n`);
    return 1;
  }
  const [kind, input, output] = argv;
  try {
    runPlot(kind, input, output);
  } catch (err) {
    if (err instanceof SchemaError) {
      process.stderr.write(`schema mismatch: ${err.message}\n`);
    } else {
      process.stderr.write(`${err}\n`);
    }
    return 1;
  }
  process.stdout.write(`wrote ${output} and ${output}.data.json\n`);
  return 0;
}

if (require.main === module) {
  process.exit(main(process.argv.slice(2)));
}
