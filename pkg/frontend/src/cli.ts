#!/usr/bin/env node
import { mkdirSync, readFileSync, writeFileSync } from "node:fs";
import { join } from "node:path";
import { parseArgs } from "node:util";

import { parseRunCsv } from "./csv.js";
import { buildFigures, defaultLogY, figureFilename } from "./figures.js";
import { renderFigure } from "./svg.js";

export interface CliIo {
  log: (line: string) => void;
  warn: (line: string) => void;
}

const CONSOLE_IO: CliIo = {
  log: (line) => console.log(line),
  warn: (line) => console.error(line),
};

const USAGE =
  "usage: render-figs --csv <results.csv> --out <dir> [--logy | --linear]";

/** Returns the process exit code; never throws on user errors. */
export function runCli(argv: string[], io: CliIo = CONSOLE_IO): number {
  let args;
  try {
    args = parseArgs({
      args: argv,
      options: {
        csv: { type: "string" },
        out: { type: "string" },
        logy: { type: "boolean", default: false },
        linear: { type: "boolean", default: false },
      },
      allowPositionals: false,
    });
  } catch (error) {
    io.warn(`error: ${(error as Error).message}`);
    io.warn(USAGE);
    return 1;
  }
  const { csv, out, logy, linear } = args.values;
  if (!csv || !out) {
    io.warn(USAGE);
    return 1;
  }
  if (logy && linear) {
    io.warn("error: --logy and --linear are mutually exclusive");
    return 1;
  }

  let text: string;
  try {
    text = readFileSync(csv, "utf-8");
  } catch (error) {
    io.warn(`error: cannot read ${csv}: ${(error as Error).message}`);
    return 1;
  }
  let figures;
  try {
    figures = buildFigures(parseRunCsv(text));
  } catch (error) {
    io.warn(`error: ${(error as Error).message}`);
    return 1;
  }
  if (figures.length === 0) {
    io.warn("warning: no plottable rows (every row skipped or failed); nothing to render");
    return 0;
  }

  mkdirSync(out, { recursive: true });
  for (const figure of figures) {
    const logY = logy ? true : linear ? false : defaultLogY(figure.problem);
    const path = join(out, figureFilename(figure));
    writeFileSync(path, renderFigure(figure, { logY }), "utf-8");
    io.log(`wrote ${path} (${figure.series.length} series, ${logY ? "log" : "linear"} y)`);
  }
  return 0;
}

const entry = process.argv[1] ?? "";
if (entry.endsWith("cli.js") || entry.endsWith("render-figs")) {
  process.exit(runCli(process.argv.slice(2)));
}
