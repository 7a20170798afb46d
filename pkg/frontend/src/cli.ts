#!/usr/bin/env node
/**
 * render_figure <name> <csv-dir> <out.png>
 *
 * Reads the named figure's CSV from <csv-dir> (as written by
 * `python -m cvoptomech figure <name> --out <csv-dir>`) and writes a PNG.
 * Exit codes: 0 success, 1 schema-invalid CSV, 2 bad invocation or missing
 * input file.
 */

import { knownFigures } from "./figures.js";
import { CsvSchemaError } from "./schema.js";
import { FigureInputError, renderFigure } from "./render.js";

async function main(argv: string[]): Promise<number> {
  if (argv.length !== 3) {
    console.error("usage: render_figure <name> <csv-dir> <out.png>");
    console.error(`known figures: ${knownFigures().join(", ")}`);
    return 2;
  }
  const [name, csvDir, outPath] = argv;
  try {
    await renderFigure(name, csvDir, outPath);
  } catch (err) {
    if (err instanceof FigureInputError) {
      console.error(`error: ${err.message}`);
      return 2;
    }
    if (err instanceof CsvSchemaError) {
      console.error(`error: ${err.message}`);
      return 1;
    }
    throw err;
  }
  console.log(outPath);
  return 0;
}

main(process.argv.slice(2)).then(
  (code) => {
    process.exitCode = code;
  },
  (err) => {
    console.error(`error: ${err}`);
    process.exitCode = 1;
  },
);
