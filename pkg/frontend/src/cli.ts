#!/usr/bin/env node
/**
 * chemoplot render --spec <path>
 *
 * Reads a figure spec file, renders the referenced CSVs into an SVG and
 * writes it to the spec's 'out' path (resolved relative to the spec file).
 * Exits nonzero with a message on a bad spec or missing/ill-formed CSV.
 */

import { readFileSync, writeFileSync } from "node:fs";
import { dirname, resolve } from "node:path";

import { CsvError } from "./csv.js";
import { SpecError, parseFigureSpec } from "./figspec.js";
import { renderFigure } from "./figures.js";

const USAGE = "usage: chemoplot render --spec <path>";

export function main(argv: string[]): number {
  if (argv.length !== 3 || argv[0] !== "render" || argv[1] !== "--spec") {
    console.error(USAGE);
    return 2;
  }
  const specPath = argv[2];

  let specText: string;
  try {
    specText = readFileSync(specPath, "utf8");
  } catch (err) {
    console.error(`error: cannot read spec file ${specPath}: ${(err as Error).message}`);
    return 2;
  }

  try {
    const spec = parseFigureSpec(specText, specPath);
    const base = dirname(resolve(specPath));
    const readFile = (p: string) => readFileSync(resolve(base, p), "utf8");
    const svg = renderFigure(spec, readFile, (m) => console.warn(`warning: ${m}`));
    const outPath = resolve(base, spec.out);
    writeFileSync(outPath, svg);
    console.log(`wrote ${outPath}`);
    return 0;
  } catch (err) {
    if (err instanceof SpecError) {
      console.error(`spec error: ${err.message}`);
      return 2;
    }
    if (err instanceof CsvError) {
      console.error(`csv error: ${err.message}`);
      return 1;
    }
    console.error(`error: ${(err as Error).message}`);
    return 1;
  }
}

const invokedDirectly =
  process.argv[1] !== undefined &&
  import.meta.url === new URL(`file://${resolve(process.argv[1])}`).href;

if (invokedDirectly) {
  process.exit(main(process.argv.slice(2)));
}
