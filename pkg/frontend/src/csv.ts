/**
 * Readers for the two CSV schemas emitted by the simulation harness:
 *
 *   snapshot: x,rho,u,phi          (one row per cell)
 *   series:   t,residual,mass,bumps (one row per output time)
 *
 * Values are plain decimal floats except residuals, which may be "inf"
 * on the first output line.
 */

export class CsvError extends Error {}

export interface Snapshot {
  x: number[];
  rho: number[];
  u: number[];
  phi: number[];
}

export interface Series {
  t: number[];
  residual: number[];
  mass: number[];
  bumps: number[];
}

const SNAPSHOT_HEADER = ["x", "rho", "u", "phi"];
const SERIES_HEADER = ["t", "residual", "mass", "bumps"];

function parseNumber(raw: string, file: string, line: number): number {
  const s = raw.trim();
  if (s === "inf") return Infinity;
  if (s === "-inf") return -Infinity;
  const v = Number(s);
  if (s === "" || Number.isNaN(v)) {
    throw new CsvError(`${file}:${line}: not a number: ${JSON.stringify(raw)}`);
  }
  return v;
}

function parseTable(text: string, header: string[], file: string): number[][] {
  const lines = text.split("\n").filter((l) => l.trim() !== "");
  if (lines.length === 0) {
    throw new CsvError(`${file}: empty file`);
  }
  const got = lines[0].split(",").map((s) => s.trim());
  if (got.length !== header.length || got.some((h, i) => h !== header[i])) {
    throw new CsvError(
      `${file}: expected header ${header.join(",")}, got ${lines[0]}`
    );
  }
  const columns: number[][] = header.map(() => []);
  for (let i = 1; i < lines.length; i++) {
    const cells = lines[i].split(",");
    if (cells.length !== header.length) {
      throw new CsvError(
        `${file}:${i + 1}: expected ${header.length} fields, got ${cells.length}`
      );
    }
    for (let c = 0; c < cells.length; c++) {
      columns[c].push(parseNumber(cells[c], file, i + 1));
    }
  }
  if (columns[0].length === 0) {
    throw new CsvError(`${file}: no data rows`);
  }
  return columns;
}

export function parseSnapshot(text: string, file = "<snapshot>"): Snapshot {
  const [x, rho, u, phi] = parseTable(text, SNAPSHOT_HEADER, file);
  return { x, rho, u, phi };
}

export function parseSeries(text: string, file = "<series>"): Series {
  const [t, residual, mass, bumps] = parseTable(text, SERIES_HEADER, file);
  return { t, residual, mass, bumps };
}
