/**
 * Figure spec files are flat key = value text, '#' starts a comment:
 *
 *   kind = profiles            # profiles | residual_loglog | log_momentum | panel_grid
 *   out = figure.svg
 *   series = run_snapshot.csv : hyperbolic
 *   series = other.csv : parabolic
 *   xmin = 0                   # optional axis overrides
 *   xmax = 4
 *   ymin = 1e-14
 *   ymax = 1
 *   title = two-bump comparison
 *
 * The 'series' key repeats, one line per input curve; the part after ':'
 * is the legend label (defaults to the file name).  Labels must be unique
 * and at least one series is required.
 */

export class SpecError extends Error {}

export const FIGURE_KINDS = [
  "profiles",
  "residual_loglog",
  "log_momentum",
  "panel_grid",
] as const;

export type FigureKind = (typeof FIGURE_KINDS)[number];

export interface SeriesRef {
  path: string;
  label: string;
}

export interface FigureSpec {
  kind: FigureKind;
  out: string;
  series: SeriesRef[];
  title?: string;
  xmin?: number;
  xmax?: number;
  ymin?: number;
  ymax?: number;
}

const AXIS_KEYS = ["xmin", "xmax", "ymin", "ymax"] as const;

function parseSeriesValue(value: string, where: string): SeriesRef {
  const sep = value.lastIndexOf(":");
  // a bare path (no label) is allowed; windows-style drive letters are not
  if (sep < 0) {
    return { path: value.trim(), label: value.trim() };
  }
  const path = value.slice(0, sep).trim();
  const label = value.slice(sep + 1).trim();
  if (path === "" || label === "") {
    throw new SpecError(`${where}: malformed series entry ${JSON.stringify(value)}`);
  }
  return { path, label };
}

export function parseFigureSpec(text: string, file = "<spec>"): FigureSpec {
  let kind: string | undefined;
  let out: string | undefined;
  let title: string | undefined;
  const series: SeriesRef[] = [];
  const axes: Partial<Record<(typeof AXIS_KEYS)[number], number>> = {};

  const lines = text.split("\n");
  for (let i = 0; i < lines.length; i++) {
    const where = `${file}:${i + 1}`;
    const line = lines[i].replace(/#.*$/, "").trim();
    if (line === "") continue;
    const eq = line.indexOf("=");
    if (eq < 0) {
      throw new SpecError(`${where}: expected 'key = value'`);
    }
    const key = line.slice(0, eq).trim();
    const value = line.slice(eq + 1).trim();
    if (key === "kind") {
      kind = value;
    } else if (key === "out") {
      out = value;
    } else if (key === "title") {
      title = value;
    } else if (key === "series") {
      series.push(parseSeriesValue(value, where));
    } else if ((AXIS_KEYS as readonly string[]).includes(key)) {
      const v = Number(value);
      if (value === "" || Number.isNaN(v)) {
        throw new SpecError(`${where}: ${key} is not a number: ${value}`);
      }
      axes[key as (typeof AXIS_KEYS)[number]] = v;
    } else {
      throw new SpecError(`${where}: unknown key ${JSON.stringify(key)}`);
    }
  }

  if (kind === undefined) throw new SpecError(`${file}: missing 'kind'`);
  if (!(FIGURE_KINDS as readonly string[]).includes(kind)) {
    throw new SpecError(
      `${file}: unknown kind ${JSON.stringify(kind)}; expected one of ${FIGURE_KINDS.join(", ")}`
    );
  }
  if (out === undefined) throw new SpecError(`${file}: missing 'out'`);
  if (series.length === 0) {
    throw new SpecError(`${file}: at least one 'series' entry is required`);
  }
  const labels = new Set(series.map((s) => s.label));
  if (labels.size !== series.length) {
    throw new SpecError(`${file}: series labels must be unique`);
  }

  return { kind: kind as FigureKind, out, series, title, ...axes };
}
