/**
 * Readers for the optimizer harness's on-disk outputs: per-run CSV traces
 * and the experiment-level summary.json. Everything downstream draws what
 * these readers hand over; nothing re-derives optimizer math.
 */

import { readFileSync } from "fs";
import path from "path";

/** Raised for any input that does not match the documented layout. */
export class SchemaError extends Error {}

export const TRACE_COLUMNS = ["k", "fevals", "f", "best_f", "alpha", "h"] as const;
export const DIAG_COLUMNS = ["pg_norm2", "qd_lhs", "qd_rhs"] as const;

export interface Trace {
  source: string;
  columns: string[];
  rows: number;
  /** column name -> values, aligned across columns */
  data: Map<string, number[]>;
}

export function parseTrace(text: string, source: string): Trace {
  const lines = text.split("\n").filter((l) => l.length > 0);
  if (lines.length < 2) {
    throw new SchemaError(`schema mismatch: ${source}: no data rows`);
  }
  const columns = lines[0].split(",");
  for (const name of TRACE_COLUMNS) {
    if (!columns.includes(name)) {
      throw new SchemaError(`schema mismatch: ${source}: missing column "${name}"`);
    }
  }
  const known = new Set<string>([...TRACE_COLUMNS, ...DIAG_COLUMNS]);
  for (const name of columns) {
    if (!known.has(name)) {
      throw new SchemaError(`schema mismatch: ${source}: unknown column "${name}"`);
    }
  }

  const data = new Map<string, number[]>(columns.map((c) => [c, []]));
  for (let i = 1; i < lines.length; i++) {
    const cells = lines[i].split(",");
    if (cells.length !== columns.length) {
      throw new SchemaError(
        `schema mismatch: ${source}: row ${i} has ${cells.length} fields, expected ${columns.length}`
      );
    }
    for (let j = 0; j < columns.length; j++) {
      const v = Number(cells[j]);
      if (!Number.isFinite(v)) {
        throw new SchemaError(
          `schema mismatch: ${source}: non-numeric value "${cells[j]}" in column "${columns[j]}" at row ${i}`
        );
      }
      data.get(columns[j])!.push(v);
    }
  }
  return { source, columns, rows: lines.length - 1, data };
}

export function readTrace(file: string): Trace {
  let text: string;
  try {
    text = readFileSync(file, "utf-8");
  } catch (err) {
    throw new SchemaError(`cannot read trace ${file}: ${(err as Error).message}`);
  }
  return parseTrace(text, file);
}

// ---------------------------------------------------------------------------
// summary.json
// ---------------------------------------------------------------------------

export interface VariantInfo {
  label: string;
  ell: number;
  alphaLaw: string;
  alphaValue: number;
  hLaw: string;
  hValue: number;
  hExponent: number;
  replicates: number;
  regime: string;
  errorRegionBound: number | null;
  finalMeanF: number;
  /** paths resolved against the summary's directory */
  meanFile: string;
  replicateFiles: string[];
}

export interface SummaryInfo {
  source: string;
  dir: string;
  experiment: string;
  description: string;
  scale: string;
  d: number;
  budget: number;
  plotHint: "lines" | "envelope";
  problemKind: string;
  lambda: number;
  variants: VariantInfo[];
}

function need(obj: unknown, field: string, where: string): unknown {
  if (typeof obj !== "object" || obj === null || !(field in (obj as object))) {
    throw new SchemaError(`schema mismatch: ${where}: missing field "${field}"`);
  }
  return (obj as Record<string, unknown>)[field];
}

function needNumber(obj: unknown, field: string, where: string): number {
  const v = need(obj, field, where);
  if (typeof v !== "number" || !Number.isFinite(v)) {
    throw new SchemaError(`schema mismatch: ${where}: field "${field}" is not a finite number`);
  }
  return v;
}

// error_region_bound is null when a decaying step size leaves no fixed floor
function needNumberOrNull(obj: unknown, field: string, where: string): number | null {
  const v = need(obj, field, where);
  if (v === null) {
    return null;
  }
  if (typeof v !== "number" || !Number.isFinite(v)) {
    throw new SchemaError(`schema mismatch: ${where}: field "${field}" is not a finite number or null`);
  }
  return v;
}

function needString(obj: unknown, field: string, where: string): string {
  const v = need(obj, field, where);
  if (typeof v !== "string") {
    throw new SchemaError(`schema mismatch: ${where}: field "${field}" is not a string`);
  }
  return v;
}

export function readSummary(file: string): SummaryInfo {
  let text: string;
  try {
    text = readFileSync(file, "utf-8");
  } catch (err) {
    throw new SchemaError(`cannot read summary ${file}: ${(err as Error).message}`);
  }
  let raw: unknown;
  try {
    raw = JSON.parse(text);
  } catch (err) {
    throw new SchemaError(`summary ${file}: not valid JSON (${(err as Error).message})`);
  }

  const dir = path.dirname(file);
  const where = path.basename(file);
  const plotHint = needString(raw, "plot_hint", where);
  if (plotHint !== "lines" && plotHint !== "envelope") {
    throw new SchemaError(`schema mismatch: ${where}: unknown plot_hint "${plotHint}"`);
  }
  const problem = need(raw, "problem", where);

  const variantsRaw = need(raw, "variants", where);
  if (!Array.isArray(variantsRaw) || variantsRaw.length === 0) {
    throw new SchemaError(`schema mismatch: ${where}: field "variants" is not a non-empty array`);
  }

  const variants: VariantInfo[] = variantsRaw.map((v, i) => {
    const vw = `${where}: variants[${i}]`;
    const alpha = need(v, "alpha", vw);
    const h = need(v, "h", vw);
    const files = need(v, "files", vw);
    const reps = need(files, "replicates", `${vw}.files`);
    if (!Array.isArray(reps) || reps.some((r) => typeof r !== "string")) {
      throw new SchemaError(`schema mismatch: ${vw}.files: field "replicates" is not a path list`);
    }
    return {
      label: needString(v, "label", vw),
      ell: needNumber(v, "ell", vw),
      alphaLaw: needString(alpha, "law", `${vw}.alpha`),
      alphaValue: needNumber(alpha, "value", `${vw}.alpha`),
      hLaw: needString(h, "law", `${vw}.h`),
      hValue: needNumber(h, "value", `${vw}.h`),
      hExponent: needNumber(h, "r", `${vw}.h`),
      replicates: needNumber(v, "replicates", vw),
      regime: needString(v, "regime", vw),
      errorRegionBound: needNumberOrNull(v, "error_region_bound", vw),
      finalMeanF: needNumber(v, "final_mean_f", vw),
      meanFile: path.join(dir, needString(files, "mean", `${vw}.files`)),
      replicateFiles: (reps as string[]).map((r) => path.join(dir, r)),
    };
  });

  return {
    source: file,
    dir,
    experiment: needString(raw, "experiment", where),
    description: needString(raw, "description", where),
    scale: needString(raw, "scale", where),
    d: needNumber(raw, "d", where),
    budget: needNumber(raw, "budget", where),
    plotHint,
    problemKind: needString(problem, "kind", `${where}: problem`),
    lambda: needNumber(problem, "lambda", `${where}: problem`),
    variants,
  };
}
