/**
 * Assemble the drawable figure model from harness outputs: one panel per
 * summary, one curve per variant, bands for envelope panels, and guide
 * overlays whose values come straight out of summary.json.
 */

import { readSummary, readTrace, SchemaError, Trace } from "./schema";

export type YColumn = "f" | "best_f";

export interface Curve {
  x: number[];
  y: number[];
  color: string;
  width: number;
  label?: string;
  dash?: number[];
}

export interface Band {
  x: number[];
  lo: number[];
  hi: number[];
  color: string;
  opacity: number;
}

export interface HGuide {
  y: number;
  color: string;
  label: string;
}

export interface Panel {
  title: string;
  subtitle: string;
  xLabel: string;
  yLabel: string;
  curves: Curve[];
  bands: Band[];
  hGuides: HGuide[];
}

export interface Figure {
  name: string;
  panels: Panel[];
}

/** Fixed cycle so a variant's color depends only on its position. */
export const PALETTE = [
  "#4361ee", "#e63946", "#2d6a4f", "#f77f00",
  "#7209b7", "#0096c7", "#b5179e", "#606c38",
];

const GUIDE_COLOR = "#888888";
// power-law guides flatter than this draw on top of the curve and say nothing
const GUIDE_MIN_EXPONENT = 0.05;

function column(trace: Trace, name: string): number[] {
  const v = trace.data.get(name);
  if (v === undefined) {
    throw new SchemaError(`schema mismatch: ${trace.source}: missing column "${name}"`);
  }
  return v;
}

export function buildPanel(summaryPath: string, yColumn: YColumn = "f"): Panel {
  const s = readSummary(summaryPath);
  const curves: Curve[] = [];
  const bands: Band[] = [];
  const hGuides: HGuide[] = [];

  s.variants.forEach((v, vi) => {
    const color = PALETTE[vi % PALETTE.length];
    const mean = readTrace(v.meanFile);
    const x = column(mean, "fevals");
    const y = column(mean, yColumn);

    const envelope = s.plotHint === "envelope" && v.replicateFiles.length > 1;
    if (envelope) {
      const reps = v.replicateFiles.map(readTrace);
      const rows = Math.min(...reps.map((r) => r.rows));
      const cols = reps.map((r) => column(r, yColumn));
      const lo: number[] = [];
      const hi: number[] = [];
      for (let i = 0; i < rows; i++) {
        let a = cols[0][i];
        let b = cols[0][i];
        for (let j = 1; j < cols.length; j++) {
          if (cols[j][i] < a) a = cols[j][i];
          if (cols[j][i] > b) b = cols[j][i];
        }
        lo.push(a);
        hi.push(b);
      }
      bands.push({ x: x.slice(0, rows), lo, hi, color, opacity: 0.18 });
    }
    curves.push({ x, y, color, width: envelope ? 1.8 : 1.1, label: v.label });

    // overlays, values read from the summary, never recomputed
    if (yColumn === "f" && v.hLaw === "constant"
        && v.errorRegionBound !== null && v.errorRegionBound > 0) {
      hGuides.push({ y: v.errorRegionBound, color, label: `${v.label} floor` });
    }
    if (v.hLaw === "power" && v.hExponent >= GUIDE_MIN_EXPONENT) {
      const k = column(mean, "k");
      const last = y.length - 1;
      if (k[last] >= 1) {
        const gx: number[] = [];
        const gy: number[] = [];
        for (let i = 0; i < y.length; i++) {
          if (k[i] < 1) continue;
          gx.push(x[i]);
          gy.push(y[last] * Math.pow(k[last] / k[i], 2 * v.hExponent));
        }
        curves.push({
          x: gx, y: gy, color: GUIDE_COLOR, width: 0.8, dash: [4, 3],
          label: `~1/k^${+(2 * v.hExponent).toFixed(4)}`,
        });
      }
    }
  });

  return {
    title: s.experiment,
    subtitle: `${s.scale}, d=${s.d}, ${s.problemKind}`,
    xLabel: "function evaluations",
    yLabel: yColumn,
    curves,
    bands,
    hGuides,
  };
}

export function buildFigure(summaryPaths: string[], yColumn: YColumn = "f"): Figure {
  if (summaryPaths.length === 0) {
    throw new SchemaError("no summaries given");
  }
  const panels = summaryPaths.map((p) => buildPanel(p, yColumn));
  return { name: panels.map((p) => p.title).join("_"), panels };
}
