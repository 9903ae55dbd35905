import { mkdirSync, mkdtempSync, writeFileSync } from "fs";
import { tmpdir } from "os";
import path from "path";

export interface VariantFixture {
  label: string;
  hLaw: "constant" | "power" | "expdecay";
  hValue: number;
  r: number;
  bound: number;
  /** one f-series per replicate; the mean file averages them */
  reps: number[][];
}

/**
 * Write a minimal harness-shaped experiment directory and return the
 * summary.json path. Series are taken as-is for f; best_f is the running
 * minimum, fevals is 1 + k.
 */
export function writeExperiment(
  plotHint: "lines" | "envelope",
  variants: VariantFixture[],
  name = "tiny"
): string {
  const dir = mkdtempSync(path.join(tmpdir(), "ozo-plot-fix-"));

  const csv = (series: number[]): string => {
    const lines = ["k,fevals,f,best_f,alpha,h"];
    let best = Infinity;
    series.forEach((v, k) => {
      best = Math.min(best, v);
      lines.push(`${k},${k + 1},${v},${best},0.05,0.001`);
    });
    return lines.join("\n") + "\n";
  };

  const summaryVariants = variants.map((v) => {
    const vdir = path.join(dir, v.label);
    mkdirSync(vdir);
    const repFiles: string[] = [];
    v.reps.forEach((series, i) => {
      const rel = `${v.label}/rep${String(i).padStart(3, "0")}.csv`;
      writeFileSync(path.join(dir, rel), csv(series));
      repFiles.push(rel);
    });
    const n = Math.min(...v.reps.map((s) => s.length));
    const mean = Array.from({ length: n }, (_, i) =>
      v.reps.reduce((a, s) => a + s[i], 0) / v.reps.length
    );
    writeFileSync(path.join(vdir, "mean.csv"), csv(mean));
    return {
      label: v.label,
      ell: 1,
      alpha: { law: "constant", value: 0.05, s: 0.0 },
      h: { law: v.hLaw, value: v.hValue, r: v.r },
      replicates: v.reps.length,
      seeds: v.reps.map((_, i) => [1, 1, 0, i]),
      statuses: v.reps.map(() => "completed"),
      constants: { Lambda: 20.0, alpha_bar: 0.05, w: 1.0, C: 50.0,
                   eta: 0.975, gamma: 1.0 },
      regime: "T2-i'",
      error_region_bound: v.bound,
      fit: { model: "linear_log", value: 0.98, r2: 0.9,
             window: [1, 2], truncated: false },
      final_mean_f: mean[mean.length - 1],
      final_mean_best_f: mean[mean.length - 1],
      files: { mean: `${v.label}/mean.csv`, replicates: repFiles },
    };
  });

  const summary = {
    experiment: name,
    description: "fixture experiment",
    scale: "desk",
    master_seed: 1,
    d: 4,
    n: 4,
    budget: 100,
    problem: { kind: "convex-pl", lambda: 10.0, gamma: 1.0 },
    sampler: "coordinate",
    mode: "fd",
    fevals_convention: "cached",
    x0_policy: "shared",
    diagnostics: false,
    plot_hint: plotHint,
    variants: summaryVariants,
  };
  const file = path.join(dir, "summary.json");
  writeFileSync(file, JSON.stringify(summary, null, 1));
  return file;
}

export function geometric(start: number, ratio: number, n: number): number[] {
  return Array.from({ length: n }, (_, i) => start * Math.pow(ratio, i));
}
