#!/usr/bin/env node
/**
 * ozo-plot: render experiment summaries to figures.
 *
 * Usage:
 *   ozo-plot --summary runs/fig1-left-desk/summary.json --out figs
 *   ozo-plot --summary a/summary.json --summary b/summary.json \
 *            --out figs --format svg,png
 *
 * Each --summary becomes one panel, left to right. --y picks the column
 * (f or best_f, default f). Exit codes: 0 success, 1 bad or unreadable
 * inputs (message names the offending file/column), 2 usage error.
 */

import { mkdirSync, writeFileSync } from "fs";
import path from "path";
import { buildFigure, YColumn } from "./figure";
import { renderPNG } from "./png";
import { SchemaError } from "./schema";
import { renderSVG } from "./svg";

const USAGE =
  "usage: ozo-plot --summary <summary.json> [--summary ...] --out <dir> " +
  "[--format svg,png] [--y f|best_f]";

function fail(code: number, msg: string): never {
  console.error(msg);
  process.exit(code);
}

function main(argv: string[]): void {
  const summaries: string[] = [];
  let out = "";
  let formats = ["svg"];
  let yColumn: YColumn = "f";

  for (let i = 0; i < argv.length; i++) {
    const a = argv[i];
    const next = () => {
      if (i + 1 >= argv.length) fail(2, `${a} needs a value\n${USAGE}`);
      return argv[++i];
    };
    if (a === "--summary") summaries.push(next());
    else if (a === "--out") out = next();
    else if (a === "--format") formats = next().split(",");
    else if (a === "--y") {
      const v = next();
      if (v !== "f" && v !== "best_f") fail(2, `--y must be f or best_f\n${USAGE}`);
      yColumn = v;
    } else if (a === "--help" || a === "-h") {
      console.log(USAGE);
      return;
    } else fail(2, `unknown argument ${a}\n${USAGE}`);
  }

  if (summaries.length === 0 || out === "") fail(2, USAGE);
  for (const f of formats) {
    if (f !== "svg" && f !== "png") fail(2, `unknown format "${f}"\n${USAGE}`);
  }

  try {
    const figure = buildFigure(summaries, yColumn);
    mkdirSync(out, { recursive: true });
    if (formats.includes("svg")) {
      const p = path.join(out, `${figure.name}.svg`);
      writeFileSync(p, renderSVG(figure));
      console.log(`wrote ${p}`);
    }
    if (formats.includes("png")) {
      const p = path.join(out, `${figure.name}.png`);
      writeFileSync(p, renderPNG(figure));
      console.log(`wrote ${p}`);
    }
  } catch (err) {
    if (err instanceof SchemaError) fail(1, err.message);
    fail(1, (err as Error).message);
  }
}

main(process.argv.slice(2));
