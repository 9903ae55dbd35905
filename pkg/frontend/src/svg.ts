/**
 * Serialize a scene to SVG text. Coordinates are written with two
 * decimals and attributes in a fixed order, so identical inputs always
 * produce identical bytes.
 */

import { Figure } from "./figure";
import { layoutFigure, Prim } from "./scene";

function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

const f2 = (v: number) => v.toFixed(2);

function prim(p: Prim): string {
  switch (p.kind) {
    case "rect":
      return `<rect x="${f2(p.x)}" y="${f2(p.y)}" width="${f2(p.w)}" height="${f2(p.h)}" fill="${p.fill}"/>`;
    case "line": {
      const dash = p.dash ? ` stroke-dasharray="${p.dash.join(",")}"` : "";
      return `<line x1="${f2(p.x1)}" y1="${f2(p.y1)}" x2="${f2(p.x2)}" y2="${f2(p.y2)}" stroke="${p.color}" stroke-width="${p.width}"${dash}/>`;
    }
    case "polyline": {
      const dash = p.dash ? ` stroke-dasharray="${p.dash.join(",")}"` : "";
      const pts = p.pts.map(([x, y]) => `${f2(x)},${f2(y)}`).join(" ");
      return `<polyline fill="none" stroke="${p.color}" stroke-width="${p.width}"${dash} points="${pts}"/>`;
    }
    case "polygon": {
      const pts = p.pts.map(([x, y]) => `${f2(x)},${f2(y)}`).join(" ");
      return `<polygon fill="${p.color}" fill-opacity="${p.opacity}" points="${pts}"/>`;
    }
    case "text": {
      const weight = p.bold ? ` font-weight="600"` : "";
      const rot = p.rotated
        ? ` transform="rotate(-90,${f2(p.x)},${f2(p.y)})"`
        : "";
      return `<text x="${f2(p.x)}" y="${f2(p.y)}" text-anchor="${p.anchor}" font-size="${p.size}" fill="${p.color}"${weight}${rot}>${esc(p.s)}</text>`;
    }
  }
}

export function renderSVG(figure: Figure): string {
  const scene = layoutFigure(figure);
  const head =
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${scene.width} ${scene.height}" ` +
    `font-family="Helvetica, Arial, sans-serif">`;
  return [head, ...scene.prims.map(prim), "</svg>", ""].join("\n");
}
