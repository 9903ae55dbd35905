export { SchemaError, parseTrace, readTrace, readSummary,
         TRACE_COLUMNS, DIAG_COLUMNS } from "./schema";
export type { Trace, SummaryInfo, VariantInfo } from "./schema";
export { buildPanel, buildFigure, PALETTE } from "./figure";
export type { Figure, Panel, Curve, Band, HGuide, YColumn } from "./figure";
export { layoutFigure, PANEL_W, PANEL_H } from "./scene";
export type { Scene, Prim } from "./scene";
export { renderSVG } from "./svg";
export { renderPNG } from "./png";
