export { CSV_COLUMNS, SCHEMA_VERSION, parseRunCsv } from "./csv.js";
export type { RunRow } from "./csv.js";
export { buildFigures, defaultLogY, figureFilename } from "./figures.js";
export type { Figure, Series, SeriesPoint } from "./figures.js";
export { renderFigure } from "./svg.js";
export type { RenderOptions } from "./svg.js";
export { runCli } from "./cli.js";
