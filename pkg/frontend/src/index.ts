export { parseCsv, columnIndex, numericColumn, stringColumn, validateDbConsistency, MissingColumn, EmptyInput } from "./csv";
export { buildSeries, renderSvg, useLogScale } from "./render";
export type { PlotSpec, Series } from "./render";
export { renderFile } from "./plot";
