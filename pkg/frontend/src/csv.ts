/**
 * Reader for the otfs-sbl results CSV.
 *
 * Expected header:
 *   scenario,estimator,snr_db,nmse,nmse_db,ser,trials,elapsed_ms,seed
 *
 * The reader is schema-light: any header works as long as the columns a
 * plot actually references exist.  Before plotting `nmse_db`, the pair
 * consistency `nmse_db = 10*log10(nmse)` is validated when both columns
 * are present.
 */

export class MissingColumn extends Error {
  constructor(column: string, available: string[]) {
    super(`column ${JSON.stringify(column)} not in CSV header (${available.join(", ")})`);
    this.name = "MissingColumn";
  }
}

export class EmptyInput extends Error {
  constructor(message: string) {
    super(message);
    this.name = "EmptyInput";
  }
}

export interface CsvTable {
  header: string[];
  rows: string[][];
}

export function parseCsv(text: string): CsvTable {
  const lines = text.split(/\r?\n/).filter((line) => line.trim().length > 0);
  if (lines.length === 0) {
    throw new EmptyInput("CSV has no header line");
  }
  const header = lines[0].split(",").map((h) => h.trim());
  const rows: string[][] = [];
  for (const line of lines.slice(1)) {
    const cells = line.split(",");
    if (cells.length !== header.length) {
      throw new Error(`row has ${cells.length} cells, header has ${header.length}: ${line}`);
    }
    rows.push(cells.map((c) => c.trim()));
  }
  if (rows.length === 0) {
    throw new EmptyInput("CSV has a header but no data rows");
  }
  return { header, rows };
}

export function columnIndex(table: CsvTable, column: string): number {
  const idx = table.header.indexOf(column);
  if (idx < 0) {
    throw new MissingColumn(column, table.header);
  }
  return idx;
}

export function numericColumn(table: CsvTable, column: string): number[] {
  const idx = columnIndex(table, column);
  return table.rows.map((row, i) => {
    const value = Number(row[idx]);
    if (Number.isNaN(value) && row[idx].toLowerCase() !== "nan") {
      throw new Error(`row ${i + 1}: cannot parse ${JSON.stringify(row[idx])} in column ${column}`);
    }
    return value;
  });
}

export function stringColumn(table: CsvTable, column: string): string[] {
  const idx = columnIndex(table, column);
  return table.rows.map((row) => row[idx]);
}

/** Verify nmse_db = 10*log10(nmse) row-wise (skipping non-finite pairs). */
export function validateDbConsistency(table: CsvTable, tol = 1e-9): void {
  if (!table.header.includes("nmse") || !table.header.includes("nmse_db")) {
    return;
  }
  const linear = numericColumn(table, "nmse");
  const db = numericColumn(table, "nmse_db");
  for (let i = 0; i < linear.length; i++) {
    const expected = 10 * Math.log10(linear[i]);
    if (!Number.isFinite(expected) || !Number.isFinite(db[i])) {
      continue;
    }
    if (Math.abs(expected - db[i]) > tol * Math.max(1, Math.abs(expected))) {
      throw new Error(
        `row ${i + 1}: nmse_db ${db[i]} inconsistent with 10*log10(nmse) = ${expected}`
      );
    }
  }
}
