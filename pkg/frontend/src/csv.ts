import { parse } from "csv-parse/sync";

/** Columns the runner writes, in order; the parser requires all of them. */
export const CSV_COLUMNS = [
  "schema_version",
  "problem",
  "n",
  "instance_seed",
  "mixer",
  "mode",
  "delta_t",
  "p",
  "p_opt",
  "leakage",
  "optimal_value",
  "n_optima",
  "runtime_ms",
  "status",
] as const;

export const SCHEMA_VERSION = "1";

export interface RunRow {
  problem: string;
  n: number;
  instanceSeed: number;
  mixer: string;
  mode: string;
  /** Raw cell text, kept verbatim so grouping and filenames are exact. */
  deltaT: string;
  p: number;
  /** Null when the row was skipped or failed and carries no metric. */
  pOpt: number | null;
  status: string;
}

export function parseRunCsv(text: string): RunRow[] {
  const records: string[][] = parse(text, {
    skip_empty_lines: true,
    trim: false,
  });
  if (records.length === 0) {
    throw new Error("empty CSV: no header row");
  }
  const header = records[0];
  const missing = CSV_COLUMNS.filter((c) => !header.includes(c));
  if (missing.length > 0) {
    throw new Error(`CSV is missing required columns: ${missing.join(", ")}`);
  }
  const col = new Map(header.map((name, i) => [name, i]));
  const cell = (row: string[], name: string): string => row[col.get(name)!] ?? "";

  const rows: RunRow[] = [];
  for (const record of records.slice(1)) {
    const version = cell(record, "schema_version");
    if (version !== SCHEMA_VERSION) {
      throw new Error(
        `unsupported schema_version ${JSON.stringify(version)}; expected ${SCHEMA_VERSION}`,
      );
    }
    const pOptText = cell(record, "p_opt");
    rows.push({
      problem: cell(record, "problem"),
      n: Number(cell(record, "n")),
      instanceSeed: Number(cell(record, "instance_seed")),
      mixer: cell(record, "mixer"),
      mode: cell(record, "mode"),
      deltaT: cell(record, "delta_t"),
      p: Number(cell(record, "p")),
      pOpt: pOptText === "" ? null : Number(pOptText),
      status: cell(record, "status"),
    });
  }
  return rows;
}
