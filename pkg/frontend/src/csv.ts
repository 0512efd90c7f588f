/**
 * Header-keyed CSV parsing for the solver trace and sweep tables.
 * Column order is irrelevant; a missing required column is an error that
 * names the column.
 */

export type Columns = Record<string, number[]>;

export const TRACE_COLUMNS = [
  "k",
  "t",
  "err_to_truth",
  "err_rel",
  "residual",
  "step_diff",
  "descriptor_size",
  "consistent",
  "dual_objective",
];

export const SWEEP_COLUMNS = ["snr_db", "delta", "k_best", "descriptor_size", "consistent"];

export function parseCsv(text: string, required: string[]): Columns {
  const lines = text.split(/\r?\n/).filter((line) => line.length > 0);
  if (lines.length === 0) throw new Error("empty input: no header line");
  const header = lines[0].split(",").map((h) => h.trim());
  for (const col of required) {
    if (!header.includes(col)) throw new Error(`missing column: ${col}`);
  }
  if (lines.length === 1) throw new Error("empty input: no data rows");
  const out: Columns = {};
  for (const col of header) out[col] = [];
  for (let i = 1; i < lines.length; i++) {
    const cells = lines[i].split(",");
    if (cells.length !== header.length) {
      throw new Error(`row ${i} has ${cells.length} cells, expected ${header.length}`);
    }
    for (let j = 0; j < header.length; j++) {
      out[header[j]].push(Number(cells[j]));
    }
  }
  return out;
}

export const parseTrace = (text: string): Columns => parseCsv(text, TRACE_COLUMNS);
export const parseSweep = (text: string): Columns => parseCsv(text, SWEEP_COLUMNS);

/** Consistency + local-rate report as written by the analysis commands. */
export interface ReportJson {
  consistency?: {
    k_best: number;
    d_best: number;
    interval: [number, number] | null;
    consistent_at_best: boolean;
  };
  local_rate?: {
    rho: number;
    sigma_min_t: number;
    inj_ok: boolean;
    fitted_slope: number | null;
    window: [number, number] | null;
    envelope_d?: number;
    envelope_ok?: boolean;
  } | null;
  note?: string | null;
}

export function parseReport(text: string): ReportJson {
  return JSON.parse(text) as ReportJson;
}
