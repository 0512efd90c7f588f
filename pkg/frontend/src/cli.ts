#!/usr/bin/env node
/**
 * plot --kind <trace_dual_axis|snr_sweep|rate_loglog|envelope>
 *      --in <csv files...> [--report <json>] --out <svg file>
 *
 * Renders solver CSV/JSON outputs to SVG.  Rendering is deterministic:
 * identical inputs produce identical bytes.
 */

import * as fs from "fs";
import * as path from "path";

import { parseReport, parseSweep, parseTrace, ReportJson } from "./csv";
import { envelope, FigureKind, KINDS, NamedTrace, rateLoglog, snrSweep, traceDualAxis } from "./figures";

interface Args {
  kind: FigureKind;
  inputs: string[];
  report?: string;
  out: string;
}

export function parseArgs(argv: string[]): Args {
  let kind: string | undefined;
  const inputs: string[] = [];
  let report: string | undefined;
  let out: string | undefined;
  for (let i = 0; i < argv.length; i++) {
    const a = argv[i];
    if (a === "--kind") {
      kind = argv[++i];
    } else if (a === "--in") {
      while (i + 1 < argv.length && !argv[i + 1].startsWith("--")) inputs.push(argv[++i]);
    } else if (a === "--report") {
      report = argv[++i];
    } else if (a === "--out") {
      out = argv[++i];
    } else {
      throw new Error(`unknown argument: ${a}`);
    }
  }
  if (!kind || !(KINDS as readonly string[]).includes(kind)) {
    throw new Error(`--kind must be one of ${KINDS.join(", ")}`);
  }
  if (inputs.length === 0) throw new Error("--in requires at least one file");
  if (!out) throw new Error("--out is required");
  return { kind: kind as FigureKind, inputs, report, out };
}

function loadTraces(paths: string[]): NamedTrace[] {
  return paths.map((p) => ({
    name: path.basename(p).replace(/\.csv$/, ""),
    data: parseTrace(fs.readFileSync(p, "utf8")),
  }));
}

function loadReport(p: string | undefined, kind: string): ReportJson {
  if (!p) throw new Error(`--report is required for kind ${kind}`);
  return parseReport(fs.readFileSync(p, "utf8"));
}

export function renderFigure(args: Args): string {
  const title = path.basename(args.inputs[0]);
  switch (args.kind) {
    case "trace_dual_axis":
      return traceDualAxis(loadTraces(args.inputs), title);
    case "snr_sweep":
      return snrSweep(parseSweep(fs.readFileSync(args.inputs[0], "utf8")), title);
    case "rate_loglog":
      return rateLoglog(loadTraces(args.inputs), loadReport(args.report, args.kind), title);
    case "envelope":
      return envelope(parseTrace(fs.readFileSync(args.inputs[0], "utf8")),
                      loadReport(args.report, args.kind), title);
  }
}

export function main(argv: string[]): number {
  try {
    const args = parseArgs(argv);
    const svg = renderFigure(args);
    fs.mkdirSync(path.dirname(path.resolve(args.out)), { recursive: true });
    fs.writeFileSync(args.out, svg + "\n");
    process.stdout.write(`${args.out}\n`);
    return 0;
  } catch (err) {
    process.stderr.write(`error: ${err instanceof Error ? err.message : String(err)}\n`);
    return 1;
  }
}

if (require.main === module) {
  process.exit(main(process.argv.slice(2)));
}
