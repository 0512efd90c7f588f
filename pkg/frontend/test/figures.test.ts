import * as fs from "fs";
import * as path from "path";

import { describe, expect, it } from "vitest";

import { parseReport, parseSweep, parseTrace, TRACE_COLUMNS } from "../src/csv";
import { envelope, rateLoglog, snrSweep, traceDualAxis } from "../src/figures";

const FIXTURES = path.join(__dirname, "fixtures");
const read = (name: string) => fs.readFileSync(path.join(FIXTURES, name), "utf8");

const trace = parseTrace(read("trace_dgd.csv"));
const local = parseTrace(read("trace_local.csv"));
const sweep = parseSweep(read("sweep.csv"));
const report = parseReport(read("local_report.json"));

describe("figure rendering", () => {
  it("renders the dual-axis trace figure", () => {
    const svg = traceDualAxis([{ name: "dgd", data: trace }], "trace");
    expect(svg).toContain("<svg");
    expect(svg).toContain("relative error");
    expect(svg).toContain("descriptor size");
    expect((svg.match(/<polyline/g) ?? []).length).toBeGreaterThanOrEqual(2);
  });

  it("renders the sweep figure with a truth reference when consistent", () => {
    const svg = snrSweep(sweep, "sweep");
    expect(svg).toContain("SNR (dB)");
    expect((svg.match(/<circle/g) ?? []).length).toBe(sweep.snr_db.length);
  });

  it("renders step decay with the reported contraction line", () => {
    const svg = rateLoglog([{ name: "local", data: local }], report, "rate");
    expect(svg).toContain("contraction rho");
    expect(svg).toContain("step length");
  });

  it("renders the error envelope", () => {
    const svg = envelope(local, report, "envelope");
    expect(svg).toContain("envelope bound");
    expect(svg).toContain("oracle stop");
  });

  it("is deterministic", () => {
    const a = envelope(local, report, "envelope");
    const b = envelope(parseTrace(read("trace_local.csv")), parseReport(read("local_report.json")), "envelope");
    expect(a).toBe(b);
  });

  it("gives identical bytes for shuffled input columns", () => {
    const lines = read("trace_dgd.csv").trim().split("\n");
    const order = [...TRACE_COLUMNS.keys()].reverse();
    const shuffled = lines
      .map((line) => {
        const cells = line.split(",");
        return order.map((i) => cells[i]).join(",");
      })
      .join("\n");
    const a = traceDualAxis([{ name: "dgd", data: trace }], "t");
    const b = traceDualAxis([{ name: "dgd", data: parseTrace(shuffled) }], "t");
    expect(b).toBe(a);
  });

  it("renders a single-point figure from a one-row csv", () => {
    const lines = read("trace_dgd.csv").trim().split("\n");
    const one = parseTrace(lines.slice(0, 2).join("\n"));
    const svg = traceDualAxis([{ name: "one", data: one }], "one row");
    expect(svg).toContain("<svg");
  });

  it("rejects an envelope render without local-rate data", () => {
    expect(() => envelope(local, { consistency: report.consistency, local_rate: null }, "t"))
      .toThrow(/local-rate/);
  });
});
