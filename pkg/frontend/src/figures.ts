/**
 * The four figure kinds rendered from solver outputs.  Every plotted value
 * comes straight from a CSV column or a report JSON field; the only
 * computation here is the bound curve of the envelope figure, evaluated
 * from reported constants.
 */

import { Columns, ReportJson } from "./csv";
import {
  Scene,
  drawAxes,
  finiteExtent,
  linScale,
  logScale,
  plotArea,
} from "./svg";

export const KINDS = ["trace_dual_axis", "snr_sweep", "rate_loglog", "envelope"] as const;
export type FigureKind = (typeof KINDS)[number];

const SERIES_COLORS = ["#1f77b4", "#2ca02c", "#9467bd", "#8c564b"];

export interface NamedTrace {
  name: string;
  data: Columns;
}

/** Relative error (log left axis) and descriptor size (right axis) vs k. */
export function traceDualAxis(traces: NamedTrace[], title: string): string {
  const area = plotArea();
  const allK = traces.flatMap((t) => t.data.k);
  const allErr = traces.flatMap((t) => t.data.err_rel);
  const allSize = traces.flatMap((t) => t.data.descriptor_size);
  const x = linScale(finiteExtent(allK), area.x);
  const yErr = logScale(finiteExtent(allErr, true), area.y);
  const ySize = linScale([0, Math.max(...allSize, 1) * 1.05], area.y);

  const scene = new Scene();
  drawAxes(scene, x, yErr,
           { x: "iteration k", y: "relative error", yRight: "descriptor size", title },
           ySize);
  traces.forEach((t, i) => {
    const color = SERIES_COLORS[i % SERIES_COLORS.length];
    const ks = t.data.k.filter((_, j) => t.data.err_rel[j] > 0);
    const errs = t.data.err_rel.filter((v) => v > 0);
    scene.polyline(ks.map(x), errs.map(yErr), color);
    scene.polyline(t.data.k.map(x), t.data.descriptor_size.map(ySize), "#d62728", "4 3");
    scene.text(area.x[0] + 8, area.y[1] + 14 + 14 * i, `${t.name}: error`, { fill: color });
  });
  scene.text(area.x[0] + 8, area.y[1] + 14 + 14 * traces.length, "descriptor size",
             { fill: "#d62728" });
  return scene.render();
}

/** Descriptor size at the oracle stop vs SNR, with the truth size marked. */
export function snrSweep(data: Columns, title: string): string {
  const area = plotArea();
  const x = linScale(finiteExtent(data.snr_db), area.x);
  const y = linScale([0, Math.max(...data.descriptor_size, 1) * 1.1], area.y);
  const scene = new Scene();
  drawAxes(scene, x, y, { x: "SNR (dB)", y: "descriptor size at stop", title });
  scene.polyline(data.snr_db.map(x), data.descriptor_size.map(y), "#1f77b4");
  data.snr_db.forEach((s, i) => {
    scene.circle(x(s), y(data.descriptor_size[i]),
                 3, data.consistent[i] ? "#2ca02c" : "#d62728");
  });
  // any consistent point carries the truth's descriptor size
  const truthIdx = data.consistent.findIndex((c) => c === 1);
  if (truthIdx >= 0) {
    const size = data.descriptor_size[truthIdx];
    scene.line(area.x[0], y(size), area.x[1], y(size), "#2ca02c", "6 4");
    scene.text(area.x[1] - 8, y(size) - 6, `truth size ${size}`,
               { anchor: "end", fill: "#2ca02c" });
  }
  return scene.render();
}

/** Iterate step lengths on semilog-y with the reported contraction line. */
export function rateLoglog(traces: NamedTrace[], report: ReportJson, title: string): string {
  const area = plotArea();
  const allK = traces.flatMap((t) => t.data.k);
  const allStep = traces.flatMap((t) => t.data.step_diff);
  const x = linScale(finiteExtent(allK), area.x);
  const y = logScale(finiteExtent(allStep, true), area.y);
  const scene = new Scene();
  drawAxes(scene, x, y, { x: "iteration k", y: "step length", title });
  traces.forEach((t, i) => {
    const color = SERIES_COLORS[i % SERIES_COLORS.length];
    const ks: number[] = [];
    const steps: number[] = [];
    t.data.k.forEach((k, j) => {
      const s = t.data.step_diff[j];
      if (Number.isFinite(s) && s > 0) {
        ks.push(k);
        steps.push(s);
      }
    });
    scene.polyline(ks.map(x), steps.map(y), color);
  });
  const rate = report.local_rate;
  if (rate && rate.rho < 1 && rate.window) {
    const [k0, k1] = rate.window;
    const first = traces[0].data;
    const anchorIdx = first.k.findIndex((k, j) => k >= k0 && Number.isFinite(first.step_diff[j]));
    if (anchorIdx >= 0) {
      const s0 = first.step_diff[anchorIdx];
      const kA = first.k[anchorIdx];
      const ks: number[] = [];
      const vals: number[] = [];
      const n = 64;
      for (let i = 0; i <= n; i++) {
        const k = kA + ((k1 - kA) * i) / n;
        ks.push(k);
        vals.push(s0 * Math.pow(rate.rho, k - kA));
      }
      scene.polyline(ks.map(x), vals.map(y), "#d62728", "6 4");
      scene.text(area.x[0] + 8, area.y[1] + 14,
                 `contraction rho = ${rate.rho.toPrecision(4)}`, { fill: "#d62728" });
    }
  }
  return scene.render();
}

function envelopeBound(k: number, rep: ReportJson): number {
  const c = rep.consistency!;
  const r = rep.local_rate!;
  const kLo = c.interval![0];
  const rho = r.rho;
  const d = r.envelope_d ?? 0;
  const unit = Math.pow(rho, Math.min(k, c.k_best) - kLo)
    * (1 - Math.pow(rho, Math.abs(k - c.k_best))) / (1 - rho);
  return c.d_best + d * unit;
}

/** Error to the truth against the reported geometric envelope. */
export function envelope(data: Columns, report: ReportJson, title: string): string {
  if (!report.consistency || !report.consistency.interval || !report.local_rate) {
    throw new Error("report lacks the consistency interval or local-rate data");
  }
  const area = plotArea();
  const x = linScale(finiteExtent(data.k), area.x);
  const y = logScale(finiteExtent(data.err_to_truth, true), area.y);
  const scene = new Scene();
  drawAxes(scene, x, y, { x: "iteration k", y: "error to truth", title });
  scene.polyline(data.k.map(x), data.err_to_truth.map(y), "#1f77b4");

  const [iLo, iHi] = report.consistency.interval;
  const w = report.local_rate.window;
  const lo = w ? Math.max(iLo, w[0]) : iLo;
  const hi = w ? Math.min(iHi, w[1]) : iHi;
  const ks: number[] = [];
  const bound: number[] = [];
  for (const k of data.k) {
    if (k < lo || k > hi) continue;
    ks.push(k);
    bound.push(envelopeBound(k, report));
  }
  scene.polyline(ks.map(x), bound.map(y), "#d62728", "6 4");
  const kb = report.consistency.k_best;
  if (kb >= x.domain[0] && kb <= x.domain[1]) {
    scene.line(x(kb), area.y[0], x(kb), area.y[1], "#999", "2 3");
    scene.text(x(kb) + 4, area.y[1] + 14, `oracle stop k=${kb}`, { fill: "#555" });
  }
  scene.text(area.x[0] + 8, area.y[1] + 14, "error", { fill: "#1f77b4" });
  scene.text(area.x[0] + 8, area.y[1] + 28, "envelope bound", { fill: "#d62728" });
  return scene.render();
}
