/**
 * Minimal deterministic SVG scene building: linear/log scales, nice ticks,
 * polylines, axes.  Everything is plain string assembly with fixed number
 * formatting, so identical inputs produce identical bytes.
 */

export interface Scale {
  (x: number): number;
  domain: [number, number];
  range: [number, number];
  log: boolean;
}

export function fmt(x: number): string {
  if (!Number.isFinite(x)) return "0";
  const s = x.toPrecision(6);
  return s.includes(".") ? s.replace(/\.?0+$/, "").replace(/\.?0+e/, "e") : s;
}

function makeScale(domain: [number, number], range: [number, number], log: boolean): Scale {
  const [d0, d1] = log ? [Math.log10(domain[0]), Math.log10(domain[1])] : domain;
  const span = d1 - d0 || 1;
  const f = ((x: number) => {
    const v = log ? Math.log10(x) : x;
    return range[0] + ((v - d0) / span) * (range[1] - range[0]);
  }) as Scale;
  f.domain = domain;
  f.range = range;
  f.log = log;
  return f;
}

export const linScale = (domain: [number, number], range: [number, number]) =>
  makeScale(domain, range, false);
export const logScale = (domain: [number, number], range: [number, number]) =>
  makeScale(domain, range, true);

/** Round-valued tick positions covering [lo, hi]. */
export function ticks(lo: number, hi: number, n = 6): number[] {
  if (!(hi > lo)) return [lo];
  const raw = (hi - lo) / n;
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  const step = [1, 2, 5, 10].map((m) => m * mag).find((s) => (hi - lo) / s <= n) ?? mag * 10;
  const out: number[] = [];
  for (let t = Math.ceil(lo / step) * step; t <= hi + 1e-12 * step; t += step) {
    out.push(Math.abs(t) < 1e-12 * step ? 0 : t);
  }
  return out;
}

/** Powers of ten inside [lo, hi], thinned to at most eight labels. */
export function logTicks(lo: number, hi: number): number[] {
  const e0 = Math.ceil(Math.log10(lo) - 1e-12);
  const e1 = Math.floor(Math.log10(hi) + 1e-12);
  const exps: number[] = [];
  for (let e = e0; e <= e1; e++) exps.push(e);
  const stride = Math.max(1, Math.ceil(exps.length / 8));
  return exps.filter((_, i) => i % stride === 0).map((e) => Math.pow(10, e));
}

export function finiteExtent(values: number[], positiveOnly = false): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (!Number.isFinite(v)) continue;
    if (positiveOnly && v <= 0) continue;
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  if (lo > hi) throw new Error("empty input: no plottable values");
  if (lo === hi) {
    lo = positiveOnly ? lo / 2 : lo - 1;
    hi = hi + (positiveOnly ? hi : 1);
  }
  return [lo, hi];
}

export const WIDTH = 720;
export const HEIGHT = 480;
export const MARGIN = { left: 64, right: 64, top: 40, bottom: 48 };

export class Scene {
  private els: string[] = [];

  add(el: string): void {
    this.els.push(el);
  }

  polyline(xs: number[], ys: number[], stroke: string, dash = "", width = 1.5): void {
    const pts: string[] = [];
    for (let i = 0; i < xs.length; i++) {
      if (!Number.isFinite(xs[i]) || !Number.isFinite(ys[i])) continue;
      pts.push(`${fmt(xs[i])},${fmt(ys[i])}`);
    }
    if (pts.length === 0) return;
    const dashAttr = dash ? ` stroke-dasharray="${dash}"` : "";
    this.add(
      `<polyline fill="none" stroke="${stroke}" stroke-width="${width}"${dashAttr} points="${pts.join(" ")}"/>`,
    );
  }

  line(x1: number, y1: number, x2: number, y2: number, stroke: string, dash = ""): void {
    const dashAttr = dash ? ` stroke-dasharray="${dash}"` : "";
    this.add(
      `<line x1="${fmt(x1)}" y1="${fmt(y1)}" x2="${fmt(x2)}" y2="${fmt(y2)}" stroke="${stroke}" stroke-width="1"${dashAttr}/>`,
    );
  }

  circle(x: number, y: number, r: number, fill: string): void {
    this.add(`<circle cx="${fmt(x)}" cy="${fmt(y)}" r="${r}" fill="${fill}"/>`);
  }

  text(x: number, y: number, content: string, opts: { anchor?: string; fill?: string; size?: number; rotate?: boolean } = {}): void {
    const anchor = opts.anchor ?? "start";
    const fill = opts.fill ?? "#222";
    const size = opts.size ?? 12;
    const transform = opts.rotate ? ` transform="rotate(-90 ${fmt(x)} ${fmt(y)})"` : "";
    this.add(
      `<text x="${fmt(x)}" y="${fmt(y)}" font-family="monospace" font-size="${size}" fill="${fill}" text-anchor="${anchor}"${transform}>${escapeXml(content)}</text>`,
    );
  }

  render(): string {
    return [
      `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" viewBox="0 0 ${WIDTH} ${HEIGHT}">`,
      `<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`,
      ...this.els,
      "</svg>",
    ].join("\n");
  }
}

function escapeXml(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export function tickLabel(v: number): string {
  if (v !== 0 && (Math.abs(v) < 1e-3 || Math.abs(v) >= 1e5)) {
    return v.toExponential(0).replace("+", "");
  }
  return fmt(v);
}

/** Frame, tick marks and labels for a left-axis/bottom-axis plot. */
export function drawAxes(
  scene: Scene,
  x: Scale,
  y: Scale,
  labels: { x: string; y: string; title: string; yRight?: string },
  yRight?: Scale,
): void {
  const x0 = MARGIN.left;
  const x1 = WIDTH - MARGIN.right;
  const y0 = HEIGHT - MARGIN.bottom;
  const y1 = MARGIN.top;
  scene.line(x0, y0, x1, y0, "#222");
  scene.line(x0, y0, x0, y1, "#222");

  const xt = x.log ? logTicks(x.domain[0], x.domain[1]) : ticks(x.domain[0], x.domain[1]);
  for (const t of xt) {
    scene.line(x(t), y0, x(t), y0 + 4, "#222");
    scene.text(x(t), y0 + 16, tickLabel(t), { anchor: "middle" });
  }
  const yt = y.log ? logTicks(y.domain[0], y.domain[1]) : ticks(y.domain[0], y.domain[1]);
  for (const t of yt) {
    scene.line(x0 - 4, y(t), x0, y(t), "#222");
    scene.text(x0 - 6, y(t) + 4, tickLabel(t), { anchor: "end" });
    scene.line(x0, y(t), x1, y(t), "#eee");
  }
  if (yRight) {
    scene.line(x1, y0, x1, y1, "#222");
    const rt = yRight.log
      ? logTicks(yRight.domain[0], yRight.domain[1])
      : ticks(yRight.domain[0], yRight.domain[1]);
    for (const t of rt) {
      scene.line(x1, yRight(t), x1 + 4, yRight(t), "#222");
      scene.text(x1 + 6, yRight(t) + 4, tickLabel(t), { anchor: "start" });
    }
    if (labels.yRight) {
      scene.text(WIDTH - 12, (y0 + y1) / 2, labels.yRight, { anchor: "middle", rotate: true });
    }
  }
  scene.text((x0 + x1) / 2, HEIGHT - 12, labels.x, { anchor: "middle" });
  scene.text(18, (y0 + y1) / 2, labels.y, { anchor: "middle", rotate: true });
  scene.text((x0 + x1) / 2, 22, labels.title, { anchor: "middle", size: 14 });
}

export function plotArea(): { x: [number, number]; y: [number, number] } {
  return {
    x: [MARGIN.left, WIDTH - MARGIN.right],
    y: [HEIGHT - MARGIN.bottom, MARGIN.top],
  };
}
