// Minimal deterministic SVG builder: fixed canvas, fixed fonts, fixed
// numeric precision, no timestamps -- identical inputs give identical bytes.

export const WIDTH = 720;
export const HEIGHT = 520;
export const MARGIN = { left: 78, right: 26, top: 44, bottom: 62 };

export interface Scale {
  (v: number): number;
  min: number;
  max: number;
}

export function fmt(v: number): string {
  if (!Number.isFinite(v)) return "0";
  const s = v.toFixed(2);
  return s === "-0.00" ? "0.00" : s;
}

export function linearScale(min: number, max: number, outMin: number, outMax: number): Scale {
  const span = max - min || 1;
  const f = ((v: number) => outMin + ((v - min) / span) * (outMax - outMin)) as Scale;
  f.min = min;
  f.max = max;
  return f;
}

export function niceTicks(min: number, max: number, count = 6): number[] {
  const span = max - min || 1;
  const raw = span / count;
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  const norm = raw / mag;
  const step = (norm >= 5 ? 5 : norm >= 2 ? 2 : 1) * mag;
  const start = Math.ceil(min / step) * step;
  const ticks: number[] = [];
  for (let v = start; v <= max + 1e-12 * span; v += step) {
    ticks.push(Math.abs(v) < step * 1e-9 ? 0 : v);
  }
  return ticks;
}

export function tickLabel(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 0.01 && a < 10000) {
    return String(parseFloat(v.toPrecision(6)));
  }
  return v.toExponential(1);
}

export class Svg {
  private parts: string[] = [];

  constructor(title: string) {
    this.parts.push(
      `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" viewBox="0 0 ${WIDTH} ${HEIGHT}">`,
      `<rect width="${WIDTH}" height="${HEIGHT}" fill="#ffffff"/>`,
      `<title>${escapeText(title)}</title>`,
    );
  }

  rect(x: number, y: number, w: number, h: number, fill: string): void {
    this.parts.push(
      `<rect x="${fmt(x)}" y="${fmt(y)}" width="${fmt(w)}" height="${fmt(h)}" fill="${fill}"/>`,
    );
  }

  line(x1: number, y1: number, x2: number, y2: number, stroke: string, width = 1, dash = ""): void {
    const d = dash ? ` stroke-dasharray="${dash}"` : "";
    this.parts.push(
      `<line x1="${fmt(x1)}" y1="${fmt(y1)}" x2="${fmt(x2)}" y2="${fmt(y2)}" stroke="${stroke}" stroke-width="${width}"${d}/>`,
    );
  }

  polyline(points: Array<[number, number]>, stroke: string, width = 1.6, dash = ""): void {
    if (points.length < 2) return;
    const pts = points.map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(" ");
    const d = dash ? ` stroke-dasharray="${dash}"` : "";
    this.parts.push(
      `<polyline points="${pts}" fill="none" stroke="${stroke}" stroke-width="${width}"${d}/>`,
    );
  }

  circle(x: number, y: number, r: number, fill: string): void {
    this.parts.push(`<circle cx="${fmt(x)}" cy="${fmt(y)}" r="${r}" fill="${fill}"/>`);
  }

  text(x: number, y: number, content: string, opts: {
    size?: number; anchor?: string; fill?: string; rotate?: boolean;
  } = {}): void {
    const size = opts.size ?? 13;
    const anchor = opts.anchor ?? "start";
    const fill = opts.fill ?? "#222222";
    const transform = opts.rotate ? ` transform="rotate(-90 ${fmt(x)} ${fmt(y)})"` : "";
    this.parts.push(
      `<text x="${fmt(x)}" y="${fmt(y)}" font-family="Helvetica,Arial,sans-serif" font-size="${size}" text-anchor="${anchor}" fill="${fill}"${transform}>${escapeText(content)}</text>`,
    );
  }

  axes(xs: Scale, ys: Scale, xLabel: string, yLabel: string): void {
    const x0 = MARGIN.left;
    const x1 = WIDTH - MARGIN.right;
    const y0 = HEIGHT - MARGIN.bottom;
    const y1 = MARGIN.top;
    this.line(x0, y0, x1, y0, "#222222", 1.2);
    this.line(x0, y0, x0, y1, "#222222", 1.2);
    for (const t of niceTicks(xs.min, xs.max)) {
      const px = xs(t);
      this.line(px, y0, px, y0 + 5, "#222222", 1);
      this.text(px, y0 + 20, tickLabel(t), { anchor: "middle", size: 12 });
    }
    for (const t of niceTicks(ys.min, ys.max)) {
      const py = ys(t);
      this.line(x0 - 5, py, x0, py, "#222222", 1);
      this.text(x0 - 9, py + 4, tickLabel(t), { anchor: "end", size: 12 });
    }
    this.text((x0 + x1) / 2, HEIGHT - 16, xLabel, { anchor: "middle", size: 14 });
    this.text(20, (y0 + y1) / 2, yLabel, { anchor: "middle", size: 14, rotate: true });
  }

  render(): string {
    return this.parts.join("\n") + "\n</svg>\n";
  }
}

export function escapeText(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;");
}

export function plotArea() {
  return {
    x0: MARGIN.left,
    x1: WIDTH - MARGIN.right,
    y0: HEIGHT - MARGIN.bottom,
    y1: MARGIN.top,
  };
}
