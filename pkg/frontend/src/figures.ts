// Figure recipes: which CSV artifacts feed each figure and how the axes
// read them.  Rendering is presentation only; every number comes from the
// CSV files produced by the simulator CLI.

import * as fs from "fs";
import * as path from "path";
import {
  CurveRow,
  captionFromConfig,
  parseCurve,
  parseDiagram,
  parseOverlay,
} from "./csv";
import { MARGIN, Svg, WIDTH, linearScale, plotArea } from "./svg";

export const REGIME_COLORS: Record<string, string> = {
  I: "#4daf4a",
  II: "#377eb8",
  III: "#ffd92f",
  IV: "#ff7f00",
  V: "#e78ac3",
  VI: "#a65628",
  VII: "#999999",
  VIII: "#66c2a5",
  EQUILIBRIUM: "#ffffff",
  UNCLASSIFIED: "#dddddd",
};

// color cycle keyed to the coherence amplitude, identical across figures
export const LAMBDA_COLORS: Record<string, string> = {
  "0": "#377eb8",
  "0.3": "#4daf4a",
  "0.6": "#ff7f00",
  "0.9": "#e41a1c",
};

const POWER_UNIT = "T1*gamma1/2";

type CurveSelector = (r: CurveRow) => number | null;

const SELECTORS: Record<string, { get: CurveSelector; label: string }> = {
  Q1: { get: (r) => r.Qdot[0], label: `cooling power Q1 [${POWER_UNIT}]` },
  absQ3: { get: (r) => Math.abs(r.Qdot[2]), label: `heating power |Q3| [${POWER_UNIT}]` },
  absW3: { get: (r) => Math.abs(r.Wdot[2]), label: `extracted power |W3| [${POWER_UNIT}]` },
  Y: { get: (r) => r.yOutput, label: `hybrid output power [${POWER_UNIT}]` },
  eta: { get: (r) => r.eta, label: "efficiency" },
  etaR: { get: (r) => r.etaRefrigeration, label: "refrigeration efficiency" },
  etaP: { get: (r) => r.etaPumping, label: "pumping efficiency" },
  etaE: { get: (r) => r.etaEngine, label: "engine efficiency" },
  etaAP: { get: (r) => r.etaAbsorptionPump, label: "absorption-pump efficiency" },
};

export interface MapRecipe {
  id: string;
  kind: "map";
  title: string;
  grid: string;
  overlay: string;
  gapLabel: string;
}

export interface CurveRecipe {
  id: string;
  kind: "curves";
  title: string;
  inputs: Array<{ lambda: string; file: string }>;
  x: keyof typeof SELECTORS;
  y: keyof typeof SELECTORS;
  annotate: "x" | "y" | null;
}

export type Recipe = MapRecipe | CurveRecipe;

function family(prefix: string, lambdas: string[]) {
  return lambdas.map((lambda) => ({ lambda, file: `${prefix}_lam${lambda}.csv` }));
}

export const RECIPES: Record<string, Recipe> = {
  "2a": {
    id: "2a", kind: "map", grid: "map_cold.csv", overlay: "map_cold_overlay.csv",
    title: "Operating regimes, coherence in the cold stream", gapLabel: "B1",
  },
  "2b": {
    id: "2b", kind: "map", grid: "map_mid.csv", overlay: "map_mid_overlay.csv",
    title: "Operating regimes, coherence in the intermediate stream", gapLabel: "B2",
  },
  "2c": {
    id: "2c", kind: "map", grid: "map_hot.csv", overlay: "map_hot_overlay.csv",
    title: "Operating regimes, coherence in the hot stream", gapLabel: "B3",
  },
  "3a": {
    id: "3a", kind: "curves", title: "Combined refrigerator, coherent cold stream",
    inputs: family("fridge_cold", ["0", "0.3", "0.6", "0.9"]),
    x: "Q1", y: "eta", annotate: "x",
  },
  "3b": {
    id: "3b", kind: "curves", title: "Combined refrigerator, coherent intermediate stream",
    inputs: family("fridge_mid", ["0", "0.3", "0.6", "0.9"]),
    x: "Q1", y: "eta", annotate: "x",
  },
  "3c": {
    id: "3c", kind: "curves", title: "Combined refrigerator, coherent hot stream",
    inputs: family("fridge_hot", ["0", "0.3", "0.6", "0.9"]),
    x: "Q1", y: "eta", annotate: "x",
  },
  "4a": {
    id: "4a", kind: "curves", title: "Combined pump, coherent cold stream",
    inputs: family("pump_cold", ["0", "0.3", "0.6", "0.9"]),
    x: "absQ3", y: "eta", annotate: "x",
  },
  "4b": {
    id: "4b", kind: "curves", title: "Combined pump, coherent intermediate stream",
    inputs: family("pump_mid", ["0", "0.3", "0.6", "0.9"]),
    x: "absQ3", y: "eta", annotate: "x",
  },
  "4c": {
    id: "4c", kind: "curves", title: "Combined pump, coherent hot stream",
    inputs: family("pump_hot", ["0", "0.3", "0.6", "0.9"]),
    x: "absQ3", y: "eta", annotate: "x",
  },
  "5a": {
    id: "5a", kind: "curves", title: "Hybrid refrigerator-and-pump: cooling branch",
    inputs: family("hybridV", ["0.3", "0.6", "0.9"]),
    x: "etaR", y: "Q1", annotate: "y",
  },
  "5b": {
    id: "5b", kind: "curves", title: "Hybrid refrigerator-and-pump: pumping branch",
    inputs: family("hybridV", ["0.3", "0.6", "0.9"]),
    x: "etaP", y: "absQ3", annotate: "y",
  },
  "5c": {
    id: "5c", kind: "curves", title: "Hybrid refrigerator-and-pump: total output",
    inputs: family("hybridV", ["0.3", "0.6", "0.9"]),
    x: "eta", y: "Y", annotate: "y",
  },
  "6a": {
    id: "6a", kind: "curves", title: "Hybrid engine-and-pump: engine branch",
    inputs: family("hybridVI", ["0.3", "0.6", "0.9"]),
    x: "etaE", y: "absW3", annotate: "y",
  },
  "6b": {
    id: "6b", kind: "curves", title: "Hybrid engine-and-pump: pumping branch",
    inputs: family("hybridVI", ["0.3", "0.6", "0.9"]),
    x: "etaAP", y: "absQ3", annotate: "y",
  },
  "6c": {
    id: "6c", kind: "curves", title: "Hybrid engine-and-pump: total output",
    inputs: family("hybridVI", ["0.3", "0.6", "0.9"]),
    x: "eta", y: "Y", annotate: "y",
  },
};

function uniqueSorted(values: number[]): number[] {
  return [...new Set(values)].sort((a, b) => a - b);
}

export function renderMap(recipe: MapRecipe, fixturesDir: string): string {
  const grid = parseDiagram(fs.readFileSync(path.join(fixturesDir, recipe.grid), "utf8"));
  const overlay = parseOverlay(
    fs.readFileSync(path.join(fixturesDir, recipe.overlay), "utf8"),
  );
  const area = plotArea();
  const bs = uniqueSorted(grid.rows.map((r) => r.B));
  const ls = uniqueSorted(grid.rows.map((r) => r.lambda));
  const bStep = bs.length > 1 ? bs[1]! - bs[0]! : 1;
  const lStep = ls.length > 1 ? ls[1]! - ls[0]! : 1;
  const xs = linearScale(bs[0]! - bStep / 2, bs[bs.length - 1]! + bStep / 2, area.x0, area.x1);
  const ys = linearScale(ls[0]! - lStep / 2, ls[ls.length - 1]! + lStep / 2, area.y0, area.y1);

  const svg = new Svg(recipe.title);
  const present = new Set<string>();
  for (const row of grid.rows) {
    present.add(row.regime);
    const color = REGIME_COLORS[row.regime] ?? "#dddddd";
    const x = xs(row.B - bStep / 2);
    const y = ys(row.lambda + lStep / 2);
    svg.rect(x, y, xs(row.B + bStep / 2) - x, ys(row.lambda - lStep / 2) - y, color);
  }

  const star: Array<[number, number]> = [];
  const ne: Array<[number, number]> = [];
  const lamMax = ls[ls.length - 1]! + lStep / 2;
  for (const row of overlay.rows) {
    if (row.lambdaStar !== null && row.lambdaStar <= lamMax) {
      star.push([xs(row.B), ys(row.lambdaStar)]);
    }
    if (row.lambdaNe !== null && row.lambdaNe <= lamMax) {
      ne.push([xs(row.B), ys(row.lambdaNe)]);
    }
  }
  svg.polyline(star, "#d40000", 2.0);
  svg.polyline(ne, "#d40000", 2.0, "6,4");

  const bTransition = grid.config.get("b_transition");
  if (bTransition !== undefined && bTransition !== "") {
    const bt = Number(bTransition);
    if (bt >= xs.min && bt <= xs.max) {
      svg.line(xs(bt), area.y0, xs(bt), area.y1, "#222222", 1.2, "2,3");
    }
  }

  svg.axes(xs, ys, recipe.gapLabel, "coherence amplitude");
  svg.text(MARGIN.left, 20, recipe.title, { size: 16 });
  svg.text(MARGIN.left, 36, captionFromConfig(grid.config), { size: 10, fill: "#555555" });

  // legend for the regimes actually present
  const order = ["I", "II", "III", "IV", "V", "VI", "VII", "VIII"];
  let lx = WIDTH - MARGIN.right - 62;
  let ly = MARGIN.top + 8;
  for (const name of order) {
    if (!present.has(name)) continue;
    svg.rect(lx, ly - 9, 12, 12, REGIME_COLORS[name]!);
    svg.text(lx + 17, ly + 1, name, { size: 12 });
    ly += 17;
  }
  return svg.render();
}

interface Series {
  lambda: string;
  segments: Array<Array<[number, number]>>;
  peak: [number, number] | null;
  caption: string;
}

export function renderCurves(recipe: CurveRecipe, fixturesDir: string): string {
  const xSel = SELECTORS[recipe.x]!;
  const ySel = SELECTORS[recipe.y]!;
  const series: Series[] = [];
  let allX: number[] = [];
  let allY: number[] = [];

  for (const input of recipe.inputs) {
    const table = parseCurve(
      fs.readFileSync(path.join(fixturesDir, input.file), "utf8"),
    );
    const segments: Array<Array<[number, number]>> = [];
    let current: Array<[number, number]> = [];
    let peak: [number, number] | null = null;
    for (const row of table.rows) {
      const x = row.inRegime ? xSel.get(row) : null;
      const y = row.inRegime ? ySel.get(row) : null;
      if (x === null || y === null) {
        if (current.length > 0) segments.push(current);
        current = [];
        continue;
      }
      current.push([x, y]);
      allX.push(x);
      allY.push(y);
      const gauge = recipe.annotate === "x" ? x : y;
      if (peak === null || gauge > (recipe.annotate === "x" ? peak[0] : peak[1])) {
        peak = [x, y];
      }
    }
    if (current.length > 0) segments.push(current);
    series.push({
      lambda: input.lambda,
      segments,
      peak,
      caption: captionFromConfig(table.config),
    });
  }

  const area = plotArea();
  const svg = new Svg(recipe.title);
  const empty = allX.length === 0;
  const pad = (lo: number, hi: number): [number, number] => {
    const span = hi - lo || Math.abs(hi) || 1;
    return [lo - 0.05 * span, hi + 0.05 * span];
  };
  const [xLo, xHi] = empty ? [0, 1] : pad(Math.min(...allX), Math.max(...allX));
  const [yLo, yHi] = empty ? [0, 1] : pad(Math.min(...allY), Math.max(...allY));
  const xs = linearScale(xLo, xHi, area.x0, area.x1);
  const ys = linearScale(yLo, yHi, area.y0, area.y1);

  if (empty) {
    svg.text((area.x0 + area.x1) / 2, (area.y0 + area.y1) / 2,
      "no in-regime points in the supplied data", {
        anchor: "middle", size: 15, fill: "#aa3333",
      });
  }

  for (const s of series) {
    const color = LAMBDA_COLORS[s.lambda] ?? "#000000";
    for (const segment of s.segments) {
      svg.polyline(segment.map(([x, y]) => [xs(x), ys(y)]), color);
    }
    if (s.peak !== null && recipe.annotate !== null) {
      const [px, py] = s.peak;
      svg.circle(xs(px), ys(py), 3, color);
      const value = recipe.annotate === "x" ? px : py;
      svg.text(xs(px) + 6, ys(py) - 6, value.toPrecision(4), { size: 11, fill: color });
    }
  }

  svg.axes(xs, ys, xSel.label, ySel.label);
  svg.text(MARGIN.left, 20, recipe.title, { size: 16 });
  const caption = series.length > 0 ? series[0]!.caption : "";
  svg.text(MARGIN.left, 36, caption, { size: 10, fill: "#555555" });

  let lx = WIDTH - MARGIN.right - 120;
  let ly = MARGIN.top + 8;
  for (const s of series) {
    const color = LAMBDA_COLORS[s.lambda] ?? "#000000";
    svg.line(lx, ly - 4, lx + 22, ly - 4, color, 2);
    svg.text(lx + 28, ly, `lambda = ${s.lambda}`, { size: 12 });
    ly += 17;
  }
  return svg.render();
}

export function renderRecipe(id: string, fixturesDir: string): string {
  const recipe = RECIPES[id];
  if (recipe === undefined) {
    throw new Error(`unknown figure id ${JSON.stringify(id)}; known: ${Object.keys(RECIPES).join(", ")}`);
  }
  return recipe.kind === "map"
    ? renderMap(recipe, fixturesDir)
    : renderCurves(recipe, fixturesDir);
}
