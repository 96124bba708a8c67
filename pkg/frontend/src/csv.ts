// CSV ingestion for the three triterm artifact schemas.
// Headers must match the producer byte for byte; anything else is a
// schema violation and the figure is refused.

export const DIAGRAM_HEADER = [
  "B", "lambda", "regime",
  "Qdot1", "Qdot2", "Qdot3", "Wdot1", "Wdot2", "Wdot3",
  "first_law_residual", "Sdot_tot",
] as const;

export const OVERLAY_HEADER = ["B", "lambda_star", "lambda_ne"] as const;

export const CURVE_HEADER = [
  "swept_value",
  "Qdot1", "Qdot2", "Qdot3", "Wdot1", "Wdot2", "Wdot3",
  "eta", "eta_refrigeration", "eta_pumping", "eta_engine",
  "eta_absorption_pump",
  "Y_output", "regime", "in_regime",
  "first_law_residual", "Sdot_tot",
] as const;

export class SchemaError extends Error {}

export interface DiagramRow {
  B: number;
  lambda: number;
  regime: string;
  Qdot: [number, number, number];
  Wdot: [number, number, number];
}

export interface OverlayRow {
  B: number;
  lambdaStar: number | null;
  lambdaNe: number | null;
}

export interface CurveRow {
  swept: number;
  Qdot: [number, number, number];
  Wdot: [number, number, number];
  eta: number | null;
  etaRefrigeration: number | null;
  etaPumping: number | null;
  etaEngine: number | null;
  etaAbsorptionPump: number | null;
  yOutput: number | null;
  regime: string;
  inRegime: boolean;
}

export interface Table<R> {
  config: Map<string, string>;
  rows: R[];
}

function splitContent(text: string, expected: readonly string[], label: string) {
  const lines = text.split(/\r?\n/).filter((l) => l.length > 0);
  const config = new Map<string, string>();
  let start = 0;
  const first = lines[0];
  if (first !== undefined && first.startsWith("# config:")) {
    for (const item of first.slice("# config:".length).trim().split(/\s+/)) {
      const eq = item.indexOf("=");
      if (eq > 0) config.set(item.slice(0, eq), item.slice(eq + 1));
    }
    start = 1;
  }
  const header = lines[start];
  if (header !== expected.join(",")) {
    throw new SchemaError(
      `${label}: header mismatch\n  expected: ${expected.join(",")}\n  got:      ${header ?? "<empty file>"}`,
    );
  }
  return { config, body: lines.slice(start + 1) };
}

function num(cell: string | undefined, label: string, line: number): number {
  if (cell === undefined || cell === "") {
    throw new SchemaError(`${label}: missing numeric value on data line ${line}`);
  }
  const v = Number(cell);
  if (Number.isNaN(v) && cell !== "nan") {
    throw new SchemaError(`${label}: bad number ${JSON.stringify(cell)} on data line ${line}`);
  }
  return v;
}

function numOrNull(cell: string | undefined): number | null {
  if (cell === undefined || cell === "") return null;
  return Number(cell);
}

function cells(line: string, want: number, label: string, n: number): string[] {
  const parts = line.split(",");
  if (parts.length !== want) {
    throw new SchemaError(
      `${label}: expected ${want} columns, got ${parts.length} on data line ${n}`,
    );
  }
  return parts;
}

export function parseDiagram(text: string): Table<DiagramRow> {
  const { config, body } = splitContent(text, DIAGRAM_HEADER, "diagram");
  const rows = body.map((line, i) => {
    const c = cells(line, DIAGRAM_HEADER.length, "diagram", i + 1);
    return {
      B: num(c[0], "diagram", i + 1),
      lambda: num(c[1], "diagram", i + 1),
      regime: c[2] ?? "",
      Qdot: [3, 4, 5].map((k) => num(c[k], "diagram", i + 1)) as [number, number, number],
      Wdot: [6, 7, 8].map((k) => num(c[k], "diagram", i + 1)) as [number, number, number],
    };
  });
  return { config, rows };
}

export function parseOverlay(text: string): Table<OverlayRow> {
  const { config, body } = splitContent(text, OVERLAY_HEADER, "overlay");
  const rows = body.map((line, i) => {
    const c = cells(line, OVERLAY_HEADER.length, "overlay", i + 1);
    return {
      B: num(c[0], "overlay", i + 1),
      lambdaStar: numOrNull(c[1]),
      lambdaNe: numOrNull(c[2]),
    };
  });
  return { config, rows };
}

export function parseCurve(text: string): Table<CurveRow> {
  const { config, body } = splitContent(text, CURVE_HEADER, "curve");
  const rows = body.map((line, i) => {
    const c = cells(line, CURVE_HEADER.length, "curve", i + 1);
    return {
      swept: num(c[0], "curve", i + 1),
      Qdot: [1, 2, 3].map((k) => num(c[k], "curve", i + 1)) as [number, number, number],
      Wdot: [4, 5, 6].map((k) => num(c[k], "curve", i + 1)) as [number, number, number],
      eta: numOrNull(c[7]),
      etaRefrigeration: numOrNull(c[8]),
      etaPumping: numOrNull(c[9]),
      etaEngine: numOrNull(c[10]),
      etaAbsorptionPump: numOrNull(c[11]),
      yOutput: numOrNull(c[12]),
      regime: c[13] ?? "",
      inRegime: c[14] === "1",
    };
  });
  return { config, rows };
}

export function captionFromConfig(config: Map<string, string>): string {
  const keys = [
    "B1", "B2", "T1", "T2", "T3",
    "gamma1", "gamma2", "gamma3",
    "lambda1", "lambda2", "lambda3",
  ];
  const parts: string[] = [];
  for (const k of keys) {
    const v = config.get(k);
    if (v !== undefined) parts.push(`${k}=${v}`);
  }
  return parts.join("  ");
}
