/**
 * Parsers for the simulator's machine-readable outputs: sweep report JSON
 * and event-trace CSV. Parsing is strict -- a missing column or an empty
 * report is a SchemaError, not a silently empty figure.
 */

export class SchemaError extends Error {}

export interface SweepPoint {
  value: number;
  mean: number;
  variance: number;
  count: number;
  nominal?: boolean;
}

export interface SweepReport {
  axis: string;
  controller?: string;
  points: SweepPoint[];
  argmin?: { value: number; mean: number };
  ratio_default_to_best?: number;
}

function requireNumber(obj: Record<string, unknown>, key: string, where: string): number {
  const v = obj[key];
  if (typeof v !== "number" || !Number.isFinite(v)) {
    throw new SchemaError(`${where}: field '${key}' must be a finite number`);
  }
  return v;
}

export function parseSweepReport(text: string): SweepReport {
  let data: unknown;
  try {
    data = JSON.parse(text);
  } catch (err) {
    throw new SchemaError(`report is not valid JSON: ${err}`);
  }
  if (typeof data !== "object" || data === null) {
    throw new SchemaError("report must be a JSON object");
  }
  const obj = data as Record<string, unknown>;
  if (typeof obj.axis !== "string") {
    throw new SchemaError("report missing 'axis'");
  }
  if (!Array.isArray(obj.points)) {
    throw new SchemaError("report missing 'points' array");
  }
  if (obj.points.length === 0) {
    throw new SchemaError("report has no points");
  }
  const points: SweepPoint[] = obj.points.map((raw, idx) => {
    if (typeof raw !== "object" || raw === null) {
      throw new SchemaError(`points[${idx}] must be an object`);
    }
    const p = raw as Record<string, unknown>;
    const where = `points[${idx}]`;
    return {
      value: requireNumber(p, "value", where),
      mean: requireNumber(p, "mean", where),
      variance: requireNumber(p, "variance", where),
      count: requireNumber(p, "count", where),
      nominal: p.nominal === true,
    };
  });
  const report: SweepReport = { axis: obj.axis, points };
  if (typeof obj.controller === "string") report.controller = obj.controller;
  if (typeof obj.ratio_default_to_best === "number") {
    report.ratio_default_to_best = obj.ratio_default_to_best;
  }
  return report;
}

export interface TraceRow {
  time: number;
  kind: string;
  agent: string;
  target: string;
  R: number[];
}

export interface Trace {
  targetIds: string[];
  rows: TraceRow[];
}

export function parseTrace(text: string): Trace {
  const lines = text.split(/\r?\n/).filter((l) => l.length > 0);
  if (lines.length < 2) {
    throw new SchemaError("trace has no data rows");
  }
  const header = lines[0].split(",");
  const fixed = ["time", "kind", "agent", "target"];
  for (let k = 0; k < fixed.length; k++) {
    if (header[k] !== fixed[k]) {
      throw new SchemaError(`trace column ${k} must be '${fixed[k]}', got '${header[k] ?? ""}'`);
    }
  }
  const targetIds = header.slice(4).map((name, k) => {
    if (!name.startsWith("R_")) {
      throw new SchemaError(`trace column ${4 + k} must be an R_<id> column, got '${name}'`);
    }
    return name.slice(2);
  });
  if (targetIds.length === 0) {
    throw new SchemaError("trace has no uncertainty columns");
  }
  const rows: TraceRow[] = lines.slice(1).map((line, idx) => {
    const cols = line.split(",");
    if (cols.length !== header.length) {
      throw new SchemaError(`trace row ${idx + 1} has ${cols.length} columns, expected ${header.length}`);
    }
    const time = Number(cols[0]);
    if (!Number.isFinite(time)) {
      throw new SchemaError(`trace row ${idx + 1} has a bad timestamp '${cols[0]}'`);
    }
    const R = cols.slice(4).map((c, k) => {
      const v = Number(c);
      if (!Number.isFinite(v)) {
        throw new SchemaError(`trace row ${idx + 1} has a bad value in R_${targetIds[k]}`);
      }
      return v;
    });
    return { time, kind: cols[1], agent: cols[2], target: cols[3], R };
  });
  for (let k = 1; k < rows.length; k++) {
    if (rows[k].time < rows[k - 1].time) {
      throw new SchemaError(`trace rows out of time order at row ${k + 1}`);
    }
  }
  return { targetIds, rows };
}
