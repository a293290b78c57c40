/**
 * Figure construction: sweep reports and traces into SVG via server-side
 * echarts. Rendering never reinterprets numbers -- each renderer returns
 * the exact table it plotted so the caller can emit it as a sidecar.
 */

import * as echarts from "echarts";

import { SchemaError, SweepReport, Trace } from "./schema";

export const KINDS = [
  "h-sweep",
  "alpha-sweep",
  "beta-sweep",
  "noise-mean",
  "noise-variance",
  "trajectory",
] as const;

export type Kind = (typeof KINDS)[number];

export interface Figure {
  svg: string;
  /** exact plotted rows, emitted verbatim as the figure's data sidecar */
  sidecar: unknown[];
}

const WIDTH = 860;
const HEIGHT = 540;

function renderOption(option: echarts.EChartsCoreOption): string {
  const chart = echarts.init(null, null, {
    renderer: "svg",
    ssr: true,
    width: WIDTH,
    height: HEIGHT,
  });
  chart.setOption({ animation: false, ...option });
  const svg = chart.renderToSVGString();
  chart.dispose();
  return svg;
}

const AXIS_LABEL: Record<string, string> = {
  "h-sweep": "horizon bound H (time units)",
  "alpha-sweep": "next-target weight alpha",
  "beta-sweep": "second-target weight beta",
  "noise-mean": "noise magnitude m",
  "noise-variance": "noise magnitude m",
};

const EXPECTED_AXIS: Record<string, string[]> = {
  "h-sweep": ["H"],
  "alpha-sweep": ["alpha"],
  "beta-sweep": ["beta"],
  "noise-mean": ["noise-m"],
  "noise-variance": ["noise-m"],
};

export function renderSweep(kind: Kind, report: SweepReport): Figure {
  const allowed = EXPECTED_AXIS[kind];
  if (!allowed.includes(report.axis)) {
    throw new SchemaError(
      `figure kind '${kind}' expects a report with axis ` +
      `${allowed.join("/")}, got '${report.axis}'`);
  }
  const pts = report.points;
  const series: echarts.SeriesOption[] = [];
  let yLabel: string;
  if (kind === "noise-variance") {
    yLabel = "cost variance";
    series.push({
      type: "line",
      name: "variance of J_T",
      symbol: "circle",
      symbolSize: 7,
      data: pts.map((p) => [p.value, p.variance]),
    });
  } else {
    yLabel = "mean cost J_T";
    if (kind === "noise-mean") {
      // variance band around the mean, straight from the report columns
      const lo = pts.map((p) => [p.value, p.mean - Math.sqrt(p.variance)]);
      const up = pts.map((p) => [p.value, p.mean + Math.sqrt(p.variance)]);
      series.push({
        type: "line", name: "band-low", data: lo, symbol: "none",
        lineStyle: { opacity: 0 }, stack: "band", silent: true,
      });
      series.push({
        type: "line", name: "band", symbol: "none",
        data: up.map((u, k) => [u[0], u[1] - lo[k][1]]),
        lineStyle: { opacity: 0 }, stack: "band",
        areaStyle: { opacity: 0.25 }, silent: true,
      });
    }
    series.push({
      type: "line",
      name: "mean J_T",
      symbol: "circle",
      symbolSize: 7,
      data: pts.map((p) => [p.value, p.mean]),
    });
    const nominal = pts.filter((p) => p.nominal);
    if (nominal.length > 0) {
      series.push({
        type: "scatter",
        name: "nominal weight",
        symbol: "diamond",
        symbolSize: 13,
        data: nominal.map((p) => [p.value, p.mean]),
      });
    }
  }
  const svg = renderOption({
    title: { text: `${kind} (${pts.length} grid points)` },
    legend: { top: 28 },
    xAxis: { type: "value", name: AXIS_LABEL[kind] },
    yAxis: { type: "value", name: yLabel },
    series,
  });
  return { svg, sidecar: pts };
}

export function renderTrajectory(trace: Trace): Figure {
  // breakpoints only: one datum per event row, no resampling
  const series: echarts.SeriesOption[] = trace.targetIds.map((id, k) => ({
    type: "line",
    name: `target ${id}`,
    symbol: "none",
    data: trace.rows.map((r) => [r.time, r.R[k]]),
  }));
  const svg = renderOption({
    title: { text: `uncertainty trajectories (${trace.rows.length} events)` },
    legend: { top: 28 },
    xAxis: { type: "value", name: "time" },
    yAxis: { type: "value", name: "uncertainty" },
    series,
  });
  const sidecar = trace.rows.map((r) => {
    const row: Record<string, number | string> = { time: r.time };
    trace.targetIds.forEach((id, k) => {
      row[`R_${id}`] = r.R[k];
    });
    return row;
  });
  return { svg, sidecar };
}
