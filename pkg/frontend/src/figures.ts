/**
 * Figure registry: what each renderable figure reads and how it is drawn.
 *
 * One figure per CLI preset. Time-series figures plot one trace per thermal
 * occupation against time (or pulse duration) in units of 2π/(10³γ); sweep
 * figures plot peak negativity per trace against thermal occupation on a
 * log axis, solid vs dashed for the two compared configurations.
 */

import type { LineSeriesOption } from "echarts/charts";
import type {
  GridComponentOption,
  LegendComponentOption,
  TitleComponentOption,
} from "echarts/components";
import type { ComposeOption } from "echarts/core";

import {
  CsvSchemaError,
  readCsv,
  SERIES_HEADER,
  seriesRowSchema,
  SWEEP_HEADER,
  sweepRowSchema,
  type SeriesRow,
  type SweepRow,
} from "./schema.js";

export const PAPER_TIME_UNIT = "2π/(10³γ)";

export type ChartOption = ComposeOption<
  | LineSeriesOption
  | GridComponentOption
  | LegendComponentOption
  | TitleComponentOption
>;

export interface FigureDef {
  /** CSV file this figure expects inside the csv-dir. */
  csv: string;
  title: string;
  build: (csvPath: string) => ChartOption;
}

/** Rows grouped by a key column, in first-appearance order. */
function groupBy<R, K>(rows: R[], key: (row: R) => K): Map<K, R[]> {
  const groups = new Map<K, R[]>();
  for (const row of rows) {
    const k = key(row);
    const bucket = groups.get(k);
    if (bucket === undefined) {
      groups.set(k, [row]);
    } else {
      bucket.push(row);
    }
  }
  return groups;
}

function traceLabel(raw: string): string {
  if (raw === "sm") return "Sørensen–Mølmer scheme";
  if (raw === "bogoliubov") return "Bogoliubov-mode scheme";
  const coupling = /^(?:un)?equal_coupling_([^_]+)_([^_]+)$/.exec(raw);
  if (coupling !== null) {
    return `G₁ = ${coupling[1]}γ, G₂ = ${coupling[2]}γ`;
  }
  return raw;
}

const COMMON: ChartOption = {
  animation: false,
  backgroundColor: "#ffffff",
  textStyle: { fontFamily: "sans-serif" },
};

function seriesOption(
  rows: SeriesRow[],
  timeSymbol: string,
  title: string,
): ChartOption {
  const traces: LineSeriesOption[] = [];
  for (const [nTh, group] of groupBy(rows, (r) => r.n_th)) {
    traces.push({
      type: "line",
      name: `n_th = ${nTh}`,
      showSymbol: false,
      data: group.map((r) => [r.t_paper_units, r.e_n]),
    });
  }
  const tMax = Math.max(...rows.map((r) => r.t_paper_units));
  return {
    ...COMMON,
    title: { text: title, left: "center" },
    legend: { top: 28 },
    grid: { left: 64, right: 24, top: 64, bottom: 48 },
    xAxis: {
      type: "value",
      name: `${timeSymbol} (${PAPER_TIME_UNIT})`,
      nameLocation: "middle",
      nameGap: 28,
      min: 0,
      max: tMax,
    },
    yAxis: {
      type: "value",
      name: "E_N",
      nameLocation: "middle",
      nameGap: 40,
    },
    series: traces,
  };
}

function sweepOption(rows: SweepRow[], title: string): ChartOption {
  const traces: LineSeriesOption[] = [];
  for (const [label, group] of groupBy(rows, (r) => r.scheme_or_config)) {
    traces.push({
      type: "line",
      name: traceLabel(label),
      // solid vs dashed distinguishes the two compared configurations
      lineStyle: { type: traces.length === 0 ? "solid" : "dashed" },
      symbolSize: 5,
      data: group.map((r) => [r.n_th, r.max_e_n]),
    });
  }
  return {
    ...COMMON,
    title: { text: title, left: "center" },
    legend: { top: 28 },
    grid: { left: 64, right: 24, top: 64, bottom: 48 },
    xAxis: {
      type: "log",
      name: "n_th",
      nameLocation: "middle",
      nameGap: 28,
    },
    yAxis: {
      type: "value",
      name: "max E_N",
      nameLocation: "middle",
      nameGap: 40,
    },
    series: traces,
  };
}

function seriesFigure(name: string, timeSymbol: string, title: string): FigureDef {
  return {
    csv: `${name}.csv`,
    title,
    build: (csvPath) =>
      seriesOption(readCsv(csvPath, SERIES_HEADER, seriesRowSchema), timeSymbol, title),
  };
}

function sweepFigure(name: string, title: string): FigureDef {
  return {
    csv: `${name}.csv`,
    title,
    build: (csvPath) => {
      const rows = readCsv(csvPath, SWEEP_HEADER, sweepRowSchema);
      if (new Set(rows.map((r) => r.scheme_or_config)).size !== 2) {
        throw new CsvSchemaError(
          `${csvPath}: expected exactly two traces in scheme_or_config`,
        );
      }
      return sweepOption(rows, title);
    },
  };
}

export const FIGURES: Record<string, FigureDef> = {
  fig2a: seriesFigure(
    "fig2a",
    "t",
    "Intracavity entanglement vs time — pulsed detuned scheme",
  ),
  fig2b: seriesFigure(
    "fig2b",
    "t",
    "Intracavity entanglement vs time — resonant two-tone scheme",
  ),
  fig3: sweepFigure("fig3", "Peak intracavity entanglement vs thermal occupation"),
  fig4a: seriesFigure(
    "fig4a",
    "τ",
    "Output-mode entanglement vs pulse duration — adiabatic regime",
  ),
  fig4b: sweepFigure("fig4b", "Peak output-mode entanglement vs thermal occupation"),
};

export function knownFigures(): string[] {
  return Object.keys(FIGURES);
}
