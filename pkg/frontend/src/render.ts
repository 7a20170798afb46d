/**
 * Headless rendering: CSV directory in, PNG file out.
 *
 * Charts are laid out by echarts in SVG server-side mode and rasterized with
 * sharp. Rendering is deterministic: the same CSVs produce byte-identical
 * PNG output.
 */

import { existsSync, readdirSync, statSync, writeFileSync } from "node:fs";
import { join } from "node:path";

import { LineChart } from "echarts/charts";
import {
  GridComponent,
  LegendComponent,
  TitleComponent,
} from "echarts/components";
import { init, use } from "echarts/core";
import { SVGRenderer } from "echarts/renderers";
import sharp from "sharp";

import { FIGURES, knownFigures, type ChartOption } from "./figures.js";

use([LineChart, GridComponent, LegendComponent, TitleComponent, SVGRenderer]);

export const WIDTH = 840;
export const HEIGHT = 525;

/** Bad invocation: unknown figure, missing directory, missing CSV. */
export class FigureInputError extends Error {}

/** Locate and validate the figure's CSV, returning the chart description. */
export function buildFigure(name: string, csvDir: string): ChartOption {
  const def = FIGURES[name];
  if (def === undefined) {
    throw new FigureInputError(
      `unknown figure '${name}'; known figures: ${knownFigures().join(", ")}`,
    );
  }
  if (!existsSync(csvDir) || !statSync(csvDir).isDirectory()) {
    throw new FigureInputError(`csv-dir not found: ${csvDir}`);
  }
  const csvPath = join(csvDir, def.csv);
  if (!existsSync(csvPath)) {
    const present = readdirSync(csvDir).filter((f) => f.endsWith(".csv"));
    const inputs = knownFigures().map((n) => FIGURES[n].csv);
    if (present.length === 0) {
      throw new FigureInputError(
        `no CSV files in ${csvDir}; figure '${name}' expects ${def.csv} ` +
          `(expected files, by figure: ${inputs.join(", ")})`,
      );
    }
    throw new FigureInputError(
      `missing CSV file: ${csvPath} (figure '${name}' expects ${def.csv}; ` +
        `directory has: ${present.join(", ")})`,
    );
  }
  return def.build(csvPath);
}

export function renderSvg(option: ChartOption): string {
  const chart = init(null, null, {
    renderer: "svg",
    ssr: true,
    width: WIDTH,
    height: HEIGHT,
  });
  try {
    chart.setOption(option);
    return chart.renderToSVGString();
  } finally {
    chart.dispose();
  }
}

/** Render one figure from `csvDir` and write a PNG to `outPath`. */
export async function renderFigure(
  name: string,
  csvDir: string,
  outPath: string,
): Promise<void> {
  const svg = renderSvg(buildFigure(name, csvDir));
  const png = await sharp(Buffer.from(svg)).png().toBuffer();
  writeFileSync(outPath, png);
}
