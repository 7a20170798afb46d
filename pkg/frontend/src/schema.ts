/**
 * CSV schemas shared with the simulation CLI.
 *
 * The CLI writes two row shapes: time-series rows (one negativity sample per
 * recorded time per thermal occupation) and sweep rows (one peak-negativity
 * row per thermal occupation). Headers must match these schemas exactly;
 * any drift between the two components is reported as an error rather than
 * papered over.
 */

import { readFileSync } from "node:fs";
import Papa from "papaparse";
import { z } from "zod";

export const SERIES_HEADER = [
  "t_inv_gamma",
  "t_paper_units",
  "e_n",
  "n_th",
  "scheme",
  "regime",
] as const;

export const SWEEP_HEADER = [
  "n_th",
  "max_e_n",
  "argmax_t_or_tau",
  "scheme_or_config",
] as const;

/** Nonempty cell holding a finite decimal (the CLI prints %.15g). */
const numericCell = z
  .string()
  .min(1, "empty numeric cell")
  .transform(Number)
  .pipe(z.number().finite());

export const seriesRowSchema = z.object({
  t_inv_gamma: numericCell,
  t_paper_units: numericCell,
  e_n: numericCell,
  n_th: numericCell,
  scheme: z.enum(["sm", "bogoliubov"]),
  regime: z.enum(["intracavity", "badcavity"]),
});

export const sweepRowSchema = z.object({
  n_th: numericCell,
  max_e_n: numericCell,
  argmax_t_or_tau: numericCell,
  scheme_or_config: z.string().min(1),
});

export type SeriesRow = z.infer<typeof seriesRowSchema>;
export type SweepRow = z.infer<typeof sweepRowSchema>;

/** A CSV file that does not match the schema contract with the CLI. */
export class CsvSchemaError extends Error {}

/**
 * Read one CSV file, enforcing the exact header and per-row schema.
 *
 * The header must equal `header` including column order; extra, missing,
 * renamed, or reordered columns are all rejected with the file named in the
 * message. Returns at least one data row or throws.
 */
export function readCsv<T>(
  path: string,
  header: readonly string[],
  rowSchema: z.ZodType<T, z.ZodTypeDef, unknown>,
): T[] {
  const text = readFileSync(path, "utf8");
  const parsed = Papa.parse<Record<string, string>>(text, {
    header: true,
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    const e = parsed.errors[0];
    const where = e.row === undefined ? "" : ` (data row ${e.row + 1})`;
    throw new CsvSchemaError(`${path}: malformed CSV${where}: ${e.message}`);
  }
  const fields = parsed.meta.fields ?? [];
  if (fields.join(",") !== header.join(",")) {
    throw new CsvSchemaError(
      `${path}: header mismatch: expected "${header.join(",")}", ` +
        `got "${fields.join(",")}"`,
    );
  }
  const rows = parsed.data.map((raw, i) => {
    const result = rowSchema.safeParse(raw);
    if (!result.success) {
      const issue = result.error.issues[0];
      throw new CsvSchemaError(
        `${path}: data row ${i + 1}: column '${issue.path.join(".")}': ${issue.message}`,
      );
    }
    return result.data;
  });
  if (rows.length === 0) {
    throw new CsvSchemaError(`${path}: no data rows`);
  }
  return rows;
}
