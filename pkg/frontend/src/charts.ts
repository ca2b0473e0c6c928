/** Static chart rendering for emitted benchmark files: scenario
 * boxplots (boxplot.json) and augmentation sweep curves (sweep.json).
 * Parsers validate shape and throw ChartParseError with a message fit
 * for the banner; renderers are pure string builders. */

import { escapeHtml, fmt } from "./html.js";

export class ChartParseError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "ChartParseError";
  }
}

export interface BoxRow {
  model_name: string;
  mean_rmse: number;
  median_rmse: number;
  external: boolean;
  q1?: number;
  q3?: number;
  whisker_low?: number;
  whisker_high?: number;
  outliers?: number[];
}

export interface BoxplotSummary {
  target: string;
  scenario: string;
  models: BoxRow[];
}

export interface SweepCurve {
  policy: string;
  counts: number[];
  means: number[];
  argminCount: number;
}

export interface SweepSummary {
  target: string;
  failedCounts: number[];
  curves: SweepCurve[];
}

function asNumber(v: unknown, what: string): number {
  if (typeof v !== "number" || !Number.isFinite(v)) {
    throw new ChartParseError(`${what} must be a finite number`);
  }
  return v;
}

function asObject(v: unknown, what: string): Record<string, unknown> {
  if (typeof v !== "object" || v === null || Array.isArray(v)) {
    throw new ChartParseError(`${what} must be an object`);
  }
  return v as Record<string, unknown>;
}

function parseJson(text: string, what: string): unknown {
  try {
    return JSON.parse(text);
  } catch (err) {
    throw new ChartParseError(
      `${what} is not valid JSON: ${(err as Error).message}`,
    );
  }
}

export function parseBoxplot(text: string): BoxplotSummary {
  const root = asObject(parseJson(text, "boxplot file"), "boxplot file");
  const models = root.models;
  if (!Array.isArray(models) || models.length === 0) {
    throw new ChartParseError("boxplot file has no models array");
  }
  const rows: BoxRow[] = models.map((raw, i) => {
    const m = asObject(raw, `models[${i}]`);
    const external = m.external === true;
    const row: BoxRow = {
      model_name: String(m.model_name ?? `model ${i}`),
      mean_rmse: asNumber(m.mean_rmse, `models[${i}].mean_rmse`),
      median_rmse: asNumber(m.median_rmse, `models[${i}].median_rmse`),
      external,
    };
    if (!external) {
      row.q1 = asNumber(m.q1, `models[${i}].q1`);
      row.q3 = asNumber(m.q3, `models[${i}].q3`);
      row.whisker_low = asNumber(m.whisker_low, `models[${i}].whisker_low`);
      row.whisker_high = asNumber(m.whisker_high, `models[${i}].whisker_high`);
      row.outliers = Array.isArray(m.outliers)
        ? m.outliers.map((o, j) => asNumber(o, `models[${i}].outliers[${j}]`))
        : [];
    }
    return row;
  });
  return {
    target: String(root.target ?? ""),
    scenario: String(root.scenario ?? ""),
    models: rows,
  };
}

export function parseSweep(text: string): SweepSummary {
  const root = asObject(parseJson(text, "sweep file"), "sweep file");
  const policies = asObject(root.policies ?? {}, "sweep policies");
  const names = Object.keys(policies);
  if (names.length === 0) {
    throw new ChartParseError("sweep file has no policies");
  }
  const curves: SweepCurve[] = names.sort().map((name) => {
    const pol = asObject(policies[name], `policy ${name}`);
    const byCount = asObject(pol.by_count, `policy ${name} by_count`);
    const counts = Object.keys(byCount)
      .map((c) => {
        const n = Number(c);
        if (!Number.isFinite(n)) {
          throw new ChartParseError(`policy ${name} has count ${c}`);
        }
        return n;
      })
      .sort((a, b) => a - b);
    if (counts.length === 0) {
      throw new ChartParseError(`policy ${name} has no counts`);
    }
    const means = counts.map((c) =>
      asNumber(
        asObject(byCount[String(c)], `policy ${name} count ${c}`).mean_rmse,
        `policy ${name} count ${c} mean_rmse`,
      ),
    );
    return {
      policy: name,
      counts,
      means,
      argminCount: asNumber(pol.argmin_count, `policy ${name} argmin_count`),
    };
  });
  const failed = Array.isArray(root.failed_counts)
    ? root.failed_counts.map((c, i) => asNumber(c, `failed_counts[${i}]`))
    : [];
  return {
    target: String(root.target ?? ""),
    failedCounts: failed,
    curves,
  };
}

function scale(
  v: number,
  lo: number,
  hi: number,
  outLo: number,
  outHi: number,
): number {
  if (hi === lo) return (outLo + outHi) / 2;
  return outLo + ((v - lo) / (hi - lo)) * (outHi - outLo);
}

const PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b"];

export function renderBoxplot(
  summary: BoxplotSummary,
  width = 560,
  height = 300,
): string {
  const m = { left: 52, right: 10, top: 24, bottom: 54 };
  const all: number[] = [];
  for (const row of summary.models) {
    all.push(row.mean_rmse, row.median_rmse);
    if (!row.external) {
      all.push(row.whisker_low!, row.whisker_high!, ...(row.outliers ?? []));
    }
  }
  const yLo = Math.min(...all);
  const yHi = Math.max(...all);
  const y = (v: number) => scale(v, yLo, yHi, height - m.bottom, m.top);
  const slot = (width - m.left - m.right) / summary.models.length;
  const boxW = Math.min(40, slot * 0.5);

  const parts: string[] = [];
  summary.models.forEach((row, i) => {
    const cx = m.left + slot * (i + 0.5);
    const label =
      `<text x="${cx.toFixed(1)}" y="${height - m.bottom + 16}" text-anchor="middle" font-size="10" transform="rotate(20 ${cx.toFixed(1)} ${height - m.bottom + 16})">` +
      `${escapeHtml(row.model_name)}</text>`;
    if (row.external) {
      // published number without a distribution: diamond at the mean
      parts.push(
        `<g class="external-marker" data-model="${escapeHtml(row.model_name)}">`,
        `<rect x="${(cx - 5).toFixed(1)}" y="${(y(row.mean_rmse) - 5).toFixed(1)}" width="10" height="10" fill="#7f7f7f" transform="rotate(45 ${cx.toFixed(1)} ${y(row.mean_rmse).toFixed(1)})"/>`,
        label,
        `</g>`,
      );
      return;
    }
    const q1 = y(row.q1!);
    const q3 = y(row.q3!);
    const med = y(row.median_rmse);
    const wl = y(row.whisker_low!);
    const wh = y(row.whisker_high!);
    const outliers = (row.outliers ?? [])
      .map(
        (o) =>
          `<circle cx="${cx.toFixed(1)}" cy="${y(o).toFixed(1)}" r="2.5" fill="none" stroke="#555"/>`,
      )
      .join("");
    parts.push(
      `<g class="box" data-model="${escapeHtml(row.model_name)}">`,
      `<line x1="${cx.toFixed(1)}" y1="${wl.toFixed(1)}" x2="${cx.toFixed(1)}" y2="${q1.toFixed(1)}" stroke="#333"/>`,
      `<line x1="${cx.toFixed(1)}" y1="${wh.toFixed(1)}" x2="${cx.toFixed(1)}" y2="${q3.toFixed(1)}" stroke="#333"/>`,
      `<rect x="${(cx - boxW / 2).toFixed(1)}" y="${q3.toFixed(1)}" width="${boxW.toFixed(1)}" height="${Math.abs(q1 - q3).toFixed(1)}" fill="#c6dbef" stroke="#333"/>`,
      `<line x1="${(cx - boxW / 2).toFixed(1)}" y1="${med.toFixed(1)}" x2="${(cx + boxW / 2).toFixed(1)}" y2="${med.toFixed(1)}" stroke="#d62728" stroke-width="1.5"/>`,
      outliers,
      label,
      `</g>`,
    );
  });

  const yTicks = [yLo, (yLo + yHi) / 2, yHi]
    .map(
      (t) =>
        `<text x="${m.left - 6}" y="${(y(t) + 3).toFixed(1)}" text-anchor="end" font-size="10">${fmt(t)}</text>`,
    )
    .join("");
  const title = `${summary.target} scenario ${summary.scenario}`;
  return [
    `<svg class="boxplot" viewBox="0 0 ${width} ${height}" width="${width}" height="${height}" role="img">`,
    `<text x="${width / 2}" y="14" text-anchor="middle" font-size="12">${escapeHtml(title)}</text>`,
    yTicks,
    ...parts,
    `</svg>`,
  ].join("");
}

export function renderSweep(
  summary: SweepSummary,
  width = 560,
  height = 300,
): string {
  const m = { left: 52, right: 14, top: 24, bottom: 40 };
  const allCounts = summary.curves.flatMap((c) => c.counts);
  const allMeans = summary.curves.flatMap((c) => c.means);
  const xLo = Math.min(...allCounts);
  const xHi = Math.max(...allCounts);
  const yLo = Math.min(...allMeans);
  const yHi = Math.max(...allMeans);
  const sx = (v: number) => scale(v, xLo, xHi, m.left, width - m.right);
  const sy = (v: number) => scale(v, yLo, yHi, height - m.bottom, m.top);

  const parts: string[] = [];
  for (const c of summary.failedCounts) {
    parts.push(
      `<line class="failed-count" x1="${sx(c).toFixed(1)}" y1="${m.top}" x2="${sx(c).toFixed(1)}" y2="${height - m.bottom}" stroke="#d62728" stroke-dasharray="3,3" opacity="0.6"/>`,
    );
  }
  summary.curves.forEach((curve, k) => {
    const color = PALETTE[k % PALETTE.length]!;
    const d = curve.counts
      .map(
        (c, i) =>
          `${i === 0 ? "M" : "L"}${sx(c).toFixed(1)},${sy(curve.means[i]!).toFixed(1)}`,
      )
      .join(" ");
    const dots = curve.counts
      .map(
        (c, i) =>
          `<circle cx="${sx(c).toFixed(1)}" cy="${sy(curve.means[i]!).toFixed(1)}" r="3" fill="${color}"/>`,
      )
      .join("");
    const j = curve.counts.indexOf(curve.argminCount);
    const marker =
      j >= 0
        ? `<circle class="argmin-marker" data-policy="${escapeHtml(curve.policy)}" data-count="${curve.argminCount}" cx="${sx(curve.argminCount).toFixed(1)}" cy="${sy(curve.means[j]!).toFixed(1)}" r="7" fill="none" stroke="${color}" stroke-width="2"/>`
        : "";
    parts.push(
      `<g class="curve" data-policy="${escapeHtml(curve.policy)}">`,
      `<path d="${d}" fill="none" stroke="${color}" stroke-width="1.5"/>`,
      dots,
      marker,
      `<text x="${width - m.right - 4}" y="${(m.top + 12 * (k + 1)).toFixed(1)}" text-anchor="end" font-size="10" fill="${color}">${escapeHtml(curve.policy)}</text>`,
      `</g>`,
    );
  });

  const xTicks = [...new Set(allCounts)]
    .sort((a, b) => a - b)
    .map(
      (c) =>
        `<text x="${sx(c).toFixed(1)}" y="${height - m.bottom + 14}" text-anchor="middle" font-size="9">${c}</text>`,
    )
    .join("");
  const yTicks = [yLo, (yLo + yHi) / 2, yHi]
    .map(
      (t) =>
        `<text x="${m.left - 6}" y="${(sy(t) + 3).toFixed(1)}" text-anchor="end" font-size="10">${fmt(t)}</text>`,
    )
    .join("");
  return [
    `<svg class="sweep-plot" viewBox="0 0 ${width} ${height}" width="${width}" height="${height}" role="img">`,
    `<text x="${width / 2}" y="14" text-anchor="middle" font-size="12">${escapeHtml(summary.target)} augmentation sweep</text>`,
    xTicks,
    yTicks,
    `<text x="${width / 2}" y="${height - 6}" text-anchor="middle" font-size="11">synthetic warm-up rows</text>`,
    ...parts,
    `</svg>`,
  ].join("");
}
