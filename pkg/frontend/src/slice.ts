/** Posterior slice helpers: build the 1-D evaluation grid that rides
 * along an observation POST, and turn the returned mean/sigma block
 * into an SVG band plot. The service does all the math; this file only
 * chooses where to ask and how to draw the answer. */

import { escapeHtml } from "./html.js";
import type { CampaignView, PosteriorBlock } from "./types.js";

export const SLICE_POINTS = 33;

/** Range of one feature over everything the client has legitimately
 * seen: logged observation points plus the pending suggestion. */
export function axisRange(
  view: CampaignView,
  axis: number,
): [number, number] {
  const seen: number[] = view.log.map((rec) => rec.point[axis] ?? 0);
  if (view.pending) seen.push(view.pending.point[axis] ?? 0);
  if (seen.length === 0) return [-1, 1];
  let lo = Math.min(...seen);
  let hi = Math.max(...seen);
  if (lo === hi) {
    // degenerate span: pad by 10% of the value (or 1 for zero)
    const pad = Math.abs(lo) > 0 ? 0.1 * Math.abs(lo) : 1;
    lo -= pad;
    hi += pad;
  }
  return [lo, hi];
}

/** Vary `axis` across [lo, hi], hold every other coordinate at the
 * anchor point's value. */
export function buildSliceGrid(
  anchor: number[],
  axis: number,
  lo: number,
  hi: number,
  n: number = SLICE_POINTS,
): number[][] {
  const grid: number[][] = [];
  for (let i = 0; i < n; i++) {
    const row = anchor.slice();
    row[axis] = lo + ((hi - lo) * i) / (n - 1);
    grid.push(row);
  }
  return grid;
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

function path(xs: number[], ys: number[]): string {
  return xs
    .map((x, i) => `${i === 0 ? "M" : "L"}${x.toFixed(2)},${ys[i]!.toFixed(2)}`)
    .join(" ");
}

/** Mean line with a +/-2 sigma band along the slice axis. */
export function renderSlicePlot(
  block: PosteriorBlock,
  axis: number,
  axisName: string,
  width = 480,
  height = 220,
): string {
  const order = block.points
    .map((_, i) => i)
    .sort((a, b) => (block.points[a]![axis] ?? 0) - (block.points[b]![axis] ?? 0));
  const xs = order.map((i) => block.points[i]![axis] ?? 0);
  const mean = order.map((i) => block.mean[i] ?? 0);
  const sigma = order.map((i) => block.sigma[i] ?? 0);
  const upper = mean.map((m, i) => m + 2 * sigma[i]!);
  const lower = mean.map((m, i) => m - 2 * sigma[i]!);

  const xLo = Math.min(...xs);
  const xHi = Math.max(...xs);
  const yLo = Math.min(...lower);
  const yHi = Math.max(...upper);
  const m = { left: 46, right: 10, top: 10, bottom: 30 };

  const px = xs.map((x) => scale(x, xLo, xHi, m.left, width - m.right));
  const pm = mean.map((y) => scale(y, yLo, yHi, height - m.bottom, m.top));
  const pu = upper.map((y) => scale(y, yLo, yHi, height - m.bottom, m.top));
  const pl = lower.map((y) => scale(y, yLo, yHi, height - m.bottom, m.top));

  const band =
    path(px, pu) +
    " " +
    path([...px].reverse(), [...pl].reverse()).replace(/^M/, "L") +
    " Z";
  const ticks = [xLo, (xLo + xHi) / 2, xHi]
    .map((t) => {
      const x = scale(t, xLo, xHi, m.left, width - m.right);
      return (
        `<line x1="${x.toFixed(2)}" y1="${height - m.bottom}" x2="${x.toFixed(2)}" y2="${height - m.bottom + 4}" stroke="#888"/>` +
        `<text x="${x.toFixed(2)}" y="${height - m.bottom + 16}" text-anchor="middle" font-size="10">${t.toPrecision(4)}</text>`
      );
    })
    .join("");
  const yTicks = [yLo, yHi]
    .map((t) => {
      const y = scale(t, yLo, yHi, height - m.bottom, m.top);
      return `<text x="${m.left - 4}" y="${(y + 3).toFixed(2)}" text-anchor="end" font-size="10">${t.toPrecision(4)}</text>`;
    })
    .join("");

  return [
    `<svg id="slice-plot" viewBox="0 0 ${width} ${height}" width="${width}" height="${height}" role="img">`,
    `<path d="${band}" fill="#9ecae1" fill-opacity="0.45" stroke="none"/>`,
    `<path d="${path(px, pm)}" fill="none" stroke="#1f77b4" stroke-width="1.5"/>`,
    ticks,
    yTicks,
    `<text x="${(width / 2).toFixed(0)}" y="${height - 4}" text-anchor="middle" font-size="11">${escapeHtml(axisName)}</text>`,
    `</svg>`,
  ].join("");
}
