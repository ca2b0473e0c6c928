import { describe, expect, it } from "vitest";

import {
  axisRange,
  buildSliceGrid,
  renderSlicePlot,
  SLICE_POINTS,
} from "../src/slice.js";
import { makeView } from "./fixtures.js";
import type { PosteriorBlock } from "../src/types.js";

describe("axisRange", () => {
  it("spans logged points and the pending suggestion", () => {
    const [lo, hi] = axisRange(makeView(), 0);
    expect(lo).toBe(150); // smallest logged laser_power
    expect(hi).toBe(170); // pending point extends the range
  });

  it("pads a degenerate span", () => {
    const view = makeView();
    for (const rec of view.log) rec.point = [100, 1, 80, 8, 1700, 25];
    view.pending!.point = [100, 1, 80, 8, 1700, 25];
    const [lo, hi] = axisRange(view, 0);
    expect(lo).toBeLessThan(100);
    expect(hi).toBeGreaterThan(100);
  });
});

describe("buildSliceGrid", () => {
  it("varies only the chosen axis, endpoints inclusive", () => {
    const anchor = [150, 1.0, 80, 8.0, 1700, 25];
    const grid = buildSliceGrid(anchor, 2, 70, 90);
    expect(grid).toHaveLength(SLICE_POINTS);
    expect(grid[0]![2]).toBe(70);
    expect(grid[grid.length - 1]![2]).toBe(90);
    for (const row of grid) {
      expect(row[0]).toBe(150);
      expect(row[5]).toBe(25);
    }
    const values = grid.map((r) => r[2]!);
    const sorted = [...values].sort((a, b) => a - b);
    expect(values).toEqual(sorted);
  });

  it("anchor stays untouched", () => {
    const anchor = [1, 2, 3, 4, 5, 6];
    buildSliceGrid(anchor, 0, -1, 1);
    expect(anchor).toEqual([1, 2, 3, 4, 5, 6]);
  });
});

describe("renderSlicePlot", () => {
  const block: PosteriorBlock = {
    points: [0, 1, 2, 3, 4].map((i) => [100 + 10 * i, 1, 80, 8, 1700, 25]),
    mean: [50, 52, 55, 53, 51],
    sigma: [2, 1.5, 1, 1.5, 2],
  };

  it("draws a mean line and a band, labeled with the axis name", () => {
    const svg = renderSlicePlot(block, 0, "laser_power");
    expect(svg).toContain("<svg");
    expect(svg).toContain("laser_power");
    // one filled band and one stroked mean path
    expect(svg.match(/<path/g)).toHaveLength(2);
    expect(svg).toContain('fill="#9ecae1"');
    expect(svg).not.toContain("NaN");
  });

  it("orders by the slice axis even if the block arrives shuffled", () => {
    const shuffled: PosteriorBlock = {
      points: [block.points[3]!, block.points[0]!, block.points[4]!],
      mean: [53, 50, 51],
      sigma: [1.5, 2, 2],
    };
    const svg = renderSlicePlot(shuffled, 0, "laser_power");
    expect(svg).not.toContain("NaN");
    // band path must start at the left edge of the x range
    expect(svg).toContain("M46.00");
  });

  it("escapes the axis label", () => {
    const svg = renderSlicePlot(block, 0, "<bad>");
    expect(svg).toContain("&lt;bad&gt;");
  });
});
