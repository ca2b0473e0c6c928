/** Static results browser: loads emitted benchmark JSON (boxplot.json,
 * sweep.json) from a results URL or local file picks and renders the
 * charts. Read-only; a malformed file shows a parse banner instead of
 * a chart. */

import {
  ChartParseError,
  parseBoxplot,
  parseSweep,
  renderBoxplot,
  renderSweep,
} from "./charts.js";
import { escapeHtml } from "./html.js";

interface LoadedChart {
  name: string;
  svg: string;
}

interface LoadError {
  name: string;
  message: string;
}

/** Boxplot files carry a models array, sweep files a policies map. */
export function renderResultFile(name: string, text: string): string {
  let kind: "boxplot" | "sweep";
  try {
    const probe = JSON.parse(text) as Record<string, unknown>;
    kind = probe !== null && "models" in probe ? "boxplot" : "sweep";
  } catch {
    kind = name.includes("box") ? "boxplot" : "sweep";
  }
  return kind === "boxplot"
    ? renderBoxplot(parseBoxplot(text))
    : renderSweep(parseSweep(text));
}

export class SweepController {
  private charts: LoadedChart[] = [];
  private errors: LoadError[] = [];

  constructor(
    private readonly root: HTMLElement,
    private readonly resultsBase: string | null,
  ) {}

  async start(): Promise<void> {
    this.root.addEventListener("change", (ev) => {
      const el = ev.target as HTMLInputElement;
      if (el.getAttribute("data-action") === "pick-files" && el.files) {
        void this.loadFiles(Array.from(el.files));
      }
    });
    this.render();
    if (this.resultsBase !== null) {
      await this.loadFromUrl(this.resultsBase);
    }
  }

  private add(name: string, text: string): void {
    try {
      this.charts.push({ name, svg: renderResultFile(name, text) });
    } catch (err) {
      if (err instanceof ChartParseError) {
        this.errors.push({ name, message: err.message });
      } else {
        throw err;
      }
    }
  }

  async loadFiles(files: File[]): Promise<void> {
    for (const file of files) {
      this.add(file.name, await file.text());
    }
    this.render();
  }

  async loadFromUrl(base: string): Promise<void> {
    const clean = base.replace(/\/$/, "");
    for (const name of ["boxplot.json", "sweep.json"]) {
      try {
        const res = await fetch(`${clean}/${name}`);
        if (!res.ok) continue; // absent file is not an error, just empty
        this.add(name, await res.text());
      } catch {
        // unreachable results server: fall through to the empty state
      }
    }
    this.render();
  }

  render(): void {
    const banners = this.errors
      .map(
        (e) =>
          `<div class="banner parse-error">cannot read ${escapeHtml(e.name)}: ${escapeHtml(e.message)}</div>`,
      )
      .join("");
    const charts = this.charts
      .map(
        (c) =>
          `<section class="card chart"><h2>${escapeHtml(c.name)}</h2>${c.svg}</section>`,
      )
      .join("");
    const empty =
      this.charts.length === 0 && this.errors.length === 0
        ? `<p class="muted" id="empty-state">no result files loaded; pick boxplot.json or sweep.json emitted by the benchmark</p>`
        : "";
    this.root.innerHTML = [
      `<header><h1>Benchmark results</h1></header>`,
      `<label class="card">load result files ` +
        `<input type="file" data-action="pick-files" accept=".json" multiple></label>`,
      banners,
      empty,
      charts,
    ].join("\n");
  }
}
