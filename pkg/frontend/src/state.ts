/** Pure view-model + HTML string rendering for the live campaign view.
 *
 * Everything here is a deterministic function of the service payloads
 * plus a small UI-state record, so a reload that refetches GET /state
 * reproduces the exact same markup. No campaign math happens here:
 * every number shown was computed server-side.
 */

import type {
  Budget,
  CampaignView,
  LogRecord,
  Pending,
  PosteriorBlock,
  Report,
  SchemaView,
} from "./types.js";
import { escapeHtml, fmt } from "./html.js";
import { renderSlicePlot } from "./slice.js";

export { escapeHtml, fmt };

export interface UiState {
  /** feature index the posterior slice varies */
  axis: number;
  /** most recent posterior block returned by an observation POST */
  posterior: PosteriorBlock | null;
  /** axis the posterior block was requested along */
  posteriorAxis: number | null;
  offline: boolean;
  /** inline message from a 409 on submit */
  conflict: string | null;
}

export function initialUi(): UiState {
  return {
    axis: 0,
    posterior: null,
    posteriorAxis: null,
    offline: false,
    conflict: null,
  };
}

export interface GaugeModel {
  total: number;
  used: number;
  fraction: number;
  label: string;
}

export function gaugeModel(budget: Budget): GaugeModel {
  const total = budget.warmup_count + budget.sequential_budget;
  const fraction = total > 0 ? budget.budget_used / total : 0;
  return {
    total,
    used: budget.budget_used,
    fraction,
    label: `${budget.budget_used} / ${total} observations`,
  };
}

export interface TimelineRow {
  step: number;
  phase: string;
  y: number;
  flagged: boolean;
  accepted: boolean;
  surprise: string;
}

export function timelineRows(log: LogRecord[]): TimelineRow[] {
  return log.map((rec) => ({
    step: rec.step,
    phase: rec.phase,
    y: rec.y,
    flagged: rec.verdict !== null && rec.verdict.flagged,
    accepted: rec.accepted,
    surprise:
      rec.verdict === null
        ? ""
        : `${fmt(rec.verdict.value)} vs ${fmt(rec.verdict.threshold)}`,
  }));
}

export function renderPhaseBadge(phase: string): string {
  const cls = `badge phase-${phase.toLowerCase()}`;
  return `<span class="${cls}" id="phase-badge">${escapeHtml(phase)}</span>`;
}

export function renderBudgetGauge(budget: Budget): string {
  const g = gaugeModel(budget);
  const pct = Math.min(100, Math.round(g.fraction * 100));
  return [
    `<div class="gauge" id="budget-gauge" data-used="${g.used}" data-total="${g.total}">`,
    `<div class="gauge-fill" style="width:${pct}%"></div>`,
    `<span class="gauge-label">${escapeHtml(g.label)}</span>`,
    `</div>`,
  ].join("");
}

function parameterList(point: number[], schema: SchemaView): string {
  const items = schema.names.map(
    (name, i) =>
      `<li><span class="param-name">${escapeHtml(name)}</span>` +
      `<span class="param-value">${fmt(point[i] ?? NaN)}</span></li>`,
  );
  return `<ul class="param-list">${items.join("")}</ul>`;
}

export function renderSuggestionCard(
  pending: Pending | null,
  schema: SchemaView,
): string {
  if (pending === null) {
    return `<section class="card" id="suggestion-card"><h2>Next experiment</h2><p class="muted">fetching suggestion...</p></section>`;
  }
  const score =
    pending.score === null
      ? ""
      : `<p class="muted">acquisition score ${fmt(pending.score)}</p>`;
  return [
    `<section class="card" id="suggestion-card" data-index="${pending.index}">`,
    `<h2>Next experiment</h2>`,
    `<p>phase ${escapeHtml(pending.phase)}, candidate #${pending.index}</p>`,
    parameterList(pending.point, schema),
    score,
    `</section>`,
  ].join("");
}

export function renderObservationForm(
  view: CampaignView,
  ui: UiState,
): string {
  if (view.done || view.pending === null) return "";
  const conflict = ui.conflict
    ? `<p class="conflict" id="conflict-message">${escapeHtml(ui.conflict)}</p>`
    : "";
  return [
    `<form class="card" id="observation-form" data-action="observe">`,
    `<h2>Record measurement</h2>`,
    `<label>measured ${escapeHtml(view.schema.target)} ` +
      `<input name="value" type="number" step="any" required></label>`,
    `<button type="submit">Submit observation</button>`,
    conflict,
    `</form>`,
  ].join("");
}

function verdictChip(rec: LogRecord): string {
  if (rec.verdict === null) return "";
  const cls = rec.verdict.flagged ? "chip flagged" : "chip ok";
  const label = rec.verdict.flagged ? "surprising" : "expected";
  return `<span class="${cls}">${label} (${escapeHtml(rec.verdict.kind)} ${fmt(rec.verdict.value)})</span>`;
}

export function renderLastVerdict(log: LogRecord[]): string {
  const last = log[log.length - 1];
  if (!last || last.verdict === null) return "";
  return `<div id="last-verdict">step ${last.step}: ${verdictChip(last)}</div>`;
}

export function renderTimeline(log: LogRecord[]): string {
  if (log.length === 0) {
    return `<section class="card" id="timeline"><h2>Surprise timeline</h2><p class="muted">no observations yet</p></section>`;
  }
  const rows = timelineRows(log)
    .map((r) => {
      const cls = [
        r.flagged ? "flagged" : "",
        r.accepted ? "" : "discarded",
      ]
        .filter(Boolean)
        .join(" ");
      return (
        `<tr class="${cls}"><td>${r.step}</td>` +
        `<td>${escapeHtml(r.phase)}</td><td>${fmt(r.y)}</td>` +
        `<td>${escapeHtml(r.surprise)}</td>` +
        `<td>${r.accepted ? "kept" : "discarded"}</td></tr>`
      );
    })
    .join("");
  return [
    `<section class="card" id="timeline"><h2>Surprise timeline</h2>`,
    `<table><thead><tr><th>step</th><th>phase</th><th>y</th>`,
    `<th>surprise</th><th></th></tr></thead>`,
    `<tbody>${rows}</tbody></table></section>`,
  ].join("");
}

export function renderReport(report: Report, schema: SchemaView): string {
  const best = report.best_observed
    ? `<p>best observed ${escapeHtml(schema.target)}: <strong>${fmt(report.best_observed.y)}</strong></p>` +
      parameterList(report.best_observed.point, schema)
    : `<p class="muted">no observations recorded</p>`;
  const warning = report.warning
    ? `<p class="conflict">ended early: ${escapeHtml(report.warning)}</p>`
    : "";
  return [
    `<section class="card" id="report-panel"><h2>Campaign report</h2>`,
    best,
    `<p>${report.n_observations} observations, ${report.n_flagged} flagged, `,
    `${report.n_discarded} discarded</p>`,
    warning,
    `</section>`,
  ].join("");
}

export function renderAxisSelect(schema: SchemaView, axis: number): string {
  const options = schema.names
    .map(
      (name, i) =>
        `<option value="${i}"${i === axis ? " selected" : ""}>${escapeHtml(name)}</option>`,
    )
    .join("");
  return `<label>slice axis <select data-action="axis" id="axis-select">${options}</select></label>`;
}

export function renderPosteriorCard(
  view: CampaignView,
  ui: UiState,
): string {
  const selector = renderAxisSelect(view.schema, ui.axis);
  let body: string;
  if (ui.posterior === null) {
    body = `<p class="muted">the posterior slice renders after the next submitted observation</p>`;
  } else if (ui.posteriorAxis !== ui.axis) {
    body = `<p class="muted">axis changed; the slice refreshes with the next observation</p>`;
  } else {
    body = renderSlicePlot(
      ui.posterior,
      ui.axis,
      view.schema.names[ui.axis] ?? `x${ui.axis}`,
    );
  }
  return [
    `<section class="card" id="posterior-card"><h2>Posterior slice</h2>`,
    selector,
    body,
    `</section>`,
  ].join("");
}

export function renderOfflineBanner(offline: boolean): string {
  if (!offline) return "";
  return (
    `<div class="banner offline" id="offline-banner">service unreachable ` +
    `<button data-action="retry">retry</button></div>`
  );
}

/** Full live view. Deterministic in (view, ui). */
export function renderCampaignView(view: CampaignView, ui: UiState): string {
  const parts = [
    renderOfflineBanner(ui.offline),
    `<header><h1>Campaign ${escapeHtml(view.id)}</h1>`,
    renderPhaseBadge(view.phase),
    `<span class="muted">policy ${escapeHtml(view.config.policy)}, target ${escapeHtml(view.schema.target)}</span>`,
    `</header>`,
    renderBudgetGauge(view.budget),
    view.report !== null
      ? renderReport(view.report, view.schema)
      : renderSuggestionCard(view.pending, view.schema),
    renderObservationForm(view, ui),
    renderLastVerdict(view.log),
    renderPosteriorCard(view, ui),
    renderTimeline(view.log),
  ];
  return parts.filter(Boolean).join("\n");
}
