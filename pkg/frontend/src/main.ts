/** Entry point: routes by query string.
 *
 *   ?session=<id>[&service=<url>]  live campaign view
 *   ?view=sweep[&results=<url>]    static results charts
 *   (nothing)                      session picker
 */

import { Client, OfflineError } from "./api.js";
import { CampaignController } from "./campaign.js";
import { escapeHtml } from "./html.js";
import { SweepController } from "./sweep.js";

const DEFAULT_SERVICE = "http://127.0.0.1:8000";

async function renderHome(root: HTMLElement, client: Client): Promise<void> {
  let rows;
  try {
    rows = (await client.listCampaigns()).campaigns;
  } catch (err) {
    if (err instanceof OfflineError) {
      root.innerHTML =
        `<div class="banner offline">service unreachable at ` +
        `${escapeHtml(client.base)} <button data-action="retry">retry</button></div>`;
      root
        .querySelector("[data-action=retry]")
        ?.addEventListener("click", () => void renderHome(root, client));
      return;
    }
    throw err;
  }
  const items = rows
    .map(
      (r) =>
        `<li><a href="?session=${encodeURIComponent(r.id)}">${escapeHtml(r.id)}</a>` +
        ` <span class="badge phase-${r.phase.toLowerCase()}">${escapeHtml(r.phase)}</span></li>`,
    )
    .join("");
  root.innerHTML = [
    `<header><h1>Campaigns</h1></header>`,
    rows.length
      ? `<ul class="session-list">${items}</ul>`
      : `<p class="muted">no campaigns yet; create one with POST /campaigns</p>`,
    `<p><a href="?view=sweep">benchmark results viewer</a></p>`,
  ].join("\n");
}

export function boot(root: HTMLElement, search: string): void {
  const params = new URLSearchParams(search);
  const service = params.get("service") ?? DEFAULT_SERVICE;
  const session = params.get("session");
  if (params.get("view") === "sweep") {
    void new SweepController(root, params.get("results")).start();
  } else if (session !== null) {
    new CampaignController(root, new Client(service), session).start();
  } else {
    void renderHome(root, new Client(service));
  }
}

const appRoot = document.getElementById("app");
if (appRoot !== null) {
  boot(appRoot, window.location.search);
}
