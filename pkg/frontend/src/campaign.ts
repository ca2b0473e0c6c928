/** Live campaign controller: poll GET /state, acquire suggestions,
 * submit observations, re-render. All rendering goes through the pure
 * functions in state.ts so the view is always reproducible from the
 * last fetched payload. */

import { ApiError, Client, OfflineError } from "./api.js";
import { axisRange, buildSliceGrid } from "./slice.js";
import { initialUi, renderCampaignView, type UiState } from "./state.js";
import type { CampaignView } from "./types.js";

export const POLL_INTERVAL_MS = 2000;

export class CampaignController {
  ui: UiState = initialUi();
  view: CampaignView | null = null;
  private timer: ReturnType<typeof setInterval> | null = null;
  private busy = false;

  constructor(
    private readonly root: HTMLElement,
    private readonly client: Client,
    private readonly id: string,
  ) {}

  start(): void {
    this.root.addEventListener("submit", (ev) => {
      const form = ev.target as HTMLElement;
      if (form.getAttribute("data-action") === "observe") {
        ev.preventDefault();
        void this.submit(form as HTMLFormElement);
      }
    });
    this.root.addEventListener("change", (ev) => {
      const el = ev.target as HTMLElement;
      if (el.getAttribute("data-action") === "axis") {
        this.ui.axis = Number((el as HTMLSelectElement).value);
        this.render();
      }
    });
    this.root.addEventListener("click", (ev) => {
      const el = ev.target as HTMLElement;
      if (el.getAttribute("data-action") === "retry") {
        void this.poll();
      }
    });
    void this.poll();
    this.timer = setInterval(() => void this.poll(), POLL_INTERVAL_MS);
  }

  stop(): void {
    if (this.timer !== null) clearInterval(this.timer);
    this.timer = null;
  }

  render(): void {
    if (this.view === null) {
      this.root.innerHTML = this.ui.offline
        ? `<div class="banner offline" id="offline-banner">service unreachable <button data-action="retry">retry</button></div>`
        : `<p class="muted">loading campaign...</p>`;
      return;
    }
    this.root.innerHTML = renderCampaignView(this.view, this.ui);
  }

  async poll(): Promise<void> {
    if (this.busy) return;
    this.busy = true;
    try {
      let view = await this.client.state(this.id);
      if (!view.done && view.pending === null) {
        // acquisition happens server-side on the suggestion endpoint
        await this.client.suggestion(this.id);
        view = await this.client.state(this.id);
      }
      this.view = view;
      this.ui.offline = false;
    } catch (err) {
      if (err instanceof OfflineError) {
        this.ui.offline = true;
      } else {
        throw err;
      }
    } finally {
      this.busy = false;
    }
    this.render();
  }

  async submit(form: HTMLFormElement): Promise<void> {
    if (this.view === null || this.view.pending === null || this.busy) return;
    const raw = new FormData(form).get("value");
    const value = Number(raw);
    if (raw === null || raw === "" || !Number.isFinite(value)) return;

    const pending = this.view.pending;
    const [lo, hi] = axisRange(this.view, this.ui.axis);
    const grid = buildSliceGrid(pending.point, this.ui.axis, lo, hi);

    this.busy = true;
    try {
      const resp = await this.client.observe(
        this.id,
        pending.point,
        value,
        grid,
      );
      this.ui.conflict = null;
      this.ui.posterior = resp.posterior;
      this.ui.posteriorAxis = this.ui.axis;
      this.ui.offline = false;
    } catch (err) {
      if (err instanceof ApiError && err.status === 409) {
        this.ui.conflict = err.message;
      } else if (err instanceof OfflineError) {
        this.ui.offline = true;
      } else {
        throw err;
      }
    } finally {
      this.busy = false;
    }
    await this.poll();
  }
}
