/** Thin typed client for the campaign service. Every request funnels
 * through one helper so offline detection and error decoding live in
 * exactly one place. */

import type {
  CampaignRow,
  CampaignView,
  ObservationResponse,
  SuggestionResponse,
} from "./types.js";

/** Service replied with an error body ({code, message, field?}). */
export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
    readonly field?: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

/** Network-level failure: service unreachable, connection refused. */
export class OfflineError extends Error {
  constructor(message = "campaign service unreachable") {
    super(message);
    this.name = "OfflineError";
  }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  let res: Response;
  try {
    res = await fetch(url, init);
  } catch {
    throw new OfflineError();
  }
  if (!res.ok) {
    let code = "http_error";
    let message = `${res.status} ${res.statusText}`;
    let field: string | undefined;
    try {
      const body = (await res.json()) as {
        code?: string;
        message?: string;
        field?: string;
      };
      if (body.code) code = body.code;
      if (body.message) message = body.message;
      field = body.field;
    } catch {
      // non-JSON error body; keep the status line
    }
    throw new ApiError(res.status, code, message, field);
  }
  return (await res.json()) as T;
}

export class Client {
  constructor(readonly base: string) {}

  private url(path: string): string {
    return this.base.replace(/\/$/, "") + path;
  }

  health(): Promise<{ status: string; sessions: number }> {
    return request(this.url("/health"));
  }

  listCampaigns(): Promise<{ campaigns: CampaignRow[] }> {
    return request(this.url("/campaigns"));
  }

  createCampaign(body: unknown): Promise<{
    id: string;
    status: string;
    created: string;
    warmup_count: number;
    warmup: number[][];
  }> {
    return request(this.url("/campaigns"), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  suggestion(id: string): Promise<SuggestionResponse> {
    return request(this.url(`/campaigns/${id}/suggestion`));
  }

  observe(
    id: string,
    point: number[],
    value: number,
    grid?: number[][],
  ): Promise<ObservationResponse> {
    const body: Record<string, unknown> = { point, value };
    if (grid) body.grid = grid;
    return request(this.url(`/campaigns/${id}/observations`), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  state(id: string): Promise<CampaignView> {
    return request(this.url(`/campaigns/${id}/state`));
  }
}
