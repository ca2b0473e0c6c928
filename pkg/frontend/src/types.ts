/** Payload shapes of the campaign service JSON API, field for field. */

export interface Budget {
  warmup_count: number;
  sequential_budget: number;
  budget_used: number;
  remaining: number;
}

export interface Verdict {
  kind: string;
  value: number;
  threshold: number;
  flagged: boolean;
  interval: [number, number] | null;
}

export interface LogRecord {
  step: number;
  phase: string;
  candidate_index: number;
  point: number[];
  y: number;
  verdict: Verdict | null;
  accepted: boolean;
  budget_used: number;
}

export interface Pending {
  index: number;
  point: number[];
  phase: string;
  score: number | null;
}

export interface ModelSnapshot {
  length_scale: number;
  signal_variance: number;
  noise_variance: number;
  mean: number;
  jitter: number;
  n_train: number;
  train_indices: number[] | null;
}

export interface BestObserved {
  point: number[];
  y: number;
}

export interface Report {
  best_observed: BestObserved | null;
  n_observations: number;
  n_flagged: number;
  flagged_by_phase: Record<string, number>;
  n_discarded: number;
  budget: Budget;
  warning: string | null;
  model: ModelSnapshot | null;
}

export interface CampaignConfigView {
  policy: string;
  warmup_count: number;
  sequential_budget: number;
  seed: number;
  refit_every: number;
  exploit_cap: number;
  neighborhood_radius: number | null;
}

export interface SchemaView {
  names: string[];
  target: string;
}

export interface CampaignView {
  id: string;
  created: string;
  updated: string;
  phase: string;
  done: boolean;
  config: CampaignConfigView;
  schema: SchemaView;
  n_candidates: number;
  warmup_indices: number[];
  budget: Budget;
  log: LogRecord[];
  pending: Pending | null;
  warning: string | null;
  model: ModelSnapshot | null;
  report: Report | null;
}

export interface PosteriorBlock {
  points: number[][];
  mean: number[];
  sigma: number[];
}

export type SuggestionResponse =
  | {
      status: "suggestion";
      index: number;
      point: number[];
      phase: string;
      score: number | null;
      budget: Budget;
    }
  | { status: "done"; report: Report };

export interface ObservationResponse {
  status: "observed";
  record: LogRecord;
  verdict: Verdict | null;
  phase: string;
  done: boolean;
  budget: Budget;
  posterior: PosteriorBlock | null;
}

export interface CampaignRow {
  id: string;
  phase: string;
  done: boolean;
  updated: string;
}
