/** Canned service payloads used across the unit tests. Shapes mirror
 * the campaign service responses exactly. */

import type { CampaignView, LogRecord, Report } from "../src/types.js";

export const SCHEMA = {
  names: [
    "laser_power",
    "scanning_velocity",
    "beam_diameter",
    "density",
    "melting_temperature",
    "thermal_conductivity",
  ],
  target: "depth",
};

export function makeRecord(over: Partial<LogRecord> = {}): LogRecord {
  return {
    step: 1,
    phase: "Warmup",
    candidate_index: 4,
    point: [150, 1.0, 80, 8.0, 1700, 25],
    y: 52.5,
    verdict: null,
    accepted: true,
    budget_used: 1,
    ...over,
  };
}

export function makeView(over: Partial<CampaignView> = {}): CampaignView {
  return {
    id: "abc123",
    created: "2026-08-15T10:00:00+00:00",
    updated: "2026-08-15T10:05:00+00:00",
    phase: "Explore",
    done: false,
    config: {
      policy: "ShannonSurprise",
      warmup_count: 3,
      sequential_budget: 5,
      seed: 0,
      refit_every: 10,
      exploit_cap: 10,
      neighborhood_radius: null,
    },
    schema: { ...SCHEMA, names: [...SCHEMA.names] },
    n_candidates: 24,
    warmup_indices: [1, 7, 12],
    budget: {
      warmup_count: 3,
      sequential_budget: 5,
      budget_used: 4,
      remaining: 4,
    },
    log: [
      makeRecord(),
      makeRecord({ step: 2, candidate_index: 7, y: 48.1, budget_used: 2 }),
      makeRecord({ step: 3, candidate_index: 12, y: 50.9, budget_used: 3 }),
      makeRecord({
        step: 4,
        phase: "Explore",
        candidate_index: 2,
        y: 71.3,
        budget_used: 4,
        accepted: false,
        verdict: {
          kind: "shannon",
          value: 4.31,
          threshold: 1.96,
          flagged: true,
          interval: [45.0, 55.0],
        },
      }),
    ],
    pending: {
      index: 9,
      point: [170, 1.2, 85, 8.1, 1720, 27],
      phase: "Confirm",
      score: null,
    },
    warning: null,
    model: {
      length_scale: 1.2,
      signal_variance: 0.9,
      noise_variance: 0.05,
      mean: 50.4,
      jitter: 0,
      n_train: 3,
      train_indices: [1, 7, 12],
    },
    report: null,
    ...over,
  };
}

export function makeReport(over: Partial<Report> = {}): Report {
  return {
    best_observed: { point: [170, 1.2, 85, 8.1, 1720, 27], y: 71.3 },
    n_observations: 8,
    n_flagged: 2,
    flagged_by_phase: { Explore: 1, Confirm: 1 },
    n_discarded: 0,
    budget: {
      warmup_count: 3,
      sequential_budget: 5,
      budget_used: 8,
      remaining: 0,
    },
    warning: null,
    model: null,
    ...over,
  };
}
