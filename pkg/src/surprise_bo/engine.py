"""Sequential campaign loops.

Two policies share one stepping engine. The EI loop alternates
argmax-EI acquisition with model updates. The surprise-guided loop runs a
three-stage machine: maximin exploration, confirmation of flagged
observations at the nearest unused candidate, and local exploitation of a
confirmed surprise until it stops being surprising.

Every campaign advances through `campaign_step`, one acquire-or-ingest
transition at a time; the batch runners just fold it to completion. All
randomness is derived from the campaign seed, so logs replay bit-for-bit.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._seeds import derive_seed, rng_for
from .acquisition import argmax_ei, maximin_next
from .dataset import CandidatePool, Dataset, SplitDataset, make_pool
from .errors import (
    AwaitingObservation,
    ConfigError,
    DomainError,
    ProtocolError,
    ShapeError,
)
from .gp import FitConfig, GpModel, condition_on, fit, predict, snapshot
from .surprise import (
    SurpriseConfig,
    SurpriseVerdict,
    bayesian_surprise,
    calibrate,
    loo_calibration_kls,
    reference_grid,
    shannon_surprise,
)

POLICY_EI = "EI"
POLICY_SHANNON = "ShannonSurprise"
POLICY_BAYESIAN = "BayesianSurprise"
POLICIES = (POLICY_EI, POLICY_SHANNON, POLICY_BAYESIAN)

WARMUP = "Warmup"
EXPLORE = "Explore"
CONFIRM = "Confirm"
EXPLOIT = "Exploit"
DONE = "Done"

# Legal phase transitions; staying in the same phase is always allowed.
_TRANSITIONS = {
    (WARMUP, EXPLORE),
    (EXPLORE, CONFIRM),
    (CONFIRM, EXPLORE),
    (CONFIRM, EXPLOIT),
    (EXPLOIT, EXPLORE),
}


class PoolOracle:
    """Returns the recorded target of a candidate row."""

    kind = "pool"

    def __init__(self, targets: np.ndarray):
        self.targets = np.asarray(targets, dtype=float)

    def observe(self, index: int, point: np.ndarray) -> float:
        return float(self.targets[index])


class SyntheticOracle:
    """Evaluates a test function plus seeded noise; deterministic per point."""

    kind = "synthetic"

    def __init__(self, fn, noise_std: float = 0.0, seed: int = 0):
        self.fn = fn
        self.noise_std = float(noise_std)
        self.seed = int(seed)

    def observe(self, index: int, point: np.ndarray) -> float:
        value = float(self.fn(np.asarray(point, dtype=float)))
        if self.noise_std > 0:
            noise_rng = rng_for(self.seed, np.asarray(point, dtype=float).tobytes())
            value += float(noise_rng.normal(scale=self.noise_std))
        return value


class DeferredOracle:
    """Suspends the campaign until an external value is supplied."""

    kind = "deferred"

    def observe(self, index: int, point: np.ndarray) -> None:
        return None


@dataclass(frozen=True)
class CampaignConfig:
    policy: str
    warmup_count: int
    sequential_budget: int
    surprise_cfg: SurpriseConfig = SurpriseConfig()
    neighborhood_radius: float | None = None
    refit_every: int = 10
    exploit_cap: int = 10
    seed: int = 0

    def __post_init__(self):
        if self.policy not in POLICIES:
            raise ConfigError(f"unknown policy {self.policy!r}")
        if self.warmup_count < 2:
            raise ConfigError("warmup_count must be at least 2")
        if self.sequential_budget < 0:
            raise ConfigError("sequential_budget must be >= 0")
        if self.refit_every < 1:
            raise ConfigError("refit_every must be >= 1")
        if self.exploit_cap < 1:
            raise ConfigError("exploit_cap must be >= 1")
        if self.neighborhood_radius is not None and self.neighborhood_radius <= 0:
            raise ConfigError("neighborhood_radius must be positive")

    @property
    def total_budget(self) -> int:
        return self.warmup_count + self.sequential_budget


@dataclass(eq=False)
class CampaignState:
    """Mutable campaign: model, pool, log, and stage-machine bookkeeping."""

    config: CampaignConfig
    data: Dataset
    oracle: object
    phase: str
    pool: CandidatePool
    warmup_indices: list[int]
    surprise_cfg: SurpriseConfig
    log: list[dict] = field(default_factory=list)
    budget_used: int = 0
    model: GpModel | None = None
    pending: dict | None = None
    anomaly: dict | None = None
    locus: np.ndarray | None = None
    grid: np.ndarray | None = None
    exploit_count: int = 0
    warning: str | None = None
    used_points: list = field(default_factory=list)
    model_indices: list[int] = field(default_factory=list)
    synthetic_warmup: tuple | None = None
    _warmup_buffer: list = field(default_factory=list)
    _warmup_pos: int = 0
    _n_sequential: int = 0
    _n_refits: int = 0

    @property
    def done(self) -> bool:
        return self.phase == DONE


def _transition(state: CampaignState, new_phase: str) -> None:
    if new_phase == state.phase:
        return
    if new_phase != DONE and (state.phase, new_phase) not in _TRANSITIONS:
        raise ProtocolError(
            f"illegal phase transition {state.phase} -> {new_phase}"
        )
    state.phase = new_phase


def new_campaign(
    config: CampaignConfig,
    oracle,
    data: Dataset,
    synthetic_warmup: tuple | None = None,
) -> CampaignState:
    """Draw the warm-up, then ingest it immediately unless values must
    come from outside (deferred oracle).

    `synthetic_warmup`, when given, is an (rows, targets) pair of extra
    points folded into the warm-up fit only; they never touch the pool,
    the budget, or the exploration geometry.
    """
    warmup_idx, pool = make_pool(
        data, config.warmup_count, seed=derive_seed(config.seed, "warmup")
    )
    if synthetic_warmup is not None:
        sx = np.asarray(synthetic_warmup[0], dtype=float)
        sy = np.asarray(synthetic_warmup[1], dtype=float)
        if sx.ndim != 2 or sx.shape[1] != data.rows.shape[1]:
            raise ShapeError(
                f"synthetic warmup rows must be (k, {data.rows.shape[1]}), "
                f"got {sx.shape}"
            )
        if sy.shape != (sx.shape[0],):
            raise ShapeError("synthetic warmup targets must match rows")
        synthetic_warmup = (sx, sy)
    state = CampaignState(
        config=config,
        data=data,
        oracle=oracle,
        phase=WARMUP,
        pool=pool,
        warmup_indices=[int(i) for i in warmup_idx],
        surprise_cfg=config.surprise_cfg,
        synthetic_warmup=synthetic_warmup,
    )
    if oracle.kind != "deferred":
        while state.phase == WARMUP:
            campaign_step(state)
            campaign_step(state)
    return state


def _nearest_unused(state: CampaignState, locus: np.ndarray) -> int | None:
    """Lowest-index nearest pool candidate to `locus`, radius-capped."""
    if len(state.pool) == 0:
        return None
    indices = sorted(state.pool.indices)
    rows = state.data.rows[np.asarray(indices, dtype=int)]
    dists = np.linalg.norm(rows - locus, axis=1)
    radius = state.config.neighborhood_radius
    if radius is not None:
        inside = dists <= radius
        if not inside.any():
            return None
        dists = np.where(inside, dists, np.inf)
    return indices[int(np.argmin(dists))]


def _finish(state: CampaignState, warning: str | None = None) -> dict:
    if warning and state.warning is None:
        state.warning = warning
    _transition(state, DONE)
    return {"status": "done", "warning": state.warning}


def _acquire(state: CampaignState) -> dict:
    cfg = state.config
    if state.phase == WARMUP:
        index = state.warmup_indices[state._warmup_pos]
        point = state.data.rows[index]
        state.pending = {"index": index, "point": point, "phase": WARMUP, "score": None}
        return _suggestion(state)

    if state.budget_used >= cfg.total_budget:
        return _finish(state)
    if len(state.pool) == 0:
        return _finish(state, warning="pool_exhausted")

    if state.phase == CONFIRM:
        index = _nearest_unused(state, state.locus)
        if index is None:
            # anomaly unconfirmable: nothing reachable, drop it and move on
            state.anomaly = None
            state.locus = None
            _transition(state, EXPLORE)
            return _acquire(state)
        score = None
    elif state.phase == EXPLOIT:
        index = _nearest_unused(state, state.locus)
        if index is None:
            state.locus = None
            _transition(state, EXPLORE)
            return _acquire(state)
        score = None
    elif cfg.policy == POLICY_EI:
        pick = argmax_ei(state.model, state.pool, state.data)
        index, score = pick.index, pick.score
    else:
        pick = maximin_next(
            state.pool, np.asarray(state.used_points), state.data
        )
        index, score = pick.index, pick.score

    state.pending = {
        "index": int(index),
        "point": state.data.rows[int(index)],
        "phase": state.phase,
        "score": score,
    }
    return _suggestion(state)


def _suggestion(state: CampaignState) -> dict:
    p = state.pending
    return {
        "status": "suggestion",
        "index": p["index"],
        "point": [float(v) for v in p["point"]],
        "phase": p["phase"],
        "score": p["score"],
    }


def _refit_due(state: CampaignState) -> bool:
    return (
        state._n_sequential > 0
        and state._n_sequential % state.config.refit_every == 0
    )


def _refit(state: CampaignState) -> None:
    state._n_refits += 1
    state.model = fit(
        state.model.X,
        state.model.y,
        FitConfig(
            n_starts=1,
            max_iter=40,
            seed=derive_seed(state.config.seed, "refit", state._n_refits),
            warm_start=state.model.hyper,
        ),
    )


def _commit(
    state: CampaignState, index: int, point, y: float, trial: GpModel | None = None
) -> None:
    # trial, when present, is condition_on(model, point, y) already
    state.model = trial if trial is not None else condition_on(
        state.model, point, y
    )
    state.model_indices.append(int(index))


def _verdict(state: CampaignState, point, y: float) -> tuple[SurpriseVerdict, GpModel]:
    """Surprise verdict for (point, y) against the current model.

    Returns the verdict and, for the Bayesian policy, the trial model that
    already includes the observation (committed or dropped by the caller).
    """
    if state.config.policy == POLICY_SHANNON:
        post = predict(state.model, np.atleast_2d(point))
        sigma = float(
            np.sqrt(post.variance[0] + state.model.hyper.noise_variance)
        )
        return (
            shannon_surprise(y, float(post.mean[0]), sigma, state.surprise_cfg),
            None,
        )
    trial = condition_on(state.model, point, y)
    verdict = bayesian_surprise(state.model, trial, state.grid, state.surprise_cfg)
    return verdict, trial


def _finish_warmup(state: CampaignState) -> None:
    cfg = state.config
    X = np.asarray([p for _, p, _ in state._warmup_buffer])
    y = np.asarray([v for _, _, v in state._warmup_buffer])
    indices = [i for i, _, _ in state._warmup_buffer]
    if state.synthetic_warmup is not None:
        # augmented warm-up: synthetic rows join the fit but carry no
        # pool index, so they are invisible to budget and exploration
        sx, sy = state.synthetic_warmup
        X = np.vstack([X, sx])
        y = np.concatenate([y, sy])
        indices = indices + [-1] * len(sy)
    state.model = fit(
        X, y, FitConfig(seed=derive_seed(cfg.seed, "fit"))
    )
    state.model_indices = indices
    if cfg.policy == POLICY_BAYESIAN:
        lo = state.data.rows.min(axis=0)
        hi = state.data.rows.max(axis=0)
        state.grid = reference_grid(
            np.column_stack([lo, hi]),
            state.surprise_cfg.reference_grid_size,
            seed=derive_seed(cfg.seed, "grid"),
        )
        kls = loo_calibration_kls(state.model, state.grid)
        state.surprise_cfg = state.surprise_cfg.with_calibration(
            calibrate(kls, state.surprise_cfg.k_bayesian)
        )
    _transition(state, EXPLORE)


def _ingest(state: CampaignState, y: float) -> dict:
    cfg = state.config
    pending, state.pending = state.pending, None
    index, point, phase = pending["index"], pending["point"], pending["phase"]
    y = float(y)
    state.budget_used += 1
    record = {
        "step": state.budget_used,
        "phase": phase,
        "candidate_index": int(index),
        "point": [float(v) for v in point],
        "y": y,
        "verdict": None,
        "accepted": True,
        "budget_used": state.budget_used,
    }
    state.log.append(record)
    state.used_points.append(np.asarray(point, dtype=float))

    if phase == WARMUP:
        state._warmup_buffer.append((index, point, y))
        state._warmup_pos += 1
        if state._warmup_pos == cfg.warmup_count:
            _finish_warmup(state)
    else:
        state.pool.consume(index)
        state._n_sequential += 1

        if cfg.policy == POLICY_EI:
            _commit(state, index, point, y)
        elif phase == EXPLORE:
            verdict, trial = _verdict(state, point, y)
            record["verdict"] = verdict.to_dict()
            if verdict.flagged:
                # quarantine: not in the model until a neighbor confirms it
                record["accepted"] = False
                state.anomaly = {
                    "index": index,
                    "point": point,
                    "y": y,
                    "record": record,
                }
                state.locus = np.asarray(point, dtype=float)
                _transition(state, CONFIRM)
            else:
                _commit(state, index, point, y, trial)
        elif phase == CONFIRM:
            verdict, trial = _verdict(state, point, y)
            record["verdict"] = verdict.to_dict()
            anomaly = state.anomaly
            state.anomaly = None
            if verdict.flagged:
                # confirmed: retain the anomaly then the confirmer
                anomaly["record"]["accepted"] = True
                _commit(state, anomaly["index"], anomaly["point"], anomaly["y"])
                _commit(state, index, point, y)
                state.exploit_count = 0
                _transition(state, EXPLOIT)
            else:
                # anomaly stays discarded; the confirmer is a good point
                _commit(state, index, point, y, trial)
                state.locus = None
                _transition(state, EXPLORE)
        elif phase == EXPLOIT:
            verdict, trial = _verdict(state, point, y)
            record["verdict"] = verdict.to_dict()
            _commit(state, index, point, y, trial)
            state.exploit_count += 1
            if not verdict.flagged or state.exploit_count >= cfg.exploit_cap:
                state.locus = None
                _transition(state, EXPLORE)
        else:
            raise ProtocolError(f"cannot ingest in phase {phase}")

        if _refit_due(state):
            _refit(state)

    if state.budget_used >= cfg.total_budget and state.phase != WARMUP:
        _finish(state)
    return record


def campaign_step(
    state: CampaignState, observed: float | None = None
) -> tuple[CampaignState, dict]:
    """Advance one acquire-or-ingest transition.

    With no pending suggestion, acquires one (passing `observed` then is a
    protocol error). With one pending, ingests: the value comes from
    `observed` if given, otherwise from the oracle; a deferred oracle with
    no value raises AwaitingObservation.
    """
    if state.done:
        raise ProtocolError("campaign is already done")
    if state.pending is None:
        if observed is not None:
            raise ProtocolError("no suggestion is pending an observation")
        return state, _acquire(state)
    if observed is None:
        observed = state.oracle.observe(
            state.pending["index"], state.pending["point"]
        )
        if observed is None:
            raise AwaitingObservation(
                "campaign awaits an externally observed value"
            )
    record = _ingest(state, float(observed))
    return state, {"status": "observed", "record": record}


def _run(
    config: CampaignConfig,
    oracle,
    data: SplitDataset,
    synthetic_warmup: tuple | None = None,
) -> CampaignState:
    state = new_campaign(
        config, oracle, data.train, synthetic_warmup=synthetic_warmup
    )
    while not state.done:
        campaign_step(state)
    return state


def run_ei_bo(
    config: CampaignConfig,
    oracle,
    data: SplitDataset,
    synthetic_warmup: tuple | None = None,
) -> CampaignState:
    if config.policy != POLICY_EI:
        raise ConfigError(f"run_ei_bo requires policy {POLICY_EI!r}")
    return _run(config, oracle, data, synthetic_warmup)


def run_surprise_bo(
    config: CampaignConfig,
    oracle,
    data: SplitDataset,
    synthetic_warmup: tuple | None = None,
) -> CampaignState:
    if config.policy not in (POLICY_SHANNON, POLICY_BAYESIAN):
        raise ConfigError("run_surprise_bo requires a surprise policy")
    return _run(config, oracle, data, synthetic_warmup)


def final_report(state: CampaignState, test: Dataset) -> dict:
    """Test RMSE, best accepted observation, and campaign accounting."""
    if not state.done:
        raise ProtocolError("campaign is not done")
    post = predict(state.model, test.rows)
    rmse = float(np.sqrt(np.mean((post.mean - test.targets) ** 2)))

    # best over real observations; synthetic warm-up rows are not results
    real = np.asarray(state.model_indices) >= 0
    best_idx = int(np.argmax(np.where(real, state.model.y, -np.inf)))
    flags = {}
    for rec in state.log:
        if rec["verdict"] and rec["verdict"]["flagged"]:
            flags[rec["phase"]] = flags.get(rec["phase"], 0) + 1
    report = {
        "test_rmse": rmse,
        "best_observed": {
            "point": [float(v) for v in state.model.X[best_idx]],
            "y": float(state.model.y[best_idx]),
        },
        "n_observations": len(state.log),
        "n_flagged": sum(flags.values()),
        "flagged_by_phase": flags,
        "n_confirmations": sum(1 for r in state.log if r["phase"] == CONFIRM),
        "n_exploit_observations": sum(
            1 for r in state.log if r["phase"] == EXPLOIT
        ),
        "n_discarded": sum(1 for r in state.log if not r["accepted"]),
        "n_synthetic_warmup": int((~real).sum()),
        "budget": {
            "warmup_count": state.config.warmup_count,
            "sequential_budget": state.config.sequential_budget,
            "budget_used": state.budget_used,
            "remaining": state.config.total_budget - state.budget_used,
        },
        "warning": state.warning,
        "model": snapshot(state.model, train_indices=state.model_indices),
    }
    return report
