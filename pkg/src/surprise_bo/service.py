"""HTTP campaign service: suggestions out, measured values in.

Wraps a deferred-oracle campaign behind a small JSON API so an
experimenter can run the loop from a browser: the service proposes the
next process parameters, the human runs the physical experiment and
posts the measured value, and the verdict/phase/posterior come back.

Sessions persist as append-only JSON-lines files; on restart the model
is rebuilt by replaying the logged observations through the engine,
which is cheaper and safer than snapshotting dense Cholesky factors.
All payload numbers are in raw (denormalized) units; features are
standardized internally from the candidate grid so the isotropic
kernel sees comparable scales. Errors come back as
``{"code", "message", "field"?}``.
"""

from __future__ import annotations

import json
import secrets
import threading
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import numpy as np
import pandas as pd
from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from . import __version__
from .dataset import Dataset, FeatureSchema
from .engine import (
    POLICY_BAYESIAN,
    POLICY_EI,
    POLICY_SHANNON,
    CampaignConfig,
    CampaignState,
    DeferredOracle,
    campaign_step,
    new_campaign,
)
from .errors import BudgetError, ConfigError, DataError, SurpriseBoError
from .gp import predict, snapshot
from .surprise import SurpriseConfig

POINT_TOLERANCE = 1e-9
MAX_GRID_POINTS = 2048

_POLICIES = {
    "ei": POLICY_EI,
    "shannon": POLICY_SHANNON,
    "bayesian": POLICY_BAYESIAN,
    POLICY_EI.lower(): POLICY_EI,
    POLICY_SHANNON.lower(): POLICY_SHANNON,
    POLICY_BAYESIAN.lower(): POLICY_BAYESIAN,
}


class ServiceError(Exception):
    """Maps straight onto an HTTP error body."""

    def __init__(self, status: int, code: str, message: str, field: str | None = None):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message
        self.field = field

    def body(self) -> dict:
        body = {"code": self.code, "message": self.message}
        if self.field is not None:
            body["field"] = self.field
        return body


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


@dataclass(eq=False)
class Session:
    """One live campaign: engine state plus the raw-unit bookkeeping.

    `view` is an immutable snapshot rebuilt after every mutation; GETs
    of /state read it without taking the per-session writer lock.
    """

    id: str
    state: CampaignState
    schema: FeatureSchema
    candidates: np.ndarray
    feature_means: np.ndarray
    feature_stds: np.ndarray
    created: str
    updated: str
    lock: threading.Lock = field(default_factory=threading.Lock)
    view: dict = field(default_factory=dict)
    log_file: Path | None = None

    def denorm(self, point) -> list[float]:
        raw = np.asarray(point, dtype=float) * self.feature_stds + self.feature_means
        return [float(v) for v in raw]

    def norm(self, rows: np.ndarray) -> np.ndarray:
        return (np.asarray(rows, dtype=float) - self.feature_means) / self.feature_stds


def _require(body: dict, key: str, kind, field_name: str | None = None):
    field_name = field_name or key
    if key not in body:
        raise ServiceError(400, "invalid_body", f"missing field {key!r}", field_name)
    value = body[key]
    if kind is not None and not isinstance(value, kind):
        raise ServiceError(
            400,
            "invalid_body",
            f"field {key!r} must be {getattr(kind, '__name__', kind)}",
            field_name,
        )
    return value


def _parse_policy(value) -> str:
    key = str(value).strip().lower()
    if key not in _POLICIES:
        raise ServiceError(
            400,
            "config_error",
            f"unknown policy {value!r}; choose shannon, bayesian, or ei",
            "config.policy",
        )
    return _POLICIES[key]


def _parse_config(raw: dict) -> CampaignConfig:
    policy = _parse_policy(_require(raw, "policy", str, "config.policy"))
    kwargs = {
        "policy": policy,
        "warmup_count": _as_int(raw, "warmup_count"),
        "sequential_budget": _as_int(raw, "sequential_budget"),
    }
    for key in ("seed", "refit_every", "exploit_cap"):
        if key in raw:
            kwargs[key] = _as_int(raw, key)
    if raw.get("neighborhood_radius") is not None:
        kwargs["neighborhood_radius"] = _as_float(raw, "neighborhood_radius")
    if "surprise" in raw:
        surprise = raw["surprise"]
        if not isinstance(surprise, dict):
            raise ServiceError(
                400, "invalid_body", "surprise must be an object", "config.surprise"
            )
        try:
            kwargs["surprise_cfg"] = SurpriseConfig(**surprise)
        except (TypeError, SurpriseBoError) as exc:
            raise ServiceError(400, "config_error", str(exc), "config.surprise")
    try:
        return CampaignConfig(**kwargs)
    except ConfigError as exc:
        raise ServiceError(400, exc.code, str(exc), "config")


def _as_int(raw: dict, key: str) -> int:
    value = _require(raw, key, None, f"config.{key}")
    if isinstance(value, bool) or not isinstance(value, int):
        raise ServiceError(
            400, "invalid_body", f"{key} must be an integer", f"config.{key}"
        )
    return value


def _as_float(raw: dict, key: str) -> float:
    value = raw[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ServiceError(
            400, "invalid_body", f"{key} must be a number", f"config.{key}"
        )
    return float(value)


def _parse_schema(raw) -> FeatureSchema:
    if not isinstance(raw, dict):
        raise ServiceError(400, "invalid_body", "schema must be an object", "schema")
    names = _require(raw, "names", list, "schema.names")
    target = _require(raw, "target", str, "schema.target")
    try:
        return FeatureSchema(names=tuple(str(n) for n in names), target=target)
    except DataError as exc:
        raise ServiceError(400, exc.code, str(exc), "schema")


def _parse_candidates(body: dict, schema: FeatureSchema) -> np.ndarray:
    if "candidates" in body:
        raw = body["candidates"]
        if not isinstance(raw, list) or not raw:
            raise ServiceError(
                400, "invalid_body", "candidates must be a nonempty list", "candidates"
            )
        if isinstance(raw[0], dict):
            try:
                rows = [[float(r[name]) for name in schema.names] for r in raw]
            except (KeyError, TypeError, ValueError) as exc:
                raise ServiceError(
                    400,
                    "invalid_body",
                    f"candidate rows must carry every feature: {exc}",
                    "candidates",
                )
        else:
            rows = raw
        try:
            grid = np.asarray(rows, dtype=float)
        except (TypeError, ValueError) as exc:
            raise ServiceError(
                400, "invalid_body", f"candidates must be numeric: {exc}", "candidates"
            )
    elif "pool_file" in body:
        path = Path(str(body["pool_file"]))
        if not path.exists():
            raise ServiceError(
                400, "invalid_body", f"pool file not found: {path}", "pool_file"
            )
        frame = pd.read_csv(path)
        missing = [c for c in schema.names if c not in frame.columns]
        if missing:
            raise ServiceError(
                400,
                "schema_error",
                f"pool file lacks columns {missing}",
                "pool_file",
            )
        grid = frame[list(schema.names)].to_numpy(dtype=float)
    else:
        raise ServiceError(
            400,
            "invalid_body",
            "either candidates or pool_file is required",
            "candidates",
        )
    if grid.ndim != 2 or grid.shape[1] != len(schema.names):
        raise ServiceError(
            400,
            "invalid_body",
            f"candidates must be (n, {len(schema.names)}), got {grid.shape}",
            "candidates",
        )
    if not np.isfinite(grid).all():
        raise ServiceError(
            400, "invalid_body", "candidates contain non-finite values", "candidates"
        )
    return grid


def _build_session(
    session_id: str,
    config: CampaignConfig,
    schema: FeatureSchema,
    candidates: np.ndarray,
    created: str,
) -> Session:
    means = candidates.mean(axis=0)
    stds = candidates.std(axis=0, ddof=1)
    constant = np.flatnonzero(stds == 0)
    if constant.size:
        name = schema.names[int(constant[0])]
        raise ServiceError(
            400,
            "degenerate_scale",
            f"candidate column {name!r} is constant and cannot be standardized",
            "candidates",
        )
    normed = (candidates - means) / stds
    data = Dataset(
        schema=schema, rows=normed, targets=np.zeros(candidates.shape[0])
    )
    try:
        state = new_campaign(config, DeferredOracle(), data)
    except BudgetError as exc:
        raise ServiceError(400, exc.code, str(exc), "config.warmup_count")
    return Session(
        id=session_id,
        state=state,
        schema=schema,
        candidates=candidates,
        feature_means=means,
        feature_stds=stds,
        created=created,
        updated=created,
    )


def _raw_record(session: Session, record: dict) -> dict:
    out = dict(record)
    out["point"] = session.denorm(record["point"])
    return out


def _budget(state: CampaignState) -> dict:
    total = state.config.total_budget
    return {
        "warmup_count": state.config.warmup_count,
        "sequential_budget": state.config.sequential_budget,
        "budget_used": state.budget_used,
        "remaining": total - state.budget_used,
    }


def _report(session: Session) -> dict:
    """Done-state summary; mirrors the offline report minus test RMSE,
    which needs held-out targets a human campaign does not have."""
    state = session.state
    model = state.model
    best = None
    model_snapshot = None
    if model is not None:
        best_idx = int(np.argmax(model.y))
        best = {
            "point": session.denorm(model.X[best_idx]),
            "y": float(model.y[best_idx]),
        }
        model_snapshot = snapshot(model, train_indices=state.model_indices)
    flags: dict[str, int] = {}
    for rec in state.log:
        if rec["verdict"] and rec["verdict"]["flagged"]:
            flags[rec["phase"]] = flags.get(rec["phase"], 0) + 1
    return {
        "best_observed": best,
        "n_observations": len(state.log),
        "n_flagged": sum(flags.values()),
        "flagged_by_phase": flags,
        "n_discarded": sum(1 for r in state.log if not r["accepted"]),
        "budget": _budget(state),
        "warning": state.warning,
        "model": model_snapshot,
    }


def _build_view(session: Session) -> dict:
    state = session.state
    pending = None
    if state.pending is not None:
        pending = {
            "index": int(state.pending["index"]),
            "point": session.denorm(state.pending["point"]),
            "phase": state.pending["phase"],
            "score": state.pending["score"],
        }
    model_snapshot = None
    if state.model is not None:
        model_snapshot = snapshot(state.model, train_indices=state.model_indices)
    return {
        "id": session.id,
        "created": session.created,
        "updated": session.updated,
        "phase": state.phase,
        "done": state.done,
        "config": {
            "policy": state.config.policy,
            "warmup_count": state.config.warmup_count,
            "sequential_budget": state.config.sequential_budget,
            "seed": state.config.seed,
            "refit_every": state.config.refit_every,
            "exploit_cap": state.config.exploit_cap,
            "neighborhood_radius": state.config.neighborhood_radius,
        },
        "schema": {
            "names": list(session.schema.names),
            "target": session.schema.target,
        },
        "n_candidates": int(session.candidates.shape[0]),
        "warmup_indices": [int(i) for i in state.warmup_indices],
        "budget": _budget(state),
        "log": [_raw_record(session, rec) for rec in state.log],
        "pending": pending,
        "warning": state.warning,
        "model": model_snapshot,
        "report": _report(session) if state.done else None,
    }


def _posterior_block(session: Session, raw_points) -> dict | None:
    model = session.state.model
    if model is None:
        return None
    X = session.norm(np.atleast_2d(np.asarray(raw_points, dtype=float)))
    post = predict(model, X)
    return {
        "points": [session.denorm(row) for row in X],
        "mean": [float(v) for v in post.mean],
        "sigma": [float(v) for v in np.sqrt(post.variance)],
    }


class Registry:
    """All live sessions plus the on-disk log directory."""

    def __init__(self, storage: Path | None):
        self.storage = storage
        self.sessions: dict[str, Session] = {}
        self._lock = threading.Lock()
        if storage is not None:
            storage.mkdir(parents=True, exist_ok=True)
            self._replay_existing()

    def _replay_existing(self) -> None:
        for path in sorted(self.storage.glob("*.jsonl")):
            lines = [
                json.loads(line)
                for line in path.read_text().splitlines()
                if line.strip()
            ]
            if not lines or lines[0].get("kind") != "created":
                continue
            head = lines[0]
            schema = FeatureSchema(
                names=tuple(head["schema"]["names"]),
                target=head["schema"]["target"],
            )
            config = CampaignConfig(
                policy=head["config"]["policy"],
                warmup_count=head["config"]["warmup_count"],
                sequential_budget=head["config"]["sequential_budget"],
                seed=head["config"]["seed"],
                refit_every=head["config"]["refit_every"],
                exploit_cap=head["config"]["exploit_cap"],
                neighborhood_radius=head["config"]["neighborhood_radius"],
            )
            session = _build_session(
                head["id"],
                config,
                schema,
                np.asarray(head["candidates"], dtype=float),
                head["created"],
            )
            session.log_file = path
            for line in lines[1:]:
                campaign_step(session.state)  # re-acquire the suggestion
                campaign_step(session.state, line["y"])
                session.updated = line["ts"]
            session.view = _build_view(session)
            self.sessions[session.id] = session

    def add(self, session: Session, head: dict) -> None:
        if self.storage is not None:
            session.log_file = self.storage / f"{session.id}.jsonl"
            session.log_file.write_text(json.dumps(head, sort_keys=True) + "\n")
        with self._lock:
            self.sessions[session.id] = session

    def get(self, session_id: str) -> Session:
        try:
            return self.sessions[session_id]
        except KeyError:
            raise ServiceError(
                404, "unknown_session", f"no session with id {session_id!r}"
            )

    def append(self, session: Session, line: dict) -> None:
        if session.log_file is not None:
            with session.log_file.open("a") as fh:
                fh.write(json.dumps(line, sort_keys=True) + "\n")


def create_app(storage=None) -> FastAPI:
    """App factory. `storage` is the session-log directory; omit it for
    an ephemeral in-memory service (used by tests)."""
    app = FastAPI(title="surprise-bo campaign service", version=__version__)
    # the dashboard is served as static files from another origin
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    registry = Registry(Path(storage) if storage is not None else None)
    app.state.registry = registry

    @app.exception_handler(ServiceError)
    def _service_error(request: Request, exc: ServiceError):
        return JSONResponse(status_code=exc.status, content=exc.body())

    @app.exception_handler(RequestValidationError)
    def _validation_error(request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=400,
            content={"code": "invalid_body", "message": str(exc)},
        )

    @app.get("/health")
    def health():
        return {"status": "ok", "sessions": len(registry.sessions)}

    @app.get("/campaigns")
    def list_campaigns():
        rows = [
            {
                "id": s.id,
                "phase": s.state.phase,
                "done": s.state.done,
                "updated": s.updated,
            }
            for s in registry.sessions.values()
        ]
        return {"campaigns": sorted(rows, key=lambda r: r["id"])}

    @app.post("/campaigns", status_code=201)
    def create_campaign(body: dict):
        config = _parse_config(_require(body, "config", dict))
        schema = _parse_schema(_require(body, "schema", dict))
        candidates = _parse_candidates(body, schema)
        session_id = secrets.token_hex(8)
        created = _now()
        session = _build_session(session_id, config, schema, candidates, created)
        session.view = _build_view(session)
        head = {
            "kind": "created",
            "id": session_id,
            "created": created,
            "config": session.view["config"],
            "schema": session.view["schema"],
            "candidates": [[float(v) for v in row] for row in candidates],
        }
        registry.add(session, head)
        warmup_points = [
            session.denorm(session.state.data.rows[i])
            for i in session.state.warmup_indices
        ]
        return {
            "id": session_id,
            "status": "created",
            "created": created,
            "warmup_count": config.warmup_count,
            "warmup": warmup_points,
        }

    @app.get("/campaigns/{session_id}/suggestion")
    def get_suggestion(session_id: str):
        session = registry.get(session_id)
        with session.lock:
            state = session.state
            if state.done:
                return {"status": "done", "report": _report(session)}
            if state.pending is None:
                _, result = campaign_step(state)
                session.updated = _now()
                session.view = _build_view(session)
                if result["status"] == "done":
                    return {"status": "done", "report": _report(session)}
            return {
                "status": "suggestion",
                "index": int(state.pending["index"]),
                "point": session.denorm(state.pending["point"]),
                "phase": state.pending["phase"],
                "score": state.pending["score"],
                "budget": _budget(state),
            }

    @app.post("/campaigns/{session_id}/observations")
    def post_observation(session_id: str, body: dict):
        session = registry.get(session_id)
        point = _require(body, "point", list)
        value = _require(body, "value", None)
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ServiceError(400, "invalid_body", "value must be a number", "value")
        value = float(value)
        if not np.isfinite(value):
            raise ServiceError(400, "invalid_body", "value must be finite", "value")
        grid = body.get("grid")
        if grid is not None:
            if not isinstance(grid, list) or len(grid) > MAX_GRID_POINTS:
                raise ServiceError(
                    400,
                    "invalid_body",
                    f"grid must be a list of at most {MAX_GRID_POINTS} points",
                    "grid",
                )

        with session.lock:
            state = session.state
            if state.done:
                raise ServiceError(
                    409, "campaign_done", "campaign is done; no observation expected"
                )
            if state.pending is None:
                raise ServiceError(
                    409,
                    "no_pending_suggestion",
                    "no suggestion is pending; fetch one first",
                )
            expected = session.denorm(state.pending["point"])
            got = np.asarray(point, dtype=float)
            if got.shape != (len(expected),):
                raise ServiceError(
                    400,
                    "invalid_body",
                    f"point must have {len(expected)} coordinates",
                    "point",
                )
            if np.max(np.abs(got - np.asarray(expected))) > POINT_TOLERANCE:
                raise ServiceError(
                    409,
                    "point_mismatch",
                    "echoed point does not match the pending suggestion",
                )
            _, result = campaign_step(state, value)
            session.updated = _now()
            registry.append(
                session, {"kind": "observed", "y": value, "ts": session.updated}
            )
            session.view = _build_view(session)
            record = _raw_record(session, result["record"])
            posterior = _posterior_block(
                session, grid if grid is not None else [record["point"]]
            )
            return {
                "status": "observed",
                "record": record,
                "verdict": record["verdict"],
                "phase": state.phase,
                "done": state.done,
                "budget": _budget(state),
                "posterior": posterior,
            }

    @app.get("/campaigns/{session_id}/state")
    def get_state(session_id: str):
        # lock-free: view is an immutable snapshot swapped in by mutators
        return registry.get(session_id).view

    return app
