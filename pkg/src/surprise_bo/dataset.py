"""Canonical data model: ingest, clean, standardize, split, and pool.

Every downstream module works on the same `Dataset` shape: a 6-column
feature matrix plus one melt-pool dimension as target, with standardization
parameters carried alongside so raw units can always be recovered.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
import pandas as pd

from .errors import (
    BudgetError,
    DegenerateScaleError,
    DomainError,
    EmptyDatasetError,
    ParseError,
    PoolExhaustedError,
    SchemaError,
    SplitError,
)

TARGETS = ("depth", "width", "length")

MELTPOOL_FEATURES = (
    "laser_power",
    "scanning_velocity",
    "beam_diameter",
    "density",
    "melting_temperature",
    "thermal_conductivity",
)


@dataclass(frozen=True)
class FeatureSchema:
    """Six feature columns and one melt-pool target column."""

    names: tuple[str, ...]
    target: str

    def __post_init__(self):
        names = tuple(self.names)
        object.__setattr__(self, "names", names)
        if len(names) != 6:
            raise SchemaError(f"expected exactly 6 features, got {len(names)}")
        if len(set(names)) != len(names):
            raise SchemaError("feature names must be unique")
        if self.target not in TARGETS:
            raise SchemaError(
                f"target must be one of {TARGETS}, got {self.target!r}"
            )
        if self.target in names:
            raise SchemaError("target column cannot also be a feature")

    @property
    def columns(self) -> tuple[str, ...]:
        return self.names + (self.target,)


def meltpool_schema(target: str) -> FeatureSchema:
    """Schema for the standard six process/material features."""
    return FeatureSchema(names=MELTPOOL_FEATURES, target=target)


@dataclass(frozen=True)
class Normalization:
    """Per-column standardization parameters, invertible exactly.

    Stds use the n-1 (sample) convention. apply/invert are exact affine
    maps, so round-tripping is limited only by float arithmetic.
    """

    feature_means: np.ndarray
    feature_stds: np.ndarray
    target_mean: float
    target_std: float

    def apply_features(self, rows: np.ndarray) -> np.ndarray:
        return (rows - self.feature_means) / self.feature_stds

    def invert_features(self, rows: np.ndarray) -> np.ndarray:
        return rows * self.feature_stds + self.feature_means

    def apply_target(self, y: np.ndarray) -> np.ndarray:
        return (y - self.target_mean) / self.target_std

    def invert_target(self, y: np.ndarray) -> np.ndarray:
        return y * self.target_std + self.target_mean

    def to_dict(self) -> dict:
        return {
            "feature_means": self.feature_means.tolist(),
            "feature_stds": self.feature_stds.tolist(),
            "target_mean": float(self.target_mean),
            "target_std": float(self.target_std),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Normalization":
        return cls(
            feature_means=np.asarray(d["feature_means"], dtype=float),
            feature_stds=np.asarray(d["feature_stds"], dtype=float),
            target_mean=float(d["target_mean"]),
            target_std=float(d["target_std"]),
        )


@dataclass(frozen=True, eq=False)
class Dataset:
    """Immutable table of experiments: features `rows`, outcomes `targets`.

    `normalization` is set once the dataset has been standardized; it holds
    the parameters needed to map back to raw units. `cleaning` carries the
    ingest report when the dataset came from `load_and_clean`. `origin`
    tags each row "real" or "synthetic" when the dataset was augmented.
    """

    schema: FeatureSchema
    rows: np.ndarray
    targets: np.ndarray
    normalization: Normalization | None = None
    cleaning: dict | None = None
    origin: tuple[str, ...] | None = None

    def __post_init__(self):
        rows = np.asarray(self.rows, dtype=float)
        targets = np.asarray(self.targets, dtype=float)
        if rows.ndim != 2 or rows.shape[1] != len(self.schema.names):
            raise SchemaError(
                f"rows must be (n, {len(self.schema.names)}), got {rows.shape}"
            )
        if targets.shape != (rows.shape[0],):
            raise SchemaError(
                f"targets must be length {rows.shape[0]}, got {targets.shape}"
            )
        if not (np.isfinite(rows).all() and np.isfinite(targets).all()):
            raise ParseError("dataset contains non-finite values")
        rows.setflags(write=False)
        targets.setflags(write=False)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "targets", targets)
        if self.origin is not None:
            origin = tuple(self.origin)
            if len(origin) != rows.shape[0]:
                raise SchemaError(
                    f"origin must tag all {rows.shape[0]} rows, got {len(origin)}"
                )
            object.__setattr__(self, "origin", origin)

    @property
    def n_rows(self) -> int:
        return self.rows.shape[0]

    def take(self, indices: np.ndarray) -> "Dataset":
        """Row-subset view sharing schema and normalization."""
        idx = np.asarray(indices, dtype=int)
        origin = None
        if self.origin is not None:
            origin = tuple(self.origin[i] for i in idx)
        return Dataset(
            schema=self.schema,
            rows=self.rows[idx],
            targets=self.targets[idx],
            normalization=self.normalization,
            origin=origin,
        )


@dataclass(frozen=True, eq=False)
class SplitDataset:
    """Disjoint train/test partition of one parent dataset."""

    train: Dataset
    test: Dataset
    seed: int
    train_fraction: float


@dataclass(eq=False)
class CandidatePool:
    """Train-row indices still available to a campaign.

    Mutated only by the owning campaign (single writer). The union of
    available and consumed indices is constant for the pool's lifetime.
    """

    indices: list[int]
    consumed: list[int] = field(default_factory=list)

    def __post_init__(self):
        self.indices = [int(i) for i in self.indices]
        self.consumed = [int(i) for i in self.consumed]
        overlap = set(self.indices) & set(self.consumed)
        if overlap:
            raise DomainError(f"indices overlap consumed: {sorted(overlap)}")
        self._initial_size = len(self.indices) + len(self.consumed)

    def __len__(self) -> int:
        return len(self.indices)

    @property
    def initial_size(self) -> int:
        return self._initial_size

    def is_available(self, index: int) -> bool:
        return index in set(self.indices)

    def consume(self, index: int) -> None:
        index = int(index)
        if not self.indices:
            raise PoolExhaustedError("candidate pool is empty")
        try:
            self.indices.remove(index)
        except ValueError:
            raise DomainError(f"index {index} is not available in the pool")
        self.consumed.append(index)

    def snapshot(self) -> dict:
        return {"indices": list(self.indices), "consumed": list(self.consumed)}


def load_and_clean(path, schema: FeatureSchema) -> Dataset:
    """Read a CSV, drop incomplete and duplicate rows, report the drops.

    Parameters
    ----------
    path : str or Path
        CSV with a header row containing at least the schema's columns.
    schema : FeatureSchema
        Declares which columns to keep and which is the target.

    Returns
    -------
    Dataset with a `cleaning` report dict:
    ``{dropped_missing, dropped_duplicate, rows_in, rows_out}``.

    Raises
    ------
    SchemaError, ParseError, EmptyDatasetError, DegenerateScaleError
    """
    frame = pd.read_csv(path)
    missing_cols = [c for c in schema.columns if c not in frame.columns]
    if missing_cols:
        raise SchemaError(f"missing required columns: {missing_cols}")
    frame = frame[list(schema.columns)]
    rows_in = len(frame)

    numeric = pd.DataFrame(index=frame.index)
    for col in schema.columns:
        raw = frame[col]
        coerced = pd.to_numeric(raw, errors="coerce")
        bad = coerced.isna() & raw.notna()
        if bad.any():
            row = int(bad.idxmax())
            raise ParseError(
                f"non-numeric value {raw[row]!r} at row {row}, column {col!r}",
                row=row,
                column=col,
            )
        numeric[col] = coerced.astype(float)

    complete = numeric.dropna()
    dropped_missing = rows_in - len(complete)
    deduped = complete.drop_duplicates(keep="first")
    dropped_duplicate = len(complete) - len(deduped)
    if len(deduped) == 0:
        raise EmptyDatasetError("no rows survived cleaning")

    rows = deduped[list(schema.names)].to_numpy(dtype=float)
    targets = deduped[schema.target].to_numpy(dtype=float)
    if len(rows) > 1:
        for j, col in enumerate(schema.names):
            if rows[:, j].std(ddof=1) == 0.0:
                raise DegenerateScaleError(
                    f"column {col!r} is constant", column=col
                )
        if targets.std(ddof=1) == 0.0:
            raise DegenerateScaleError(
                f"column {schema.target!r} is constant", column=schema.target
            )

    report = {
        "dropped_missing": int(dropped_missing),
        "dropped_duplicate": int(dropped_duplicate),
        "rows_in": int(rows_in),
        "rows_out": int(len(deduped)),
    }
    return Dataset(schema=schema, rows=rows, targets=targets, cleaning=report)


def normalize(ds: Dataset) -> Dataset:
    """Standardize every column to zero mean and unit sample std.

    The fitted means/stds are stored on the result so `denormalize`
    recovers raw values within float round-off.
    """
    if ds.n_rows < 2:
        raise DegenerateScaleError("need at least 2 rows to estimate a std")
    means = ds.rows.mean(axis=0)
    stds = ds.rows.std(axis=0, ddof=1)
    for j, col in enumerate(ds.schema.names):
        if stds[j] == 0.0:
            raise DegenerateScaleError(f"column {col!r} is constant", column=col)
    t_mean = float(ds.targets.mean())
    t_std = float(ds.targets.std(ddof=1))
    if t_std == 0.0:
        raise DegenerateScaleError(
            f"column {ds.schema.target!r} is constant", column=ds.schema.target
        )
    norm = Normalization(
        feature_means=means,
        feature_stds=stds,
        target_mean=t_mean,
        target_std=t_std,
    )
    return Dataset(
        schema=ds.schema,
        rows=norm.apply_features(ds.rows),
        targets=norm.apply_target(ds.targets),
        normalization=norm,
        cleaning=ds.cleaning,
    )


def denormalize(ds: Dataset) -> Dataset:
    """Invert `normalize`; requires the stored parameters."""
    if ds.normalization is None:
        raise DomainError("dataset carries no normalization parameters")
    norm = ds.normalization
    return Dataset(
        schema=ds.schema,
        rows=norm.invert_features(ds.rows),
        targets=norm.invert_target(ds.targets),
        normalization=None,
        cleaning=ds.cleaning,
    )


def split(ds: Dataset, fraction: float = 0.75, seed: int = 0) -> SplitDataset:
    """Seeded random train/test partition.

    Train size is floor(n * fraction); a tiny epsilon guards exact
    ratios like 0.75 * 4 from one-ulp float undershoot.
    """
    if not 0.0 < fraction < 1.0:
        raise SplitError(f"fraction must be in (0, 1), got {fraction}")
    n = ds.n_rows
    if n < 2:
        raise SplitError("need at least 2 rows to split")
    train_size = math.floor(n * fraction + 1e-9)
    if train_size == 0 or train_size == n:
        raise SplitError(
            f"fraction {fraction} gives an empty side for n={n}"
        )
    rng = np.random.default_rng(seed)
    perm = rng.permutation(n)
    train_idx = np.sort(perm[:train_size])
    test_idx = np.sort(perm[train_size:])
    return SplitDataset(
        train=ds.take(train_idx),
        test=ds.take(test_idx),
        seed=seed,
        train_fraction=fraction,
    )


def make_pool(
    train: Dataset, warmup_count: int, seed: int = 0
) -> tuple[np.ndarray, CandidatePool]:
    """Draw warm-up rows without replacement; pool the rest.

    Returns (warmup indices into `train`, CandidatePool of the remaining
    train indices in ascending order). Deterministic per seed.
    """
    n = train.n_rows
    if warmup_count < 0:
        raise BudgetError(f"warmup_count must be >= 0, got {warmup_count}")
    if warmup_count >= n:
        raise BudgetError(
            f"warmup_count {warmup_count} must be < train size {n}"
        )
    rng = np.random.default_rng(seed)
    warmup = np.sort(rng.choice(n, size=warmup_count, replace=False))
    remaining = np.setdiff1d(np.arange(n), warmup)
    return warmup, CandidatePool(indices=remaining.tolist())
