"""Benchmark harness: seeded scenario repetitions, augmentation sweeps,
and deterministic result emission (JSON, CSV, SVG).

Scenario I compares sequential campaigns against static ML baselines
trained on a larger subset; Scenario II gives the baselines exactly the
campaign's total observation count (the parity condition). Every
repetition re-draws warm-up and baseline subsets from a per-repetition
seed over a fixed train/test split, so reruns are byte-identical.
"""

from __future__ import annotations

import hashlib
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from functools import partial
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np
import pandas as pd
from scipy.spatial.distance import cdist

from ._seeds import derive_seed, rng_for
from .baselines import lasso_fit, ridge_fit
from .dataset import TARGETS, Dataset, SplitDataset, make_pool, meltpool_schema
from .engine import (
    POLICY_BAYESIAN,
    POLICY_EI,
    POLICY_SHANNON,
    CampaignConfig,
    PoolOracle,
    final_report,
    run_ei_bo,
    run_surprise_bo,
)
from .errors import ConfigError, SamplingError, ShapeError
from .gan import (
    CONDITION_LABELS,
    GanConfig,
    SyntheticBatch,
    augment_warmup,
    default_ranges,
    filter_plausible,
    sample,
    train_gan,
)

plt.rcParams["svg.hashsalt"] = "surprise-bo"

RIDGE = "Ridge"
LASSO = "Lasso"
SEQUENTIAL_POLICIES = (POLICY_EI, POLICY_SHANNON, POLICY_BAYESIAN)
DEFAULT_MODELS = SEQUENTIAL_POLICIES + (RIDGE, LASSO)
SCENARIOS = ("I", "II")

# fixed hyperparameters for the benchmark's linear baselines
RIDGE_ALPHA = 0.01
LASSO_ALPHA = 0.01
LASSO_MAX_ITER = 1000
LASSO_TOL = 0.001

# (warmup, sequential budget, scenario-I ML size, scenario-II ML size)
BENCHMARK_PROTOCOLS = {
    "depth": (50, 175, 450, 225),
    "width": (40, 125, 350, 165),
    "length": (30, 90, 200, 120),
}


@dataclass(frozen=True)
class ScenarioSpec:
    """One target's benchmark protocol sizes plus the seeding root."""

    target: str
    warmup: int
    sequential_budget: int
    ml_train_size_scenario1: int
    ml_train_size_scenario2: int
    repetitions: int = 20
    master_seed: int = 0

    def __post_init__(self):
        if self.target not in TARGETS:
            raise ConfigError(f"target must be one of {TARGETS}, got {self.target!r}")
        for name in (
            "warmup",
            "sequential_budget",
            "ml_train_size_scenario1",
            "ml_train_size_scenario2",
            "repetitions",
        ):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be >= 1")
        if self.ml_train_size_scenario2 != self.warmup + self.sequential_budget:
            raise ConfigError(
                "scenario-II parity violated: ml_train_size_scenario2 "
                f"({self.ml_train_size_scenario2}) != warmup + budget "
                f"({self.warmup + self.sequential_budget})"
            )

    def ml_size(self, scenario: str) -> int:
        if scenario == "I":
            return self.ml_train_size_scenario1
        if scenario == "II":
            return self.ml_train_size_scenario2
        raise ConfigError(f"scenario must be one of {SCENARIOS}, got {scenario!r}")


def benchmark_scenario(
    target: str, repetitions: int = 20, master_seed: int = 0
) -> ScenarioSpec:
    if target not in BENCHMARK_PROTOCOLS:
        raise ConfigError(f"no published protocol for target {target!r}")
    warmup, budget, s1, s2 = BENCHMARK_PROTOCOLS[target]
    return ScenarioSpec(
        target=target,
        warmup=warmup,
        sequential_budget=budget,
        ml_train_size_scenario1=s1,
        ml_train_size_scenario2=s2,
        repetitions=repetitions,
        master_seed=master_seed,
    )


def spec_hash(*parts) -> str:
    h = hashlib.blake2b(digest_size=8)
    for part in parts:
        h.update(repr(part).encode())
        h.update(b"\x1f")
    return h.hexdigest()


def rmse(predicted, actual) -> float:
    predicted = np.asarray(predicted, dtype=float).ravel()
    actual = np.asarray(actual, dtype=float).ravel()
    if predicted.shape != actual.shape or predicted.size == 0:
        raise ShapeError(
            f"need equal nonzero lengths, got {predicted.shape} vs {actual.shape}"
        )
    return float(np.sqrt(np.mean((predicted - actual) ** 2)))


@dataclass(eq=False)
class BenchResult:
    """One model's RMSE distribution over a scenario's repetitions."""

    model_name: str
    scenario: str
    target: str
    rmse_values: list[float]
    seeds: list[int]
    config_hash: str

    @property
    def mean(self) -> float:
        return float(np.mean(self.rmse_values))

    @property
    def median(self) -> float:
        return float(np.median(self.rmse_values))

    def to_dict(self) -> dict:
        return {
            "model_name": self.model_name,
            "scenario": self.scenario,
            "target": self.target,
            "rmse_values": [float(v) for v in self.rmse_values],
            "seeds": [int(s) for s in self.seeds],
            "mean": self.mean,
            "median": self.median,
            "config_hash": self.config_hash,
        }


def gp_sampled_dataset(
    n: int,
    seed: int = 0,
    target: str = "depth",
    length_scale: float = 2.0,
    signal_variance: float = 1.0,
    noise_variance: float = 0.05,
    clusters: int | None = None,
    cluster_std: float = 0.3,
) -> Dataset:
    """Draw a smooth 6-D ground truth from a GP prior.

    Targets are one joint draw from the squared-exponential prior plus
    observation noise, so a GP surrogate is well specified and policies
    compete on acquisition alone. Keep length_scale >= 2: standard-normal
    points in 6-D sit ~3.5 apart, and shorter scales decorrelate every
    pair, leaving nothing to learn.

    Features are standard normal by default. `clusters` instead scatters
    rows around that many Gaussian centers (spread `cluster_std`), the
    texture of real process tables where a handful of settings repeat
    with small variations.
    """
    rng = rng_for(seed, "gp-data")
    if clusters is None:
        X = rng.normal(size=(n, 6))
    else:
        if clusters < 1:
            raise ConfigError(f"clusters must be >= 1, got {clusters}")
        centers = rng.normal(size=(clusters, 6))
        X = centers[rng.integers(0, clusters, size=n)]
        X = X + cluster_std * rng.normal(size=(n, 6))
    sq = cdist(X, X, "sqeuclidean")
    K = signal_variance * np.exp(-0.5 * sq / length_scale**2)
    K[np.diag_indices_from(K)] += noise_variance + 1e-10
    y = np.linalg.cholesky(K) @ rng.standard_normal(n)
    return Dataset(schema=meltpool_schema(target), rows=X, targets=y)


def process_table_dataset(
    n: int,
    seed: int = 0,
    target: str = "depth",
    n_settings: int = 6,
    n_materials: int = 3,
    setting_std: float = 0.1,
    material_jitter: float = 0.01,
    length_scale: float = 1.5,
    signal_variance: float = 1.0,
    noise_variance: float = 0.05,
) -> Dataset:
    """GP-sampled ground truth over a realistic process-table design.

    Rows repeat a handful of (power, velocity) settings with small
    variation, and the four material columns move in lockstep as one of
    a few alloy profiles (plus hairline jitter so mixture fitting sees
    nonzero spread). The joint support is a grid of settings x materials
    with a near-constant response per cell, the regime where a
    warm-up-sized generative model can actually learn the correlations.
    """
    if n_settings < 1 or n_materials < 1:
        raise ConfigError("n_settings and n_materials must be >= 1")
    rng = rng_for(seed, "process-data")
    settings = rng.normal(size=(n_settings, 2))
    profiles = rng.normal(size=(n_materials, 4))
    s = rng.integers(0, n_settings, size=n)
    m = rng.integers(0, n_materials, size=n)
    X = np.empty((n, 6))
    X[:, :2] = settings[s] + setting_std * rng.normal(size=(n, 2))
    X[:, 2:] = profiles[m] + material_jitter * rng.normal(size=(n, 4))
    sq = cdist(X, X, "sqeuclidean")
    K = signal_variance * np.exp(-0.5 * sq / length_scale**2)
    K[np.diag_indices_from(K)] += noise_variance + 1e-10
    y = np.linalg.cholesky(K) @ rng.standard_normal(n)
    return Dataset(schema=meltpool_schema(target), rows=X, targets=y)


def _test_fingerprint(test: Dataset) -> str:
    h = hashlib.blake2b(digest_size=16)
    h.update(test.rows.tobytes())
    h.update(test.targets.tobytes())
    return h.hexdigest()


def _campaign_rmse(
    policy: str,
    spec: ScenarioSpec,
    data: SplitDataset,
    seed: int,
    refit_every: int,
    synthetic_warmup: tuple | None = None,
) -> float:
    config = CampaignConfig(
        policy=policy,
        warmup_count=spec.warmup,
        sequential_budget=spec.sequential_budget,
        seed=seed,
        refit_every=refit_every,
    )
    oracle = PoolOracle(data.train.targets)
    runner = run_ei_bo if policy == POLICY_EI else run_surprise_bo
    state = runner(config, oracle, data, synthetic_warmup=synthetic_warmup)
    return final_report(state, data.test)["test_rmse"]


def _baseline_rmse(model_name: str, subset: Dataset, test: Dataset) -> float:
    if model_name == RIDGE:
        model = ridge_fit(subset, RIDGE_ALPHA)
    else:
        model = lasso_fit(
            subset, LASSO_ALPHA, max_iter=LASSO_MAX_ITER, tol=LASSO_TOL
        )
    return rmse(model.predict(test.rows), test.targets)


def _scenario_repetition(
    spec: ScenarioSpec,
    data: SplitDataset,
    models: tuple[str, ...],
    ml_size: int,
    refit_every: int,
    i: int,
) -> tuple[int, dict[str, float]]:
    seed = derive_seed(spec.master_seed, i)
    values: dict[str, float] = {}
    subset = None
    for name in models:
        if name in SEQUENTIAL_POLICIES:
            values[name] = _campaign_rmse(name, spec, data, seed, refit_every)
        else:
            if subset is None:
                idx = np.sort(
                    rng_for(seed, "ml_subset").choice(
                        data.train.n_rows, size=ml_size, replace=False
                    )
                )
                subset = data.train.take(idx)
            values[name] = _baseline_rmse(name, subset, data.test)
    return seed, values


def run_scenario(
    spec: ScenarioSpec,
    data: SplitDataset,
    models: tuple[str, ...] = DEFAULT_MODELS,
    scenario: str = "II",
    refit_every: int = 10,
    jobs: int = 1,
) -> dict[str, BenchResult]:
    """Every model's RMSE distribution over the scenario's repetitions.

    Sequential policies share the per-repetition warm-up/pool draw via a
    common seed; baselines train on a per-repetition random subset of
    the scenario's ML size; everyone scores on the fixed test set.
    Repetitions are independent, so `jobs` > 1 fans them out across
    processes without changing any result.
    """
    n_train = data.train.n_rows
    ml_size = spec.ml_size(scenario)
    for name in models:
        if name not in DEFAULT_MODELS:
            raise ConfigError(f"unknown model {name!r}")
    if jobs < 1:
        raise ConfigError(f"jobs must be >= 1, got {jobs}")
    if n_train - spec.warmup < spec.sequential_budget:
        raise ConfigError(
            f"pool of {n_train - spec.warmup} cannot cover the "
            f"sequential budget {spec.sequential_budget}"
        )
    if ml_size > n_train:
        raise ConfigError(
            f"ML train size {ml_size} exceeds the train split ({n_train})"
        )

    run_hash = spec_hash(spec, scenario, refit_every)
    fingerprint = _test_fingerprint(data.test)
    values: dict[str, list[float]] = {name: [] for name in models}
    seeds: list[int] = []
    if jobs == 1:
        reps = []
        for i in range(spec.repetitions):
            reps.append(
                _scenario_repetition(spec, data, models, ml_size, refit_every, i)
            )
            assert _test_fingerprint(data.test) == fingerprint, (
                "test set mutated during repetition"
            )
    else:
        worker = partial(
            _scenario_repetition, spec, data, models, ml_size, refit_every
        )
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            reps = list(pool.map(worker, range(spec.repetitions)))
        assert _test_fingerprint(data.test) == fingerprint, (
            "test set mutated during run"
        )
    for seed, rep_values in reps:
        seeds.append(seed)
        for name in models:
            values[name].append(rep_values[name])

    return {
        name: BenchResult(
            model_name=name,
            scenario=scenario,
            target=spec.target,
            rmse_values=values[name],
            seeds=seeds,
            config_hash=run_hash,
        )
        for name in models
    }


# ---------------------------------------------------------------------------
# augmentation sweep

# Module-default lrs let the discriminator overpower the generator on
# warm-up-sized fits (tens of rows, 7 columns); the generator saturates
# its tanh slots and nearly every sample lands outside the plausibility
# ranges. Halved lrs on a long schedule with a full-warm-up batch and
# small pac groups keep the pair near equilibrium and teach the joint:
# most synthetic rows then land inside real data cells.
SWEEP_GAN_CONFIG = GanConfig(
    discriminator_lr=0.005,
    generator_lr=0.005,
    epochs=4000,
    batch_size=50,
    pac=5,
)


def _auto_batch(gan_cfg: GanConfig, warmup: int) -> GanConfig:
    """Trim batch_size so a small warm-up still trains: min(configured,
    warm-up rounded down to a multiple of pac)."""
    rounded = (warmup // gan_cfg.pac) * gan_cfg.pac
    batch = min(gan_cfg.batch_size, rounded)
    if batch < gan_cfg.pac:
        raise ConfigError(
            f"warm-up of {warmup} cannot fill one pac group of {gan_cfg.pac}"
        )
    return replace(gan_cfg, batch_size=batch)


def _synthetic_pool(gan, max_count: int, ranges: dict, seed: int) -> np.ndarray:
    """Plausible synthetic rows, conditions interleaved so any prefix
    stays balanced across target terciles. Draws 2x the requirement per
    condition so ordinary filter losses do not starve the sweep."""
    survivors = []
    for cond in CONDITION_LABELS:
        batch = sample(gan, 2 * max_count, cond, seed=derive_seed(seed, cond))
        survivors.append(filter_plausible(batch, ranges).rows)
    depth = max(len(rows) for rows in survivors)
    interleaved = []
    for i in range(depth):
        for rows in survivors:
            if i < len(rows):
                interleaved.append(rows[i])
    if not interleaved:
        return np.zeros((0, len(gan.columns)))
    return np.vstack(interleaved)


def phase2_sweep(
    spec: ScenarioSpec,
    data: SplitDataset,
    gan_cfg: GanConfig | None = None,
    synth_counts: tuple[int, ...] | None = None,
    models: tuple[str, ...] = (POLICY_SHANNON, POLICY_BAYESIAN),
    refit_every: int = 10,
    ranges: dict | None = None,
) -> dict:
    """Mean RMSE versus synthetic warm-up count for the surprise policies.

    Per repetition one GAN is trained on that repetition's real warm-up
    draw; each count c augments with the first c plausible rows, so the
    c=0 point runs the exact Phase-I code path and larger counts share
    the same synthetic prefix ordering. `ranges` overrides the default
    plausibility bounds (the train split's min/max widened by 10%).
    """
    if gan_cfg is None:
        gan_cfg = SWEEP_GAN_CONFIG
    if synth_counts is None:
        synth_counts = tuple(range(0, 51, 5))
    synth_counts = tuple(int(c) for c in synth_counts)
    if any(c < 0 for c in synth_counts):
        raise ConfigError("synthetic counts must be >= 0")
    for name in models:
        if name not in (POLICY_SHANNON, POLICY_BAYESIAN):
            raise ConfigError(f"sweep models must be surprise policies, got {name!r}")
    if data.train.n_rows - spec.warmup < spec.sequential_budget:
        raise ConfigError(
            f"pool of {data.train.n_rows - spec.warmup} cannot cover the "
            f"sequential budget {spec.sequential_budget}"
        )
    gan_cfg = _auto_batch(gan_cfg, spec.warmup)
    if ranges is None:
        ranges = default_ranges(data.train)
    max_count = max(synth_counts)
    fingerprint = _test_fingerprint(data.test)

    values: dict[int, dict[str, list[float]]] = {
        c: {name: [] for name in models} for c in synth_counts
    }
    failed: set[int] = set()
    seeds = []
    for i in range(spec.repetitions):
        seed = derive_seed(spec.master_seed, i)
        seeds.append(seed)
        pool_rows = None
        if max_count > 0:
            warmup_idx, _ = make_pool(
                data.train, spec.warmup, seed=derive_seed(seed, "warmup")
            )
            real_warmup = data.train.take(warmup_idx)
            rep_cfg = replace(gan_cfg, seed=derive_seed(seed, "gan"))
            gan = train_gan(real_warmup, rep_cfg)
            try:
                pool_rows = _synthetic_pool(
                    gan, max_count, ranges, derive_seed(seed, "sample")
                )
            except SamplingError:
                pool_rows = np.zeros((0, len(gan.columns)))
        for c in synth_counts:
            if c in failed:
                continue
            synthetic = None
            if c > 0:
                if pool_rows.shape[0] < c:
                    failed.add(c)
                    continue
                batch = SyntheticBatch(
                    rows=pool_rows,
                    condition="mixed",
                    plausible=np.ones(pool_rows.shape[0], dtype=bool),
                    provenance={"seed": seed, "n_filtered": 0},
                    columns=gan.columns,
                )
                augmented = augment_warmup(real_warmup, batch, c)
                mask = np.asarray(augmented.origin) == "synthetic"
                synthetic = (augmented.rows[mask], augmented.targets[mask])
            for name in models:
                values[c][name].append(
                    _campaign_rmse(
                        name, spec, data, seed, refit_every,
                        synthetic_warmup=synthetic,
                    )
                )
        assert _test_fingerprint(data.test) == fingerprint, (
            "test set mutated during repetition"
        )

    policies = {}
    for name in models:
        by_count = {}
        for c in synth_counts:
            if c in failed:
                continue
            vals = values[c][name]
            by_count[c] = {
                "mean_rmse": float(np.mean(vals)),
                "rmse_values": [float(v) for v in vals],
            }
        ok_counts = [c for c in synth_counts if c not in failed]
        argmin = min(ok_counts, key=lambda c: by_count[c]["mean_rmse"])
        policies[name] = {"by_count": by_count, "argmin_count": int(argmin)}

    return {
        "target": spec.target,
        "counts": list(synth_counts),
        "failed_counts": sorted(failed),
        "seeds": seeds,
        "policies": policies,
        "gan_config_hash": spec_hash(gan_cfg),
        "config_hash": spec_hash(spec, synth_counts, refit_every),
    }


# ---------------------------------------------------------------------------
# aggregation and emission


def summarize(results, external_rows: list[dict] | None = None) -> dict:
    """Comparison table plus boxplot geometry (quartiles, 1.5 IQR whiskers).

    `results` is the run_scenario mapping or a list of BenchResult.
    External rows bring mean/median only and render without a box.
    """
    if isinstance(results, dict):
        results = list(results.values())
    if not results:
        raise ConfigError("nothing to summarize")
    rows = []
    for r in results:
        vals = np.asarray(r.rmse_values, dtype=float)
        q1, q3 = np.percentile(vals, [25, 75])
        iqr = q3 - q1
        inside = vals[(vals >= q1 - 1.5 * iqr) & (vals <= q3 + 1.5 * iqr)]
        rows.append(
            {
                "model_name": r.model_name,
                "scenario": r.scenario,
                "target": r.target,
                "mean_rmse": r.mean,
                "median_rmse": r.median,
                "q1": float(q1),
                "q3": float(q3),
                "whisker_low": float(inside.min()),
                "whisker_high": float(inside.max()),
                "outliers": [
                    float(v)
                    for v in vals[(vals < q1 - 1.5 * iqr) | (vals > q3 + 1.5 * iqr)]
                ],
                "values": [float(v) for v in vals],
                "external": False,
            }
        )
    for ext in external_rows or []:
        rows.append(
            {
                "model_name": str(ext["model_name"]),
                "scenario": str(ext["scenario"]),
                "target": str(ext["target"]),
                "mean_rmse": float(ext["mean_rmse"]),
                "median_rmse": float(ext["median_rmse"]),
                "external": True,
            }
        )
    return {"models": rows}


def _write_json(path: Path, obj) -> None:
    path.write_text(json.dumps(obj, sort_keys=True, indent=2) + "\n")


def _save_svg(fig, path: Path) -> None:
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def emit_scenario_results(
    results: dict[str, BenchResult],
    outdir,
    external_rows: list[dict] | None = None,
) -> list[Path]:
    """results/<target>/<scenario>.json + .csv, boxplot.json, and the
    boxplot SVG. Reruns with the same inputs are byte-identical."""
    results_list = sorted(results.values(), key=lambda r: r.model_name)
    target = results_list[0].target
    scenario = results_list[0].scenario
    outdir = Path(outdir) / target
    outdir.mkdir(parents=True, exist_ok=True)

    payload = {
        "target": target,
        "scenario": scenario,
        "config_hash": results_list[0].config_hash,
        "results": {r.model_name: r.to_dict() for r in results_list},
    }
    json_path = outdir / f"{scenario}.json"
    _write_json(json_path, payload)

    records = []
    for r in results_list:
        for rep, (seed, value) in enumerate(zip(r.seeds, r.rmse_values)):
            records.append(
                {
                    "model_name": r.model_name,
                    "scenario": r.scenario,
                    "target": r.target,
                    "repetition": rep,
                    "seed": seed,
                    "rmse": value,
                }
            )
    csv_path = outdir / f"{scenario}.csv"
    pd.DataFrame.from_records(records).to_csv(csv_path, index=False)

    summary = summarize(results, external_rows=external_rows)
    summary["target"] = target
    summary["scenario"] = scenario
    box_path = outdir / "boxplot.json"
    _write_json(box_path, summary)
    svg_path = outdir / f"{scenario}_boxplot.svg"
    _boxplot_svg(summary, svg_path)
    return [json_path, csv_path, box_path, svg_path]


def _boxplot_svg(summary: dict, path: Path) -> None:
    boxed = [m for m in summary["models"] if not m["external"]]
    external = [m for m in summary["models"] if m["external"]]
    fig, ax = plt.subplots(figsize=(1.2 * len(summary["models"]) + 2, 4.5))
    if boxed:
        ax.boxplot(
            [m["values"] for m in boxed],
            tick_labels=[m["model_name"] for m in boxed],
            whis=1.5,
        )
    for j, m in enumerate(external):
        x = len(boxed) + 1 + j
        ax.plot(x, m["mean_rmse"], marker="D", color="tab:gray")
        ax.annotate(
            m["model_name"],
            (x, m["mean_rmse"]),
            textcoords="offset points",
            xytext=(0, 6),
            ha="center",
            fontsize=8,
        )
    ax.set_ylabel("test RMSE")
    ax.set_title(f"{summary.get('target', '')} scenario {summary.get('scenario', '')}")
    fig.autofmt_xdate(rotation=30)
    fig.tight_layout()
    _save_svg(fig, path)


def emit_sweep(sweep: dict, outdir) -> list[Path]:
    """results/<target>/sweep.json + .csv + .svg with argmin highlighted."""
    outdir = Path(outdir) / sweep["target"]
    outdir.mkdir(parents=True, exist_ok=True)
    json_path = outdir / "sweep.json"
    _write_json(json_path, sweep)

    records = []
    for name, pol in sorted(sweep["policies"].items()):
        for c, cell in sorted(pol["by_count"].items(), key=lambda kv: int(kv[0])):
            records.append(
                {
                    "policy": name,
                    "synthetic_count": int(c),
                    "mean_rmse": cell["mean_rmse"],
                    "is_argmin": int(c) == pol["argmin_count"],
                }
            )
    csv_path = outdir / "sweep.csv"
    pd.DataFrame.from_records(records).to_csv(csv_path, index=False)

    fig, ax = plt.subplots(figsize=(6, 4))
    for name, pol in sorted(sweep["policies"].items()):
        counts = sorted(int(c) for c in pol["by_count"])
        means = [pol["by_count"][c]["mean_rmse"] for c in counts]
        line = ax.plot(counts, means, marker="o", label=name)[0]
        best = pol["argmin_count"]
        ax.plot(
            best,
            pol["by_count"][best]["mean_rmse"],
            marker="*",
            markersize=14,
            color=line.get_color(),
        )
    for c in sweep["failed_counts"]:
        ax.axvline(c, color="tab:red", linestyle=":", alpha=0.5)
    ax.set_xlabel("synthetic warm-up rows")
    ax.set_ylabel("mean test RMSE")
    ax.set_title(f"{sweep['target']} augmentation sweep")
    ax.legend()
    fig.tight_layout()
    svg_path = outdir / "sweep.svg"
    _save_svg(fig, svg_path)
    return [json_path, csv_path, svg_path]
