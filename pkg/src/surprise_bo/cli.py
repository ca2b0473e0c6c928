"""Command-line entry point: dataset preparation, single campaign runs,
GAN training, benchmark scenarios and sweeps, and the HTTP service.

Exit codes: 0 success, 2 usage error, 3 invalid configuration, 4 data
error. Failures print one JSON line ({"code", "message"}) on stderr.
Every run echoes its merged configuration (defaults < --config file <
flags) to <out>/<subcommand>_config.json, and reruns with identical
inputs rewrite identical bytes.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import pandas as pd

from . import __version__
from .bench import (
    DEFAULT_MODELS,
    LASSO,
    RIDGE,
    ScenarioSpec,
    benchmark_scenario,
    emit_scenario_results,
    emit_sweep,
    gp_sampled_dataset,
    phase2_sweep,
    run_scenario,
)
from .dataset import TARGETS, load_and_clean, meltpool_schema, normalize, split
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
from .errors import ConfigError, DataError, SurpriseBoError
from .gan import (
    CONDITION_LABELS,
    GanConfig,
    default_ranges,
    export_batch_csv,
    filter_plausible,
    generator_snapshot,
    sample,
    train_gan,
)

EXIT_USAGE = 2
EXIT_CONFIG = 3
EXIT_DATA = 4

DATA_ENV = "SURPRISE_BO_DATA"

_MODEL_ALIASES = {name.lower(): name for name in DEFAULT_MODELS}
_MODEL_ALIASES.update(
    {"shannon": POLICY_SHANNON, "bayesian": POLICY_BAYESIAN}
)

PREPARE_DEFAULTS = {
    "data": None,
    "target": "depth",
    "fraction": 0.75,
    "seed": 0,
    "out": "results",
}

CAMPAIGN_DEFAULTS = {
    "policy": "shannon",
    "target": "depth",
    "warmup": 10,
    "budget": 20,
    "seed": 0,
    "refit_every": 10,
    "oracle": "pool",
    "data": None,
    "rows": 400,
    "data_seed": 0,
    "fraction": 0.75,
    "out": "results",
}

GAN_DEFAULTS = {
    "data": None,
    "target": "depth",
    "epochs": 500,
    "batch_size": 25,
    "pac": 10,
    "generator_lr": 0.01,
    "discriminator_lr": 0.01,
    "embedding_dim": 32,
    "samples": 50,
    "condition": "all",
    "seed": 0,
    "out": "results",
}

BENCH_DEFAULTS = {
    "target": "depth",
    "scenario": "II",
    "reps": 20,
    "seed": 0,
    "warmup": None,
    "budget": None,
    "ml_size_1": None,
    "ml_size_2": None,
    "models": None,
    "refit_every": 10,
    "jobs": None,
    "sweep": False,
    "counts": None,
    "external_baselines": None,
    "data": None,
    "rows": 1200,
    "data_seed": 0,
    "fraction": 0.75,
    "out": "results",
}

SERVE_DEFAULTS = {
    "host": "127.0.0.1",
    "port": 8000,
    "out": "results",
}


def _error_line(code: str, message: str, status: int) -> int:
    print(
        json.dumps({"code": code, "message": message}, sort_keys=True),
        file=sys.stderr,
    )
    return status


class _Parser(argparse.ArgumentParser):
    """argparse's default error path prints usage prose and exits 2;
    downstream tooling wants one parseable line instead."""

    def error(self, message):
        raise SystemExit(_error_line("usage_error", message, EXIT_USAGE))


def _merged_config(args: argparse.Namespace, defaults: dict) -> dict:
    merged = dict(defaults)
    config_path = getattr(args, "config", None)
    if config_path is not None:
        path = Path(config_path)
        if not path.exists():
            raise ConfigError(f"config file not found: {path}")
        try:
            loaded = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file is not valid JSON: {exc}")
        if not isinstance(loaded, dict):
            raise ConfigError("config file must hold a JSON object")
        unknown = sorted(set(loaded) - set(defaults))
        if unknown:
            raise ConfigError(f"unknown config keys: {unknown}")
        merged.update(loaded)
    for key in defaults:
        value = getattr(args, key, None)
        if value is not None:
            merged[key] = value
    return merged


def _echo_config(out: Path, name: str, cfg: dict) -> None:
    out.mkdir(parents=True, exist_ok=True)
    path = out / f"{name}_config.json"
    path.write_text(json.dumps(cfg, indent=2, sort_keys=True) + "\n")


def _emit(obj: dict) -> None:
    print(json.dumps(obj, sort_keys=True))


def _resolve_data(value) -> Path:
    """Relative paths fall back to $SURPRISE_BO_DATA when absent locally."""
    if value is None:
        raise ConfigError("a data file is required (--data or config key 'data')")
    path = Path(value)
    if path.is_absolute() or path.exists():
        return path
    root = os.environ.get(DATA_ENV)
    if root:
        candidate = Path(root) / path
        if candidate.exists():
            return candidate
    return path


def _check_target(target: str) -> str:
    if target not in TARGETS:
        raise ConfigError(f"target must be one of {TARGETS}, got {target!r}")
    return target


def _model_name(value) -> str:
    key = str(value).strip().lower()
    if key not in _MODEL_ALIASES:
        raise ConfigError(
            f"unknown model {value!r}; choose from "
            f"{sorted(set(_MODEL_ALIASES.values()))}"
        )
    return _MODEL_ALIASES[key]


def _model_list(value) -> tuple[str, ...] | None:
    if value is None:
        return None
    if isinstance(value, str):
        value = [part for part in value.split(",") if part.strip()]
    if not isinstance(value, (list, tuple)) or not value:
        raise ConfigError("models must be a nonempty comma-separated list")
    return tuple(_model_name(v) for v in value)


def _policy_name(value) -> str:
    name = _model_name(value)
    if name in (RIDGE, LASSO):
        raise ConfigError(f"{name} is a static baseline, not a campaign policy")
    return name


def _int_list(value, flag: str) -> tuple[int, ...] | None:
    if value is None:
        return None
    if isinstance(value, str):
        value = [part for part in value.split(",") if part.strip()]
    if not isinstance(value, (list, tuple)) or not value:
        raise ConfigError(f"{flag} must be a nonempty comma-separated list")
    try:
        return tuple(int(v) for v in value)
    except (TypeError, ValueError):
        raise ConfigError(f"{flag} entries must be integers, got {value!r}")


def _load_csv_dataset(cfg: dict):
    path = _resolve_data(cfg["data"])
    cfg["data"] = str(path)
    return normalize(load_and_clean(path, meltpool_schema(cfg["target"])))


def _dataset_csv(ds, path: Path) -> None:
    frame = pd.DataFrame(ds.rows, columns=list(ds.schema.names))
    frame[ds.schema.target] = ds.targets
    frame.to_csv(path, index=False)


# ---------------------------------------------------------------------------
# subcommand handlers


def _cmd_prepare(args: argparse.Namespace) -> int:
    cfg = _merged_config(args, PREPARE_DEFAULTS)
    _check_target(cfg["target"])
    path = _resolve_data(cfg["data"])
    cfg["data"] = str(path)
    out = Path(cfg["out"])

    cleaned = load_and_clean(path, meltpool_schema(cfg["target"]))
    normed = normalize(cleaned)
    # split the raw-unit table; the permutation depends only on (n, seed)
    parts = split(cleaned, float(cfg["fraction"]), int(cfg["seed"]))

    _echo_config(out, "prepare", cfg)
    (out / "cleaning_report.json").write_text(
        json.dumps(cleaned.cleaning, indent=2, sort_keys=True) + "\n"
    )
    (out / "normalization.json").write_text(
        json.dumps(normed.normalization.to_dict(), indent=2, sort_keys=True) + "\n"
    )
    _dataset_csv(parts.train, out / "train.csv")
    _dataset_csv(parts.test, out / "test.csv")

    _emit(
        {
            **cleaned.cleaning,
            "train_rows": parts.train.n_rows,
            "test_rows": parts.test.n_rows,
            "out": str(out),
        }
    )
    return 0


def _cmd_campaign(args: argparse.Namespace) -> int:
    cfg = _merged_config(args, CAMPAIGN_DEFAULTS)
    _check_target(cfg["target"])
    policy = _policy_name(cfg["policy"])
    cfg["policy"] = policy
    out = Path(cfg["out"])

    if cfg["oracle"] == "synthetic":
        ds = gp_sampled_dataset(
            int(cfg["rows"]), seed=int(cfg["data_seed"]), target=cfg["target"]
        )
    elif cfg["oracle"] == "pool":
        ds = _load_csv_dataset(cfg)
    else:
        raise ConfigError(
            f"oracle must be 'pool' or 'synthetic', got {cfg['oracle']!r}"
        )
    parts = split(ds, float(cfg["fraction"]), int(cfg["data_seed"]))

    campaign_cfg = CampaignConfig(
        policy=policy,
        warmup_count=int(cfg["warmup"]),
        sequential_budget=int(cfg["budget"]),
        seed=int(cfg["seed"]),
        refit_every=int(cfg["refit_every"]),
    )
    _echo_config(out, "campaign", cfg)
    oracle = PoolOracle(parts.train.targets)
    runner = run_ei_bo if policy == POLICY_EI else run_surprise_bo
    state = runner(campaign_cfg, oracle, parts)
    report = final_report(state, parts.test)

    (out / "report.json").write_text(
        json.dumps(report, indent=2, sort_keys=True) + "\n"
    )
    _emit(
        {
            "policy": policy,
            "target": cfg["target"],
            "test_rmse": report["test_rmse"],
            "n_observations": report["n_observations"],
            "n_flagged": report["n_flagged"],
            "out": str(out),
        }
    )
    return 0


def _cmd_gan(args: argparse.Namespace) -> int:
    cfg = _merged_config(args, GAN_DEFAULTS)
    _check_target(cfg["target"])
    out = Path(cfg["out"])

    condition = str(cfg["condition"])
    if condition == "all":
        conditions = CONDITION_LABELS
    elif condition in CONDITION_LABELS:
        conditions = (condition,)
    else:
        raise ConfigError(
            f"condition must be 'all' or one of {CONDITION_LABELS}, "
            f"got {condition!r}"
        )

    ds = _load_csv_dataset(cfg)
    gan_cfg = GanConfig(
        embedding_dim=int(cfg["embedding_dim"]),
        generator_lr=float(cfg["generator_lr"]),
        discriminator_lr=float(cfg["discriminator_lr"]),
        batch_size=int(cfg["batch_size"]),
        epochs=int(cfg["epochs"]),
        pac=int(cfg["pac"]),
        seed=int(cfg["seed"]),
    )
    _echo_config(out, "gan", cfg)
    gan = train_gan(ds, gan_cfg)
    ranges = default_ranges(ds)

    (out / "generator.json").write_text(
        json.dumps(generator_snapshot(gan), indent=2, sort_keys=True) + "\n"
    )
    pd.DataFrame(gan.loss_history).to_csv(out / "losses.csv", index=False)

    kept: dict[str, int] = {}
    for i, cond in enumerate(conditions):
        batch = sample(
            gan, int(cfg["samples"]), cond, seed=int(cfg["seed"]) + i
        )
        batch = filter_plausible(batch, ranges)
        kept[cond] = int(batch.rows.shape[0])
        export_batch_csv(batch, out / f"synthetic_{cond}.csv")

    _emit(
        {
            "target": cfg["target"],
            "epochs": gan_cfg.epochs,
            "requested_per_condition": int(cfg["samples"]),
            "kept": kept,
            "out": str(out),
        }
    )
    return 0


def _cmd_bench(args: argparse.Namespace) -> int:
    cfg = _merged_config(args, BENCH_DEFAULTS)
    _check_target(cfg["target"])
    out = Path(cfg["out"])
    models = _model_list(cfg["models"])

    if cfg["data"] is not None:
        ds = _load_csv_dataset(cfg)
    else:
        ds = gp_sampled_dataset(
            int(cfg["rows"]), seed=int(cfg["data_seed"]), target=cfg["target"]
        )
    parts = split(ds, float(cfg["fraction"]), int(cfg["data_seed"]))

    base = benchmark_scenario(cfg["target"], int(cfg["reps"]), int(cfg["seed"]))
    warmup = int(cfg["warmup"]) if cfg["warmup"] is not None else base.warmup
    budget = (
        int(cfg["budget"])
        if cfg["budget"] is not None
        else base.sequential_budget
    )
    ml_1 = (
        int(cfg["ml_size_1"])
        if cfg["ml_size_1"] is not None
        else base.ml_train_size_scenario1
    )
    # scenario II size follows the parity rule unless pinned explicitly
    ml_2 = (
        int(cfg["ml_size_2"])
        if cfg["ml_size_2"] is not None
        else warmup + budget
    )
    spec = ScenarioSpec(
        target=cfg["target"],
        warmup=warmup,
        sequential_budget=budget,
        ml_train_size_scenario1=ml_1,
        ml_train_size_scenario2=ml_2,
        repetitions=int(cfg["reps"]),
        master_seed=int(cfg["seed"]),
    )

    jobs = int(cfg["jobs"]) if cfg["jobs"] is not None else (os.cpu_count() or 1)
    cfg["jobs"] = jobs

    if cfg["sweep"]:
        counts = _int_list(cfg["counts"], "counts")
        _echo_config(out, "bench", cfg)
        sweep = phase2_sweep(
            spec,
            parts,
            synth_counts=counts,
            models=models or (POLICY_SHANNON, POLICY_BAYESIAN),
            refit_every=int(cfg["refit_every"]),
        )
        paths = emit_sweep(sweep, out)
        _emit(
            {
                "target": cfg["target"],
                "mode": "sweep",
                "argmin_count": {
                    name: pol["argmin_count"]
                    for name, pol in sweep["policies"].items()
                },
                "failed_counts": sweep["failed_counts"],
                "files": [str(p) for p in paths],
            }
        )
        return 0

    if cfg["counts"] is not None:
        raise ConfigError("--counts only applies with --sweep")
    external = None
    if cfg["external_baselines"] is not None:
        ext_path = Path(cfg["external_baselines"])
        if not ext_path.exists():
            raise ConfigError(f"external baselines file not found: {ext_path}")
        try:
            external = json.loads(ext_path.read_text())
        except json.JSONDecodeError as exc:
            raise ConfigError(f"external baselines file is not valid JSON: {exc}")
        if not isinstance(external, list):
            raise ConfigError("external baselines must be a JSON list of rows")

    _echo_config(out, "bench", cfg)
    results = run_scenario(
        spec,
        parts,
        models=models or DEFAULT_MODELS,
        scenario=str(cfg["scenario"]),
        refit_every=int(cfg["refit_every"]),
        jobs=jobs,
    )
    paths = emit_scenario_results(results, out, external_rows=external)
    _emit(
        {
            "target": cfg["target"],
            "mode": "scenario",
            "scenario": str(cfg["scenario"]),
            "mean_rmse": {name: r.mean for name, r in sorted(results.items())},
            "files": [str(p) for p in paths],
        }
    )
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    cfg = _merged_config(args, SERVE_DEFAULTS)
    out = Path(cfg["out"])
    _echo_config(out, "serve", cfg)

    # imported lazily so the other subcommands work without the HTTP stack
    import uvicorn

    from .service import create_app

    app = create_app(storage=out / "sessions")
    _emit({"host": cfg["host"], "port": int(cfg["port"])})
    uvicorn.run(app, host=cfg["host"], port=int(cfg["port"]), log_level="warning")
    return 0


# ---------------------------------------------------------------------------
# parser


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON file with defaults for this subcommand")
    p.add_argument("--out", help="output directory (default: results)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="surprise-bo",
        description=(
            "Surprise-guided sequential experiment campaigns: data prep, "
            "single runs, GAN augmentation, benchmarks, and an HTTP service."
        ),
    )
    parser.add_argument(
        "--version", action="version", version=f"%(prog)s {__version__}"
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser(
        "prepare", help="load, clean, normalize, and split a CSV dataset"
    )
    _add_common(p)
    p.add_argument("--data", help="CSV with the six feature columns and a target")
    p.add_argument("--target", help="depth, width, or length (default: depth)")
    p.add_argument("--fraction", type=float, help="train fraction (default: 0.75)")
    p.add_argument("--seed", type=int, help="split seed (default: 0)")
    p.set_defaults(handler=_cmd_prepare)

    p = sub.add_parser("campaign", help="run one sequential campaign")
    _add_common(p)
    p.add_argument(
        "--policy", help="shannon, bayesian, or ei (default: shannon)"
    )
    p.add_argument("--target", help="depth, width, or length (default: depth)")
    p.add_argument("--warmup", type=int, help="warm-up draws (default: 10)")
    p.add_argument(
        "--budget", type=int, help="sequential observations (default: 20)"
    )
    p.add_argument("--seed", type=int, help="campaign seed (default: 0)")
    p.add_argument(
        "--refit-every",
        dest="refit_every",
        type=int,
        help="hyperparameter refit cadence (default: 10)",
    )
    p.add_argument(
        "--oracle",
        help="'pool' looks targets up in --data; 'synthetic' generates a dataset",
    )
    p.add_argument("--data", help="CSV pool for the pool oracle")
    p.add_argument(
        "--rows", type=int, help="synthetic dataset size (default: 400)"
    )
    p.add_argument(
        "--data-seed",
        dest="data_seed",
        type=int,
        help="dataset generation/split seed (default: 0)",
    )
    p.add_argument("--fraction", type=float, help="train fraction (default: 0.75)")
    p.set_defaults(handler=_cmd_campaign)

    p = sub.add_parser(
        "gan", help="train the tabular GAN, then sample and filter rows"
    )
    _add_common(p)
    p.add_argument("--data", help="CSV training table")
    p.add_argument("--target", help="depth, width, or length (default: depth)")
    p.add_argument("--epochs", type=int, help="training epochs (default: 500)")
    p.add_argument(
        "--batch-size", dest="batch_size", type=int, help="batch size (default: 25)"
    )
    p.add_argument("--pac", type=int, help="rows per discriminator pack (default: 10)")
    p.add_argument(
        "--generator-lr",
        dest="generator_lr",
        type=float,
        help="generator learning rate (default: 0.01)",
    )
    p.add_argument(
        "--discriminator-lr",
        dest="discriminator_lr",
        type=float,
        help="discriminator learning rate (default: 0.01)",
    )
    p.add_argument(
        "--embedding-dim",
        dest="embedding_dim",
        type=int,
        help="generator input dimension (default: 32)",
    )
    p.add_argument(
        "--samples", type=int, help="rows to draw per condition (default: 50)"
    )
    p.add_argument(
        "--condition", help="low, mid, high, or all (default: all)"
    )
    p.add_argument("--seed", type=int, help="training seed (default: 0)")
    p.set_defaults(handler=_cmd_gan)

    p = sub.add_parser(
        "bench", help="repeated-seed scenario comparison or augmentation sweep"
    )
    _add_common(p)
    p.add_argument("--target", help="depth, width, or length (default: depth)")
    p.add_argument("--scenario", help="I or II (default: II)")
    p.add_argument("--reps", type=int, help="repetitions (default: 20)")
    p.add_argument("--seed", type=int, help="master seed (default: 0)")
    p.add_argument(
        "--warmup", type=int, help="override the published warm-up count"
    )
    p.add_argument(
        "--budget", type=int, help="override the published sequential budget"
    )
    p.add_argument(
        "--ml-size-1",
        dest="ml_size_1",
        type=int,
        help="override the scenario-I baseline train size",
    )
    p.add_argument(
        "--ml-size-2",
        dest="ml_size_2",
        type=int,
        help="override the scenario-II baseline train size (default: warmup+budget)",
    )
    p.add_argument(
        "--models",
        help="comma list: ei,shannon,bayesian,ridge,lasso (default: all)",
    )
    p.add_argument(
        "--refit-every",
        dest="refit_every",
        type=int,
        help="hyperparameter refit cadence (default: 10)",
    )
    p.add_argument(
        "--jobs", type=int, help="parallel repetitions (default: available cores)"
    )
    p.add_argument(
        "--sweep",
        action="store_true",
        default=None,
        help="sweep synthetic warm-up counts instead of comparing models",
    )
    p.add_argument(
        "--counts", help="comma list of synthetic counts for --sweep"
    )
    p.add_argument(
        "--external-baselines",
        dest="external_baselines",
        help="JSON list of published rows to overlay on the comparison",
    )
    p.add_argument("--data", help="CSV dataset; omit to generate one")
    p.add_argument(
        "--rows", type=int, help="generated dataset size (default: 1200)"
    )
    p.add_argument(
        "--data-seed",
        dest="data_seed",
        type=int,
        help="dataset generation/split seed (default: 0)",
    )
    p.add_argument("--fraction", type=float, help="train fraction (default: 0.75)")
    p.set_defaults(handler=_cmd_bench)

    p = sub.add_parser("serve", help="start the campaign HTTP service")
    _add_common(p)
    p.add_argument("--host", help="bind address (default: 127.0.0.1)")
    p.add_argument("--port", type=int, help="bind port (default: 8000)")
    p.set_defaults(handler=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except ConfigError as exc:
        return _error_line(exc.code, str(exc), EXIT_CONFIG)
    except DataError as exc:
        return _error_line(exc.code, str(exc), EXIT_DATA)
    except FileNotFoundError as exc:
        return _error_line("data_error", str(exc), EXIT_DATA)
    except SurpriseBoError as exc:
        return _error_line(exc.code, str(exc), EXIT_CONFIG)


if __name__ == "__main__":
    sys.exit(main())
