"""Surprise scoring for incoming observations.

Two notions are supported. Shannon surprise scores a single observation by
its negative log-likelihood under the posterior predictive and flags it
when it falls outside the mean +/- k*sigma credible band. Bayesian surprise
scores how much one observation moves the whole posterior, as the mean
Gaussian KL between predictive marginals on a fixed reference grid, flagged
against a threshold calibrated from warm-up data.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.stats import qmc

from .errors import CalibrationError, DomainError
from .gp import GpModel, build_model, predict

SHANNON = "Shannon"
BAYESIAN = "Bayesian"


@dataclass(frozen=True)
class Calibration:
    """Warm-up KL statistics fixing the Bayesian surprise threshold."""

    mean: float
    std: float
    k: float
    n_samples: int

    @property
    def threshold(self) -> float:
        return self.mean + self.k * self.std


@dataclass(frozen=True)
class SurpriseConfig:
    k_shannon: float = 1.96
    k_bayesian: float = 2.0
    reference_grid_size: int = 64
    calibration: Calibration | None = None

    def __post_init__(self):
        if self.k_shannon <= 0 or self.k_bayesian <= 0:
            raise DomainError("surprise multipliers must be positive")
        if self.reference_grid_size < 8:
            raise DomainError("reference grid needs at least 8 points")

    def with_calibration(self, calibration: Calibration) -> "SurpriseConfig":
        return replace(self, calibration=calibration)


@dataclass(frozen=True)
class SurpriseVerdict:
    kind: str
    value: float
    threshold: float
    flagged: bool
    interval: tuple[float, float] | None = None

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "value": self.value,
            "threshold": self.threshold,
            "flagged": self.flagged,
            "interval": list(self.interval) if self.interval else None,
        }


def shannon_surprise(
    y_star: float, mu_star: float, sigma_star: float, cfg: SurpriseConfig
) -> SurpriseVerdict:
    """Negative log-likelihood of one observation, flagged outside the band.

    `sigma_star` is the predictive standard deviation including observation
    noise. The flag criterion |y - mu| > k*sigma is strict, so a value
    sitting exactly on the band edge is not flagged.
    """
    if sigma_star <= 0:
        raise DomainError(f"sigma_star must be > 0, got {sigma_star}")
    dev = y_star - mu_star
    value = 0.5 * math.log(2.0 * math.pi * sigma_star**2) + dev**2 / (
        2.0 * sigma_star**2
    )
    # NLL exceeds this exactly when |dev| > k*sigma, keeping one flag rule
    threshold = (
        0.5 * math.log(2.0 * math.pi * sigma_star**2)
        + 0.5 * cfg.k_shannon**2
    )
    half_width = cfg.k_shannon * sigma_star
    return SurpriseVerdict(
        kind=SHANNON,
        value=value,
        threshold=threshold,
        flagged=abs(dev) > half_width,
        interval=(mu_star - half_width, mu_star + half_width),
    )


def gaussian_kl(
    p: tuple[float, float], q: tuple[float, float]
) -> float:
    """KL(N(p) || N(q)) in nats; p and q are (mean, variance) pairs."""
    mu_p, var_p = p
    mu_q, var_q = q
    if var_p <= 0 or var_q <= 0:
        raise DomainError("variances must be positive")
    return (
        0.5 * math.log(var_q / var_p)
        + (var_p + (mu_p - mu_q) ** 2) / (2.0 * var_q)
        - 0.5
    )


def reference_grid(
    bounds: np.ndarray, size: int, seed: int
) -> np.ndarray:
    """Seeded Latin-hypercube sample over a feature box.

    `bounds` is (dim, 2) rows of (low, high); degenerate rows collapse to
    their midpoint.
    """
    bounds = np.atleast_2d(np.asarray(bounds, dtype=float))
    if bounds.shape[1] != 2:
        raise DomainError("bounds must be (dim, 2)")
    dim = bounds.shape[0]
    sampler = qmc.LatinHypercube(d=dim, seed=seed)
    unit = sampler.random(size)
    low, high = bounds[:, 0], bounds[:, 1]
    return low + unit * (high - low)


def _marginals(model: GpModel, grid: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    post = predict(model, grid)
    # include noise so variances stay bounded away from zero
    return post.mean, post.variance + model.hyper.noise_variance


def bayesian_surprise(
    model_before: GpModel,
    model_after: GpModel,
    grid: np.ndarray,
    cfg: SurpriseConfig,
) -> SurpriseVerdict:
    """Mean KL between predictive marginals before and after one update."""
    if model_before.hyper != model_after.hyper:
        raise DomainError("models must share hyperparameters")
    grid = np.atleast_2d(np.asarray(grid, dtype=float))
    if grid.shape[0] == 0:
        raise DomainError("reference grid is empty")
    if cfg.calibration is None:
        raise CalibrationError(
            "Bayesian surprise requires a calibrated threshold"
        )
    mu_b, var_b = _marginals(model_before, grid)
    mu_a, var_a = _marginals(model_after, grid)
    kls = (
        0.5 * np.log(var_a / var_b)
        + (var_b + (mu_b - mu_a) ** 2) / (2.0 * var_a)
        - 0.5
    )
    value = float(kls.mean())
    threshold = cfg.calibration.threshold
    return SurpriseVerdict(
        kind=BAYESIAN,
        value=value,
        threshold=threshold,
        flagged=value > threshold,
        interval=None,
    )


def calibrate(warmup_kls, k_bayesian: float) -> Calibration:
    """Fix the Bayesian flag threshold at mean + k * std of warm-up KLs."""
    kls = np.asarray(list(warmup_kls), dtype=float)
    if kls.size < 5:
        raise CalibrationError(
            f"need at least 5 warm-up KL samples, got {kls.size}"
        )
    return Calibration(
        mean=float(kls.mean()),
        std=float(kls.std()),
        k=float(k_bayesian),
        n_samples=int(kls.size),
    )


def loo_calibration_kls(model: GpModel, grid: np.ndarray) -> list[float]:
    """Leave-one-out KLs of the warm-up fit, for threshold calibration.

    For each training point, compares the model without it against the full
    model on the reference grid, at shared hyperparameters. Approximates the
    per-observation belief shift the campaign will see at ingest time.
    """
    grid = np.atleast_2d(np.asarray(grid, dtype=float))
    n = model.n_train
    if n < 2:
        raise DomainError("need at least 2 training points")
    mu_full, var_full = _marginals(model, grid)
    kls = []
    for i in range(n):
        keep = np.arange(n) != i
        reduced = build_model(
            model.X[keep], model.y[keep], model.hyper, mean=model.mean
        )
        mu_r, var_r = _marginals(reduced, grid)
        pointwise = (
            0.5 * np.log(var_full / var_r)
            + (var_r + (mu_r - mu_full) ** 2) / (2.0 * var_full)
            - 0.5
        )
        kls.append(float(pointwise.mean()))
    return kls
