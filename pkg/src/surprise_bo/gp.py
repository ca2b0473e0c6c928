"""Gaussian-process regression with a squared-exponential kernel.

Everything downstream leans on four operations: build a model from data and
hyperparameters, evaluate the log marginal likelihood and its gradient, fit
hyperparameters by multi-start projected gradient ascent in log space, and
predict / incrementally condition through Cholesky solves. No explicit
matrix inverse anywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_solve, cholesky, solve_triangular
from scipy.spatial.distance import cdist

from .errors import ConditioningError, InsufficientDataError, ShapeError

LOG_2PI = math.log(2.0 * math.pi)

# Box constraints for (log l, log sigma_s^2, log sigma^2).
LOG_BOUNDS = np.array(
    [
        [math.log(1e-2), math.log(1e2)],
        [math.log(1e-4), math.log(1e2)],
        [math.log(1e-6), math.log(1e1)],
    ]
)

# Diagonal jitter ladder tried before declaring a matrix hopeless.
JITTERS = (0.0, 1e-10, 1e-9, 1e-8, 1e-7, 1e-6, 1e-5, 1e-4)


@dataclass(frozen=True)
class Hyperparams:
    """Kernel and noise scales; strictly positive, optimized in log space."""

    length_scale: float
    signal_variance: float
    noise_variance: float

    def __post_init__(self):
        for name in ("length_scale", "signal_variance", "noise_variance"):
            v = getattr(self, name)
            if not (np.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be finite and > 0, got {v}")

    def log_vector(self) -> np.ndarray:
        return np.log(
            [self.length_scale, self.signal_variance, self.noise_variance]
        )

    @classmethod
    def from_log_vector(cls, theta: np.ndarray) -> "Hyperparams":
        l, s2, n2 = np.exp(theta)
        return cls(
            length_scale=float(l),
            signal_variance=float(s2),
            noise_variance=float(n2),
        )


@dataclass(frozen=True)
class FitConfig:
    """Multi-start gradient-ascent settings for hyperparameter fitting."""

    n_starts: int = 8
    max_iter: int = 80
    tol: float = 1e-6
    seed: int = 0
    warm_start: Hyperparams | None = None


@dataclass(frozen=True, eq=False)
class GpModel:
    """Immutable fitted model: data, hyperparameters, and cached solves.

    `chol` is the lower Cholesky factor of K + (noise + jitter) I and
    `alpha` solves that matrix against the centered outputs. `mean` is the
    constant prior mean (training-output mean at fit time) and stays fixed
    through conditioning.
    """

    X: np.ndarray
    y: np.ndarray
    hyper: Hyperparams
    chol: np.ndarray
    alpha: np.ndarray
    mean: float
    jitter: float

    @property
    def n_train(self) -> int:
        return self.X.shape[0]


@dataclass(frozen=True, eq=False)
class Posterior:
    """Predictive mean and variance at query locations."""

    at: np.ndarray
    mean: np.ndarray
    variance: np.ndarray
    cov: np.ndarray | None = None


def kernel_se(xi: np.ndarray, xj: np.ndarray, hyper: Hyperparams) -> float:
    """Squared-exponential covariance between two points."""
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    xj = np.atleast_1d(np.asarray(xj, dtype=float))
    if xi.shape != xj.shape:
        raise ShapeError(f"point dimensions differ: {xi.shape} vs {xj.shape}")
    sq = float(np.sum((xi - xj) ** 2))
    return hyper.signal_variance * math.exp(
        -sq / (2.0 * hyper.length_scale**2)
    )


def kernel_matrix(
    A: np.ndarray, B: np.ndarray, hyper: Hyperparams
) -> np.ndarray:
    """Cross-covariance matrix between row sets A and B."""
    A = np.atleast_2d(np.asarray(A, dtype=float))
    B = np.atleast_2d(np.asarray(B, dtype=float))
    if A.shape[1] != B.shape[1]:
        raise ShapeError(
            f"point dimensions differ: {A.shape[1]} vs {B.shape[1]}"
        )
    sq = cdist(A, B, metric="sqeuclidean")
    return hyper.signal_variance * np.exp(
        -sq / (2.0 * hyper.length_scale**2)
    )


def _chol_with_ladder(
    K: np.ndarray, noise: float, start_jitter: float = 0.0
) -> tuple[np.ndarray, float]:
    """Cholesky of K + (noise + jitter) I, escalating jitter on failure."""
    n = K.shape[0]
    for jitter in JITTERS:
        if jitter < start_jitter:
            continue
        try:
            L = cholesky(
                K + (noise + jitter) * np.eye(n), lower=True, check_finite=False
            )
            return L, jitter
        except np.linalg.LinAlgError:
            continue
    raise ConditioningError(
        f"kernel matrix not positive definite up to jitter {JITTERS[-1]}"
    )


def build_model(
    X: np.ndarray,
    y: np.ndarray,
    hyper: Hyperparams,
    mean: float | None = None,
    min_jitter: float = 0.0,
) -> GpModel:
    """Assemble a model at fixed hyperparameters (no optimization).

    `mean` defaults to the training-output mean; pass an explicit value to
    keep a previously fitted prior mean while re-building on new data.
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    y = np.asarray(y, dtype=float).ravel()
    if X.shape[0] != y.shape[0]:
        raise ShapeError(f"X has {X.shape[0]} rows but y has {y.shape[0]}")
    m = float(y.mean()) if mean is None else float(mean)
    K = kernel_matrix(X, X, hyper)
    L, jitter = _chol_with_ladder(K, hyper.noise_variance, min_jitter)
    alpha = cho_solve((L, True), y - m, check_finite=False)
    return GpModel(
        X=X, y=y, hyper=hyper, chol=L, alpha=alpha, mean=m, jitter=jitter
    )


def log_marginal_likelihood(model: GpModel) -> tuple[float, np.ndarray]:
    """LML value and its gradient wrt (log l, log sigma_s^2, log sigma^2).

    Gradient entries are 0.5 * tr((alpha alpha^T - K_y^{-1}) dK_y/dtheta),
    evaluated without forming any derivative matrix against an explicit
    inverse larger than K_y itself.
    """
    hyper = model.hyper
    n = model.n_train
    resid = model.y - model.mean
    value = (
        -0.5 * float(resid @ model.alpha)
        - float(np.sum(np.log(np.diag(model.chol))))
        - 0.5 * n * LOG_2PI
    )
    sq = cdist(model.X, model.X, metric="sqeuclidean")
    K = hyper.signal_variance * np.exp(-sq / (2.0 * hyper.length_scale**2))
    Kinv = cho_solve((model.chol, True), np.eye(n), check_finite=False)
    alpha = model.alpha

    def trace_term(M):
        return 0.5 * (float(alpha @ M @ alpha) - float(np.sum(Kinv * M)))

    dK_dlog_l = K * (sq / hyper.length_scale**2)
    grad = np.array(
        [
            trace_term(dK_dlog_l),
            trace_term(K),
            0.5
            * hyper.noise_variance
            * (float(alpha @ alpha) - float(np.trace(Kinv))),
        ]
    )
    return value, grad


def _lml_at(X, y, mean, theta):
    """(value, gradient) at log-hyperparameters theta; -inf if unstable."""
    try:
        model = build_model(X, y, Hyperparams.from_log_vector(theta), mean=mean)
    except ConditioningError:
        return -np.inf, None
    value, grad = log_marginal_likelihood(model)
    if not np.isfinite(value):
        return -np.inf, None
    return value, grad


def _ascend(X, y, mean, theta0, max_iter, tol):
    """Projected gradient ascent with backtracking from one start."""
    lo, hi = LOG_BOUNDS[:, 0], LOG_BOUNDS[:, 1]
    theta = np.clip(theta0, lo, hi)
    value, grad = _lml_at(X, y, mean, theta)
    if grad is None:
        return None
    step = 1.0
    for _ in range(max_iter):
        if float(np.max(np.abs(grad))) < tol:
            break
        accepted = False
        while step >= 1e-12:
            cand = np.clip(theta + step * grad, lo, hi)
            move = cand - theta
            if float(np.max(np.abs(move))) < 1e-14:
                break
            cand_value, cand_grad = _lml_at(X, y, mean, cand)
            if cand_grad is not None and cand_value > value + 1e-4 * float(
                grad @ move
            ):
                theta, value, grad = cand, cand_value, cand_grad
                accepted = True
                break
            step *= 0.5
        if not accepted:
            break
        step = min(step * 2.0, 16.0)
    return theta, value


def _fit_starts(X, y, config: FitConfig) -> list[np.ndarray]:
    """Deterministic start points in log space; index 0 is the heuristic."""
    lo, hi = LOG_BOUNDS[:, 0], LOG_BOUNDS[:, 1]
    y_var = float(np.var(y))
    n = X.shape[0]
    if config.warm_start is not None:
        base = config.warm_start.log_vector()
    else:
        if n > 1:
            d = cdist(X, X)
            med = float(np.median(d[np.triu_indices(n, k=1)]))
        else:
            med = 1.0
        base = np.log(
            [
                med if med > 0 else 1.0,
                max(y_var, 1e-3),
                max(0.05 * y_var, 1e-4),
            ]
        )
    starts = [np.clip(base, lo, hi)]
    rng = np.random.default_rng(config.seed)
    for _ in range(max(0, config.n_starts - 1)):
        starts.append(rng.uniform(lo, hi))
    return starts


def fit(X: np.ndarray, y: np.ndarray, config: FitConfig = FitConfig()) -> GpModel:
    """Maximize the LML over hyperparameters from several start points.

    Raises
    ------
    InsufficientDataError
        Fewer than 2 training rows.
    ConditioningError
        Every start failed Cholesky through the whole jitter ladder.
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    y = np.asarray(y, dtype=float).ravel()
    if X.shape[0] < 2:
        raise InsufficientDataError(
            f"need at least 2 rows to fit, got {X.shape[0]}"
        )
    mean = float(y.mean())
    best_theta, best_value = None, -np.inf
    for theta0 in _fit_starts(X, y, config):
        result = _ascend(X, y, mean, theta0, config.max_iter, config.tol)
        if result is None:
            continue
        theta, value = result
        if value > best_value:
            best_theta, best_value = theta, value
    if best_theta is None:
        raise ConditioningError("no hyperparameter start produced a valid model")
    return build_model(X, y, Hyperparams.from_log_vector(best_theta), mean=mean)


def predict(model: GpModel, Xq: np.ndarray, full_cov: bool = False) -> Posterior:
    """Posterior mean and (latent) variance at query rows, via Cholesky."""
    Xq = np.atleast_2d(np.asarray(Xq, dtype=float))
    if Xq.shape[1] != model.X.shape[1]:
        raise ShapeError(
            f"query dimension {Xq.shape[1]} != training dimension "
            f"{model.X.shape[1]}"
        )
    k_star = kernel_matrix(model.X, Xq, model.hyper)
    mean = k_star.T @ model.alpha + model.mean
    v = solve_triangular(model.chol, k_star, lower=True, check_finite=False)
    variance = np.maximum(
        model.hyper.signal_variance - np.sum(v * v, axis=0), 0.0
    )
    cov = None
    if full_cov:
        k_qq = kernel_matrix(Xq, Xq, model.hyper)
        cov = k_qq - v.T @ v
    return Posterior(at=Xq, mean=mean, variance=variance, cov=cov)


def condition_on(model: GpModel, x: np.ndarray, y: float) -> GpModel:
    """Absorb one observation at fixed hyperparameters.

    Extends the Cholesky factor by one row (O(n^2)); falls back to a
    jittered rebuild when the incremental pivot loses positivity.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if x.shape[0] != model.X.shape[1]:
        raise ShapeError(
            f"point dimension {x.shape[0]} != training dimension "
            f"{model.X.shape[1]}"
        )
    X_new = np.vstack([model.X, x])
    y_new = np.append(model.y, float(y))
    hyper = model.hyper
    k = kernel_matrix(model.X, x[None, :], hyper).ravel()
    k_ss = hyper.signal_variance + hyper.noise_variance + model.jitter
    w = solve_triangular(model.chol, k, lower=True, check_finite=False)
    pivot = k_ss - float(w @ w)
    if pivot > 1e-12:
        n = model.n_train
        L_new = np.zeros((n + 1, n + 1))
        L_new[:n, :n] = model.chol
        L_new[n, :n] = w
        L_new[n, n] = math.sqrt(pivot)
        alpha = cho_solve((L_new, True), y_new - model.mean, check_finite=False)
        return GpModel(
            X=X_new,
            y=y_new,
            hyper=hyper,
            chol=L_new,
            alpha=alpha,
            mean=model.mean,
            jitter=model.jitter,
        )
    return build_model(
        X_new, y_new, hyper, mean=model.mean, min_jitter=model.jitter
    )


def snapshot(model: GpModel, train_indices: list[int] | None = None) -> dict:
    """JSON-serializable summary for campaign resume and the dashboard."""
    return {
        "length_scale": model.hyper.length_scale,
        "signal_variance": model.hyper.signal_variance,
        "noise_variance": model.hyper.noise_variance,
        "mean": model.mean,
        "jitter": model.jitter,
        "n_train": model.n_train,
        "train_indices": list(train_indices) if train_indices is not None else None,
    }
