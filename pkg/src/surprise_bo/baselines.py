"""Linear baselines for the static-ML comparison rows.

Ridge is the exact normal-equations solve; lasso is cyclic coordinate
descent with soft-thresholding under the (1/2n) squared-loss convention,
so alpha values match the common convention for that scaling. Both center
the data and recover the intercept afterwards.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataset import Dataset
from .errors import ConfigError, InsufficientDataError, ShapeError


@dataclass(frozen=True)
class LinearModel:
    weights: np.ndarray
    intercept: float
    penalty: str
    alpha: float
    converged: bool = True

    def predict(self, rows: np.ndarray) -> np.ndarray:
        rows = np.atleast_2d(np.asarray(rows, dtype=float))
        if rows.shape[1] != self.weights.shape[0]:
            raise ShapeError(
                f"expected {self.weights.shape[0]} features, got {rows.shape[1]}"
            )
        return rows @ self.weights + self.intercept


def _centered(train: Dataset):
    if train.n_rows < 2:
        raise InsufficientDataError("need at least 2 rows")
    X = train.rows
    y = train.targets
    x_mean = X.mean(axis=0)
    y_mean = float(y.mean())
    return X - x_mean, y - y_mean, x_mean, y_mean


def ridge_fit(train: Dataset, alpha: float) -> LinearModel:
    """Solve (X'X + alpha I) w = X'y on centered data."""
    if alpha < 0:
        raise ConfigError(f"alpha must be >= 0, got {alpha}")
    Xc, yc, x_mean, y_mean = _centered(train)
    p = Xc.shape[1]
    w = np.linalg.solve(Xc.T @ Xc + alpha * np.eye(p), Xc.T @ yc)
    return LinearModel(
        weights=w,
        intercept=y_mean - float(x_mean @ w),
        penalty="ridge",
        alpha=float(alpha),
    )


def lasso_fit(
    train: Dataset, alpha: float, max_iter: int = 1000, tol: float = 0.001
) -> LinearModel:
    """Cyclic coordinate descent for (1/2n)||y - Xw||^2 + alpha ||w||_1.

    Stops when the largest coordinate change in a sweep drops below `tol`;
    returns converged=False if max_iter sweeps were exhausted first.
    """
    if alpha < 0:
        raise ConfigError(f"alpha must be >= 0, got {alpha}")
    Xc, yc, x_mean, y_mean = _centered(train)
    n, p = Xc.shape
    col_sq = (Xc**2).sum(axis=0) / n
    w = np.zeros(p)
    resid = yc.copy()
    converged = False
    for _ in range(max_iter):
        max_change = 0.0
        for j in range(p):
            if col_sq[j] == 0.0:
                continue
            rho = float(Xc[:, j] @ resid) / n + col_sq[j] * w[j]
            new_w = np.sign(rho) * max(abs(rho) - alpha, 0.0) / col_sq[j]
            change = new_w - w[j]
            if change != 0.0:
                resid -= change * Xc[:, j]
                w[j] = new_w
                max_change = max(max_change, abs(change))
        if max_change < tol:
            converged = True
            break
    return LinearModel(
        weights=w,
        intercept=y_mean - float(x_mean @ w),
        penalty="lasso",
        alpha=float(alpha),
        converged=converged,
    )


def lasso_objective(train: Dataset, model: LinearModel) -> float:
    """(1/2n) squared loss plus the L1 penalty, for descent checks."""
    resid = train.targets - model.predict(train.rows)
    n = train.n_rows
    return float(resid @ resid) / (2 * n) + model.alpha * float(
        np.abs(model.weights).sum()
    )


def cv_grid_search(
    train: Dataset,
    grid: list[dict],
    fit_fn,
    folds: int = 5,
    seed: int = 0,
) -> tuple[dict, list[dict]]:
    """Seeded k-fold grid search minimizing mean validation RMSE.

    `grid` is a list of keyword dicts for `fit_fn(train, **params)`; ties
    go to the earliest grid entry. Returns (best params, per-cell table).
    """
    if not grid:
        raise ConfigError("parameter grid is empty")
    n = train.n_rows
    if n < folds:
        raise InsufficientDataError(f"need at least {folds} rows, got {n}")
    rng = np.random.default_rng(seed)
    order = rng.permutation(n)
    fold_ids = np.empty(n, dtype=int)
    for k, chunk in enumerate(np.array_split(order, folds)):
        fold_ids[chunk] = k

    table = []
    best_params, best_score = None, np.inf
    for params in grid:
        scores = []
        for k in range(folds):
            val = fold_ids == k
            fold_train = Dataset(
                schema=train.schema,
                rows=train.rows[~val],
                targets=train.targets[~val],
            )
            model = fit_fn(fold_train, **params)
            pred = model.predict(train.rows[val])
            scores.append(
                float(np.sqrt(np.mean((pred - train.targets[val]) ** 2)))
            )
        mean_rmse = float(np.mean(scores))
        table.append({"params": params, "mean_rmse": mean_rmse})
        if mean_rmse < best_score:
            best_params, best_score = params, mean_rmse
    return best_params, table
