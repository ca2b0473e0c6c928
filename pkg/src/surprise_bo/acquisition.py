"""Candidate scoring: Expected Improvement and maximin distance.

Both selectors operate over a finite candidate pool and break ties by the
lowest candidate index so seeded runs replay exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

from .dataset import CandidatePool, Dataset
from .errors import DomainError, PoolExhaustedError
from .gp import GpModel, predict

EI = "EI"
MAXIMIN = "Maximin"

_SQRT2 = math.sqrt(2.0)
_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)


@dataclass(frozen=True)
class CandidateScore:
    index: int
    score: float
    kind: str


def norm_cdf(x: float) -> float:
    # erfc keeps full precision in the far tails where 1 - Phi underflows
    return 0.5 * math.erfc(-x / _SQRT2)


def norm_pdf(x: float) -> float:
    return _INV_SQRT_2PI * math.exp(-0.5 * x * x)


def expected_improvement(mu: float, sigma: float, best: float) -> float:
    """E[max(f - best, 0)] for f ~ N(mu, sigma^2).

    Degenerates to max(mu - best, 0) at sigma = 0. Always >= 0.
    """
    if sigma < 0:
        raise DomainError(f"sigma must be >= 0, got {sigma}")
    delta = mu - best
    if sigma == 0.0:
        return max(delta, 0.0)
    z = delta / sigma
    return max(delta * norm_cdf(z) + sigma * norm_pdf(z), 0.0)


def _candidate_rows(pool: CandidatePool, data: Dataset) -> tuple[list[int], np.ndarray]:
    if len(pool) == 0:
        raise PoolExhaustedError("candidate pool is empty")
    indices = sorted(pool.indices)
    return indices, data.rows[np.asarray(indices, dtype=int)]


def argmax_ei(model: GpModel, pool: CandidatePool, data: Dataset) -> CandidateScore:
    """Pool index with maximal EI under the current posterior.

    The incumbent is the largest observed training output; ties go to the
    lowest candidate index.
    """
    indices, rows = _candidate_rows(pool, data)
    post = predict(model, rows)
    best = float(model.y.max())
    sigmas = np.sqrt(post.variance)
    scores = [
        expected_improvement(float(m), float(s), best)
        for m, s in zip(post.mean, sigmas)
    ]
    pick = int(np.argmax(scores))
    return CandidateScore(index=indices[pick], score=scores[pick], kind=EI)


def maximin_next(
    pool: CandidatePool, used: np.ndarray, data: Dataset
) -> CandidateScore:
    """Pool index farthest from its nearest already-used location.

    Distances are Euclidean in the (normalized) feature space; ties go to
    the lowest candidate index.
    """
    used = np.atleast_2d(np.asarray(used, dtype=float))
    if used.size == 0:
        raise DomainError("used set must be nonempty")
    indices, rows = _candidate_rows(pool, data)
    g = cdist(rows, used).min(axis=1)
    pick = int(np.argmax(g))
    return CandidateScore(index=indices[pick], score=float(g[pick]), kind=MAXIMIN)
