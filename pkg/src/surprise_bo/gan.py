"""Conditional tabular GAN for synthetic warm-up rows.

Pipeline: per-column Gaussian-mixture coding (within-mode scalar plus
one-hot mode), adversarial training conditioned on the target tercile,
seeded sampling, plausibility filtering, and warm-up augmentation. All
nets are small fully connected numpy models with explicit backprop so
runs are bit-reproducible on a single core.
"""

from __future__ import annotations

import hashlib
import warnings
from dataclasses import dataclass

import numpy as np
import pandas as pd
from scipy.special import expit, logsumexp

from ._seeds import derive_seed, rng_for
from .dataset import Dataset
from .errors import (
    AugmentationError,
    ConfigError,
    DomainError,
    GanTrainingError,
    InsufficientDataError,
    NormalizerError,
    SamplingError,
    ShapeError,
)

CONDITION_LABELS = ("low", "mid", "high")


@dataclass(frozen=True)
class GanConfig:
    """Training hyperparameters. Defaults follow the tabular-GAN recipe
    this package reproduces; batches are trimmed to a multiple of `pac`
    at train time (see `effective_batch`)."""

    embedding_dim: int = 32
    generator_dims: tuple[int, ...] = (64, 64)
    discriminator_dims: tuple[int, ...] = (64, 64)
    generator_lr: float = 0.01
    discriminator_lr: float = 0.01
    batch_size: int = 25
    epochs: int = 500
    pac: int = 10
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(
            self, "generator_dims", tuple(int(d) for d in self.generator_dims)
        )
        object.__setattr__(
            self,
            "discriminator_dims",
            tuple(int(d) for d in self.discriminator_dims),
        )
        if self.embedding_dim < 1:
            raise ConfigError(f"embedding_dim must be >= 1, got {self.embedding_dim}")
        if any(d < 1 for d in self.generator_dims + self.discriminator_dims):
            raise ConfigError("all layer widths must be >= 1")
        if self.generator_lr <= 0 or self.discriminator_lr <= 0:
            raise ConfigError("learning rates must be positive")
        if self.epochs < 0:
            raise ConfigError(f"epochs must be >= 0, got {self.epochs}")
        if self.pac < 1:
            raise ConfigError(f"pac must be >= 1, got {self.pac}")
        if self.batch_size < self.pac:
            raise ConfigError(
                f"batch_size {self.batch_size} must be >= pac {self.pac}"
            )

    def effective_batch(self, n_rows: int) -> int:
        """Largest multiple of pac that fits both batch_size and the data."""
        return (min(self.batch_size, n_rows) // self.pac) * self.pac


def config_hash(cfg: GanConfig) -> str:
    h = hashlib.blake2b(digest_size=8)
    h.update(repr(cfg).encode())
    return h.hexdigest()


# ---------------------------------------------------------------------------
# mode-specific normalization


@dataclass(eq=False)
class ModeNormalizer:
    """Per-column Gaussian-mixture coding.

    Each raw value becomes (scalar, one-hot): the scalar is the offset
    within the sampled mixture mode scaled by 4 stds, the one-hot names
    the mode. Inversion reads the one-hot back, so round-trips are exact
    up to float arithmetic.
    """

    columns: tuple[str, ...]
    means: tuple[np.ndarray, ...]
    stds: tuple[np.ndarray, ...]
    weights: tuple[np.ndarray, ...]

    @property
    def n_components(self) -> tuple[int, ...]:
        return tuple(len(m) for m in self.means)

    @property
    def width(self) -> int:
        return sum(1 + k for k in self.n_components)

    def slots(self) -> list[tuple[int, int]]:
        """(offset, n_modes) of every column's block in the coded row."""
        out, off = [], 0
        for k in self.n_components:
            out.append((off, k))
            off += 1 + k
        return out

    def transform(self, X: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        if X.ndim != 2 or X.shape[1] != len(self.columns):
            raise ShapeError(
                f"expected (n, {len(self.columns)}) matrix, got {X.shape}"
            )
        n = X.shape[0]
        out = np.zeros((n, self.width))
        for j, (off, k) in enumerate(self.slots()):
            x = X[:, j]
            logr = np.log(self.weights[j])[None, :] + _log_pdf(
                x, self.means[j], self.stds[j]
            )
            resp = np.exp(logr - logsumexp(logr, axis=1, keepdims=True))
            cum = np.cumsum(resp, axis=1)
            u = rng.random((n, 1))
            mode = np.minimum((u > cum).sum(axis=1), k - 1)
            out[:, off] = (x - self.means[j][mode]) / (4.0 * self.stds[j][mode])
            out[np.arange(n), off + 1 + mode] = 1.0
        return out

    def inverse(self, coded: np.ndarray) -> np.ndarray:
        coded = np.asarray(coded, dtype=float)
        if coded.ndim != 2 or coded.shape[1] != self.width:
            raise ShapeError(
                f"expected (n, {self.width}) coded matrix, got {coded.shape}"
            )
        out = np.zeros((coded.shape[0], len(self.columns)))
        for j, (off, k) in enumerate(self.slots()):
            mode = np.argmax(coded[:, off + 1 : off + 1 + k], axis=1)
            scalar = coded[:, off]
            out[:, j] = scalar * 4.0 * self.stds[j][mode] + self.means[j][mode]
        return out


def _log_pdf(x, means, stds):
    z = (x[:, None] - means[None, :]) / stds[None, :]
    return -0.5 * z * z - np.log(stds)[None, :] - 0.5 * np.log(2.0 * np.pi)


def _em_single(x, k, rng, column):
    """One EM fit with k components; prunes vanishing components.

    Returns (weights, means, stds, loglik) or None when every component
    degenerated.
    """
    n = x.size
    spread = float(x.std())
    if spread == 0.0:
        return None
    floor = 1e-6 * spread
    qs = (2.0 * np.arange(k) + 1.0) / (2.0 * k)
    means = np.quantile(x, qs) + rng.normal(0.0, 0.01 * spread, size=k)
    stds = np.full(k, spread)
    w = np.full(k, 1.0 / k)
    loglik = -np.inf
    for _ in range(200):
        logr = np.log(w)[None, :] + _log_pdf(x, means, stds)
        norm = logsumexp(logr, axis=1)
        new_loglik = float(norm.sum())
        resp = np.exp(logr - norm[:, None])
        nk = resp.sum(axis=0)
        new_means = (resp * x[:, None]).sum(axis=0) / np.maximum(nk, 1e-300)
        var = (resp * (x[:, None] - new_means[None, :]) ** 2).sum(axis=0)
        new_stds = np.sqrt(var / np.maximum(nk, 1e-300))
        keep = (nk > 1e-6 * n) & (new_stds > floor)
        if not keep.all():
            dropped = int((~keep).sum())
            warnings.warn(
                f"pruned {dropped} degenerate mixture component(s) "
                f"in column {column!r}"
            )
            if not keep.any():
                return None
            w = nk[keep] / nk[keep].sum()
            means = new_means[keep]
            stds = np.maximum(new_stds[keep], floor)
            loglik = -np.inf
            continue
        w, means, stds = nk / n, new_means, new_stds
        if abs(new_loglik - loglik) < 1e-9 * (abs(new_loglik) + 1.0):
            loglik = new_loglik
            break
        loglik = new_loglik
    return w, means, stds, loglik


def _fit_column(x, max_components, rng, column):
    """Pick the component count in 1..max_components by BIC."""
    distinct = np.unique(x).size
    if distinct < max_components:
        raise NormalizerError(
            f"column {column!r} has {distinct} distinct values, "
            f"need >= {max_components}"
        )
    best = None
    for k in range(1, max_components + 1):
        fit = _em_single(x, k, rng, column)
        if fit is None:
            continue
        w, means, stds, loglik = fit
        n_params = 3 * len(w) - 1
        bic = -2.0 * loglik + n_params * np.log(x.size)
        if best is None or bic < best[0] - 1e-9:
            best = (bic, w, means, stds)
    if best is None:
        raise NormalizerError(
            f"all mixture components degenerate in column {column!r}"
        )
    return best[1], best[2], best[3]


def _as_matrix(ds) -> tuple[np.ndarray, tuple[str, ...]]:
    """Accept a Dataset (features+target stacked) or a plain matrix."""
    if isinstance(ds, Dataset):
        X = np.column_stack([ds.rows, ds.targets])
        return X, ds.schema.columns
    X = np.asarray(ds, dtype=float)
    if X.ndim != 2:
        raise ShapeError(f"expected a 2-d matrix, got shape {X.shape}")
    return X, tuple(f"col_{j}" for j in range(X.shape[1]))


def fit_normalizer(ds, components: int = 3, seed: int = 0) -> ModeNormalizer:
    """EM-fit a Gaussian mixture per column, component count <= `components`
    chosen by BIC (extra components on a unimodal column are pruned by
    the selection, not left to starve)."""
    if components < 1:
        raise ConfigError(f"components must be >= 1, got {components}")
    X, names = _as_matrix(ds)
    means, stds, weights = [], [], []
    for j, name in enumerate(names):
        rng = rng_for(seed, "column", name)
        w, m, s = _fit_column(X[:, j], components, rng, name)
        weights.append(w)
        means.append(m)
        stds.append(s)
    return ModeNormalizer(
        columns=names,
        means=tuple(means),
        stds=tuple(stds),
        weights=tuple(weights),
    )


# ---------------------------------------------------------------------------
# networks


def _glorot(rng, n_in, n_out):
    return rng.normal(0.0, np.sqrt(2.0 / (n_in + n_out)), size=(n_in, n_out))


class DiscriminatorNet:
    """Plain MLP over pac-concatenated rows: relu hiddens, linear logit."""

    def __init__(self, rng, in_dim: int, hidden_dims: tuple[int, ...]):
        self.in_dim = in_dim
        self.hidden_dims = tuple(hidden_dims)
        self.weights: list[np.ndarray] = []
        cur = in_dim
        for h in self.hidden_dims:
            self.weights += [_glorot(rng, cur, h), np.zeros(h)]
            cur = h
        self.weights += [_glorot(rng, cur, 1), np.zeros(1)]

    def forward(self, x: np.ndarray):
        acts, pres = [x], []
        h = x
        for i in range(len(self.hidden_dims)):
            p = h @ self.weights[2 * i] + self.weights[2 * i + 1]
            pres.append(p)
            h = np.maximum(p, 0.0)
            acts.append(h)
        logits = h @ self.weights[-2] + self.weights[-1]
        return logits, (acts, pres)

    def backward(self, dlogits: np.ndarray, cache):
        acts, pres = cache
        grads: list = [None] * len(self.weights)
        grads[-2] = acts[-1].T @ dlogits
        grads[-1] = dlogits.sum(axis=0)
        dh = dlogits @ self.weights[-2].T
        for i in reversed(range(len(self.hidden_dims))):
            dp = dh * (pres[i] > 0.0)
            grads[2 * i] = acts[i].T @ dp
            grads[2 * i + 1] = dp.sum(axis=0)
            dh = dp @ self.weights[2 * i].T
        return grads, dh

    def score(self, x: np.ndarray) -> np.ndarray:
        """Sigmoid of the logit; strictly inside (0,1) for finite input."""
        logits, _ = self.forward(x)
        return expit(logits)


class GeneratorNet:
    """Residual-concat MLP: every hidden block appends its relu features
    to the running activation, so later layers see all earlier ones."""

    def __init__(self, rng, noise_dim, cond_dim, hidden_dims, out_dim):
        self.noise_dim = noise_dim
        self.cond_dim = cond_dim
        self.hidden_dims = tuple(hidden_dims)
        self.out_dim = out_dim
        self.weights: list[np.ndarray] = []
        cur = noise_dim + cond_dim
        for h in self.hidden_dims:
            self.weights += [_glorot(rng, cur, h), np.zeros(h)]
            cur += h
        self.weights += [_glorot(rng, cur, out_dim), np.zeros(out_dim)]

    def forward(self, z: np.ndarray, cond: np.ndarray):
        a = np.concatenate([z, cond], axis=1)
        acts, pres = [a], []
        for i in range(len(self.hidden_dims)):
            p = a @ self.weights[2 * i] + self.weights[2 * i + 1]
            pres.append(p)
            a = np.concatenate([a, np.maximum(p, 0.0)], axis=1)
            acts.append(a)
        raw = a @ self.weights[-2] + self.weights[-1]
        return raw, (acts, pres)

    def backward(self, draw: np.ndarray, cache):
        acts, pres = cache
        grads: list = [None] * len(self.weights)
        grads[-2] = acts[-1].T @ draw
        grads[-1] = draw.sum(axis=0)
        ga = draw @ self.weights[-2].T
        for i in reversed(range(len(self.hidden_dims))):
            prev_width = acts[i].shape[1]
            dp = ga[:, prev_width:] * (pres[i] > 0.0)
            grads[2 * i] = acts[i].T @ dp
            grads[2 * i + 1] = dp.sum(axis=0)
            ga = ga[:, :prev_width] + dp @ self.weights[2 * i].T
        return grads


def apply_output_activations(raw, slots):
    """Tanh on each column's scalar slot, softmax on its mode slots."""
    out = np.empty_like(raw)
    for off, k in slots:
        out[:, off] = np.tanh(raw[:, off])
        block = raw[:, off + 1 : off + 1 + k]
        e = np.exp(block - block.max(axis=1, keepdims=True))
        out[:, off + 1 : off + 1 + k] = e / e.sum(axis=1, keepdims=True)
    return out


def output_activation_backward(dout, activated, slots):
    draw = np.empty_like(dout)
    for off, k in slots:
        t = activated[:, off]
        draw[:, off] = dout[:, off] * (1.0 - t * t)
        s = activated[:, off + 1 : off + 1 + k]
        g = dout[:, off + 1 : off + 1 + k]
        draw[:, off + 1 : off + 1 + k] = s * (g - (g * s).sum(axis=1, keepdims=True))
    return draw


def _sgd_step(params, grads, velocities, lr, momentum=0.9):
    for p, g, v in zip(params, grads, velocities):
        v *= momentum
        v += g
        p -= lr * v


# ---------------------------------------------------------------------------
# training


@dataclass(eq=False)
class TrainedGan:
    generator: GeneratorNet
    discriminator: DiscriminatorNet
    normalizer: ModeNormalizer
    config: GanConfig
    loss_history: list[dict]
    tercile_edges: np.ndarray
    columns: tuple[str, ...]


@dataclass(eq=False)
class SyntheticBatch:
    """Generated rows in raw feature+target space plus bookkeeping."""

    rows: np.ndarray
    condition: str
    plausible: np.ndarray
    provenance: dict
    columns: tuple[str, ...]


def _sample_conditions(rng, count, nonempty):
    pick = rng.integers(0, len(nonempty), size=count)
    return np.asarray(nonempty)[pick]


def train_gan(ds, cfg: GanConfig) -> TrainedGan:
    """Adversarial training with the non-saturating conditional loss.

    The condition is the target tercile (low/mid/high); each batch
    samples terciles uniformly and draws real rows from the matching
    tercile, so rare regimes are seen as often as common ones. The
    discriminator judges pac rows at a time. Deterministic per seed.
    """
    X, names = _as_matrix(ds)
    n = X.shape[0]
    if n < cfg.batch_size:
        raise InsufficientDataError(
            f"need at least batch_size={cfg.batch_size} rows, got {n}"
        )
    batch = cfg.effective_batch(n)
    norm = fit_normalizer(X, components=3, seed=derive_seed(cfg.seed, "normalizer"))
    slots = norm.slots()

    rng = rng_for(cfg.seed, "train")
    coded = norm.transform(X, rng)
    y = X[:, -1]
    edges = np.quantile(y, np.array([1.0, 2.0]) / 3.0)
    tercile = np.searchsorted(edges, y, side="right")
    groups = [np.flatnonzero(tercile == c) for c in range(3)]
    nonempty = [c for c in range(3) if groups[c].size > 0]
    eye = np.eye(3)

    gen = GeneratorNet(rng, cfg.embedding_dim, 3, cfg.generator_dims, norm.width)
    disc = DiscriminatorNet(
        rng, cfg.pac * (norm.width + 3), cfg.discriminator_dims
    )
    gvel = [np.zeros_like(p) for p in gen.weights]
    dvel = [np.zeros_like(p) for p in disc.weights]
    m = batch // cfg.pac
    steps = max(1, n // batch)

    history = []
    for epoch in range(cfg.epochs):
        d_sum = g_sum = 0.0
        for _ in range(steps):
            # discriminator: real up, fake down
            conds = _sample_conditions(rng, batch, nonempty)
            real_idx = np.empty(batch, dtype=int)
            for c in nonempty:
                mask = conds == c
                if mask.any():
                    real_idx[mask] = groups[c][
                        rng.integers(0, groups[c].size, size=int(mask.sum()))
                    ]
            cond1h = eye[conds]
            z = rng.standard_normal((batch, cfg.embedding_dim))
            raw, _ = gen.forward(z, cond1h)
            rep = apply_output_activations(raw, slots)
            real_in = np.concatenate([coded[real_idx], cond1h], axis=1).reshape(m, -1)
            fake_in = np.concatenate([rep, cond1h], axis=1).reshape(m, -1)
            logit_r, cache_r = disc.forward(real_in)
            logit_f, cache_f = disc.forward(fake_in)
            # losses averaged per row, not per pac-group: keeps the step
            # size independent of pac, which SGD+momentum needs to stay
            # on the adversarial equilibrium instead of saturating tanh
            d_loss = float(
                np.logaddexp(0.0, -logit_r).sum()
                + np.logaddexp(0.0, logit_f).sum()
            ) / batch
            grads_r, _ = disc.backward((expit(logit_r) - 1.0) / batch, cache_r)
            grads_f, _ = disc.backward(expit(logit_f) / batch, cache_f)
            _sgd_step(
                disc.weights,
                [a + b for a, b in zip(grads_r, grads_f)],
                dvel,
                cfg.discriminator_lr,
            )

            # generator: push fakes toward "real" (non-saturating)
            conds2 = _sample_conditions(rng, batch, nonempty)
            cond1h2 = eye[conds2]
            z2 = rng.standard_normal((batch, cfg.embedding_dim))
            raw2, gcache = gen.forward(z2, cond1h2)
            rep2 = apply_output_activations(raw2, slots)
            fake2 = np.concatenate([rep2, cond1h2], axis=1).reshape(m, -1)
            logit_g, cache_g = disc.forward(fake2)
            g_loss = float(np.logaddexp(0.0, -logit_g).sum()) / batch
            _, dinput = disc.backward((expit(logit_g) - 1.0) / batch, cache_g)
            dall = dinput.reshape(batch, norm.width + 3)
            draw2 = output_activation_backward(dall[:, : norm.width], rep2, slots)
            _sgd_step(gen.weights, gen.backward(draw2, gcache), gvel, cfg.generator_lr)

            if not (np.isfinite(d_loss) and np.isfinite(g_loss)):
                raise GanTrainingError(
                    f"non-finite loss at epoch {epoch}", epoch=epoch
                )
            d_sum += d_loss
            g_sum += g_loss
        history.append(
            {"epoch": epoch, "d_loss": d_sum / steps, "g_loss": g_sum / steps}
        )

    return TrainedGan(
        generator=gen,
        discriminator=disc,
        normalizer=norm,
        config=cfg,
        loss_history=history,
        tercile_edges=edges,
        columns=names,
    )


# ---------------------------------------------------------------------------
# sampling and augmentation


def sample(gen: TrainedGan, n: int, condition: str, seed: int = 0) -> SyntheticBatch:
    """Map seeded noise through the generator under one condition tag.

    Non-finite rows are re-drawn, up to 10n total attempts.
    """
    if condition not in CONDITION_LABELS:
        raise DomainError(
            f"condition must be one of {CONDITION_LABELS}, got {condition!r}"
        )
    if n < 0:
        raise DomainError(f"n must be >= 0, got {n}")
    cfg = gen.config
    provenance = {
        "seed": int(seed),
        "epochs": int(cfg.epochs),
        "config_hash": config_hash(cfg),
        "n_filtered": 0,
    }
    d = len(gen.columns)
    if n == 0:
        return SyntheticBatch(
            rows=np.zeros((0, d)),
            condition=condition,
            plausible=np.zeros(0, dtype=bool),
            provenance=provenance,
            columns=gen.columns,
        )
    rng = rng_for(seed, "sample")
    cond_row = np.eye(3)[CONDITION_LABELS.index(condition)]
    slots = gen.normalizer.slots()
    kept: list[np.ndarray] = []
    count = 0
    attempts = 0
    limit = 10 * n
    while count < n and attempts < limit:
        chunk = min(n, limit - attempts)
        z = rng.standard_normal((chunk, cfg.embedding_dim))
        cond = np.tile(cond_row, (chunk, 1))
        raw, _ = gen.generator.forward(z, cond)
        rows = gen.normalizer.inverse(apply_output_activations(raw, slots))
        ok = np.isfinite(rows).all(axis=1)
        kept.append(rows[ok])
        count += int(ok.sum())
        attempts += chunk
    if count < n:
        raise SamplingError(
            f"only {count} finite rows after {attempts} draws, wanted {n}"
        )
    return SyntheticBatch(
        rows=np.concatenate(kept)[:n],
        condition=condition,
        plausible=np.ones(n, dtype=bool),
        provenance=provenance,
        columns=gen.columns,
    )


def _bounds(value) -> tuple[float, float]:
    if isinstance(value, dict):
        return float(value["min"]), float(value["max"])
    lo, hi = value
    return float(lo), float(hi)


def default_ranges(ds, expand: float = 0.1) -> dict[str, tuple[float, float]]:
    """Per-column [min, max] of the real data, widened by `expand` x span."""
    X, names = _as_matrix(ds)
    lo = X.min(axis=0)
    hi = X.max(axis=0)
    span = hi - lo
    return {
        name: (float(lo[j] - expand * span[j]), float(hi[j] + expand * span[j]))
        for j, name in enumerate(names)
    }


def filter_plausible(batch: SyntheticBatch, ranges: dict) -> SyntheticBatch:
    """Drop rows outside the per-column ranges; count them in provenance."""
    missing = [c for c in batch.columns if c not in ranges]
    if missing:
        raise ConfigError(f"no plausibility range for columns: {missing}")
    lo = np.array([_bounds(ranges[c])[0] for c in batch.columns])
    hi = np.array([_bounds(ranges[c])[1] for c in batch.columns])
    mask = ((batch.rows >= lo) & (batch.rows <= hi)).all(axis=1)
    provenance = dict(batch.provenance)
    provenance["n_filtered"] = provenance.get("n_filtered", 0) + int((~mask).sum())
    return SyntheticBatch(
        rows=batch.rows[mask],
        condition=batch.condition,
        plausible=np.ones(int(mask.sum()), dtype=bool),
        provenance=provenance,
        columns=batch.columns,
    )


def augment_warmup(
    real_warmup: Dataset, batch: SyntheticBatch, n_synth: int
) -> Dataset:
    """Union of the real warm-up rows and the first n_synth plausible
    synthetic rows, origin-tagged. Synthetic rows only ever reach the
    warm-up fit; pools, budgets, and test sets are untouched."""
    if n_synth < 0:
        raise DomainError(f"n_synth must be >= 0, got {n_synth}")
    plausible = batch.rows[np.asarray(batch.plausible, dtype=bool)]
    if plausible.shape[0] < n_synth:
        shortfall = n_synth - plausible.shape[0]
        raise AugmentationError(
            f"need {n_synth} plausible synthetic rows, have "
            f"{plausible.shape[0]} (shortfall {shortfall})",
            shortfall=shortfall,
        )
    n_features = len(real_warmup.schema.names)
    if plausible.shape[1] != n_features + 1:
        raise ShapeError(
            f"synthetic rows have {plausible.shape[1]} columns, "
            f"expected {n_features + 1}"
        )
    take = plausible[:n_synth]
    origin = ("real",) * real_warmup.n_rows + ("synthetic",) * n_synth
    return Dataset(
        schema=real_warmup.schema,
        rows=np.vstack([real_warmup.rows, take[:, :n_features]]),
        targets=np.concatenate([real_warmup.targets, take[:, n_features]]),
        normalization=real_warmup.normalization,
        origin=origin,
    )


# ---------------------------------------------------------------------------
# export


def generator_snapshot(gen: TrainedGan) -> dict:
    """JSON-safe dump: layer shapes, flattened parameters, config hash."""
    layers = []
    params: list[float] = []
    ws = gen.generator.weights
    for i in range(0, len(ws), 2):
        layers.append(
            {"w_shape": list(ws[i].shape), "b_shape": list(ws[i + 1].shape)}
        )
        params.extend(ws[i].ravel().tolist())
        params.extend(ws[i + 1].ravel().tolist())
    return {
        "layers": layers,
        "parameters": params,
        "config_hash": config_hash(gen.config),
    }


def export_batch_csv(batch: SyntheticBatch, path) -> None:
    frame = pd.DataFrame(batch.rows, columns=list(batch.columns))
    frame["origin"] = "synthetic"
    frame.to_csv(path, index=False)
