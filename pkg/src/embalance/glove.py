"""GloVe baseline training (biased AdaGrad) and the shared weighting function.

Two loss flavors live here: the biased form the trainer minimizes,
    sum_ij f(Y_ij) (W_i . Wc_j + b_i + bc_j - log Y_ij)^2,
and the bias-free symmetric form used by the mixing optimization,
    sum_ij f(Y_ij) (U_i . U_j - log Y_ij)^2.
Sums range over the stored nonzero cells of Y, counting both symmetric
positions of an off-diagonal cell.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numba import njit, prange, set_num_threads

from .cooccur import CooccurrenceMatrix
from .embedding import EmbeddingMatrix


def glove_weight(y, x_max: float = 100.0, alpha: float = 0.75):
    """Saturating co-occurrence weight: (y/x_max)**alpha below x_max, else 1.

    Zero at y = 0, which masks empty cells. Accepts scalars or arrays.
    """
    if x_max <= 0:
        raise ValueError(f"x_max must be positive, got {x_max}")
    arr = np.asarray(y, dtype=np.float64)
    if np.any(arr < 0):
        raise ValueError("co-occurrence weights must be non-negative")
    out = np.where(arr < x_max, (arr / x_max) ** alpha, 1.0)
    if arr.ndim == 0:
        return float(out)
    return out


@dataclass
class GloveConfig:
    dim: int = 50
    x_max: float = 100.0
    alpha: float = 0.75
    epochs: int = 25
    learning_rate: float = 0.05
    seed: int = 0

    def __post_init__(self) -> None:
        if self.dim < 1:
            raise ValueError(f"dim must be >= 1, got {self.dim}")
        if self.x_max <= 0:
            raise ValueError(f"x_max must be positive, got {self.x_max}")
        if not 0 < self.alpha <= 1:
            raise ValueError(f"alpha must be in (0, 1], got {self.alpha}")
        if self.epochs < 0:
            raise ValueError(f"epochs must be >= 0, got {self.epochs}")
        if self.learning_rate <= 0:
            raise ValueError(f"learning_rate must be positive, got {self.learning_rate}")


@dataclass
class GloveModel:
    """Word vectors W, context vectors Wc, and the two bias vectors."""

    W: np.ndarray
    Wc: np.ndarray
    b: np.ndarray
    bc: np.ndarray
    config: GloveConfig
    tokens: tuple[str, ...] | None = None
    loss_history: list[float] = field(default_factory=list)


@njit(cache=True)
def _adagrad_sweep(W, Wc, b, bc, gW, gWc, gb, gbc, rows, cols, logy, fvals, order, lr):
    """One epoch of per-entry AdaGrad updates in the given entry order."""
    d = W.shape[1]
    for t in range(order.shape[0]):
        e = order[t]
        i = rows[e]
        j = cols[e]
        dot = 0.0
        for k in range(d):
            dot += W[i, k] * Wc[j, k]
        diff = dot + b[i] + bc[j] - logy[e]
        fdiff = fvals[e] * diff
        for k in range(d):
            gi = fdiff * Wc[j, k]
            gj = fdiff * W[i, k]
            W[i, k] -= lr * gi / np.sqrt(gW[i, k])
            Wc[j, k] -= lr * gj / np.sqrt(gWc[j, k])
            gW[i, k] += gi * gi
            gWc[j, k] += gj * gj
        b[i] -= lr * fdiff / np.sqrt(gb[i])
        bc[j] -= lr * fdiff / np.sqrt(gbc[j])
        gb[i] += fdiff * fdiff
        gbc[j] += fdiff * fdiff


@njit(cache=True, parallel=True)
def _adagrad_sweep_parallel(W, Wc, b, bc, gW, gWc, gb, gbc, rows, cols, logy, fvals, lr):
    """Lock-free parallel epoch; updates may interleave, no determinism promise."""
    d = W.shape[1]
    for e in prange(rows.shape[0]):
        i = rows[e]
        j = cols[e]
        dot = 0.0
        for k in range(d):
            dot += W[i, k] * Wc[j, k]
        diff = dot + b[i] + bc[j] - logy[e]
        fdiff = fvals[e] * diff
        for k in range(d):
            gi = fdiff * Wc[j, k]
            gj = fdiff * W[i, k]
            W[i, k] -= lr * gi / np.sqrt(gW[i, k])
            Wc[j, k] -= lr * gj / np.sqrt(gWc[j, k])
            gW[i, k] += gi * gi
            gWc[j, k] += gj * gj
        b[i] -= lr * fdiff / np.sqrt(gb[i])
        bc[j] -= lr * fdiff / np.sqrt(gbc[j])
        gb[i] += fdiff * fdiff
        gbc[j] += fdiff * fdiff


def _prepare_entries(cooc: CooccurrenceMatrix, cfg: GloveConfig):
    rows, cols, weights = cooc.expanded_arrays()
    logy = np.log(weights)
    fvals = glove_weight(weights, cfg.x_max, cfg.alpha)
    return rows, cols, logy, fvals


def biased_loss_arrays(W, Wc, b, bc, rows, cols, logy, fvals) -> float:
    diff = np.einsum("ij,ij->i", W[rows], Wc[cols]) + b[rows] + bc[cols] - logy
    return float(np.dot(fvals, diff * diff))


def biased_loss(model: GloveModel, cooc: CooccurrenceMatrix) -> float:
    """Trainer objective evaluated at the model's current parameters."""
    rows, cols, logy, fvals = _prepare_entries(cooc, model.config)
    return biased_loss_arrays(model.W, model.Wc, model.b, model.bc, rows, cols, logy, fvals)


def symmetric_loss(U: np.ndarray, cooc: CooccurrenceMatrix, x_max: float = 100.0,
                   alpha: float = 0.75) -> float:
    """Bias-free single-factor loss over the stored cells of Y."""
    U = np.asarray(U, dtype=np.float64)
    if U.shape[0] != cooc.dim:
        raise ValueError(f"U has {U.shape[0]} rows but Y has dim {cooc.dim}")
    rows, cols, weights = cooc.expanded_arrays()
    if rows.size == 0:
        return 0.0
    diff = np.einsum("ij,ij->i", U[rows], U[cols]) - np.log(weights)
    fvals = glove_weight(weights, x_max, alpha)
    return float(np.dot(fvals, diff * diff))


def init_model(dim_vocab: int, cfg: GloveConfig) -> GloveModel:
    """Uniform initialization in [-0.5/d, 0.5/d] for all parameters, from cfg.seed."""
    rng = np.random.default_rng(cfg.seed)
    d = cfg.dim
    scale = 1.0 / d
    W = (rng.random((dim_vocab, d)) - 0.5) * scale
    Wc = (rng.random((dim_vocab, d)) - 0.5) * scale
    b = (rng.random(dim_vocab) - 0.5) * scale
    bc = (rng.random(dim_vocab) - 0.5) * scale
    return GloveModel(W=W, Wc=Wc, b=b, bc=bc, config=cfg)


def train_glove(cooc: CooccurrenceMatrix, cfg: GloveConfig, threads: int = 1) -> GloveModel:
    """Fit the biased GloVe objective with per-entry AdaGrad.

    threads == 1 runs the deterministic single-threaded sweep (entry order is
    a seeded shuffle per epoch). threads > 1 runs a lock-free parallel sweep
    with no determinism promise. loss_history[k] is the full objective after
    k epochs; index 0 is the loss at initialization.
    """
    if cooc.nnz == 0:
        raise ValueError("cannot train on an empty co-occurrence matrix")
    model = init_model(cooc.dim, cfg)
    model.tokens = cooc.tokens
    rows, cols, logy, fvals = _prepare_entries(cooc, cfg)
    gW = np.ones_like(model.W)
    gWc = np.ones_like(model.Wc)
    gb = np.ones_like(model.b)
    gbc = np.ones_like(model.bc)
    rng = np.random.default_rng(cfg.seed)
    loss = biased_loss_arrays(model.W, model.Wc, model.b, model.bc, rows, cols, logy, fvals)
    model.loss_history.append(loss)
    if threads > 1:
        set_num_threads(threads)
    for epoch in range(cfg.epochs):
        if threads == 1:
            order = rng.permutation(rows.shape[0]).astype(np.int64)
            _adagrad_sweep(model.W, model.Wc, model.b, model.bc, gW, gWc, gb, gbc,
                           rows, cols, logy, fvals, order, cfg.learning_rate)
        else:
            _adagrad_sweep_parallel(model.W, model.Wc, model.b, model.bc, gW, gWc, gb, gbc,
                                    rows, cols, logy, fvals, cfg.learning_rate)
        loss = biased_loss_arrays(model.W, model.Wc, model.b, model.bc, rows, cols, logy, fvals)
        if not np.isfinite(loss):
            raise FloatingPointError(f"non-finite loss after epoch {epoch + 1}")
        model.loss_history.append(loss)
    return model


def export_embedding(model: GloveModel, mode: str = "sum",
                     tokens: tuple[str, ...] | None = None,
                     method: str = "glove") -> EmbeddingMatrix:
    """Turn a trained model into an embedding: word vectors alone or W + Wc (default)."""
    if mode not in ("sum", "word_only"):
        raise ValueError(f"mode must be 'sum' or 'word_only', got {mode!r}")
    tokens = tokens if tokens is not None else model.tokens
    if tokens is None:
        raise ValueError("no token list available; pass tokens= explicitly")
    rows = model.W + model.Wc if mode == "sum" else model.W.copy()
    return EmbeddingMatrix(rows=rows, tokens=tuple(tokens), method=method)
