"""Static and weighted merging of two index-aligned embeddings."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .embedding import EmbeddingMatrix, require_same_vocabulary


@dataclass(frozen=True)
class SubsetWeights:
    """Convex pair of subset weights; w_l is always 1 - w_s."""

    w_s: float

    def __post_init__(self) -> None:
        if not 0.0 < self.w_s < 1.0:
            raise ValueError(f"w_s must lie strictly inside (0, 1), got {self.w_s}")

    @property
    def w_l(self) -> float:
        return 1.0 - self.w_s


def subset_weights(n_s: int, n_l: int) -> SubsetWeights:
    """Inverse-proportion weights: the smaller subset gets the larger weight."""
    if n_s < 1 or n_l < 1:
        raise ValueError(f"document counts must be >= 1, got {n_s} and {n_l}")
    return SubsetWeights(w_s=n_l / (n_s + n_l))


def average(u_s: EmbeddingMatrix, u_l: EmbeddingMatrix) -> EmbeddingMatrix:
    """Element-wise midpoint 0.5 * (U_s + U_l)."""
    _check_pair(u_s, u_l)
    return EmbeddingMatrix(rows=0.5 * (u_s.rows + u_l.rows), tokens=u_s.tokens, method="avg")


def weighted_average(u_s: EmbeddingMatrix, u_l: EmbeddingMatrix,
                     w: SubsetWeights) -> EmbeddingMatrix:
    """w_s * U_s + w_l * U_l."""
    _check_pair(u_s, u_l)
    return EmbeddingMatrix(
        rows=w.w_s * u_s.rows + w.w_l * u_l.rows, tokens=u_s.tokens, method="wavg"
    )


def concatenate(u_s: EmbeddingMatrix, u_l: EmbeddingMatrix) -> EmbeddingMatrix:
    """Row-wise concatenation [U_s | U_l], doubling the dimension."""
    require_same_vocabulary([u_s, u_l])
    if u_s.shape[0] != u_l.shape[0]:
        raise ValueError(f"row count mismatch: {u_s.shape[0]} != {u_l.shape[0]}")
    return EmbeddingMatrix(
        rows=np.hstack([u_s.rows, u_l.rows]), tokens=u_s.tokens, method="con"
    )


@dataclass
class PcaResult:
    """Projection plus the basis that produced it, for inspection and tests."""

    embedding: EmbeddingMatrix
    components: np.ndarray  # d_out x 2d, orthonormal rows
    mean: np.ndarray
    eigenvalues: np.ndarray  # descending column variances of the projection


def pca_merge_full(u_s: EmbeddingMatrix, u_l: EmbeddingMatrix, d_out: int) -> PcaResult:
    """Concatenate, column-center, and project onto the top principal directions.

    Components are ordered by descending eigenvalue; each component's sign is
    fixed so its largest-magnitude loading is positive.
    """
    con = concatenate(u_s, u_l)
    X = con.rows
    if not 1 <= d_out <= X.shape[1]:
        raise ValueError(f"d_out must be in [1, {X.shape[1]}], got {d_out}")
    mean = X.mean(axis=0)
    centered = X - mean
    _, svals, vt = np.linalg.svd(centered, full_matrices=False)
    components = vt[:d_out].copy()
    for r in range(components.shape[0]):
        k = int(np.argmax(np.abs(components[r])))
        if components[r, k] < 0:
            components[r] = -components[r]
    scores = centered @ components.T
    eigenvalues = (svals[:d_out] ** 2) / X.shape[0]
    emb = EmbeddingMatrix(rows=scores, tokens=u_s.tokens, method="pca")
    return PcaResult(embedding=emb, components=components, mean=mean, eigenvalues=eigenvalues)


def pca_merge(u_s: EmbeddingMatrix, u_l: EmbeddingMatrix, d_out: int) -> EmbeddingMatrix:
    return pca_merge_full(u_s, u_l, d_out).embedding


def interpolate(u_a: EmbeddingMatrix, u_b: EmbeddingMatrix, x: float) -> EmbeddingMatrix:
    """x * U_a + (1 - x) * U_b for x in [0, 1]."""
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"x must lie in [0, 1], got {x}")
    _check_pair(u_a, u_b)
    return EmbeddingMatrix(
        rows=x * u_a.rows + (1.0 - x) * u_b.rows, tokens=u_a.tokens, method="interp"
    )


def _check_pair(a: EmbeddingMatrix, b: EmbeddingMatrix) -> None:
    require_same_vocabulary([a, b])
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} != {b.shape}")
