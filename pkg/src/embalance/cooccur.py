"""Sparse symmetric co-occurrence counting with harmonic distance weights.

Weights are kept as exact rationals internally: a token pair at distance d
contributes 1/d, and summing rationals is associative, so sharded counting
merges to bit-exactly the same matrix as a single pass. The float view is
only materialized at the edges (training, file output).
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np

from .corpus import DocumentSet, Vocabulary, tokenize

Cell = tuple[int, int]


@dataclass
class CooccurrenceMatrix:
    """Upper-triangle storage of a symmetric V x V co-occurrence matrix.

    `entries` holds canonical cells (i, j) with i <= j; a lookup of (j, i)
    returns the same weight. Unstored cells are zero.
    """

    dim: int
    window: int
    entries: dict[Cell, Fraction] = field(default_factory=dict)
    vocab_hash: str | None = None
    tokens: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        if self.window < 1:
            raise ValueError(f"window must be >= 1, got {self.window}")
        for (i, j), w in self.entries.items():
            if not (0 <= i <= j < self.dim):
                raise ValueError(f"cell ({i}, {j}) outside canonical range for dim {self.dim}")
            if w <= 0:
                raise ValueError(f"stored weight at ({i}, {j}) must be positive, got {w}")

    @property
    def nnz(self) -> int:
        return len(self.entries)

    def weight(self, i: int, j: int) -> float:
        """Symmetric lookup; zero for unstored cells."""
        if i > j:
            i, j = j, i
        return float(self.entries.get((i, j), 0))

    def items(self) -> Iterator[tuple[Cell, float]]:
        """Canonical (i <= j) cells with float weights."""
        for cell, w in self.entries.items():
            yield cell, float(w)

    def expanded_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(rows, cols, weights) over all logical nonzero cells.

        Off-diagonal cells appear in both orders, diagonal cells once, so a
        sum over the result ranges over the full symmetric matrix.
        """
        rows, cols, weights = [], [], []
        for (i, j), w in self.entries.items():
            fw = float(w)
            rows.append(i)
            cols.append(j)
            weights.append(fw)
            if i != j:
                rows.append(j)
                cols.append(i)
                weights.append(fw)
        return (
            np.asarray(rows, dtype=np.int64),
            np.asarray(cols, dtype=np.int64),
            np.asarray(weights, dtype=np.float64),
        )

    def scaled(self, factor: int) -> "CooccurrenceMatrix":
        """Every weight multiplied by a positive integer (exact)."""
        if factor < 1:
            raise ValueError("factor must be a positive integer")
        return CooccurrenceMatrix(
            dim=self.dim,
            window=self.window,
            entries={cell: w * factor for cell, w in self.entries.items()},
            vocab_hash=self.vocab_hash,
            tokens=self.tokens,
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CooccurrenceMatrix):
            return NotImplemented
        return (
            self.dim == other.dim
            and self.window == other.window
            and self.entries == other.entries
        )

    def save(self, path: str | Path) -> None:
        """Text format: header "V window", then "i j weight" lines with i <= j,
        sorted by (i, j), weights printed with 17 significant digits."""
        path = Path(path)
        with path.open("w", encoding="utf-8") as fh:
            fh.write(f"{self.dim} {self.window}\n")
            for (i, j) in sorted(self.entries):
                fh.write(f"{i} {j} {float(self.entries[(i, j)]):.17g}\n")

    @classmethod
    def load(cls, path: str | Path) -> "CooccurrenceMatrix":
        path = Path(path)
        with path.open("r", encoding="utf-8") as fh:
            header = fh.readline().split()
            if len(header) != 2:
                raise ValueError(f"{path}: malformed header {header!r}")
            dim, window = int(header[0]), int(header[1])
            entries: dict[Cell, Fraction] = {}
            for lineno, line in enumerate(fh, 2):
                parts = line.split()
                if not parts:
                    continue
                if len(parts) != 3:
                    raise ValueError(f"{path}:{lineno}: expected 'i j weight', got {line!r}")
                i, j, w = int(parts[0]), int(parts[1]), float(parts[2])
                entries[(i, j)] = Fraction(w)
        return cls(dim=dim, window=window, entries=entries)


def count_cooccurrences(
    docs: DocumentSet, vocab: Vocabulary, window: int
) -> CooccurrenceMatrix:
    """Count distance-weighted co-occurrences within `window` token positions.

    Each unordered pair at distance d <= window adds 1/d to its cell. Windows
    never cross document boundaries. Out-of-vocabulary tokens are skipped but
    keep their positions, so distances reflect the original text.
    """
    if window < 1:
        raise ValueError(f"window must be >= 1, got {window}")
    V = len(vocab)
    gap = np.full(window, -1, dtype=np.int64)
    pieces: list[np.ndarray] = []
    for doc in docs:
        ids = vocab.encode(tokenize(doc.text))
        if ids:
            pieces.append(np.asarray(ids, dtype=np.int64))
            pieces.append(gap)
    entries: dict[Cell, Fraction] = defaultdict(Fraction)
    if pieces:
        big = np.concatenate(pieces[:-1])  # trailing gap not needed
        for d in range(1, min(window, len(big) - 1) + 1):
            left, right = big[:-d], big[d:]
            mask = (left >= 0) & (right >= 0)
            if not mask.any():
                continue
            lo = np.minimum(left[mask], right[mask])
            hi = np.maximum(left[mask], right[mask])
            keys, counts = np.unique(lo * V + hi, return_counts=True)
            w = Fraction(1, d)
            for key, c in zip(keys.tolist(), counts.tolist()):
                entries[(key // V, key % V)] += c * w
    return CooccurrenceMatrix(
        dim=V,
        window=window,
        entries=dict(entries),
        vocab_hash=vocab.content_hash,
        tokens=vocab.tokens,
    )


def merge_shards(parts: Sequence[CooccurrenceMatrix]) -> CooccurrenceMatrix:
    """Cell-wise sum of shard matrices counted against the same vocabulary."""
    if not parts:
        raise ValueError("merge_shards needs at least one matrix")
    first = parts[0]
    merged: dict[Cell, Fraction] = dict(first.entries)
    for part in parts[1:]:
        if part.dim != first.dim:
            raise ValueError(f"dimension mismatch: {part.dim} != {first.dim}")
        if part.window != first.window:
            raise ValueError(f"window mismatch: {part.window} != {first.window}")
        if (
            part.vocab_hash is not None
            and first.vocab_hash is not None
            and part.vocab_hash != first.vocab_hash
        ):
            raise ValueError("vocabulary mismatch between shards")
        for cell, w in part.entries.items():
            merged[cell] = merged.get(cell, Fraction(0)) + w
    return CooccurrenceMatrix(
        dim=first.dim,
        window=first.window,
        entries=merged,
        vocab_hash=first.vocab_hash,
        tokens=first.tokens,
    )
