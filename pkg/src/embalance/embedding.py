"""Embedding matrices bound to a vocabulary, with word2vec-style text I/O."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .corpus import token_hash


def sidecar_path(path: str | Path) -> Path:
    return Path(str(path) + ".meta.json")


@dataclass
class EmbeddingMatrix:
    """V x d real matrix whose row order matches a token list.

    `method` is a provenance tag naming how the matrix was produced
    (e.g. "small", "joint", "avg", "wavg", "tau100").
    """

    rows: np.ndarray
    tokens: tuple[str, ...]
    method: str = "unknown"
    index: dict[str, int] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        self.rows = np.asarray(self.rows, dtype=np.float64)
        if self.rows.ndim != 2:
            raise ValueError(f"rows must be 2-D, got shape {self.rows.shape}")
        if self.rows.shape[0] != len(self.tokens):
            raise ValueError(
                f"{self.rows.shape[0]} rows for {len(self.tokens)} tokens"
            )
        if not np.all(np.isfinite(self.rows)):
            raise ValueError("embedding contains non-finite entries")
        self.index = {t: i for i, t in enumerate(self.tokens)}

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows.shape

    @property
    def dim(self) -> int:
        return self.rows.shape[1]

    def __len__(self) -> int:
        return self.rows.shape[0]

    def __contains__(self, token: str) -> bool:
        return token in self.index

    def row(self, token: str) -> np.ndarray:
        if token not in self.index:
            raise KeyError(f"token {token!r} not in vocabulary")
        return self.rows[self.index[token]]

    @property
    def vocab_hash(self) -> str:
        return token_hash(self.tokens)

    def zero_rows(self) -> np.ndarray:
        """Indices of all-zero rows (untrained or degenerate words)."""
        return np.nonzero(~self.rows.any(axis=1))[0]

    def same_vocabulary(self, other: "EmbeddingMatrix") -> bool:
        return self.tokens == other.tokens

    def save(self, path: str | Path, metadata: dict | None = None) -> Path:
        """Write word2vec text format ("V d" header, 9 significant digits per
        value) plus a JSON metadata sidecar at `<path>.meta.json`."""
        path = Path(path)
        V, d = self.rows.shape
        with path.open("w", encoding="utf-8") as fh:
            fh.write(f"{V} {d}\n")
            for token, row in zip(self.tokens, self.rows):
                fh.write(token + " " + " ".join(f"{x:.9g}" for x in row) + "\n")
        meta = {"method": self.method, "vocab_hash": self.vocab_hash}
        if metadata:
            meta.update(metadata)
        sidecar_path(path).write_text(
            json.dumps(meta, sort_keys=True, indent=2) + "\n", encoding="utf-8"
        )
        return path

    @classmethod
    def load(cls, path: str | Path) -> "EmbeddingMatrix":
        """Read the word2vec text format; method tag comes from the sidecar if present."""
        path = Path(path)
        with path.open("r", encoding="utf-8") as fh:
            header = fh.readline().split()
            if len(header) != 2:
                raise ValueError(f"{path}: malformed header {header!r}")
            V, d = int(header[0]), int(header[1])
            tokens: list[str] = []
            rows = np.empty((V, d), dtype=np.float64)
            for k in range(V):
                parts = fh.readline().split()
                if len(parts) != d + 1:
                    raise ValueError(f"{path}: line {k + 2} has {len(parts)} fields, expected {d + 1}")
                tokens.append(parts[0])
                rows[k] = [float(x) for x in parts[1:]]
        method = "unknown"
        meta_file = sidecar_path(path)
        if meta_file.exists():
            meta = json.loads(meta_file.read_text(encoding="utf-8"))
            method = meta.get("method", method)
        return cls(rows=rows, tokens=tuple(tokens), method=method)


def load_metadata(path: str | Path) -> dict:
    """Read the sidecar for an embedding or co-occurrence file; {} if absent."""
    meta_file = sidecar_path(path)
    if not meta_file.exists():
        return {}
    return json.loads(meta_file.read_text(encoding="utf-8"))


def require_same_vocabulary(embs: Sequence[EmbeddingMatrix]) -> None:
    """Raise if the embeddings are not index-aligned over one token list."""
    first = embs[0]
    for e in embs[1:]:
        if e.tokens != first.tokens:
            raise ValueError(
                f"vocabulary mismatch: {e.method!r} is not index-aligned with {first.method!r}"
            )
