"""Subset-labeled corpora: tokenization, shared vocabulary, upsampling."""

from __future__ import annotations

import hashlib
import random
import re
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

# Alphanumeric runs only: underscore counts as a separator, unlike \w.
_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)


def tokenize(text: str) -> list[str]:
    """Lowercase `text` and split on every non-alphanumeric character."""
    return _TOKEN_RE.findall(text.lower())


@dataclass(frozen=True)
class Document:
    """One corpus document carrying the label of the subset it belongs to."""

    id: str
    subset_label: str
    text: str

    def __post_init__(self) -> None:
        if not self.subset_label:
            raise ValueError(f"document {self.id!r} has an empty subset_label")


@dataclass(frozen=True)
class DocumentSet:
    """An ordered, immutable collection of documents with unique ids."""

    documents: tuple[Document, ...]

    def __post_init__(self) -> None:
        ids = [d.id for d in self.documents]
        if len(set(ids)) != len(ids):
            dupes = [i for i, c in Counter(ids).items() if c > 1]
            raise ValueError(f"duplicate document ids: {dupes[:5]}")

    def __len__(self) -> int:
        return len(self.documents)

    def __iter__(self):
        return iter(self.documents)

    @property
    def labels(self) -> frozenset[str]:
        return frozenset(d.subset_label for d in self.documents)

    def label_counts(self) -> dict[str, int]:
        return dict(Counter(d.subset_label for d in self.documents))

    def subset(self, label: str) -> "DocumentSet":
        """Documents carrying `label`, keeping their original order."""
        if label not in self.labels:
            raise ValueError(f"unknown subset label {label!r}")
        return DocumentSet(tuple(d for d in self.documents if d.subset_label == label))


@dataclass
class Vocabulary:
    """Dense token<->index map ordered by descending corpus frequency.

    Ties in frequency are broken lexicographically, so the index assignment
    is deterministic regardless of document order.
    """

    tokens: tuple[str, ...]
    counts: dict[str, int]
    min_count: int
    index: dict[str, int] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        self.index = {t: i for i, t in enumerate(self.tokens)}

    def __len__(self) -> int:
        return len(self.tokens)

    def __contains__(self, token: str) -> bool:
        return token in self.index

    def encode(self, tokens: Iterable[str]) -> list[int]:
        """Map tokens to indices; out-of-vocabulary tokens become -1."""
        idx = self.index
        return [idx.get(t, -1) for t in tokens]

    @property
    def content_hash(self) -> str:
        return token_hash(self.tokens)


def token_hash(tokens: Sequence[str]) -> str:
    """Stable hash of an ordered token list, used to pair index-aligned artifacts."""
    h = hashlib.sha256()
    for t in tokens:
        h.update(t.encode("utf-8"))
        h.update(b"\n")
    return h.hexdigest()


def build_vocabulary(docs: DocumentSet, min_count: int) -> Vocabulary:
    """Count tokens over all subsets jointly and keep those with count >= min_count."""
    if min_count < 1:
        raise ValueError(f"min_count must be >= 1, got {min_count}")
    counts: Counter[str] = Counter()
    for doc in docs:
        counts.update(tokenize(doc.text))
    kept = [(t, c) for t, c in counts.items() if c >= min_count]
    if not kept:
        raise ValueError(f"empty vocabulary: no token occurs at least {min_count} times")
    kept.sort(key=lambda tc: (-tc[1], tc[0]))
    return Vocabulary(
        tokens=tuple(t for t, _ in kept),
        counts={t: c for t, c in kept},
        min_count=min_count,
    )


def upsample(docs: DocumentSet, label: str, target_count: int, seed: int) -> DocumentSet:
    """Duplicate documents of `label` until exactly `target_count` carry that label.

    Every original appears floor(target/current) times; the remainder is drawn
    without replacement using `seed`. Other subsets are untouched. Duplicates
    get derived ids (`<id>~<round>`) so the id-uniqueness invariant holds.
    """
    originals = [d for d in docs if d.subset_label == label]
    if not originals:
        raise ValueError(f"unknown subset label {label!r}")
    current = len(originals)
    if target_count < current:
        raise ValueError(
            f"target_count {target_count} is below the current count {current} of {label!r}"
        )
    rounds, remainder = divmod(target_count, current)
    out = list(docs.documents)
    for r in range(1, rounds):
        out.extend(
            Document(id=f"{d.id}~{r}", subset_label=d.subset_label, text=d.text)
            for d in originals
        )
    extras = random.Random(seed).sample(originals, remainder)
    out.extend(
        Document(id=f"{d.id}~{rounds}", subset_label=d.subset_label, text=d.text)
        for d in extras
    )
    return DocumentSet(tuple(out))


def load_document_set(paths: Sequence[str | Path]) -> DocumentSet:
    """Read one UTF-8 text file per subset; one document per line, label = file stem.

    Blank lines are skipped. Document ids are "<label>:<line number>".
    """
    if not paths:
        raise ValueError("no corpus files given")
    docs: list[Document] = []
    seen_labels: set[str] = set()
    for path in paths:
        path = Path(path)
        label = path.stem
        if label in seen_labels:
            raise ValueError(f"duplicate subset label {label!r} (file {path})")
        seen_labels.add(label)
        with path.open("r", encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.strip()
                if line:
                    docs.append(Document(id=f"{label}:{lineno}", subset_label=label, text=line))
    return DocumentSet(tuple(docs))
