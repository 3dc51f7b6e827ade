"""Cost matrix construction from embeddings or relevance scores."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Sequence

import numpy as np

from .corpus import LabelSpec
from .errors import InputError, ProviderError
from .transport import CostMatrix


@dataclass(frozen=True)
class EmbeddingMatrix:
    """One vector per item, row-aligned with the items it was built from."""

    values: np.ndarray

    def __post_init__(self) -> None:
        arr = np.array(self.values, dtype=np.float64, order="C", copy=True)
        if arr.ndim != 2:
            raise InputError(f"embedding matrix must be 2-dimensional, got shape {arr.shape}")
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise InputError(f"embedding matrix must be non-empty, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise InputError("embedding entries must be finite")
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)

    @property
    def count(self) -> int:
        return self.values.shape[0]

    @property
    def dim(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True)
class ScoreMatrix:
    """Relevance probabilities in [0, 1], one row per document, one column
    per label."""

    values: np.ndarray

    def __post_init__(self) -> None:
        arr = np.array(self.values, dtype=np.float64, order="C", copy=True)
        if arr.ndim != 2:
            raise InputError(f"score matrix must be 2-dimensional, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise InputError("score entries must be finite")
        if np.any(arr < 0) or np.any(arr > 1):
            raise InputError("score entries must lie in [0, 1]")
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)

    @property
    def rows(self) -> int:
        return self.values.shape[0]

    @property
    def cols(self) -> int:
        return self.values.shape[1]


def l2_costs(docs: EmbeddingMatrix, labels: EmbeddingMatrix) -> CostMatrix:
    """Euclidean distance between every document and label vector.

    Computed from explicit differences, not the expanded dot-product form,
    so small distances keep full precision.
    """
    if docs.dim != labels.dim:
        raise InputError(f"embedding dims differ: documents {docs.dim}, labels {labels.dim}")
    diff = docs.values[:, None, :] - labels.values[None, :, :]
    return CostMatrix(np.sqrt(np.sum(diff * diff, axis=2)))


def ce_costs(scores: ScoreMatrix) -> CostMatrix:
    """Costs 1 - s/max_row(s): the best label per document costs exactly 0."""
    row_max = scores.values.max(axis=1)
    dead = np.flatnonzero(row_max <= 0.0)
    if dead.size:
        raise ProviderError(
            f"document row {int(dead[0])} has no positive relevance score; cannot normalize"
        )
    return CostMatrix(1.0 - scores.values / row_max[:, None])


def seed_doc_label_embeddings(
    docs: EmbeddingMatrix,
    doc_ids: Sequence[Hashable],
    specs: Sequence[LabelSpec],
    k: int = 5,
) -> EmbeddingMatrix:
    """Label vectors as means of their seed documents' vectors.

    doc_ids aligns ids with embedding rows. Each spec must carry at least one
    seed document id; only the first min(k, available) seeds contribute.
    """
    if k < 1:
        raise InputError(f"k must be >= 1, got {k!r}")
    if len(doc_ids) != docs.count:
        raise InputError(f"{len(doc_ids)} doc ids for {docs.count} embedding rows")
    row_of = {doc_id: i for i, doc_id in enumerate(doc_ids)}
    out = np.empty((len(specs), docs.dim))
    for j, spec in enumerate(specs):
        if not spec.seed_doc_ids:
            raise InputError(f"label {spec.id!r} has no seed document ids")
        missing = [s for s in spec.seed_doc_ids if s not in row_of]
        if missing:
            raise InputError(f"label {spec.id!r} references unknown seed documents {missing}")
        rows = [row_of[s] for s in spec.seed_doc_ids[:k]]
        out[j] = docs.values[rows].mean(axis=0)
    return EmbeddingMatrix(out)
