"""Extrinsic clustering evaluation: purity, inverse purity, their harmonic
mean P1, and mutual information.

Documents a partial assignment left UNASSIGNED are excluded before any
counting, and the report records how many documents were actually evaluated.
Mutual information is reported in nats.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .assignment import UNASSIGNED, Clustering
from .errors import EvaluationError, InputError


@dataclass(frozen=True)
class ContingencyTable:
    """counts[k, j] = documents in predicted cluster k with gold cluster j."""

    counts: np.ndarray

    def __post_init__(self) -> None:
        arr = np.array(self.counts, dtype=np.int64, order="C", copy=True)
        if arr.ndim != 2 or arr.size == 0:
            raise InputError(f"contingency table must be a non-empty 2-d matrix, got shape {arr.shape}")
        if np.any(arr < 0):
            raise InputError("contingency counts must be non-negative")
        arr.flags.writeable = False
        object.__setattr__(self, "counts", arr)

    @property
    def n_total(self) -> int:
        return int(self.counts.sum())

    @classmethod
    def from_clusterings(cls, pred: Clustering, gold: Clustering) -> "ContingencyTable":
        """Count co-occurrences over the documents pred actually assigned.

        Both clusterings must cover the same document ids. Documents pred
        left UNASSIGNED are dropped; a dropped-to-empty table is an error, as
        is an evaluated document without a gold label.
        """
        if set(pred.assignments) != set(gold.assignments):
            raise EvaluationError("predicted and gold clusterings cover different documents")
        kept = [(d, v) for d, v in pred.assignments.items() if v is not UNASSIGNED]
        if not kept:
            raise EvaluationError("every document is unassigned; nothing to evaluate")
        pred_ids = sorted({v for _, v in kept}, key=repr)
        gold_vals = []
        for d, _ in kept:
            g = gold.assignments[d]
            if g is UNASSIGNED:
                raise EvaluationError(f"document {d!r} has no gold label")
            gold_vals.append(g)
        gold_ids = sorted(set(gold_vals), key=repr)
        pred_index = {c: i for i, c in enumerate(pred_ids)}
        gold_index = {c: i for i, c in enumerate(gold_ids)}
        counts = np.zeros((len(pred_ids), len(gold_ids)), dtype=np.int64)
        for (d, v), g in zip(kept, gold_vals):
            counts[pred_index[v], gold_index[g]] += 1
        return cls(counts)


def purity(table: ContingencyTable) -> float:
    """Fraction of documents matching their predicted cluster's majority gold
    class: sum_k max_j counts[k, j] / n."""
    n = table.n_total
    if n == 0:
        raise EvaluationError("contingency table is empty")
    return float(table.counts.max(axis=1).sum() / n)


def inverse_purity(table: ContingencyTable) -> float:
    """Purity of the transposed table (gold clusters against predicted)."""
    return purity(ContingencyTable(table.counts.T))


def p1(table: ContingencyTable) -> float:
    """Harmonic mean of purity and inverse purity, in [0, 1]."""
    pur = purity(table)
    inv = inverse_purity(table)
    if pur + inv == 0:
        raise EvaluationError("purity and inverse purity are both zero")
    return 2.0 * pur * inv / (pur + inv)


def mutual_information(table: ContingencyTable) -> float:
    """I(pred; gold) in nats, with the 0 log 0 = 0 convention."""
    n = table.n_total
    if n == 0:
        raise EvaluationError("contingency table is empty")
    joint = table.counts / n
    pk = joint.sum(axis=1)
    pj = joint.sum(axis=0)
    mask = joint > 0
    outer = pk[:, None] * pj[None, :]
    mi = float(np.sum(joint[mask] * np.log(joint[mask] / outer[mask])))
    # tiny negatives are float noise on an exactly-independent table
    return max(mi, 0.0)


@dataclass(frozen=True)
class MetricsReport:
    """Evaluation summary; serialized with these exact key names."""

    purity: float
    inverse_purity: float
    p1: float
    mi_nats: float
    assigned_fraction: float
    n_evaluated: int

    def to_dict(self) -> dict:
        return {
            "purity": self.purity,
            "inverse_purity": self.inverse_purity,
            "p1": self.p1,
            "mi_nats": self.mi_nats,
            "assigned_fraction": self.assigned_fraction,
            "n_evaluated": self.n_evaluated,
        }


def evaluate(pred: Clustering, gold: Clustering) -> MetricsReport:
    """Score pred against gold over the documents pred assigned."""
    table = ContingencyTable.from_clusterings(pred, gold)
    return MetricsReport(
        purity=purity(table),
        inverse_purity=inverse_purity(table),
        p1=p1(table),
        mi_nats=mutual_information(table),
        assigned_fraction=pred.assigned_fraction,
        n_evaluated=table.n_total,
    )
